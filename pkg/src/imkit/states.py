"""State types, real/imaginary decomposition, basis catalogs and random ensembles.

"Real" always refers to the computational (reference) basis.  Every
validated type is an immutable value: arrays are stored read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import block_diag
from scipy.stats import ortho_group

from . import linalg
from .errors import (
    BadRank,
    BadTrace,
    BlochOutOfBall,
    DimensionMismatch,
    ImkitError,
    IncompleteKraus,
    NotHermitian,
    NotNormalized,
    NotOrthonormal,
    NotPSD,
    WrongDimension,
)

STATE_HERM_TOL = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-12
BLOCH_TOL = 1e-12
ORTHO_TOL = 1e-10
REAL_TOL = 1e-10
BRANCH_CUTOFF = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates the invariants. Eigenvalues in ``[-1e-9, 0)`` are
    clamped to zero and the trace renormalized.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = linalg.as_complex_matrix(self.mat)
        defect = linalg.hermitian_defect(m)
        if defect > STATE_HERM_TOL:
            raise NotHermitian(f"density matrix is not Hermitian: max |rho - rho^dagger| = {defect:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise BadTrace(f"density matrix trace is {float(tr)!r}, deviation {abs(tr - 1):.3e}")
        w, v = linalg.herm_eig(m)
        if w[0] < -linalg.PSD_TOL:
            raise NotPSD(f"density matrix has eigenvalue {w[0]:.3e} below -{linalg.PSD_TOL:g}")
        if w[0] < -linalg.roundoff_cutoff(w):
            w = np.clip(w, 0.0, None)
            m = (v * w) @ v.conj().T
            tr = np.trace(m).real
        if tr != 1.0:
            m = m / tr
        object.__setattr__(self, "mat", _frozen(m))

    @classmethod
    def _trusted(cls, mat: np.ndarray) -> DensityMatrix:
        # internal results of state-preserving maps skip re-validation
        obj = object.__new__(cls)
        object.__setattr__(obj, "mat", _frozen(np.asarray(mat, dtype=complex)))
        return obj

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class PureState:
    amp: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amp, dtype=complex)
        if a.ndim != 1 or a.size == 0:
            raise ImkitError(f"amplitudes must be a non-empty vector, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ImkitError("amplitudes have non-finite entries")
        nrm = np.linalg.norm(a)
        if abs(nrm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state vector norm is {nrm!r}")
        object.__setattr__(self, "amp", _frozen(a))

    @property
    def dim(self) -> int:
        return self.amp.shape[0]

    def projector(self) -> DensityMatrix:
        return DensityMatrix._trusted(np.outer(self.amp, self.amp.conj()))

    def __repr__(self):
        return f"PureState(dim={self.dim})"


@dataclass(frozen=True)
class BlochVector:
    r_x: float
    r_y: float
    r_z: float

    def __post_init__(self):
        n2 = self.r_x**2 + self.r_y**2 + self.r_z**2
        if not np.isfinite(n2) or n2 > 1 + BLOCH_TOL:
            raise BlochOutOfBall(f"Bloch vector has |r|^2 = {n2!r} > 1")

    @property
    def norm2(self) -> float:
        return self.r_x**2 + self.r_y**2 + self.r_z**2

    def as_array(self) -> np.ndarray:
        return np.array([self.r_x, self.r_y, self.r_z])


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Basis vectors stored as the columns of a unitary matrix."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        u = linalg.as_complex_matrix(self.matrix)
        defect = float(np.max(np.abs(u.conj().T @ u - np.eye(len(u)))))
        if defect > ORTHO_TOL:
            raise NotOrthonormal(f"basis {self.label!r} is not orthonormal: max |U^dagger U - I| = {defect:.3e}")
        object.__setattr__(self, "matrix", _frozen(u))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [self.matrix[:, k] for k in range(self.dim)]


@dataclass(frozen=True, eq=False)
class RealOperation:
    """Quantum channel whose Kraus operators have only real entries."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ks = []
        for k in self.kraus:
            k = np.asarray(k)
            if np.iscomplexobj(k):
                if np.max(np.abs(k.imag), initial=0.0) > NORM_TOL:
                    raise ImkitError("Kraus operator has non-real entries")
                k = k.real
            ks.append(np.asarray(k, dtype=float))
        if not ks:
            raise IncompleteKraus("empty Kraus set")
        d = ks[0].shape[1]
        total = sum(k.T @ k for k in ks)
        defect = float(np.max(np.abs(total - np.eye(d))))
        if defect > ORTHO_TOL:
            raise IncompleteKraus(f"sum K^T K deviates from identity by {defect:.3e}")
        object.__setattr__(self, "kraus", tuple(_frozen(k) for k in ks))

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]


@dataclass(frozen=True, eq=False)
class RealProjectorSet:
    """Complete set of real rank-1 orthogonal projectors."""

    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        ps = [np.asarray(p, dtype=float) for p in self.projectors]
        d = ps[0].shape[0]
        for p in ps:
            if np.max(np.abs(p - p.T)) > ORTHO_TOL or np.max(np.abs(p @ p - p)) > ORTHO_TOL:
                raise ImkitError("projector is not a real symmetric idempotent")
            if abs(np.trace(p) - 1) > ORTHO_TOL:
                raise ImkitError("projector is not rank 1")
        if np.max(np.abs(sum(ps) - np.eye(d))) > ORTHO_TOL:
            raise ImkitError("projectors do not resolve the identity")
        object.__setattr__(self, "projectors", tuple(_frozen(p) for p in ps))

    @classmethod
    def from_orthogonal(cls, q: np.ndarray) -> RealProjectorSet:
        q = np.asarray(q, dtype=float)
        return cls(tuple(np.outer(q[:, k], q[:, k]) for k in range(q.shape[1])))


# -- construction and coercion ------------------------------------------------


def new_density(mat) -> DensityMatrix:
    return DensityMatrix(np.asarray(mat, dtype=complex))


def as_density(x) -> DensityMatrix:
    if isinstance(x, DensityMatrix):
        return x
    if isinstance(x, PureState):
        return x.projector()
    return new_density(x)


def as_pure(x) -> PureState:
    return x if isinstance(x, PureState) else PureState(np.asarray(x, dtype=complex))


def is_real(rho, tol: float | None = None) -> bool:
    tol = REAL_TOL if tol is None else tol
    m = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return bool(np.max(np.abs(m.imag), initial=0.0) <= tol)


def real_part(rho) -> DensityMatrix:
    """``Re(rho) = (rho + rho*)/2``; a state because the state set is convex."""
    rho = as_density(rho)
    return DensityMatrix._trusted(rho.mat.real.astype(complex))


def conjugate(rho) -> DensityMatrix:
    rho = as_density(rho)
    return DensityMatrix._trusted(rho.mat.conj())


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix._trusted(np.eye(d, dtype=complex) / d)


def plus_i() -> PureState:
    """The maximally imaginary qubit state ``(|0> + i|1>)/sqrt(2)``."""
    return PureState(np.array([1, 1j]) / np.sqrt(2))


def plus_i_mixture(p: float) -> DensityMatrix:
    """``p |+i><+i| + (1-p) I/2``."""
    if not 0 <= p <= 1:
        raise ImkitError(f"mixing weight must lie in [0, 1], got {p}")
    return DensityMatrix._trusted(p * plus_i().projector().mat + (1 - p) * np.eye(2) / 2)


def from_bloch(r: BlochVector | Sequence[float]) -> DensityMatrix:
    if not isinstance(r, BlochVector):
        r = BlochVector(*map(float, r))
    m = 0.5 * (np.eye(2) + r.r_x * SIGMA_X + r.r_y * SIGMA_Y + r.r_z * SIGMA_Z)
    return DensityMatrix._trusted(m)


def to_bloch(rho) -> BlochVector:
    rho = as_density(rho)
    if rho.dim != 2:
        raise WrongDimension(f"Bloch vectors exist only for qubits, got d={rho.dim}")
    r = [float(np.trace(rho.mat @ s).real) for s in PAULIS]
    n2 = sum(c * c for c in r)
    if n2 > 1:
        # roundoff on pure states only
        r = [c / np.sqrt(n2) for c in r]
    return BlochVector(*r)


def change_basis(rho, basis: OrthonormalBasis) -> DensityMatrix:
    """Matrix of ``rho`` in ``basis``: entries ``<b_i|rho|b_j>``."""
    rho = as_density(rho)
    if basis.dim != rho.dim:
        raise DimensionMismatch(f"basis has d={basis.dim}, state has d={rho.dim}")
    u = basis.matrix
    return DensityMatrix._trusted(u.conj().T @ rho.mat @ u)


# -- basis catalogs ------------------------------------------------------------


def computational_basis(d: int, label: str = "") -> OrthonormalBasis:
    return OrthonormalBasis(np.eye(d, dtype=complex), label)


def qubit_mubs() -> tuple[OrthonormalBasis, OrthonormalBasis, OrthonormalBasis]:
    """Eigenbases of sigma_z, sigma_y and sigma_x, in that order (B1, B2, B3)."""
    s = 1 / np.sqrt(2)
    b2 = np.array([[s, s], [1j * s, -1j * s]])
    b3 = np.array([[s, -1j * s], [s, 1j * s]])
    return (computational_basis(2, "B1"), OrthonormalBasis(b2, "B2"), OrthonormalBasis(b3, "B3"))


def qutrit_mubs() -> tuple[OrthonormalBasis, ...]:
    """The complete set Z1..Z4 of qutrit MUBs, built on w = exp(2 pi i / 3)."""
    w = np.exp(2j * np.pi / 3)
    rows = {
        "Z2": [[1, 1, 1], [1, w, w**2], [1, w**2, w]],
        "Z3": [[1, w, w], [1, w**2, 1], [1, 1, w**2]],
        "Z4": [[1, w**2, w**2], [1, 1, w], [1, w, 1]],
    }
    bases = [computational_basis(3, "Z1")]
    for label, vecs in rows.items():
        bases.append(OrthonormalBasis(np.array(vecs).T / np.sqrt(3), label))
    return tuple(bases)


def example_y_bases() -> tuple[OrthonormalBasis, OrthonormalBasis, OrthonormalBasis]:
    """Hand-built qutrit bases Y1..Y3 adapted to (|0> + |1> + i|2>)/sqrt(3)."""
    a = (np.sqrt(2) + 2) / 4
    b = (np.sqrt(2) - 2) / 4
    s = 1 / np.sqrt(2)
    y2 = np.array([[a, b, 0.5j], [b, a, 0.5j], [0.5, 0.5, -1j * s]]).T
    y3 = np.array([[a, b, 0.5], [b, a, 0.5], [-0.5j, -0.5j, 1j * s]]).T
    return (computational_basis(3, "Y1"), OrthonormalBasis(y2, "Y2"), OrthonormalBasis(y3, "Y3"))


# -- random ensembles ---------------------------------------------------------


def rng_from(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure(d: int, seed=None) -> PureState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    if d < 2:
        raise ImkitError(f"dimension must be at least 2, got {d}")
    rng = rng_from(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z))


def random_mixed(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Ginibre-induced state ``G G^dagger / Tr(G G^dagger)`` with G of shape d x rank."""
    if d < 2:
        raise ImkitError(f"dimension must be at least 2, got {d}")
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise BadRank(f"rank must be in [1, {d}], got {rank}")
    rng = rng_from(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix._trusted(m / np.trace(m).real)


def random_real_state(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Real Ginibre state ``G G^T / Tr(G G^T)`` with G real Gaussian."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise BadRank(f"rank must be in [1, {d}], got {rank}")
    g = rng_from(seed).standard_normal((d, rank))
    m = g @ g.T
    return DensityMatrix._trusted((m / np.trace(m)).astype(complex))


def random_bloch(seed=None, radius: float | None = None) -> BlochVector:
    """Uniform point in the Bloch ball, or on the sphere of ``radius`` if given."""
    rng = rng_from(seed)
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    r = rng.random() ** (1 / 3) if radius is None else radius
    return BlochVector(*(r * v))


def random_real_orthogonal(d: int, seed=None) -> np.ndarray:
    return ortho_group.rvs(d, random_state=rng_from(seed)) if d > 1 else np.ones((1, 1))


def random_real_channel(d: int, n_kraus: int, seed=None) -> RealOperation:
    """Real channel from the first d columns of a Haar orthogonal matrix of size n_kraus*d."""
    if n_kraus < 1:
        raise ImkitError(f"need at least one Kraus operator, got {n_kraus}")
    q = random_real_orthogonal(n_kraus * d, seed)
    return RealOperation(tuple(q[l * d:(l + 1) * d, :d] for l in range(n_kraus)))


def random_real_projectors(d: int, seed=None) -> RealProjectorSet:
    return RealProjectorSet.from_orthogonal(random_real_orthogonal(d, seed))


# -- real operations ----------------------------------------------------------


def apply_channel(rho, channel: RealOperation) -> DensityMatrix:
    rho = as_density(rho)
    if channel.dim_in != rho.dim:
        raise DimensionMismatch(f"channel acts on d={channel.dim_in}, state has d={rho.dim}")
    out = sum(k @ rho.mat @ k.T for k in channel.kraus)
    return DensityMatrix._trusted(out)


class Dephased(NamedTuple):
    state: DensityMatrix
    probabilities: list[float]
    post_states: list[DensityMatrix]


def dephase(rho, projectors: RealProjectorSet) -> Dephased:
    """Non-selective measurement ``sum_i P_i rho P_i`` plus its branches.

    Branches with probability below 1e-12 are dropped from the lists.
    """
    rho = as_density(rho)
    total = np.zeros_like(rho.mat)
    probs, posts = [], []
    for p in projectors.projectors:
        branch = p @ rho.mat @ p
        total += branch
        w = float(np.trace(branch).real)
        if w >= BRANCH_CUTOFF:
            probs.append(w)
            posts.append(DensityMatrix._trusted(branch / w))
    return Dephased(DensityMatrix._trusted(total), probs, posts)


def direct_sum(p: float, rho1, rho2) -> DensityMatrix:
    """``p rho1 (+) (1-p) rho2`` on the direct-sum space."""
    rho1, rho2 = as_density(rho1), as_density(rho2)
    return DensityMatrix._trusted(block_diag(p * rho1.mat, (1 - p) * rho2.mat))


# -- real orthogonal compression of pure states -------------------------------


def _complete_orthonormal(rows: list[np.ndarray], d: int) -> list[np.ndarray]:
    # Gram-Schmidt over canonical vectors, largest residual first
    rows = list(rows)
    eye = np.eye(d)
    while len(rows) < d:
        basis = np.array(rows)
        resid = eye - (eye @ basis.T) @ basis
        norms = np.linalg.norm(resid, axis=1)
        k = int(np.argmax(norms))
        rows.append(resid[k] / norms[k])
    return rows


def real_compress(psi) -> np.ndarray:
    """Real orthogonal O such that ``O @ psi`` is supported on coordinates {0, 1}.

    Rows of O are an orthonormal basis of span{Re psi, Im psi}, completed to
    the whole space.
    """
    psi = as_pure(psi)
    d = psi.dim
    u, v = psi.amp.real.copy(), psi.amp.imag.copy()
    if np.linalg.norm(u) < 1e-10:
        u, v = v, u
    e1 = u / np.linalg.norm(u)
    if d == 1:
        return np.ones((1, 1))
    w = v - (e1 @ v) * e1
    rows = [e1]
    if np.linalg.norm(w) >= 1e-10:
        rows.append(w / np.linalg.norm(w))
    rows = _complete_orthonormal(rows, d)
    return np.array(rows)


def lift_qubit_mubs(o: np.ndarray) -> tuple[OrthonormalBasis, OrthonormalBasis, OrthonormalBasis]:
    """Pull the qubit MUBs back through O: ``Y_i = O^T (B_i (+) I_{d-2})``."""
    o = np.asarray(o, dtype=float)
    d = o.shape[0]
    if d < 2:
        raise WrongDimension(f"need d >= 2, got {d}")
    if np.max(np.abs(o.T @ o - np.eye(d))) > ORTHO_TOL:
        raise NotOrthonormal("compression matrix is not orthogonal")
    out = []
    for i, b in enumerate(qubit_mubs(), start=1):
        block = block_diag(b.matrix, np.eye(d - 2)) if d > 2 else b.matrix
        out.append(OrthonormalBasis(o.T @ block, f"Y{i}"))
    return tuple(out)
