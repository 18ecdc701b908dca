"""Imaginarity measures, the divergences behind them, and qubit closed forms.

Entropies and entropy-based divergences use base-2 logarithms.  Every
measure returns exactly 0.0 on states whose imaginary part vanishes to
``states.REAL_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import linalg
from .errors import BadAlpha, DimensionMismatch
from .states import (
    BlochVector,
    DensityMatrix,
    OrthonormalBasis,
    as_density,
    as_pure,
    change_basis,
    conjugate,
    is_real,
    maximally_mixed,
    real_part,
)

MAX_M_RE = 1 - np.sqrt(2) / 2

Divergence = Callable[[DensityMatrix, DensityMatrix], float]


def _pair(rho, sigma) -> tuple[DensityMatrix, DensityMatrix]:
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"states have dimensions {rho.dim} and {sigma.dim}")
    return rho, sigma


def _check_alpha(alpha: float) -> float:
    if not 0 < alpha < 1:
        raise BadAlpha(f"alpha must lie in the open interval (0, 1), got {alpha}")
    return float(alpha)


def _as_bloch(r) -> BlochVector:
    return r if isinstance(r, BlochVector) else BlochVector(*map(float, r))


# -- state functionals --------------------------------------------------------


def fidelity(rho, sigma) -> float:
    """Root fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))``, clamped to [0, 1].

    Computed as ``||sqrt(rho) sqrt(sigma)||_1``: the singular values are the
    square roots of the eigenvalues above, without squaring small ones into roundoff.
    """
    rho, sigma = _pair(rho, sigma)
    f = linalg.trace_norm(linalg.mat_sqrt_psd(rho.mat) @ linalg.mat_sqrt_psd(sigma.mat))
    return min(max(f, 0.0), 1.0)


def affinity(rho, sigma) -> float:
    """Quantum affinity ``Tr(sqrt(rho) sqrt(sigma))``."""
    rho, sigma = _pair(rho, sigma)
    a = np.trace(linalg.mat_sqrt_psd(rho.mat) @ linalg.mat_sqrt_psd(sigma.mat)).real
    return min(max(float(a), 0.0), 1.0)


def purity(rho) -> float:
    rho = as_density(rho)
    return float(np.sum(np.abs(rho.mat) ** 2))


def vn_entropy(rho) -> float:
    """Von Neumann entropy in bits, with 0 log 0 = 0."""
    w = linalg.psd_eigvals(as_density(rho).mat)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w))) + 0.0


def relative_entropy(rho, sigma) -> float:
    """``S(rho||sigma)`` in bits; infinite when supp(rho) is not inside supp(sigma)."""
    rho, sigma = _pair(rho, sigma)
    w, v = linalg.herm_eig(sigma.mat)
    w = np.where(w < linalg.roundoff_cutoff(w), 0.0, w)
    weights = np.einsum("ij,jk,ki->i", v.conj().T, rho.mat, v).real
    cross = 0.0
    for mu, q in zip(w, weights):
        if mu > 0:
            cross += q * np.log2(mu)
        elif q > 1e-12:
            return float("inf")
    return -vn_entropy(rho) - float(cross)


def tsallis_divergence(rho, sigma, alpha: float) -> float:
    """``(Tr(rho^a sigma^(1-a)) - 1) / (a - 1)`` for a in (0, 1)."""
    alpha = _check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    t = np.trace(linalg.psd_power(rho.mat, alpha) @ linalg.psd_power(sigma.mat, 1 - alpha)).real
    return float((t - 1) / (alpha - 1))


def gqjsd(rho, sigma, alpha: float) -> float:
    """Generalized quantum Jensen-Shannon divergence built on the Tsallis divergence."""
    alpha = _check_alpha(alpha)
    rho, sigma = _pair(rho, sigma)
    mid = DensityMatrix._trusted((rho.mat + sigma.mat) / 2)
    return 0.5 * (tsallis_divergence(rho, mid, alpha) + tsallis_divergence(sigma, mid, alpha))


def trace_norm_divergence(rho, sigma) -> float:
    rho, sigma = _pair(rho, sigma)
    return linalg.trace_norm(rho.mat - sigma.mat)


def fidelity_divergence(rho, sigma) -> float:
    return 1.0 - fidelity(rho, sigma)


# -- measures ---------------------------------------------------------------


def measure_from_divergence(rho, divergence: Divergence) -> float:
    """Imaginarity of ``rho`` as its divergence from its own real part state.

    ``divergence`` must be faithful on the pair (rho, Re rho), contractive
    under CPTP maps and additive on direct sums for the result to be a
    proper measure; this is the caller's contract and is not checked.
    """
    rho = as_density(rho)
    return float(divergence(rho, real_part(rho)))


def m_tr(rho) -> float:
    """Trace-norm imaginarity ``||rho - rho*||_tr / 2``."""
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return 0.5 * linalg.trace_norm(rho.mat - rho.mat.conj())


def m_rel(rho) -> float:
    """Relative-entropy imaginarity ``S(Re rho) - S(rho)``, in bits."""
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return vn_entropy(real_part(rho)) - vn_entropy(rho)


def m_g(rho) -> float:
    """Geometric imaginarity ``(1 - F(rho, rho*)) / 2``."""
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return 0.5 * (1 - fidelity(rho, conjugate(rho)))


def m_g_pure(psi) -> float:
    psi = as_pure(psi)
    if np.max(np.abs(psi.amp.imag)) == 0:
        return 0.0
    return 0.5 * (1 - abs(np.sum(psi.amp**2)))


def m_g_qubit_bloch(r) -> float:
    r = _as_bloch(r)
    return 0.5 * (1 - linalg.safe_sqrt(1 - r.r_y**2))


def m_g_prime(rho) -> float:
    """``1 - max_real F``, which equals ``1 - sqrt((1 + F(rho, rho*)) / 2)``."""
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return 1 - np.sqrt((1 + fidelity(rho, conjugate(rho))) / 2)


def m_re(rho) -> float:
    """Fidelity distance to the real part state, ``1 - F(rho, Re rho)``."""
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return 1 - fidelity(rho, real_part(rho))


def m_re_pure(psi) -> float:
    psi = as_pure(psi)
    if np.max(np.abs(psi.amp.imag)) == 0:
        return 0.0
    overlap = abs(np.sum(psi.amp**2))
    return 1 - np.sqrt((1 + overlap**2) / 2)


def m_re_qubit_bloch(r) -> float:
    r = _as_bloch(r)
    n2 = min(r.norm2, 1.0)
    y2 = r.r_y**2
    inner = linalg.safe_sqrt((1 - n2) * (1 - n2 + y2)) + 1 + n2 - y2
    return float(1 - np.sqrt(inner / 2))


def m_re_under_basis(rho, basis: OrthonormalBasis) -> float:
    return m_re(change_basis(rho, basis))


def m_t_half(rho) -> float:
    """Tsallis imaginarity at alpha = 1/2 in affinity form, ``1 - A(rho, rho*)``."""
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return 1 - affinity(rho, conjugate(rho))


def m_tsallis(rho, alpha: float) -> float:
    _check_alpha(alpha)
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return tsallis_divergence(rho, real_part(rho), alpha)


def m_gqjsd(rho, alpha: float) -> float:
    _check_alpha(alpha)
    rho = as_density(rho)
    if is_real(rho):
        return 0.0
    return gqjsd(rho, real_part(rho), alpha)


class OptimalRealState(NamedTuple):
    state: DensityMatrix
    degenerate: bool


def optimal_real_state_mg_qubit(r) -> OptimalRealState:
    """Real qubit state closest in fidelity to the Bloch state ``r``.

    For ``r_y**2 == 1`` every real state is optimal; I/2 is returned with
    ``degenerate=True``.
    """
    r = _as_bloch(r)
    c = 1 - r.r_y**2
    if c <= 1e-12:
        return OptimalRealState(maximally_mixed(2), True)
    s = np.sqrt(c)
    x0, z0 = r.r_x / s, r.r_z / s
    mat = 0.5 * np.array([[1 + z0, x0], [x0, 1 - z0]], dtype=complex)
    return OptimalRealState(DensityMatrix._trusted(mat), False)


# -- panels -------------------------------------------------------------------


def _alpha_key(alpha: float) -> str:
    return f"{alpha:g}"


@dataclass
class MeasurePanel:
    dim: int
    purity: float
    m_tr: float
    m_rel: float
    m_g: float
    m_g_prime: float
    m_re: float
    m_t_half: float
    m_tsallis: dict[float, float] = field(default_factory=dict)
    m_gqjsd: dict[float, float] = field(default_factory=dict)
    state_id: str = ""
    basis_label: str | None = None

    def to_row(self) -> dict[str, object]:
        row: dict[str, object] = {"state_id": self.state_id, "d": self.dim, "purity": self.purity}
        for name in ("m_tr", "m_rel", "m_g", "m_g_prime", "m_re", "m_t_half"):
            row[name] = getattr(self, name)
        for a, v in self.m_tsallis.items():
            row[f"m_tsallis_a{_alpha_key(a)}"] = v
        for a, v in self.m_gqjsd.items():
            row[f"m_gqjsd_a{_alpha_key(a)}"] = v
        if self.basis_label is not None:
            row["basis"] = self.basis_label
        return row


def measure_panel(rho, alphas: Sequence[float] = (0.5,), state_id: str = "",
                  basis: OrthonormalBasis | None = None) -> MeasurePanel:
    rho = as_density(rho)
    if basis is not None:
        rho = change_basis(rho, basis)
    alphas = [_check_alpha(a) for a in alphas]
    return MeasurePanel(
        dim=rho.dim,
        purity=purity(rho),
        m_tr=m_tr(rho),
        m_rel=m_rel(rho),
        m_g=m_g(rho),
        m_g_prime=m_g_prime(rho),
        m_re=m_re(rho),
        m_t_half=m_t_half(rho),
        m_tsallis={a: m_tsallis(rho, a) for a in alphas},
        m_gqjsd={a: m_gqjsd(rho, a) for a in alphas},
        state_id=state_id,
        basis_label=None if basis is None else basis.label,
    )


MEASURES: dict[str, Callable[[DensityMatrix], float]] = {
    "m_tr": m_tr,
    "m_rel": m_rel,
    "m_g": m_g,
    "m_g_prime": m_g_prime,
    "m_re": m_re,
    "m_t_half": m_t_half,
    "purity": purity,
}
