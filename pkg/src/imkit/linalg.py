"""Dense complex-matrix kernels: Hermitian eigensolver, PSD square roots, norms.

Tolerances are module attributes read at call time, so callers (the CLI's
``--tol``) can override them with ``setattr`` without re-importing anything.
"""

from typing import NamedTuple

import numpy as np

from .errors import ImkitError, NoConvergence, NotHermitian, NotPSD

HERM_TOL = 1e-8
PSD_TOL = 1e-9
# eigenvalues below ROUNDOFF_FACTOR * d * eps * max(1, |lambda|_max) are zero
ROUNDOFF_FACTOR = 16.0

_EPS = np.finfo(float).eps


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square complex128 array with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ImkitError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ImkitError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - dagger(a))))


def roundoff_cutoff(eigenvalues: np.ndarray) -> float:
    d = len(eigenvalues)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    return ROUNDOFF_FACTOR * d * _EPS * scale


def safe_sqrt(x: float, scale: float = 1.0) -> float:
    """Square root of a radicand known to be nonnegative in exact arithmetic.

    Values within roundoff of zero (relative to ``scale``) map to exactly 0,
    so a cancelled radicand does not turn 1e-16 noise into 1e-8 error.
    """
    if x <= ROUNDOFF_FACTOR * _EPS * scale:
        return 0.0
    return float(np.sqrt(x))


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # first non-negligible component of each column made real and nonnegative
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            c = col[idx[0]]
            out[:, k] = col * (abs(c) / c)
    return out


def herm_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized as ``(H + H^dagger)/2`` before solving. Raises
    ``NotHermitian`` if the max-entry asymmetry exceeds ``HERM_TOL``.
    """
    m = as_complex_matrix(h)
    defect = hermitian_defect(m)
    if defect > HERM_TOL:
        raise NotHermitian(f"matrix is not Hermitian: max |H - H^dagger| = {defect:.3e}")
    m = 0.5 * (m + dagger(m))
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver failed: {exc}") from exc
    return EigenDecomposition(w, _fix_phases(v))


def _clamped_spectrum(h, what: str) -> EigenDecomposition:
    w, v = herm_eig(h)
    if w[0] < -PSD_TOL:
        raise NotPSD(f"{what} has eigenvalue {w[0]:.3e} below -{PSD_TOL:g}")
    w = np.where(w < roundoff_cutoff(w), 0.0, w)
    return EigenDecomposition(w, v)


def psd_eigvals(h) -> np.ndarray:
    """Eigenvalues of a PSD matrix with roundoff-level values set to exactly 0."""
    return _clamped_spectrum(h, "matrix").eigenvalues


def psd_power(a, power: float) -> np.ndarray:
    """``A**power`` for PSD ``A`` via its spectrum, with ``0**power := 0``."""
    w, v = _clamped_spectrum(a, "matrix")
    wp = np.zeros_like(w)
    pos = w > 0
    wp[pos] = w[pos] ** power
    return (v * wp) @ dagger(v)


def mat_sqrt_psd(a) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-PSD_TOL, 0)`` and roundoff-level positives are treated
    as zero; anything more negative raises ``NotPSD``.
    """
    return psd_power(a, 0.5)


def trace_sqrt_psd(a) -> float:
    """``Tr sqrt(A)`` for PSD ``A``, computed from the clamped spectrum."""
    return float(np.sum(np.sqrt(psd_eigvals(a))))


def trace_norm(a) -> float:
    """Sum of singular values."""
    m = as_complex_matrix(a)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    m = as_complex_matrix(a)
    return float(np.linalg.norm(m, "fro"))


def e2_sum_principal_minors(a) -> complex:
    """Sum of the 2x2 principal minors, ``((Tr A)^2 - Tr(A^2)) / 2``."""
    m = as_complex_matrix(a)
    tr = np.trace(m)
    return complex((tr * tr - np.trace(m @ m)) / 2)
