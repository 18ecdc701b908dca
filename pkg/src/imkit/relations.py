"""Bound and complementarity checks, brute-force oracles, and seeded audits.

Each ``check_*`` function evaluates one inequality family on one state and
returns :class:`BoundReport` values; ``run_audit`` applies a list of checks
to a seeded random ensemble.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .errors import NegativeMinorSum, UnknownCheckName, WrongDimension
from .measures import (
    fidelity,
    m_g,
    m_re,
    m_re_under_basis,
    m_t_half,
    m_tr,
    purity,
)
from .states import (
    DensityMatrix,
    OrthonormalBasis,
    as_density,
    as_pure,
    lift_qubit_mubs,
    qubit_mubs,
    qutrit_mubs,
    random_mixed,
    random_pure,
    real_compress,
    real_part,
    to_bloch,
)

BOUND_TOL = 1e-8
EQUALITY_TOL = 1e-8
STRICT_TOL = 1e-9
STRICT_MARGIN = 1e-12
MINOR_TOL = 1e-10

QUTRIT_CONSTANT = 31 / 14

RELATIONS = ("<=", ">=", "=", "<", ">")


@dataclass
class BoundReport:
    """One evaluated inequality ``lhs <relation> rhs``.

    ``slack`` is positive when the relation holds with room to spare; the
    report passes when ``slack >= -tolerance``. For equalities the slack is
    ``-|lhs - rhs|``.
    """

    name: str
    lhs: float
    rhs: float
    relation: str
    slack: float
    tolerance: float
    passed: bool
    state_id: str = ""
    equality: bool = False
    strict: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def make_report(name: str, lhs: float, rhs: float, relation: str,
                tolerance: float | None = None, state_id: str = "") -> BoundReport:
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    if tolerance is None:
        tolerance = STRICT_TOL if relation in ("<", ">") else BOUND_TOL
    lhs, rhs = float(lhs), float(rhs)
    if relation in ("<=", "<"):
        slack = rhs - lhs
    elif relation in (">=", ">"):
        slack = lhs - rhs
    else:
        slack = -abs(lhs - rhs)
    strict = slack > STRICT_MARGIN if relation in ("<", ">") else None
    return BoundReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        relation=relation,
        slack=slack,
        tolerance=tolerance,
        passed=bool(slack >= -tolerance),
        state_id=state_id,
        equality=bool(abs(lhs - rhs) <= EQUALITY_TOL),
        strict=strict,
    )


# -- relations between measures -----------------------------------------------


def check_sandwich_mg(rho, state_id: str = "") -> list[BoundReport]:
    """``M_Re <= M_g <= 1 - (1 - M_Re)^2``."""
    rho = as_density(rho)
    mre, mg = m_re(rho), m_g(rho)
    return [
        make_report("sandwich_lower", mre, mg, "<=", state_id=state_id),
        make_report("sandwich_upper", mg, 1 - (1 - mre) ** 2, "<=", state_id=state_id),
    ]


def check_tsallis_corollary(rho, state_id: str = "") -> BoundReport:
    """``M_Re <= M_T,1/2 / 2``."""
    rho = as_density(rho)
    return make_report("tsallis_corollary", m_re(rho), 0.5 * m_t_half(rho), "<=", state_id=state_id)


def trace_norm_bound_values(d: int, mtr: float, p: float) -> tuple[float, float]:
    """Lower and upper bounds on M_Re in terms of M_tr and purity.

    When ``P - M_tr^2 < 0`` the upper bound is vacuous and reported as 1.
    """
    f2 = 1 - np.sqrt(1 / d + linalg.safe_sqrt((d - 1) ** 2 - (d - 1) * mtr**2, (d - 1) ** 2) / d)
    f1 = 1 - linalg.safe_sqrt(p - mtr**2)
    return float(f2), float(f1)


def check_trace_norm_bounds(rho, state_id: str = "") -> list[BoundReport]:
    rho = as_density(rho)
    mre, mtr, p = m_re(rho), m_tr(rho), purity(rho)
    f2, f1 = trace_norm_bound_values(rho.dim, mtr, p)
    return [
        make_report("trace_norm_lower", f2, mre, "<=", state_id=state_id),
        make_report("trace_norm_upper", mre, f1, "<=", state_id=state_id),
    ]


def check_purity_relation(rho, state_id: str = "") -> BoundReport:
    """``(1 - M_Re)^2 + M_tr^2 >= P``, the relation the trace-norm upper bound rests on."""
    rho = as_density(rho)
    mre, mtr = m_re(rho), m_tr(rho)
    return make_report("purity_relation", (1 - mre) ** 2 + mtr**2, purity(rho), ">=", state_id=state_id)


class FidelityBracket(NamedTuple):
    lower: float
    fidelity_sq: float
    upper: float


def lemma1_fidelity_bounds(rho) -> FidelityBracket:
    """Sub- and super-fidelity bracket of ``F(rho, Re rho)^2``.

    Both sides are written through the purity, ``||rho - rho*||_HS`` and the
    principal-minor sum ``E2(rho Re rho)``.
    """
    rho = as_density(rho)
    p = purity(rho)
    hs2 = linalg.hs_norm(rho.mat - rho.mat.conj()) ** 2
    overlap = p - hs2 / 4
    e2 = linalg.e2_sum_principal_minors(rho.mat @ real_part(rho).mat).real
    if e2 < -MINOR_TOL:
        raise NegativeMinorSum(f"E2(rho Re rho) = {e2:.3e} is negative beyond roundoff")
    lower = overlap + 2 * linalg.safe_sqrt(e2)
    upper = overlap + linalg.safe_sqrt((1 - p) * (1 - p + hs2 / 4))
    f = fidelity(rho, real_part(rho))
    return FidelityBracket(float(lower), f * f, float(upper))


def check_lemma1(rho, state_id: str = "") -> list[BoundReport]:
    lo, f2, up = lemma1_fidelity_bounds(rho)
    return [
        make_report("lemma1_lower", lo, f2, "<=", state_id=state_id),
        make_report("lemma1_upper", f2, up, "<=", state_id=state_id),
    ]


def lemma2_cap(rho) -> float:
    """Cap on the super-fidelity maximized over real states."""
    rho = as_density(rho)
    d = rho.dim
    gap = purity(rho) - float(np.vdot(rho.mat, rho.mat.conj()).real)
    scale = 4 * (d - 1) ** 2
    return 1 / d + linalg.safe_sqrt(scale - 2 * d * (d - 1) * gap, scale) / (2 * d)


def lemma2_maxU_bound(rho, state_id: str = "") -> BoundReport:
    rho = as_density(rho)
    f = fidelity(rho, real_part(rho))
    return make_report("lemma2", f * f, lemma2_cap(rho), "<=", state_id=state_id)


# -- complementarity under mutually unbiased bases ------------------------------


def complementarity_sum(rho, bases: Sequence[OrthonormalBasis]) -> float:
    """``sum_k (1 - M_Re in basis k)^2``."""
    rho = as_density(rho)
    return float(sum((1 - m_re_under_basis(rho, b)) ** 2 for b in bases))


def qubit_complementarity_rhs(norm2: float) -> float:
    n2 = min(max(norm2, 0.0), 1.0)
    return (linalg.safe_sqrt((1 - n2) * (3 - 2 * n2), 3.0) + 3 + 2 * n2) / 2


def check_qubit_complementarity(rho, state_id: str = "") -> BoundReport:
    rho = as_density(rho)
    if rho.dim != 2:
        raise WrongDimension(f"qubit complementarity needs d=2, got d={rho.dim}")
    lhs = complementarity_sum(rho, qubit_mubs())
    rhs = qubit_complementarity_rhs(to_bloch(rho).norm2)
    return make_report("qubit_compl", lhs, rhs, ">=", state_id=state_id)


def pure_complementarity_bases(psi) -> tuple[OrthonormalBasis, ...]:
    """State-adapted bases Y1..Y3: qubit MUBs lifted through a real compression."""
    return lift_qubit_mubs(real_compress(psi))


def check_pure_complementarity(psi, bases: Sequence[OrthonormalBasis] | None = None,
                               state_id: str = "") -> BoundReport:
    """Sum over the three Y bases equals 5/2 for a pure state."""
    psi = as_pure(psi)
    if bases is None:
        bases = pure_complementarity_bases(psi)
    lhs = complementarity_sum(psi.projector(), bases)
    return make_report("pure_compl", lhs, 2.5, "=", tolerance=EQUALITY_TOL, state_id=state_id)


def check_qutrit_complementarity(rho, state_id: str = "") -> BoundReport:
    """``sum_k (1 - M_Re^{Z_k})^2 > (31/14) P`` over the four qutrit MUBs."""
    rho = as_density(rho)
    if rho.dim != 3:
        raise WrongDimension(f"qutrit complementarity needs d=3, got d={rho.dim}")
    lhs = complementarity_sum(rho, qutrit_mubs())
    return make_report("qutrit_compl", lhs, QUTRIT_CONSTANT * purity(rho), ">", state_id=state_id)


def qutrit_pure_lower_function(r0: float, r1: float, r2: float) -> float:
    """Polynomial whose minimum on the unit sphere gives the 31/14 constant."""
    return (2 + 2 * r0**4 + 0.5 * (r1**4 + r2**4) + 5 * r1**2 * r2**2
            - r0**2 * r1**2 - r0**2 * r2**2)


def min_slack_by_purity_bins(purities, slacks, n_bins: int = 10) -> list[tuple[float, float, float]]:
    """Minimum slack within equal-count purity bins, ordered by purity.

    Returns ``(lowest purity, highest purity, min slack)`` per bin.
    """
    p = np.asarray(purities, dtype=float)
    s = np.asarray(slacks, dtype=float)
    order = np.argsort(p, kind="stable")
    out = []
    for chunk in np.array_split(order, n_bins):
        if chunk.size:
            out.append((float(p[chunk].min()), float(p[chunk].max()), float(s[chunk].min())))
    return out


# -- brute-force oracles --------------------------------------------------------

GRID_SIZE = 200
REFINE_ROUNDS = 50
RESTARTS = 32


def _qubit_fid_sq(rho: np.ndarray, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    # F^2 = Tr(rho sigma) + 2 sqrt(det rho det sigma), sigma = (I + x X + z Z)/2
    tr = 0.5 * (rho[0, 0].real * (1 + z) + rho[1, 1].real * (1 - z) + 2 * rho[0, 1].real * x)
    det_rho = max(float(np.linalg.det(rho).real), 0.0)
    det_sigma = np.clip((1 - x * x - z * z) / 4, 0.0, None)
    return tr + 2 * np.sqrt(det_rho * det_sigma)


def _hemisphere(psi: np.ndarray, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # (x, z) = sin(psi) (cos theta, sin theta) keeps sqrt(det sigma) = |cos psi| / 2 smooth at the edge
    s = np.sin(psi)
    return s * np.cos(theta), s * np.sin(theta)


def _real_qubit(x: float, z: float) -> DensityMatrix:
    return DensityMatrix._trusted(0.5 * np.array([[1 + z, x], [x, 1 - z]], dtype=complex))


def brute_max_fidelity_real_qubit(rho) -> tuple[DensityMatrix, float]:
    """Maximize ``F(rho, sigma)`` over real qubit states by grid plus pattern search.

    Real states are swept over hemisphere angles (psi, theta) so the
    objective stays smooth up to the pure-state edge.  The search uses the
    determinant form of the qubit fidelity; the returned F is re-evaluated
    through the general eigensolver route.
    """
    rho = as_density(rho)
    if rho.dim != 2:
        raise WrongDimension(f"qubit oracle needs d=2, got d={rho.dim}")
    m = rho.mat
    psis = np.linspace(0, np.pi / 2, GRID_SIZE)
    thetas = np.linspace(0, 2 * np.pi, GRID_SIZE, endpoint=False)
    gp, gt = np.meshgrid(psis, thetas, indexing="ij")
    vals = _qubit_fid_sq(m, *_hemisphere(gp, gt))
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    bp, bt, best = gp[i, j], gt[i, j], vals[i, j]

    hp, ht = psis[1] - psis[0], thetas[1] - thetas[0]
    offsets = np.linspace(-2, 2, 5)
    op, ot = np.meshgrid(offsets, offsets, indexing="ij")
    for _ in range(REFINE_ROUNDS):
        cp, ct = bp + hp * op, bt + ht * ot
        cand = _qubit_fid_sq(m, *_hemisphere(cp, ct))
        k = np.unravel_index(np.argmax(cand), cand.shape)
        if cand[k] > best:
            bp, bt, best = cp[k], ct[k], cand[k]
        hp *= 0.6
        ht *= 0.6
    x, z = _hemisphere(bp, bt)
    sigma = _real_qubit(float(x), float(z))
    return sigma, fidelity(rho, sigma)


def _real_state_from_params(params: np.ndarray, d: int, tril=None) -> np.ndarray:
    low = np.zeros((d, d))
    low[np.tril_indices(d) if tril is None else tril] = params
    s = low @ low.T
    return s / np.trace(s)


def brute_min_trace_distance_real(rho, seed=0, restarts: int = RESTARTS) -> float:
    """``min ||rho - sigma||_tr`` over real states by random-restart Nelder-Mead.

    Real states are parameterized as ``L L^T / Tr(L L^T)`` with L real lower
    triangular.
    """
    rho = as_density(rho)
    d = rho.dim
    if d not in (2, 3):
        raise WrongDimension(f"trace-distance oracle supports d in {{2, 3}}, got d={d}")
    m = rho.mat
    n = d * (d + 1) // 2
    tril = np.tril_indices(d)

    r00, r11, r01 = m[0, 0].real, m[1, 1].real, m[0, 1]

    def qubit_objective(params):
        a, b, c = params
        t = a * a + b * b + c * c
        if t == 0:
            return 2.0
        # traceless Hermitian 2x2 difference: eigenvalues +-sqrt(((p - q)/2)^2 + |o|^2)
        half_gap = (r00 - a * a / t - r11 + (b * b + c * c) / t) / 2
        return 2.0 * float(np.hypot(half_gap, abs(r01 - a * b / t)))

    def objective(params):
        if not params.any():
            return 2.0
        diff = m - _real_state_from_params(params, d, tril)
        return float(np.sum(np.abs(np.linalg.eigvalsh(diff))))

    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(restarts):
        res = minimize(qubit_objective if d == 2 else objective, rng.standard_normal(n), method="Nelder-Mead",
                       options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": 600})
        best = min(best, res.fun)
    return float(best)


# -- audits ---------------------------------------------------------------------


@dataclass(frozen=True)
class CheckSpec:
    run: Callable[..., object]
    dims: tuple[int, ...] | None
    pure: bool = False


CHECKS: dict[str, CheckSpec] = {
    "sandwich": CheckSpec(check_sandwich_mg, None),
    "tsallis": CheckSpec(check_tsallis_corollary, None),
    "trace_norm": CheckSpec(check_trace_norm_bounds, None),
    "purity_relation": CheckSpec(check_purity_relation, None),
    "lemma1": CheckSpec(check_lemma1, None),
    "lemma2": CheckSpec(lemma2_maxU_bound, None),
    "qubit_compl": CheckSpec(check_qubit_complementarity, (2,)),
    "pure_compl": CheckSpec(check_pure_complementarity, None, pure=True),
    "qutrit_compl": CheckSpec(check_qutrit_complementarity, (3,)),
}


@dataclass
class AuditConfig:
    dim: int
    n_states: int
    seed: int
    checks: Sequence[str]
    rank: int | None = None


@dataclass
class EnsembleAudit:
    seed: int
    n_states: int
    dim: int
    reports: list[BoundReport] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(not r.passed for r in self.reports)

    @property
    def worst_slack(self) -> float:
        return min((r.slack for r in self.reports), default=float("inf"))

    def summary(self) -> list[dict]:
        out: dict[str, dict] = {}
        for r in self.reports:
            s = out.setdefault(r.name, {"check": r.name, "trials": 0, "violations": 0,
                                        "worst_slack": float("inf")})
            s["trials"] += 1
            s["violations"] += not r.passed
            s["worst_slack"] = min(s["worst_slack"], r.slack)
        return list(out.values())

    def to_json(self) -> str:
        return json.dumps({
            "seed": self.seed,
            "n_states": self.n_states,
            "dim": self.dim,
            "violations": self.violations,
            "worst_slack": self.worst_slack,
            "reports": [r.to_dict() for r in self.reports],
        }, indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "state_id", "lhs", "rhs", "slack", "pass"])
        for r in self.reports:
            w.writerow([r.name, r.state_id, repr(r.lhs), repr(r.rhs), repr(r.slack), int(r.passed)])
        return buf.getvalue()


def state_rng(seed: int, index: int, stream: int) -> np.random.Generator:
    """Generator for state ``index``; independent of how many checks run."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index, stream)))


def resolve_checks(names: Sequence[str], dim: int) -> list[tuple[str, CheckSpec]]:
    if not names:
        raise UnknownCheckName("no checks requested")
    out = []
    for name in names:
        spec = CHECKS.get(name)
        if spec is None:
            raise UnknownCheckName(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
        if spec.dims is not None and dim not in spec.dims:
            raise UnknownCheckName(f"check {name!r} is defined only for d in {spec.dims}, got d={dim}")
        out.append((name, spec))
    return out


def run_audit(config: AuditConfig) -> EnsembleAudit:
    checks = resolve_checks(config.checks, config.dim)
    audit = EnsembleAudit(seed=config.seed, n_states=config.n_states, dim=config.dim)
    need_pure = any(spec.pure for _, spec in checks)
    need_mixed = any(not spec.pure for _, spec in checks)
    for i in range(config.n_states):
        sid = f"s{i}"
        rho = random_mixed(config.dim, config.rank, state_rng(config.seed, i, 0)) if need_mixed else None
        psi = random_pure(config.dim, state_rng(config.seed, i, 1)) if need_pure else None
        for _, spec in checks:
            out = spec.run(psi if spec.pure else rho, state_id=sid)
            audit.reports.extend(out if isinstance(out, list) else [out])
    return audit
