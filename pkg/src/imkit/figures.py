"""Figure datasets and parameter sweeps.

Every dataset is a ``Table`` (header plus rows). Rows are re-checked against
the inequality they illustrate while being built; a failing row raises
``FigureViolation``.
"""

from __future__ import annotations

import csv
import io
import json
from typing import NamedTuple, Sequence

import numpy as np

from . import relations
from .errors import FigureViolation, UnknownName
from .measures import (
    MAX_M_RE,
    MEASURES,
    m_g,
    m_g_prime,
    m_gqjsd,
    m_re,
    m_re_qubit_bloch,
    m_t_half,
    m_tr,
    m_tsallis,
    purity,
)
from .states import BlochVector, from_bloch, plus_i_mixture, random_mixed, to_bloch

FIG1_RESOLUTION = 201
CLOSED_FORM_TOL = 1e-10


class Table(NamedTuple):
    header: list[str]
    rows: list[list]


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.header)
    for row in table.rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def table_to_json(table: Table) -> str:
    def conv(x):
        return float(x) if isinstance(x, np.floating) else x
    return json.dumps([{k: conv(v) for k, v in zip(table.header, row)} for row in table.rows], indent=1)


def _require(ok: bool, what: str):
    if not ok:
        raise FigureViolation(what)


def p_grid(step: float = 0.01) -> np.ndarray:
    n = int(round(1 / step))
    return np.linspace(0.0, 1.0, n + 1)


# -- figures ------------------------------------------------------------------


def figure1(resolution: int = FIG1_RESOLUTION) -> Table:
    """M_Re of qubits over the (r_xz, r_y) half-disk and over the r_z = 0 disk.

    Panel "ball": u = sqrt(r_x^2 + r_z^2), v = r_y.  Panel "rz0": u = r_x, v = r_y.
    """
    rows = []
    ys = np.linspace(-1, 1, resolution)
    for panel, us in (("ball", np.linspace(0, 1, resolution)), ("rz0", np.linspace(-1, 1, resolution))):
        for u in us:
            for v in ys:
                if u * u + v * v > 1 + 1e-12:
                    continue
                val = m_re_qubit_bloch(BlochVector(float(u), float(v), 0.0))
                _require(-1e-12 <= val <= MAX_M_RE + 1e-12, f"M_Re={val} out of range at {panel} ({u}, {v})")
                rows.append([panel, float(u), float(v), val])
    return Table(["panel", "u", "v", "m_re"], rows)


def figure2(step: float = 0.01) -> Table:
    """Measures of p|+i><+i| + (1-p) I/2 against p, with closed-form checks."""
    rows = []
    for p in p_grid(step):
        rho = plus_i_mixture(float(p))
        mg, mre = m_g(rho), m_re(rho)
        t_norm, mgp = m_t_half(rho) / 2, m_g_prime(rho)
        root = np.sqrt(1 - p * p)
        _require(abs(mg - (1 - root) / 2) <= CLOSED_FORM_TOL, f"M_g closed form fails at p={p}")
        _require(abs(mre - (1 - np.sqrt((root + 1) / 2))) <= CLOSED_FORM_TOL, f"M_Re closed form fails at p={p}")
        _require(mre <= mg + relations.BOUND_TOL, f"M_Re > M_g at p={p}")
        rows.append([float(p), mg, t_norm, mre, mgp])
    return Table(["p", "m_g", "m_t_half_normalized", "m_re", "m_g_prime"], rows)


def figure3(step: float = 0.01) -> Table:
    """Trace-norm bounds f2 <= M_Re <= f1 along the same family."""
    rows = []
    for p in p_grid(step):
        rho = plus_i_mixture(float(p))
        mtr, pur, mre = m_tr(rho), purity(rho), m_re(rho)
        f2, f1 = relations.trace_norm_bound_values(2, mtr, pur)
        _require(f2 - relations.BOUND_TOL <= mre <= f1 + relations.BOUND_TOL,
                 f"trace-norm bounds fail at p={p}: {f2} <= {mre} <= {f1}")
        rows.append([float(p), mtr, pur, f1, f2, mre])
    return Table(["p", "m_tr", "purity", "f1", "f2", "m_re"], rows)


def figure4(n_states: int = 1000, seed: int = 0, step: float = 0.01) -> Table:
    """Qubit MUB complementarity: bound curve over |r|^2 plus random samples."""
    rows = []
    for r2 in p_grid(step):
        rows.append(["bound", float(r2), None, relations.qubit_complementarity_rhs(float(r2))])
    for i in range(n_states):
        rho = random_mixed(2, None, relations.state_rng(seed, i, 0))
        rep = relations.check_qubit_complementarity(rho, state_id=f"s{i}")
        _require(rep.passed, f"qubit complementarity fails on sample {i}: slack {rep.slack}")
        rows.append(["sample", to_bloch(rho).norm2, rep.lhs, rep.rhs])
    return Table(["series", "r2", "lhs", "rhs"], rows)


def figure5(n_states: int = 2000, seed: int = 0) -> Table:
    """Qutrit MUB complementarity sum against purity for Ginibre qutrits."""
    rows = []
    for i in range(n_states):
        rho = random_mixed(3, None, relations.state_rng(seed, i, 0))
        rep = relations.check_qutrit_complementarity(rho, state_id=f"s{i}")
        _require(rep.passed, f"qutrit complementarity fails on sample {i}: slack {rep.slack}")
        rows.append([f"s{i}", purity(rho), rep.lhs, rep.rhs])
    return Table(["state_id", "purity", "lhs", "rhs"], rows)


def figure(which: int, n_states: int | None = None, seed: int = 0) -> Table:
    if which == 1:
        return figure1()
    if which == 2:
        return figure2()
    if which == 3:
        return figure3()
    if which == 4:
        return figure4(1000 if n_states is None else n_states, seed)
    if which == 5:
        return figure5(2000 if n_states is None else n_states, seed)
    raise UnknownName(f"unknown figure {which}; expected 1..5")


# -- sweeps -------------------------------------------------------------------

FAMILIES = ("eq13", "bloch_x", "bloch_y", "bloch_z")


def parse_grid(spec: str | None) -> list[float]:
    """``"a,b,c"`` or inclusive ``"start:stop:step"``; default 0..1 by 0.01."""
    if not spec:
        return [float(x) for x in p_grid()]
    if ":" in spec:
        start, stop, step = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise UnknownName("grid step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9))
        return [start + k * step for k in range(n + 1)]
    return [float(x) for x in spec.split(",") if x.strip()]


def _family_state(family: str, t: float):
    if family == "eq13":
        return plus_i_mixture(t)
    axis = {"bloch_x": 0, "bloch_y": 1, "bloch_z": 2}[family]
    r = [0.0, 0.0, 0.0]
    r[axis] = t
    return from_bloch(BlochVector(*r))


def sweep(family: str, grid: Sequence[float], measures: Sequence[str],
          alphas: Sequence[float] = (0.5,)) -> Table:
    if family not in FAMILIES:
        raise UnknownName(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    if not measures:
        raise UnknownName("no measures requested")
    columns = []
    for name in measures:
        if name in MEASURES:
            columns.append((name, MEASURES[name]))
        elif name in ("m_tsallis", "m_gqjsd"):
            fn = m_tsallis if name == "m_tsallis" else m_gqjsd
            for a in alphas:
                columns.append((f"{name}_a{a:g}", lambda rho, fn=fn, a=a: fn(rho, a)))
        else:
            raise UnknownName(f"unknown measure {name!r}")
    rows = []
    for t in grid:
        rho = _family_state(family, float(t))
        rows.append([float(t)] + [fn(rho) for _, fn in columns])
    return Table(["param"] + [c for c, _ in columns], rows)
