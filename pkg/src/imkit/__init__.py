"""Numerical toolkit for the resource theory of imaginarity."""

from .errors import ImkitError
from .measures import (
    MAX_M_RE,
    affinity,
    fidelity,
    m_g,
    m_g_prime,
    m_gqjsd,
    m_re,
    m_re_qubit_bloch,
    m_rel,
    m_t_half,
    m_tr,
    m_tsallis,
    measure_panel,
    purity,
)
from .relations import AuditConfig, BoundReport, EnsembleAudit, run_audit
from .states import (
    BlochVector,
    DensityMatrix,
    OrthonormalBasis,
    PureState,
    from_bloch,
    new_density,
    plus_i,
    random_mixed,
    random_pure,
    real_part,
    to_bloch,
)

__version__ = "0.1.0"
