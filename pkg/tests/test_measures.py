import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from imkit import measures as M
from imkit import states
from imkit.errors import BadAlpha, DimensionMismatch
from imkit.states import BlochVector

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 4)
AXIOM_MEASURES = {"m_re": M.m_re, "m_tr": M.m_tr, "m_rel": M.m_rel, "m_g": M.m_g}


# -- independent oracles -------------------------------------------------------


def fidelity_oracle(rho, sigma):
    # spectrum of rho sigma is the square of that of sqrt(rho) sigma sqrt(rho)
    w = np.linalg.eigvals(np.asarray(rho) @ np.asarray(sigma))
    return float(np.sum(np.sqrt(np.clip(w.real, 0, None))))


def sqrtm_fidelity_oracle(rho, sigma):
    s = scipy.linalg.sqrtm(np.asarray(rho))
    return float(np.trace(scipy.linalg.sqrtm(s @ np.asarray(sigma) @ s)).real)


def entropy_oracle(rho):
    r = np.asarray(rho)
    return float(-np.trace(r @ scipy.linalg.logm(r)).real / np.log(2))


def tsallis_oracle(rho, sigma, a):
    t = np.trace(scipy.linalg.fractional_matrix_power(np.asarray(rho), a)
                 @ scipy.linalg.fractional_matrix_power(np.asarray(sigma), 1 - a)).real
    return (t - 1) / (a - 1)


# -- anchor values ---------------------------------------------------------------


def test_plus_i_panel():
    rho = states.plus_i().projector()
    assert M.m_re(rho) == pytest.approx(1 - np.sqrt(2) / 2, abs=1e-12)
    assert M.m_tr(rho) == pytest.approx(1.0, abs=1e-12)
    assert M.m_rel(rho) == pytest.approx(1.0, abs=1e-12)
    assert M.m_g(rho) == pytest.approx(0.5, abs=1e-12)
    assert M.m_g_prime(rho) == pytest.approx(1 - np.sqrt(2) / 2, abs=1e-12)
    assert M.m_t_half(rho) == pytest.approx(1.0, abs=1e-12)


def test_maximally_mixed_is_free():
    rho = states.maximally_mixed(3)
    for name, fn in M.MEASURES.items():
        if name != "purity":
            assert fn(rho) == 0.0
    assert M.m_tsallis(rho, 0.3) == 0.0
    assert M.m_gqjsd(rho, 0.3) == 0.0


def test_bad_alpha_and_dimension():
    rho = states.plus_i().projector()
    for a in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(BadAlpha):
            M.m_tsallis(rho, a)
    with pytest.raises(DimensionMismatch):
        M.fidelity(rho, states.maximally_mixed(3))


def test_relative_entropy_support_mismatch_is_infinite():
    pure0 = states.DensityMatrix(np.diag([1.0, 0.0]))
    pure1 = states.DensityMatrix(np.diag([0.0, 1.0]))
    assert M.relative_entropy(pure0, pure1) == np.inf


# -- oracle agreement --------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_fidelity_matches_oracles(d, seed):
    rho = states.random_mixed(d, seed=seed)
    sigma = states.random_mixed(d, seed=seed + 1)
    f = M.fidelity(rho, sigma)
    assert f == pytest.approx(fidelity_oracle(rho, sigma), abs=1e-9)
    assert f == pytest.approx(sqrtm_fidelity_oracle(rho, sigma), abs=1e-8)
    assert M.affinity(rho, sigma) <= f + 1e-12


@settings(max_examples=40, deadline=None)
@given(dims, seeds)
def test_m_rel_matches_logm_oracle(d, seed):
    rho = states.random_mixed(d, seed=seed)
    want = entropy_oracle(states.real_part(rho)) - entropy_oracle(rho)
    assert M.m_rel(rho) == pytest.approx(want, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(dims, seeds, st.floats(0.05, 0.95))
def test_tsallis_matches_fractional_power_oracle(d, seed, a):
    rho = states.random_mixed(d, seed=seed)
    assert M.m_tsallis(rho, a) == pytest.approx(tsallis_oracle(rho, states.real_part(rho), a), abs=1e-8)


def test_m_t_half_is_affinity_form():
    rho = states.random_mixed(3, seed=4)
    s = scipy.linalg.sqrtm(np.asarray(rho))
    want = 1 - np.trace(s @ s.conj()).real
    assert M.m_t_half(rho) == pytest.approx(want, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_m_tr_equals_trace_norm_of_imaginary_part(d, seed):
    rho = states.random_mixed(d, seed=seed)
    im = np.asarray(rho).imag
    assert M.m_tr(rho) == pytest.approx(np.abs(np.linalg.eigvalsh(1j * im)).sum(), abs=1e-10)


# -- pure and qubit closed forms ---------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), seeds)
def test_pure_paths_agree(d, seed):
    psi = states.random_pure(d, seed)
    rho = psi.projector()
    assert M.m_re_pure(psi) == pytest.approx(M.m_re(rho), abs=1e-10)
    assert M.m_g_pure(psi) == pytest.approx(M.m_g(rho), abs=1e-10)
    mg = M.m_g(rho)
    assert M.m_re(rho) == pytest.approx(1 - np.sqrt((1 + (1 - 2 * mg) ** 2) / 2), abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_qubit_fast_paths_agree(seed):
    r = states.random_bloch(seed)
    rho = states.from_bloch(r)
    assert M.m_re_qubit_bloch(r) == pytest.approx(M.m_re(rho), abs=1e-9)
    assert M.m_g_qubit_bloch(r) == pytest.approx(M.m_g(rho), abs=1e-9)


def test_qubit_m_re_under_b2_swaps_x_for_y():
    r = BlochVector(0.3, 0.5, 0.2)
    rho = states.from_bloch(r)
    b2 = states.qubit_mubs()[1]
    assert M.m_re_under_basis(rho, b2) == pytest.approx(M.m_re_qubit_bloch(BlochVector(0.5, 0.3, 0.2)), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(dims, seeds)
def test_real_orthogonal_basis_change_preserves_m_re(d, seed):
    rho = states.random_mixed(d, seed=seed)
    o = states.OrthonormalBasis(states.random_real_orthogonal(d, seed).astype(complex))
    assert M.m_re_under_basis(rho, o) == pytest.approx(M.m_re(rho), abs=1e-10)


def test_optimal_real_state_examples():
    real = M.optimal_real_state_mg_qubit(BlochVector(0.6, 0.0, 0.0))
    assert not real.degenerate
    assert np.allclose(real.state.mat, states.from_bloch(BlochVector(0.6, 0.0, 0.0)).mat)
    deg = M.optimal_real_state_mg_qubit(BlochVector(0.0, 1.0, 0.0))
    assert deg.degenerate
    assert np.allclose(deg.state.mat, np.eye(2) / 2)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_optimal_real_state_fidelity(seed):
    r = states.random_bloch(seed)
    opt = M.optimal_real_state_mg_qubit(r)
    assert states.is_real(opt.state)
    f = M.fidelity(states.from_bloch(r), opt.state)
    assert f * f == pytest.approx((np.sqrt(1 - r.r_y**2) + 1) / 2, abs=1e-9)


# -- axioms as properties ---------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(dims, seeds)
def test_faithful_on_real_states(d, seed):
    rho = states.random_real_state(d, seed=seed)
    for fn in AXIOM_MEASURES.values():
        assert fn(rho) == 0.0


@settings(max_examples=50, deadline=None)
@given(dims, seeds)
def test_positive_on_clearly_imaginary_states(d, seed):
    rho = states.random_mixed(d, seed=seed)
    if M.m_tr(rho) < 1e-2:
        return
    for fn in AXIOM_MEASURES.values():
        assert fn(rho) > 1e-6


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), seeds)
def test_monotone_under_real_channels(d, n_kraus, seed):
    rho = states.random_mixed(d, seed=seed)
    out = states.apply_channel(rho, states.random_real_channel(d, n_kraus, seed))
    for fn in AXIOM_MEASURES.values():
        assert fn(out) <= fn(rho) + 1e-8


@settings(max_examples=60, deadline=None)
@given(dims, seeds, st.floats(0, 1))
def test_convex(d, seed, lam):
    r1 = states.random_mixed(d, seed=seed)
    r2 = states.random_mixed(d, seed=seed + 1)
    mix = states.new_density(lam * r1.mat + (1 - lam) * r2.mat)
    for fn in AXIOM_MEASURES.values():
        assert fn(mix) <= lam * fn(r1) + (1 - lam) * fn(r2) + 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), seeds, st.floats(0, 1))
def test_m_re_additive_on_direct_sums(d1, d2, seed, p):
    r1 = states.random_mixed(d1, seed=seed)
    r2 = states.random_mixed(d2, seed=seed + 1)
    lhs = M.m_re(states.direct_sum(p, r1, r2))
    assert lhs == pytest.approx(p * M.m_re(r1) + (1 - p) * M.m_re(r2), abs=1e-9)


def test_measure_panel_row():
    row = M.measure_panel(states.plus_i().projector(), alphas=(0.5, 0.25), state_id="x").to_row()
    assert list(row) == ["state_id", "d", "purity", "m_tr", "m_rel", "m_g", "m_g_prime", "m_re",
                         "m_t_half", "m_tsallis_a0.5", "m_tsallis_a0.25", "m_gqjsd_a0.5", "m_gqjsd_a0.25"]
    assert row["m_re"] == pytest.approx(0.2928932, abs=1e-7)
