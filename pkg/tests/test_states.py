import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imkit import states
from imkit.errors import (
    BadRank,
    BadTrace,
    BlochOutOfBall,
    DimensionMismatch,
    IncompleteKraus,
    NotHermitian,
    NotNormalized,
    NotOrthonormal,
    NotPSD,
    WrongDimension,
)
from imkit.states import BlochVector, DensityMatrix, PureState

seeds = st.integers(0, 2**32 - 1)


def test_density_validation_errors():
    with pytest.raises(NotHermitian):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(BadTrace):
        DensityMatrix(np.eye(2))
    with pytest.raises(NotPSD):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_density_clamps_tiny_negative_eigenvalue():
    rho = DensityMatrix(np.diag([1 + 1e-11, -1e-11]))
    w = np.linalg.eigvalsh(rho.mat)
    assert w.min() >= 0
    assert np.trace(rho.mat).real == pytest.approx(1.0, abs=1e-15)


def test_density_is_read_only():
    rho = states.maximally_mixed(2)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1


def test_pure_state_norm():
    with pytest.raises(NotNormalized):
        PureState(np.array([1.0, 1.0]))
    p = states.plus_i().projector()
    assert np.allclose(p.mat, [[0.5, -0.5j], [0.5j, 0.5]])


def test_real_part_and_conjugate():
    rho = states.plus_i().projector()
    assert np.allclose(states.real_part(rho).mat, np.eye(2) / 2)
    assert np.allclose(states.conjugate(rho).mat, rho.mat.conj())
    assert states.is_real(states.real_part(rho))
    assert not states.is_real(rho)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), seeds)
def test_real_part_is_a_real_state(d, seed):
    re = states.real_part(states.random_mixed(d, seed=seed))
    assert states.is_real(re)
    DensityMatrix(re.mat)


def test_bloch_round_trip_and_ball():
    r = BlochVector(0.3, 0.5, 0.2)
    back = states.to_bloch(states.from_bloch(r))
    assert np.allclose(back.as_array(), r.as_array(), atol=1e-15)
    with pytest.raises(BlochOutOfBall):
        BlochVector(1.0, 0.5, 0.0)
    with pytest.raises(WrongDimension):
        states.to_bloch(states.maximally_mixed(3))


def test_plus_i_bloch_vector():
    assert np.allclose(states.to_bloch(states.plus_i().projector()).as_array(), [0, 1, 0], atol=1e-15)


def test_plus_i_mixture_endpoints():
    assert np.allclose(states.plus_i_mixture(0).mat, np.eye(2) / 2)
    assert np.allclose(states.plus_i_mixture(1).mat, states.plus_i().projector().mat)


def mub_overlaps(bases):
    d = bases[0].dim
    for i, a in enumerate(bases):
        for b in bases[i + 1:]:
            assert np.allclose(np.abs(a.matrix.conj().T @ b.matrix) ** 2, 1 / d, atol=1e-12)


def test_qubit_mubs_are_unbiased():
    mub_overlaps(states.qubit_mubs())


def test_qutrit_mubs_are_unbiased():
    bases = states.qutrit_mubs()
    assert [b.label for b in bases] == ["Z1", "Z2", "Z3", "Z4"]
    mub_overlaps(bases)


def test_example_y_bases_orthonormal():
    for b in states.example_y_bases():
        assert np.allclose(b.matrix.conj().T @ b.matrix, np.eye(3), atol=1e-12)


def test_basis_rejects_non_orthonormal():
    with pytest.raises(NotOrthonormal):
        states.OrthonormalBasis(np.array([[1, 1], [0, 1]], dtype=complex))


def test_change_basis_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        states.change_basis(states.maximally_mixed(3), states.qubit_mubs()[1])


def test_random_generators_are_seeded():
    a = states.random_mixed(3, seed=7).mat
    b = states.random_mixed(3, seed=7).mat
    assert np.array_equal(a, b)
    assert np.array_equal(states.random_pure(4, 11).amp, states.random_pure(4, 11).amp)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), seeds)
def test_random_mixed_rank(d, seed):
    rank = 1 + seed % d
    rho = states.random_mixed(d, rank, seed)
    w = np.linalg.eigvalsh(rho.mat)
    assert np.sum(w > 1e-10) == rank
    assert abs(np.trace(rho.mat) - 1) < 1e-12


def test_random_mixed_bad_rank():
    with pytest.raises(BadRank):
        states.random_mixed(3, 4)


def test_random_bloch_inside_ball():
    for s in range(200):
        assert states.random_bloch(s).norm2 <= 1 + 1e-12
    assert states.random_bloch(3, radius=1.0).norm2 == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), seeds)
def test_real_channel_preserves_states_and_realness(d, n_kraus, seed):
    ch = states.random_real_channel(d, n_kraus, seed)
    out = states.apply_channel(states.random_mixed(d, seed=seed), ch)
    DensityMatrix(out.mat)
    real_out = states.apply_channel(states.random_real_state(d, seed=seed), ch)
    assert states.is_real(real_out)


def test_incomplete_kraus():
    with pytest.raises(IncompleteKraus):
        states.RealOperation((np.eye(2) * 0.5,))


def test_dephase_branches():
    rho = states.random_mixed(3, seed=5)
    proj = states.random_real_projectors(3, seed=6)
    out = states.dephase(rho, proj)
    assert sum(out.probabilities) == pytest.approx(1.0, abs=1e-12)
    mix = sum(p * s.mat for p, s in zip(out.probabilities, out.post_states))
    assert np.allclose(mix, out.state.mat, atol=1e-12)


def test_direct_sum():
    rho = states.direct_sum(0.25, states.plus_i().projector(), states.maximally_mixed(3))
    assert rho.dim == 5
    assert np.trace(rho.mat).real == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), seeds)
def test_real_compress_confines_support(d, seed):
    psi = states.random_pure(d, seed)
    o = states.real_compress(psi)
    assert np.allclose(o @ o.T, np.eye(d), atol=1e-12)
    assert np.allclose((o @ psi.amp)[2:], 0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 5), seeds)
def test_lifted_bases_are_orthonormal(d, seed):
    o = states.real_compress(states.random_pure(d, seed))
    ys = states.lift_qubit_mubs(o)
    for y in ys:
        assert np.allclose(y.matrix.conj().T @ y.matrix, np.eye(d), atol=1e-12)
