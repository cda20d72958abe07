import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import haar_unitary, random_state
from qdarwin.qstate import (
    BlochVector, DensityMatrix, ValidationError, fidelity_B, partial_trace, trace_norm,
    von_neumann_entropy,
)

seeds = st.integers(0, 2**32 - 1)


def test_entropy_examples():
    assert von_neumann_entropy(DensityMatrix(np.diag([1.0, 0.0]))) == 0.0
    assert von_neumann_entropy(DensityMatrix(np.eye(2) / 2)) == pytest.approx(1.0, abs=1e-15)
    # -0.25 log2 0.25 - 0.75 log2 0.75
    assert von_neumann_entropy(DensityMatrix(np.diag([0.25, 0.75]))) == pytest.approx(
        0.8112781244591328, abs=1e-14)


def test_zero_state_entropy_and_validation():
    z = DensityMatrix.zero((2, 3))
    assert z.is_zero and z.trace == 0.0
    assert von_neumann_entropy(z) == 0.0
    z.validate()


@pytest.mark.parametrize("bad, msg", [
    (np.array([[0.5, 0.3], [0.1, 0.5]]), "Hermitian"),
    (np.diag([0.7, 0.7]), "trace"),
    (np.diag([1.2, -0.2]), "negative"),
])
def test_validation_errors(bad, msg):
    with pytest.raises(ValidationError, match=msg):
        DensityMatrix(bad)


def test_dims_mismatch():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4, (2, 3))


def test_density_matrix_is_read_only():
    rho = DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.data[0, 0] = 1


def test_partial_trace_product_state(rng):
    sigma = random_state(3, rng)
    rho = DensityMatrix(np.kron(np.diag([1.0, 0.0]), sigma), (2, 3))
    np.testing.assert_allclose(partial_trace(rho, [0]).data, np.diag([1.0, 0.0]), atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, [1]).data, sigma, atol=1e-15)


@pytest.mark.parametrize("keep", [[0], [1]])
def test_partial_trace_bell(keep):
    bell = DensityMatrix.from_ket([1, 0, 0, 1], (2, 2))
    red = partial_trace(bell, keep)
    np.testing.assert_allclose(red.data, np.eye(2) / 2, atol=1e-15)
    assert red.dims == (2,)


def test_partial_trace_bad_index():
    with pytest.raises(ValueError):
        partial_trace(DensityMatrix(np.eye(4) / 4, (2, 2)), [2])


def test_partial_trace_keeps_original_order(rng):
    a, b, c = (random_state(d, rng) for d in (2, 3, 2))
    rho = DensityMatrix(np.kron(np.kron(a, b), c), (2, 3, 2))
    red = partial_trace(rho, [2, 0])
    assert red.dims == (2, 2)
    np.testing.assert_allclose(red.data, np.kron(a, c), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_partial_trace_composes(seed):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(random_state(2 * 3 * 2, rng), (2, 3, 2))
    stepwise = partial_trace(partial_trace(rho, [0, 1]), [0])
    direct = partial_trace(rho, [0])
    assert np.max(np.abs(stepwise.data - direct.data)) <= 1e-12
    # the compose-vs-direct example on a 2 (x) 3 state
    rho23 = DensityMatrix(random_state(6, rng), (2, 3))
    both = partial_trace(partial_trace(rho23, [0]), [])
    assert both.data.shape == (1, 1) and abs(both.data[0, 0] - 1) <= 1e-12


def test_trace_norm_examples():
    assert trace_norm(np.zeros((3, 3))) == 0.0
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0)
    bell = DensityMatrix.from_ket([1, 0, 0, 1], (2, 2)).data
    pinched = np.diag(np.diag(bell))
    assert trace_norm(bell - pinched) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_entropy_basis_invariant(seed):
    rng = np.random.default_rng(seed)
    rho = random_state(5, rng)
    u = haar_unitary(5, rng)
    h1 = von_neumann_entropy(DensityMatrix(rho))
    h2 = von_neumann_entropy(DensityMatrix(u @ rho @ u.conj().T))
    assert abs(h1 - h2) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_trace_norm_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u, v = haar_unitary(4, rng), haar_unitary(4, rng)
    assert abs(trace_norm(u @ a @ v) - trace_norm(a)) <= 1e-10


def test_fidelity_examples():
    rho = DensityMatrix(random_state(3, np.random.default_rng(7)))
    assert fidelity_B(rho, rho) == pytest.approx(1.0, abs=1e-10)
    assert fidelity_B(DensityMatrix(np.diag([1.0, 0])), DensityMatrix(np.diag([0, 1.0]))) == 0.0
    assert fidelity_B(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.diag([1.0, 0]))) == \
        pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_fidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        fidelity_B(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.eye(3) / 3))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_fidelity_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    a = DensityMatrix(random_state(4, rng, rank=2))
    b = DensityMatrix(random_state(4, rng))
    fab, fba = fidelity_B(a, b), fidelity_B(b, a)
    assert abs(fab - fba) <= 1e-10
    assert -1e-12 <= fab <= 1 + 1e-10


def test_bloch_vector_norm():
    BlochVector(0.0, 0.6, 0.8)
    with pytest.raises(ValueError):
        BlochVector(1.0, 1.0, 0.0)
    p, m = BlochVector.from_array([1, 1, 0]).projectors()
    np.testing.assert_allclose(p + m, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(p @ p, p, atol=1e-15)
