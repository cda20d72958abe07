import numpy as np
import pytest

from qdarwin.model import (
    EnvInit, ModelParams, build_hamiltonians, environment_state, goe_sample, initial_state,
)


def test_defaults():
    p = ModelParams()
    assert (p.delta_E, p.delta_eps, p.lam, p.beta, p.N, p.seed) == (1.0, 1.0, 0.2, 10.0, 10, 1)
    assert p.env_init is EnvInit.SUPERPOSITION


@pytest.mark.parametrize("kw", [{"N": 1}, {"delta_E": 0}, {"beta": -1}, {"lam": -0.1}, {"N": 2.5}])
def test_param_invariants(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_goe_symmetric_and_reproducible():
    a = goe_sample(10, 99)
    assert np.array_equal(a, a.T)
    assert np.array_equal(a, goe_sample(10, 99))
    assert not np.array_equal(a, goe_sample(10, 100))
    assert not np.array_equal(a, goe_sample(10, 99, index=1))


def test_goe_entry_variances():
    samples = np.stack([goe_sample(10, 3, i) for i in range(10_000)])
    off = samples[:, np.triu_indices(10, 1)[0], np.triu_indices(10, 1)[1]]
    diag = samples[:, np.arange(10), np.arange(10)]
    assert off.var() == pytest.approx(1 / 80, rel=0.05)
    assert diag.var() == pytest.approx(2 / 80, rel=0.05)


def test_goe_semicircle_radius():
    w = np.linalg.eigvalsh(goe_sample(200, 1))
    radius = max(abs(w[0]), abs(w[-1]))
    assert radius == pytest.approx(1 / np.sqrt(2), rel=0.10)


def test_levels_and_structure():
    H = build_hamiltonians(ModelParams(N=3))
    np.testing.assert_allclose(H.levels, [-0.5, 0.0, 0.5])
    np.testing.assert_allclose(np.diag(H.H_E).real, H.levels)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.H_S), [-0.5, 0.5])
    recon = np.kron(H.H_S, np.eye(3)) + np.kron(np.eye(2), H.H_E) + H.H_SE
    assert np.max(np.abs(recon - H.H_total)) <= 1e-12
    for m in (H.H_S, H.H_E, H.H_SE, H.H_total):
        assert np.array_equal(m, m.conj().T)


def test_excited_level_is_one():
    H = build_hamiltonians(ModelParams())
    assert H.H_S[1, 1].real == 0.5 and H.H_S[0, 0].real == -0.5


def test_spectrum_cached():
    H = build_hamiltonians(ModelParams())
    assert H.spectrum is H.spectrum


def test_decoupled_limit_commutes():
    H = build_hamiltonians(ModelParams(lam=0.0))
    hs = np.kron(H.H_S, np.eye(10))
    assert np.max(np.abs(hs @ H.H_total - H.H_total @ hs)) == 0.0


def test_bad_coupling_matrix():
    p = ModelParams(N=3)
    with pytest.raises(ValueError, match="symmetric"):
        build_hamiltonians(p, np.arange(9.0).reshape(3, 3))
    with pytest.raises(ValueError):
        build_hamiltonians(p, np.eye(4))


def test_initial_states():
    rho = initial_state(ModelParams(N=2))
    assert rho.dims == (2, 2)
    np.testing.assert_allclose(environment_state(ModelParams(N=2)), np.full((2, 2), 0.5))
    np.testing.assert_allclose(environment_state(ModelParams(env_init="thermal", beta=0.0)),
                               np.eye(10) / 10, atol=1e-15)


def test_thermal_ground_population():
    p = ModelParams(env_init="thermal")
    levels = build_hamiltonians(p).levels
    expected = np.exp(5.0) / np.sum(np.exp(-10.0 * levels))
    assert environment_state(p)[0, 0].real == pytest.approx(expected, rel=1e-13)


def test_purity():
    assert initial_state(ModelParams()).purity() == pytest.approx(1.0, abs=1e-12)
    p = ModelParams(env_init="thermal")
    rho_e = environment_state(p)
    assert np.trace(rho_e @ rho_e).real < 1.0
    assert initial_state(p).purity() == pytest.approx(np.trace(rho_e @ rho_e).real, abs=1e-12)


def test_thermal_populations_decrease():
    pops = np.diag(environment_state(ModelParams(env_init="thermal", beta=2.0))).real
    assert np.all(np.diff(pops) < 0)
