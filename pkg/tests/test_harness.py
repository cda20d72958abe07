from math import comb

import numpy as np
import pytest

from conftest import SEED
from qdarwin.config import Experiment, load_config
from qdarwin.harness import read_records, run, write_output
from qdarwin.qstate import DensityMatrix

# seed-1 regression values at t = 500 (N = 10)
H_S_PURE_T500 = 0.977488441854045
H_S_THERMAL_T500 = 0.7572696478459782
THERMAL_I_FULL = 0.950733


def _evolution(**flags):
    cfg = load_config(Experiment.EVOLUTION, flags={"seed": str(SEED), **flags})
    out = {}
    for r in run(cfg):
        out.setdefault((r.N, r.env_init, r.value_name), []).append((r.t, r.value))
    return {k: np.array(v) for k, v in out.items()}


@pytest.fixture(scope="module")
def evo10():
    return _evolution(env_init="both")


def test_evolution_initial_row(evo10):
    for env in ("superposition", "thermal"):
        assert evo10[(10, env, "H_S")][0, 1] == pytest.approx(0.0, abs=1e-12)
        assert evo10[(10, env, "excited")][0, 1] == pytest.approx(0.5, abs=1e-14)
        assert evo10[(10, env, "coherence")][0, 1] == pytest.approx(0.5, abs=1e-14)


def test_evolution_regression_values(evo10):
    assert evo10[(10, "superposition", "H_S")][-1, 1] == pytest.approx(H_S_PURE_T500, abs=1e-9)
    assert evo10[(10, "thermal", "H_S")][-1, 1] == pytest.approx(H_S_THERMAL_T500, abs=1e-9)


def test_thermal_excited_population_decays_faster(evo10):
    thermal = evo10[(10, "thermal", "excited")][-1, 1]
    pure = evo10[(10, "superposition", "excited")][-1, 1]
    assert thermal < pure
    assert thermal == pytest.approx(0.2290549, abs=1e-6)
    assert pure == pytest.approx(0.5675524, abs=1e-6)


@pytest.mark.slow
def test_large_environment_monotone_rise():
    h = _evolution(N="200")[(200, "superposition", "H_S")]
    late = h[h[:, 0] >= 250, 1]
    assert late[-1] >= 0.9 * late.max()


def test_mi_sweep_examples(mi_sweep):
    for t in (300.0, 400.0, 500.0):
        row = mi_sweep[("perez", "superposition", t, 1)]
        assert row["f"] == pytest.approx(0.1)
        assert abs(row["I_norm"] - 1) < 1e-9
        full = mi_sweep[("staircase", "superposition", t, 9)]
        assert abs(full["I_mean"] - full["2H_S"]) < 1e-8
    thermal = mi_sweep[("perez", "thermal", 500.0, 10)]
    assert thermal["2H_S"] - thermal["I_mean"] > 0.1
    assert thermal["I_mean"] == pytest.approx(THERMAL_I_FULL, abs=1e-6)
    assert thermal["H_S"] == pytest.approx(H_S_THERMAL_T500, abs=1e-9)


def test_fragment_counts(mi_sweep):
    for (method, env, t, k), row in mi_sweep.items():
        card = 10 if method == "perez" else 9
        assert row["n_fragments"] == comb(card, k)
        assert row["f"] == pytest.approx(k / card)


def test_info_rows_are_additive(info_sweep):
    for key, row in info_sweep.items():
        assert abs(row["additivity_residual"]) <= 1e-10
        assert abs(row["chi_mean"] + row["D_mean"] - row["I_mean"]) <= 1e-10
    for method in ("perez", "staircase"):
        zero = info_sweep[(method, "superposition", 500.0, 0)]
        for name in ("I_mean", "chi_mean", "D_mean"):
            assert abs(zero[name]) < 1e-12


def test_sbs_examples(sbs_sweep):
    smallest = sbs_sweep[("perez", "superposition", 500.0, 1)]
    assert smallest["eta_min"] <= 1e-3 and smallest["degenerate"] == 1.0
    others = [row["eta_min"] for (m, _, _, k), row in sbs_sweep.items()
              if not (m == "perez" and k == 1)]
    assert min(others) > 0.05
    assert min(others) == pytest.approx(0.1376, abs=1e-3)
    for row in sbs_sweep.values():
        assert row["eta_min"] == pytest.approx(row["nonsep_term"] + row["disting_term"], abs=1e-15)
        assert row["p0"] + row["p1"] == pytest.approx(1.0, abs=1e-10)


def _sbs_hook(params, t):
    """1/2 |0><0| (x) |0><0| + 1/2 |1><1| (x) |1><1| on the joint (2, N) space."""
    N = params.N
    rho = np.zeros((2 * N, 2 * N))
    rho[0, 0] = 0.5
    rho[N + 1, N + 1] = 0.5
    return DensityMatrix(rho, (2, N))


def test_sbs_hook_injection():
    cfg = load_config(Experiment.SBS_SWEEP, flags={"N": "4", "search_samples": "100"})
    recs = run(cfg, hook=_sbs_hook)
    etas = [r.value for r in recs if r.value_name == "eta_min"]
    assert len(etas) == 4 + 3
    assert max(etas) <= 1e-6


def test_zero_states_are_excluded_and_counted():
    cfg = load_config(Experiment.MI_SWEEP, flags={"N": "4", "trace": "perez"})
    recs = {(r.k, r.value_name): r.value for r in run(cfg, hook=_sbs_hook)}
    # size-1 fragments {2} and {3} carry no weight
    assert recs[(1, "n_zero")] == 2.0
    assert recs[(1, "I_mean")] == pytest.approx(1.0, abs=1e-12)


def test_output_roundtrip(tmp_path):
    cfg = load_config(Experiment.MI_SWEEP, flags={"N": "3", "times": "5,6", "format": "csv"})
    recs = run(cfg)
    path = tmp_path / "mi.csv"
    write_output(recs, cfg, path)
    meta, rows = read_records(path)
    assert meta["config"]["seed"] == 1 and meta["config"]["times"] == [5.0, 6.0]
    assert meta["config"]["params"]["lam"] == 0.2
    assert len(rows) == len(recs)
    assert rows[0]["value"] == recs[0].value
    cfg_json = load_config(Experiment.MI_SWEEP, flags={"N": "3", "times": "5,6", "format": "json"})
    write_output(recs, cfg_json, tmp_path / "mi.json")
    meta_j, rows_j = read_records(tmp_path / "mi.json")
    assert meta_j == meta
    assert [r["value"] for r in rows_j] == [r["value"] for r in rows]


def test_ensemble_average():
    base = {"N": "4", "times": "50", "trace": "staircase"}
    one = run(load_config(Experiment.MI_SWEEP, flags=base))
    two = run(load_config(Experiment.MI_SWEEP, flags={**base, "ensemble": "2"}))
    a = {(r.k, r.value_name): r.value for r in one}
    b = {(r.k, r.value_name): r.value for r in two}
    assert a.keys() == b.keys()
    assert a[(2, "I_mean")] != b[(2, "I_mean")]
    # the full environment of a pure state still gives 2H(S) per realization, hence on average
    assert b[(3, "I_mean")] == pytest.approx(b[(3, "2H_S")], abs=1e-8)


def test_fragment_derived_source():
    cfg = load_config(Experiment.MI_SWEEP, flags={"N": "5", "times": "100", "trace": "perez",
                                                  "system_source": "fragment"})
    recs = {(r.k, r.value_name): r.value for r in run(cfg)}
    for k in range(1, 6):
        assert recs[(k, "I_mean")] == pytest.approx(2 * recs[(k, "H_S_used_mean")], abs=1e-9)
