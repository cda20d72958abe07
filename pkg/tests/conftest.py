import os
import sys
from collections import OrderedDict
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qdarwin.config import Experiment, load_config  # noqa: E402
from qdarwin.harness import joint_states, run  # noqa: E402
from qdarwin.model import EnvInit, ModelParams  # noqa: E402

SEED = 1
SNAPSHOTS = (300.0, 400.0, 500.0)

# criterion id -> [title, [(test name, outcome)]]
_CRITERIA: "OrderedDict[str, list]" = OrderedDict()
_criterion_of: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion this test checks")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            cid, title = mark.args
            _CRITERIA.setdefault(cid, [title, []])
            _criterion_of[item.nodeid] = cid


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    cid = _criterion_of.get(report.nodeid)
    if cid is None:
        return
    outcome = "xfail" if hasattr(report, "wasxfail") else report.outcome
    _CRITERIA[cid][1].append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not any(v[1] for v in _CRITERIA.values()):
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, (title, outcomes) in _CRITERIA.items():
        if not outcomes:
            continue
        if all(o == "passed" for _, o in outcomes):
            status = "PASS"
        elif any(o == "xfail" for _, o in outcomes):
            status = "FAIL (unattainable as stated, see the decisions ledger)"
        else:
            status = "FAIL"
        tr.write_line(f"criterion {cid:<3} {status:<6}  {title}")


@pytest.fixture(scope="session")
def default_params():
    return ModelParams(seed=SEED)


@pytest.fixture(scope="session")
def pure_states(default_params):
    """rho_SE(t) for N = 10, superposition environment, at the figure snapshot times."""
    return dict(zip(SNAPSHOTS, joint_states(default_params, SNAPSHOTS)))


@pytest.fixture(scope="session")
def thermal_states(default_params):
    params = ModelParams(seed=SEED, env_init=EnvInit.THERMAL)
    return dict(zip(SNAPSHOTS, joint_states(params, SNAPSHOTS)))


def _jobs() -> int:
    return max(1, min(4, os.cpu_count() or 1))


def _table(records):
    """{(method, env, t, k): {value_name: value}} plus f per key."""
    out: dict = {}
    for r in records:
        d = out.setdefault((r.method, r.env_init, r.t, r.k), {"f": r.f, "n_fragments": r.n_fragments})
        d[r.value_name] = r.value
    return out


@pytest.fixture(scope="session")
def mi_sweep():
    cfg = load_config(Experiment.MI_SWEEP, flags={"seed": str(SEED), "env_init": "both",
                                                    "jobs": str(_jobs())})
    return _table(run(cfg))


@pytest.fixture(scope="session")
def info_sweep():
    cfg = load_config(Experiment.INFO_DECOMPOSITION, flags={"seed": str(SEED), "jobs": str(_jobs())})
    return _table(run(cfg))


@pytest.fixture(scope="session")
def sbs_sweep():
    cfg = load_config(Experiment.SBS_SWEEP, flags={"seed": str(SEED), "jobs": str(_jobs())})
    return _table(run(cfg))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
