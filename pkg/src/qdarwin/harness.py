"""Experiment orchestration and figure-ready output.

Every experiment reduces to per-fragment tasks that are pure functions of
(joint state, fragment, search seed). Tasks can run on a process pool;
seeds are derived from the task identity and means use ``math.fsum``, so
the numbers do not depend on the worker count or completion order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__, kernels
from .config import Experiment, ExperimentConfig, OutputFormat
from .evolve import Propagator, system_observables
from .fragment import FragmentSelection, TraceMethod, cardinality, enumerate_fragments, reduce
from .infometrics import SystemSource, information_report
from .model import ModelParams, build_hamiltonians, goe_sample, initial_state
from .qstate import DensityMatrix, partial_trace, von_neumann_entropy
from .sbs import eta_bound
from .search import SearchBudget

logger = logging.getLogger(__name__)

COLUMNS = ("experiment", "method", "env_init", "N", "t", "f", "k", "n_fragments",
           "value_name", "value")
METHOD_CODE = {TraceMethod.PEREZ: 1, TraceMethod.STAIRCASE: 2}
CHUNK = 64

StateHook = Callable[[ModelParams, float], DensityMatrix]


@dataclass(frozen=True)
class SweepRecord:
    experiment: str
    method: str
    env_init: str
    N: int
    t: float
    f: float | None
    k: int | None
    n_fragments: int | None
    value_name: str
    value: float

    def as_row(self) -> tuple:
        return (self.experiment, self.method, self.env_init, self.N, _fmt(self.t),
                "" if self.f is None else _fmt(self.f), "" if self.k is None else self.k,
                "" if self.n_fragments is None else self.n_fragments,
                self.value_name, _fmt(self.value))

    def as_json(self) -> dict:
        value = None if math.isnan(self.value) else float(self.value)
        return {"experiment": self.experiment, "method": self.method, "env_init": self.env_init,
                "N": self.N, "t": float(self.t), "f": self.f, "k": self.k,
                "n_fragments": self.n_fragments, "value_name": self.value_name, "value": value}


def _fmt(x: float) -> str:
    return repr(float(x))


def validation_tolerance(t: float) -> float:
    return 1e-8 if t >= 500 else 1e-9


def joint_states(params: ModelParams, times: Sequence[float], realization: int = 0,
                 hook: StateHook | None = None) -> list[DensityMatrix]:
    """Validated rho_SE(t) for one GOE realization."""
    if hook is not None:
        return [hook(params, t) for t in times]
    H = build_hamiltonians(params, goe_sample(params.N, params.seed, realization))
    prop = Propagator(H)
    states = prop.evolve(initial_state(params), times)
    out = []
    for rho, t in zip(states, times):
        out.append(DensityMatrix(rho.data, rho.dims, tol=validation_tolerance(t)))
    return out


def search_seed(seed: int, realization: int, method: TraceMethod, t: float,
                frag: FragmentSelection) -> tuple[int, ...]:
    mask = sum(1 << m for m in frag.members)
    return (seed, realization, METHOD_CODE[method], int(round(t * 1_000_000)), frag.size, mask)


# --- per-fragment work -------------------------------------------------------

@dataclass(frozen=True)
class _Task:
    mode: str
    backend: str
    rho: np.ndarray
    N: int
    method: TraceMethod
    members: tuple[tuple[int, ...], ...]
    rho_s: np.ndarray | None
    budget: SearchBudget
    seeds: tuple[tuple[int, ...], ...]


def _run_task(task: _Task) -> list[tuple]:
    if kernels.backend_name() != task.backend:
        kernels.use_backend(task.backend)
    rho_se = DensityMatrix(task.rho, (2, task.N), check=False)
    rho_s = None if task.rho_s is None else DensityMatrix(task.rho_s, check=False)
    out = []
    for members, seed in zip(task.members, task.seeds):
        frag = FragmentSelection(task.method, members, task.N)
        sf = reduce(rho_se, frag)
        if sf.is_zero:
            out.append((True,))
            continue
        if task.mode == "sbs":
            rep = eta_bound(sf, task.budget, seed)
            out.append((False, rep.eta, rep.nonsep_term, rep.disting_term,
                         *rep.best_axis.as_array(), *rep.p, rep.degenerate))
        else:
            rep = information_report(sf, rho_s, search=task.budget if task.mode == "info" else None,
                                     seed=seed)
            out.append((False, rep.I, rep.chi, rep.discord, rep.H_S, rep.H_F, rep.H_SF))
    return out


def _execute(tasks: list[_Task], jobs: int) -> list[list[tuple]]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, tasks))


def _mean(xs: Iterable[float]) -> float:
    xs = list(xs)
    return math.fsum(xs) / len(xs) if xs else 0.0


# --- experiments ---------------------------------------------------------------

def _sizes(mode: str, method: TraceMethod, N: int) -> range:
    card = cardinality(method, N)
    return range(1, card + 1) if mode == "sbs" else range(0, card + 1)


def _fragment_sweep(cfg: ExperimentConfig, mode: str,
                    hook: StateHook | None) -> dict[tuple, dict[str, float]]:
    """Aggregated values keyed by (N, env, method, t, k, n_fragments)."""
    seed = cfg.seed
    backend = kernels.backend_name()
    source_true = cfg.system_source is SystemSource.TRUE
    per_real: list[dict[tuple, dict[str, float]]] = []
    for m in range(cfg.ensemble):
        tasks: list[_Task] = []
        meta: list[tuple] = []
        refs: dict[tuple, float] = {}
        for N in cfg.Ns:
            frags = {meth: {k: enumerate_fragments(meth, N, k, seed=seed) for k in _sizes(mode, meth, N)}
                     for meth in cfg.trace_methods}
            for env in cfg.env_inits:
                params = cfg.params_for(N, env)
                for t, rho in zip(cfg.times, joint_states(params, cfg.times, m, hook)):
                    rho_s = partial_trace(rho, [0])
                    refs[(N, env, t)] = von_neumann_entropy(rho_s)
                    for meth in cfg.trace_methods:
                        for k, sel in frags[meth].items():
                            for lo in range(0, len(sel), CHUNK):
                                chunk = sel[lo:lo + CHUNK]
                                tasks.append(_Task(
                                    mode, backend, np.asarray(rho.data), N, meth,
                                    tuple(f.members for f in chunk),
                                    np.asarray(rho_s.data) if source_true else None,
                                    cfg.search,
                                    tuple(search_seed(seed, m, meth, t, f) for f in chunk)))
                                meta.append((N, env, meth, t, k, len(sel)))
        results = _execute(tasks, cfg.jobs)
        grouped: dict[tuple, list[tuple]] = defaultdict(list)
        for key, res in zip(meta, results):
            grouped[key].extend(res)
        per_real.append({key: _aggregate(mode, res, refs[(key[0], key[1], key[3])], key)
                         for key, res in grouped.items()})
    return _ensemble_mean(per_real)


def _aggregate(mode: str, results: list[tuple], h_s: float, key: tuple) -> dict[str, float]:
    live = [r for r in results if not r[0]]
    n_zero = len(results) - len(live)
    if n_zero:
        logger.info("%s k=%d t=%g: %d zero-state fragment(s) excluded from aggregates",
                    key[2].value, key[4], key[3], n_zero)
    if mode == "sbs":
        if not live:
            return {"eta_min": 0.0, "nonsep_term": 0.0, "disting_term": 0.0, "degenerate": 1.0,
                    "n_zero": float(n_zero)}
        best = min(live, key=lambda r: r[1])
        return {"eta_min": best[1], "nonsep_term": best[2], "disting_term": best[3],
                "axis_x": best[4], "axis_y": best[5], "axis_z": best[6],
                "p0": best[7], "p1": best[8], "degenerate": float(best[9]),
                "n_zero": float(n_zero)}
    I = _mean(r[1] for r in live)
    out = {"I_mean": I, "H_S": h_s, "2H_S": 2 * h_s}
    if mode == "info":
        chi = _mean(r[2] for r in live)
        D = _mean(r[3] for r in live)
        out.update({"chi_mean": chi, "D_mean": D, "additivity_residual": chi + D - I})
    else:
        out["I_norm"] = I / h_s if h_s > 0 else float("nan")
    out["H_S_used_mean"] = _mean(r[4] for r in live)
    out["n_zero"] = float(n_zero)
    return out


def _ensemble_mean(per_real: list[dict[tuple, dict[str, float]]]) -> dict[tuple, dict[str, float]]:
    if len(per_real) == 1:
        return per_real[0]
    out = {}
    for key in per_real[0]:
        names = per_real[0][key].keys()
        out[key] = {name: math.fsum(r[key].get(name, 0.0) for r in per_real) / len(per_real)
                    for name in names}
    return out


def _sweep_records(cfg: ExperimentConfig, agg: dict[tuple, dict[str, float]]) -> list[SweepRecord]:
    recs = []
    for (N, env, meth, t, k, n), values in agg.items():
        f = k / cardinality(meth, N)
        for name, value in values.items():
            recs.append(SweepRecord(cfg.experiment.value, meth.value, env.value, N, t, f, k, n,
                                    name, value))
    return recs


def run_evolution(cfg: ExperimentConfig, hook: StateHook | None = None) -> list[SweepRecord]:
    """Per-N, per-environment time series of H(S), <1|rho_S|1>, |<0|rho_S|1>|."""
    recs = []
    for N in cfg.Ns:
        for env in cfg.env_inits:
            params = cfg.params_for(N, env)
            series = []
            for m in range(cfg.ensemble):
                states = joint_states(params, cfg.times, m, hook)
                series.append([system_observables(rho, t) for rho, t in zip(states, cfg.times)])
            for i, t in enumerate(cfg.times):
                obs = [s[i] for s in series]
                for name, attr in (("H_S", "entropy"), ("excited", "excited"),
                                   ("coherence", "coherence")):
                    value = math.fsum(getattr(o, attr) for o in obs) / len(obs)
                    recs.append(SweepRecord(cfg.experiment.value, "none", env.value, N, t,
                                            None, None, None, name, value))
    return recs


def run_mi_sweep(cfg: ExperimentConfig, hook: StateHook | None = None) -> list[SweepRecord]:
    return _sweep_records(cfg, _fragment_sweep(cfg, "mi", hook))


def run_info_decomposition(cfg: ExperimentConfig, hook: StateHook | None = None) -> list[SweepRecord]:
    return _sweep_records(cfg, _fragment_sweep(cfg, "info", hook))


def run_sbs_sweep(cfg: ExperimentConfig, hook: StateHook | None = None) -> list[SweepRecord]:
    return _sweep_records(cfg, _fragment_sweep(cfg, "sbs", hook))


RUNNERS = {
    Experiment.EVOLUTION: run_evolution,
    Experiment.MI_SWEEP: run_mi_sweep,
    Experiment.INFO_DECOMPOSITION: run_info_decomposition,
    Experiment.SBS_SWEEP: run_sbs_sweep,
}


def run(cfg: ExperimentConfig, hook: StateHook | None = None) -> list[SweepRecord]:
    return RUNNERS[cfg.experiment](cfg, hook)


# --- serialisation -------------------------------------------------------------

def metadata(cfg: ExperimentConfig) -> dict:
    meta = {"package": f"qdarwin {__version__}", "kernels": kernels.backend_name(),
            "time_units": "1/delta_E", "config": cfg.to_metadata()}
    if cfg.experiment is Experiment.EVOLUTION:
        ts = cfg.times
        meta["time_grid"] = f"{len(ts)} points from {ts[0]:g} to {ts[-1]:g}"
    return meta


def render(records: list[SweepRecord], cfg: ExperimentConfig) -> str:
    meta = metadata(cfg)
    if cfg.fmt is OutputFormat.JSON:
        doc = {"metadata": meta,
               "records": [r.as_json() for r in records]}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow(r.as_row())
    return buf.getvalue()


def write_output(records: list[SweepRecord], cfg: ExperimentConfig,
                 path: str | Path | None = None) -> str:
    text = render(records, cfg)
    path = path if path is not None else cfg.output
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_records(path: str | Path) -> tuple[dict, list[dict]]:
    """Load an output file back as (metadata, records with numeric fields parsed)."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        meta, rows = doc["metadata"], doc["records"]
    else:
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                meta[key] = json.loads(value)
            else:
                body.append(line)
        rows = list(csv.DictReader(body))
    for r in rows:
        for col, typ in (("t", float), ("f", float), ("value", float),
                         ("N", int), ("k", int), ("n_fragments", int)):
            r[col] = None if r[col] in ("", None) else typ(r[col])
    return meta, rows
