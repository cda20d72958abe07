"""Experiment configuration: flat ``key = value`` files plus command-line overrides."""

from __future__ import annotations

import enum
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .fragment import TraceMethod
from .infometrics import SystemSource
from .model import EnvInit, ModelParams
from .search import SearchBudget

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Bad configuration input; the message carries the file line or flag."""


class Experiment(str, enum.Enum):
    EVOLUTION = "evolve"
    MI_SWEEP = "mi-sweep"
    INFO_DECOMPOSITION = "info-decomp"
    SBS_SWEEP = "sbs-sweep"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


DEFAULT_TIMES = {
    Experiment.EVOLUTION: tuple(float(t) for t in range(0, 501)),
    Experiment.MI_SWEEP: (300.0, 400.0, 500.0),
    Experiment.INFO_DECOMPOSITION: (500.0,),
    Experiment.SBS_SWEEP: (500.0,),
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: Experiment
    params: ModelParams = field(default_factory=ModelParams)
    Ns: tuple[int, ...] = (10,)
    env_inits: tuple[EnvInit, ...] = (EnvInit.SUPERPOSITION,)
    trace_methods: tuple[TraceMethod, ...] = (TraceMethod.PEREZ, TraceMethod.STAIRCASE)
    times: tuple[float, ...] = ()
    system_source: SystemSource = SystemSource.TRUE
    search: SearchBudget = field(default_factory=SearchBudget)
    output: Path | None = None
    fmt: OutputFormat = OutputFormat.CSV
    jobs: int = 1
    ensemble: int = 1

    def __post_init__(self):
        if not self.times:
            object.__setattr__(self, "times", DEFAULT_TIMES[self.experiment])
        if any(t < 0 for t in self.times):
            raise ConfigError("times must be non-negative")
        if not self.trace_methods:
            raise ConfigError("at least one trace method is required")
        if not self.env_inits:
            raise ConfigError("at least one environment initial state is required")
        if any(n < 2 for n in self.Ns) or not self.Ns:
            raise ConfigError(f"N must be >= 2, got {list(self.Ns)}")
        if self.jobs < 1 or self.ensemble < 1:
            raise ConfigError("jobs and ensemble must be >= 1")

    @property
    def seed(self) -> int:
        return self.params.seed

    def params_for(self, N: int, env_init: EnvInit) -> ModelParams:
        return replace(self.params, N=N, env_init=env_init)

    def to_metadata(self) -> dict[str, Any]:
        p = asdict(self.params)
        p.pop("N")
        p.pop("env_init")
        return {
            "experiment": self.experiment.value,
            "params": {k: (v.value if isinstance(v, enum.Enum) else v) for k, v in p.items()},
            "N": list(self.Ns),
            "env_init": [e.value for e in self.env_inits],
            "trace": [m.value for m in self.trace_methods],
            "times": [float(t) for t in self.times],
            "system_source": self.system_source.value,
            "search": asdict(self.search),
            "ensemble": self.ensemble,
            "seed": self.seed,
        }


def _int(s: str) -> int:
    return int(s, 0)


def _float(s: str) -> float:
    v = float(s)
    if not np.isfinite(v):
        raise ValueError(f"{s!r} is not finite")
    return v


def _int_list(s: str) -> tuple[int, ...]:
    return tuple(_int(x) for x in s.split(",") if x.strip())


def parse_times(s: str) -> tuple[float, ...]:
    """Comma list of times; an item ``a:b:step`` expands to an inclusive grid."""
    out: list[float] = []
    for item in s.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            a, b, step = (float(x) for x in item.split(":"))
            if step <= 0:
                raise ValueError("time step must be positive")
            n = int(np.floor((b - a) / step + 1e-9)) + 1
            out.extend(float(a + i * step) for i in range(n))
        else:
            out.append(_float(item))
    if not out:
        raise ValueError("empty time list")
    return tuple(out)


def _env_inits(s: str) -> tuple[EnvInit, ...]:
    s = s.strip().lower()
    if s == "both":
        return (EnvInit.SUPERPOSITION, EnvInit.THERMAL)
    return tuple(EnvInit(x.strip()) for x in s.split(","))


def _traces(s: str) -> tuple[TraceMethod, ...]:
    s = s.strip().lower()
    if s == "both":
        return (TraceMethod.PEREZ, TraceMethod.STAIRCASE)
    return tuple(TraceMethod(x.strip()) for x in s.split(","))


# config-file keys; also the long flag names, with "-" for "_"
KEYS: dict[str, Any] = {
    "seed": _int,
    "N": _int_list,
    "delta_E": _float,
    "delta_eps": _float,
    "lambda": _float,
    "beta": _float,
    "env_init": _env_inits,
    "trace": _traces,
    "times": parse_times,
    "system_source": SystemSource,
    "search_samples": _int,
    "refine_iters": _int,
    "output": Path,
    "format": OutputFormat,
    "jobs": _int,
    "ensemble": _int,
}


def read_config_file(path: str | Path) -> dict[str, tuple[Any, str]]:
    """Parse a flat ``key = value`` file; values keep their line context."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    out: dict[str, tuple[Any, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{path}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        try:
            out[key] = (KEYS[key](value), where)
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from None
    return out


def load_config(experiment: Experiment | str, path: str | Path | None = None,
                flags: Mapping[str, str] | None = None) -> ExperimentConfig:
    """Resolve file values, then flag values (flags win), then defaults."""
    experiment = Experiment(experiment)
    values: dict[str, tuple[Any, str]] = read_config_file(path) if path is not None else {}
    for key, raw in (flags or {}).items():
        if raw is None:
            continue
        key = key.replace("-", "_")
        where = f"--{key.replace('_', '-')}"
        if key not in KEYS:
            raise ConfigError(f"{where}: unknown option")
        try:
            parsed = KEYS[key](str(raw))
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value {raw!r}: {exc}") from None
        if key in values and values[key][0] != parsed:
            logger.warning("%s overrides %s value for %s", where, values[key][1], key)
        values[key] = (parsed, where)

    def get(key, default):
        return values[key][0] if key in values else default

    def ctx(key):
        return values[key][1] if key in values else "default"

    Ns = get("N", (10,))
    if not Ns or any(n < 2 for n in Ns):
        raise ConfigError(f"{ctx('N')}: N must be >= 2, got {list(Ns)}")
    checks = {
        "delta_E": lambda v: v > 0,
        "delta_eps": lambda v: v >= 0,
        "lambda": lambda v: v >= 0,
        "beta": lambda v: v >= 0,
        "seed": lambda v: 0 <= v < 2 ** 64,
    }
    for key, ok in checks.items():
        if key in values and not ok(values[key][0]):
            raise ConfigError(f"{ctx(key)}: {key} out of range: {values[key][0]}")
    names = {"delta_E": "delta_E", "delta_eps": "delta_eps", "lambda": "lam",
             "beta": "beta", "seed": "seed"}
    params = ModelParams(N=Ns[0], **{names[k]: values[k][0] for k in names if k in values})

    base = SearchBudget()
    try:
        search = SearchBudget(samples=get("search_samples", base.samples),
                              refine_iters=get("refine_iters", base.refine_iters))
    except ValueError as exc:
        raise ConfigError(f"{ctx('search_samples')}: {exc}") from None
    return ExperimentConfig(
        experiment=experiment,
        params=params,
        Ns=tuple(Ns),
        env_inits=get("env_init", (EnvInit.SUPERPOSITION,)),
        trace_methods=get("trace", (TraceMethod.PEREZ, TraceMethod.STAIRCASE)),
        times=get("times", ()),
        system_source=get("system_source", SystemSource.TRUE),
        search=search,
        output=get("output", None),
        fmt=get("format", OutputFormat.CSV),
        jobs=get("jobs", 1),
        ensemble=get("ensemble", 1),
    )
