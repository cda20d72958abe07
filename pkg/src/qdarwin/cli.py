"""Command-line entry point: ``qdarwin {evolve,mi-sweep,info-decomp,sbs-sweep}``.

Exit codes: 0 success, 2 configuration error, 3 numerical validation
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .config import ConfigError, Experiment, load_config
from .qstate import ValidationError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

logger = logging.getLogger("qdarwin")


def _shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--seed", help="64-bit RNG seed")
    p.add_argument("--N", help="environment levels (comma list for several)")
    p.add_argument("--lambda", dest="lambda_", metavar="LAMBDA", help="coupling strength")
    p.add_argument("--beta", help="inverse temperature of the thermal environment")
    p.add_argument("--env-init", help="superposition | thermal | both")
    p.add_argument("--trace", help="perez | staircase | both")
    p.add_argument("--times", help="comma list of times; a:b:step expands to a grid")
    p.add_argument("--system-source", help="true | fragment (where H(S) comes from)")
    p.add_argument("--search-samples", help="random Bloch-sphere samples per optimisation")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--format", help="csv | json")
    p.add_argument("--jobs", help="worker processes")
    p.add_argument("--ensemble", help="number of GOE realizations to average")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdarwin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        Experiment.EVOLUTION: "system entropy, excited population and coherence vs time",
        Experiment.MI_SWEEP: "fragment-averaged mutual information vs fragment size",
        Experiment.INFO_DECOMPOSITION: "accessible information and discord vs fragment size",
        Experiment.SBS_SWEEP: "spectrum-broadcast distance bound vs fragment size",
    }
    for exp, text in helps.items():
        _shared(sub.add_parser(exp.value, help=text, description=text))
    return parser


FLAG_KEYS = ("seed", "N", "beta", "env_init", "trace", "times", "system_source",
             "search_samples", "output", "format", "jobs", "ensemble")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    flags = {k: getattr(args, k) for k in FLAG_KEYS}
    flags["lambda"] = args.lambda_
    try:
        cfg = load_config(args.command, args.config, flags)
    except ConfigError as exc:
        print(f"qdarwin: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"qdarwin: cannot read config {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    try:
        records = harness.run(cfg)
    except ValidationError as exc:
        print(f"qdarwin: numerical validation failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        text = harness.write_output(records, cfg)
    except OSError as exc:
        print(f"qdarwin: cannot write {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    if cfg.output is None:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
