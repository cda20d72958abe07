"""Compare the compiled and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat 5]

Times the two axis-search objectives on random qubit-fragment states for
a batch of 2000 axes (the sampling phase) and for single-axis calls (the
refinement phase), then one full eta search on an evolved N=10 fragment.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qdarwin import _kernels_py, kernels
from qdarwin.fragment import FragmentSelection, TraceMethod, reduce
from qdarwin.harness import joint_states
from qdarwin.infometrics import qubit_blocks
from qdarwin.model import ModelParams
from qdarwin.qstate import DensityMatrix, random_density_matrix
from qdarwin.sbs import eta_bound


def _case(d: int, n_axes: int, rng: np.random.Generator):
    rho = DensityMatrix(random_density_matrix(2 * d, rng), (2, d))
    axes = rng.standard_normal((n_axes, 3))
    axes /= np.linalg.norm(axes, axis=1)[:, None]
    return qubit_blocks(rho), np.ascontiguousarray(axes)


def _best(stmt, repeat: int, number: int) -> float:
    return min(timeit.repeat(stmt, repeat=repeat, number=number)) / number


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.compiled_backend is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")
    backends = {"cython": kernels.compiled_backend, "python": _kernels_py}
    rng = np.random.default_rng(0)

    print(f"{'kernel':<20}{'d_F':>4}{'axes':>6}{'cython ms':>12}{'python ms':>12}{'speedup':>9}")
    for d in (2, 6, 11):
        for n_axes, number in ((2000, 3), (1, 200)):
            blocks, axes = _case(d, n_axes, rng)
            for name in ("conditional_entropy", "eta_terms"):
                t = {b: _best(lambda m=mod: getattr(m, name)(blocks, axes), args.repeat, number)
                     for b, mod in backends.items()}
                print(f"{name:<20}{d:>4}{n_axes:>6}{t['cython'] * 1e3:>12.3f}"
                      f"{t['python'] * 1e3:>12.3f}{t['python'] / t['cython']:>9.1f}")

    rho = joint_states(ModelParams(), [500.0])[0]
    sf = reduce(rho, FragmentSelection(TraceMethod.STAIRCASE, (1, 3, 5, 7), 10))
    print("\nfull eta search, staircase |F|=4 at t=500 (default budget)")
    for b in backends:
        kernels.use_backend(b)
        t = _best(lambda: eta_bound(sf, seed=1), max(1, args.repeat // 2), 1)
        print(f"  {b:<8}{t * 1e3:10.1f} ms")


if __name__ == "__main__":
    main()
