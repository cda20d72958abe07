"""Random search over the Bloch sphere with local refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import make_rng


@dataclass(frozen=True)
class SearchBudget:
    """Uniform sphere samples, then shrinking-perturbation hill climbing.

    The perturbation scale starts at ``refine_scale`` and is halved after
    every ``stall`` non-improving refinement steps. Refinement stops once
    the scale drops below ``min_scale`` or after ``refine_iters`` steps.
    """

    samples: int = 2000
    refine_iters: int = 4000
    refine_scale: float = 0.1
    stall: int = 25
    min_scale: float = 1e-12

    def __post_init__(self):
        if self.samples < 0 or self.refine_iters < 0:
            raise ValueError("search budget counts must be non-negative")
        if self.stall < 1 or self.refine_scale <= 0:
            raise ValueError("stall must be >= 1 and refine_scale > 0")

    def scaled(self, factor: int) -> "SearchBudget":
        return SearchBudget(self.samples * factor, self.refine_iters, self.refine_scale,
                            self.stall, self.min_scale)


DEFAULT_BUDGET = SearchBudget()
COORDINATE_AXES = np.eye(3)


def sphere_samples(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    norms = np.linalg.norm(v, axis=1)
    norms[norms == 0] = 1.0
    return v / norms[:, None]


def optimize_axis(objective: Callable[[np.ndarray], np.ndarray], budget: SearchBudget,
                  seed_stream: tuple[int, ...], maximize: bool,
                  hints: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Best (value, axis) of a batched objective over unit axes.

    ``hints`` are extra candidate axes evaluated ahead of the random
    samples. Sampling and refinement draw from separate streams so the
    first n samples are the same for any budget with at least n samples.
    """
    sign = 1.0 if maximize else -1.0
    cands = [COORDINATE_AXES]
    if hints is not None and len(hints):
        cands.append(np.atleast_2d(hints))
    cands.append(sphere_samples(make_rng(*seed_stream, 1), budget.samples))
    axes = np.vstack(cands)
    vals = sign * np.asarray(objective(axes), dtype=float)
    i = int(np.argmax(vals))
    best_val, best = float(vals[i]), axes[i]

    rng = make_rng(*seed_stream, 2)
    scale, misses = budget.refine_scale, 0
    for _ in range(budget.refine_iters):
        if scale < budget.min_scale:
            break
        trial = best + scale * rng.standard_normal(3)
        trial /= np.linalg.norm(trial)
        val = sign * float(objective(trial[None, :])[0])
        if val > best_val:
            best_val, best = val, trial
        else:
            misses += 1
            if misses % budget.stall == 0:
                scale /= 2
    return sign * best_val, best
