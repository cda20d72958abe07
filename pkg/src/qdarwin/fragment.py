"""Environment fragments: level elimination (Perez) and staircase partial traces.

Level elimination keeps the rows/columns of the kept levels and renormalises.
The staircase trace reads level n >= 1 as the single excitation of
subenvironment n (level 0 is the joint vacuum); tracing subenvironment k
moves the weight c_ijkk onto the vacuum element. States are kept in the
compact (|F|+1)-dimensional vacuum-plus-single-excitation basis.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from .model import make_rng
from .qstate import DensityMatrix

logger = logging.getLogger(__name__)

SAMPLING_MIN_N = 16
DEFAULT_SAMPLE_COUNT = 500


class TraceMethod(str, enum.Enum):
    PEREZ = "perez"
    STAIRCASE = "staircase"


def cardinality(method: TraceMethod, N: int) -> int:
    """Number of environment units a fragment is drawn from."""
    return N if TraceMethod(method) is TraceMethod.PEREZ else N - 1


@dataclass(frozen=True)
class FragmentSelection:
    method: TraceMethod
    members: tuple[int, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "method", TraceMethod(self.method))
        members = tuple(int(m) for m in self.members)
        if len(set(members)) != len(members):
            raise ValueError(f"duplicate fragment members {members}")
        lo = 0 if self.method is TraceMethod.PEREZ else 1
        if any(m < lo or m > self.N - 1 for m in members):
            raise ValueError(f"members {members} out of range [{lo}, {self.N - 1}] for {self.method.value}")
        object.__setattr__(self, "members", tuple(sorted(members)))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def fraction(self) -> float:
        return self.size / cardinality(self.method, self.N)

    def complement(self) -> "FragmentSelection":
        lo = 0 if self.method is TraceMethod.PEREZ else 1
        rest = tuple(m for m in range(lo, self.N) if m not in self.members)
        return FragmentSelection(self.method, rest, self.N)


def _check_joint(rho_se: DensityMatrix, frag: FragmentSelection, method: TraceMethod) -> None:
    if frag.method is not method:
        raise ValueError(f"expected a {method.value} selection, got {frag.method.value}")
    if rho_se.dims != (2, frag.N):
        raise ValueError(f"joint state dims {rho_se.dims} do not match (2, {frag.N})")


def perez_trace(rho_se: DensityMatrix, frag: FragmentSelection) -> DensityMatrix:
    """Keep only environment levels in the fragment and renormalise."""
    _check_joint(rho_se, frag, TraceMethod.PEREZ)
    N = frag.N
    levels = np.array(frag.members, dtype=int)
    k = len(levels)
    if k == 0:
        return DensityMatrix.zero((2, 1))
    idx = np.concatenate([levels, levels + N])
    block = rho_se.data[np.ix_(idx, idx)]
    norm = float(np.trace(block).real)
    if norm <= 0.0:
        return DensityMatrix.zero((2, k))
    return DensityMatrix(block / norm, (2, k), tol=rho_se.tol, check=False)


def staircase_trace(rho_se: DensityMatrix, frag: FragmentSelection) -> DensityMatrix:
    """Trace out the subenvironments outside the fragment.

    Basis of the result's fragment factor: vacuum first, then the kept
    subenvironments in increasing order.
    """
    _check_joint(rho_se, frag, TraceMethod.STAIRCASE)
    N = frag.N
    keep = np.array((0,) + frag.members, dtype=int)
    gone = np.array([k for k in range(1, N) if k not in frag.members], dtype=int)
    d = len(keep)
    c = rho_se.data.reshape(2, N, 2, N)
    out = c[:, keep][:, :, :, keep].copy()
    if gone.size:
        out[:, 0, :, 0] += c[:, gone, :, gone].sum(axis=0)
    return DensityMatrix(out.reshape(2 * d, 2 * d), (2, d), tol=rho_se.tol, check=False)


def reduce(rho_se: DensityMatrix, frag: FragmentSelection) -> DensityMatrix:
    if frag.method is TraceMethod.PEREZ:
        return perez_trace(rho_se, frag)
    return staircase_trace(rho_se, frag)


def enumerate_fragments(method: TraceMethod, N: int, k: int,
                        sample_count: int = DEFAULT_SAMPLE_COUNT,
                        seed: int = 0) -> list[FragmentSelection]:
    """All size-k fragments in lexicographic order.

    For N >= 16 and more than ``sample_count`` subsets, a seeded uniform
    sample of ``sample_count`` subsets (sorted, possibly repeating) is
    returned instead.
    """
    method = TraceMethod(method)
    card = cardinality(method, N)
    if not 0 <= k <= card:
        raise ValueError(f"fragment size {k} out of range [0, {card}]")
    lo = 0 if method is TraceMethod.PEREZ else 1
    units = range(lo, lo + card)
    if N >= SAMPLING_MIN_N and comb(card, k) > sample_count:
        rng = make_rng(seed, 0xF4A6, N, k, lo)
        picks = [tuple(sorted(rng.choice(card, size=k, replace=False) + lo)) for _ in range(sample_count)]
        logger.info("sampling %d of C(%d, %d) fragments", sample_count, card, k)
        return [FragmentSelection(method, p, N) for p in sorted(picks)]
    return [FragmentSelection(method, c, N) for c in combinations(units, k)]


def fragments_by_size(method: TraceMethod, N: int, sizes: Iterable[int] | None = None,
                      **kw) -> dict[int, list[FragmentSelection]]:
    card = cardinality(method, N)
    sizes = range(card + 1) if sizes is None else sizes
    return {k: enumerate_fragments(method, N, k, **kw) for k in sizes}
