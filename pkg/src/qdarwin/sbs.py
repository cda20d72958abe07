"""Upper bound on the distance of a qubit-fragment state to spectrum broadcast form.

For a system basis {P_+, P_-} the state splits into a block-diagonal
(separable) part and an off-diagonal remainder sigma. The bound is

    eta = min over axes [ ||sigma||_1 + sum_{i != j} sqrt(p_i p_j) B(rho_i, rho_j) ]

with B the root fidelity of the fragment branch states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .fragment import FragmentSelection
from .infometrics import _hint_axes, qubit_blocks
from .qstate import CLIP, BlochVector, DensityMatrix, fidelity_B, trace_norm
from .search import DEFAULT_BUDGET, SearchBudget, optimize_axis


@dataclass(frozen=True)
class SBSBoundReport:
    t: float
    fragment: FragmentSelection | None
    eta: float
    nonsep_term: float
    disting_term: float
    best_axis: BlochVector
    p: tuple[float, float]
    degenerate: bool
    budget: SearchBudget


@dataclass(frozen=True)
class SeparableSplit:
    rho_sep: np.ndarray
    sigma: np.ndarray
    p: tuple[float, float]
    branches: tuple[np.ndarray | None, np.ndarray | None]


def separable_projection(rho_sf: DensityMatrix, axis: BlochVector) -> SeparableSplit:
    """Pinch the system factor in the basis of ``axis``."""
    d = rho_sf.dims[1]
    eye_f = np.eye(d)
    rho = rho_sf.data
    rho_sep = np.zeros_like(rho)
    p, branches = [], []
    for proj in axis.projectors():
        big = np.kron(proj, eye_f)
        part = big @ rho @ big
        rho_sep += part
        pi = float(np.trace(part).real)
        p.append(pi)
        if pi > CLIP:
            reduced = part.reshape(2, d, 2, d).trace(axis1=0, axis2=2) / pi
            branches.append(reduced)
        else:
            branches.append(None)
    return SeparableSplit(rho_sep, rho - rho_sep, (p[0], p[1]), (branches[0], branches[1]))


def distinguishability_term(p, branches) -> float:
    """sum_{i != j} sqrt(p_i p_j) B(rho_i, rho_j); empty branches contribute nothing."""
    total = 0.0
    n = len(p)
    for i in range(n):
        for j in range(n):
            if i == j or p[i] <= CLIP or p[j] <= CLIP:
                continue
            total += np.sqrt(p[i] * p[j]) * fidelity_B(branches[i], branches[j])
    return float(total)


def eta_terms_at(rho_sf: DensityMatrix, axis: BlochVector) -> tuple[float, float]:
    """Both bound terms at a fixed axis, via explicit matrices (no kernel)."""
    split = separable_projection(rho_sf, axis)
    return trace_norm(split.sigma), distinguishability_term(split.p, split.branches)


def eta_bound(rho_sf: DensityMatrix, search: SearchBudget = DEFAULT_BUDGET,
              seed: tuple[int, ...] | int = 0, *, t: float = 0.0,
              fragment: FragmentSelection | None = None) -> SBSBoundReport:
    degenerate = rho_sf.dims[1] == 1
    if rho_sf.is_zero:
        return SBSBoundReport(t, fragment, 0.0, 0.0, 0.0, BlochVector(0.0, 0.0, 1.0),
                              (0.0, 0.0), True, search)
    blocks = qubit_blocks(rho_sf)
    stream = (seed,) if isinstance(seed, int) else tuple(seed)

    def total(ax):
        nonsep, disting = kernels.eta_terms(blocks, ax)
        return nonsep + disting

    _, best = optimize_axis(total, search, stream, maximize=False, hints=_hint_axes(rho_sf))
    nonsep, disting = kernels.eta_terms(blocks, best[None, :])
    axis = BlochVector.from_array(best)
    split_p = _branch_probabilities(blocks, best)
    return SBSBoundReport(t, fragment, float(nonsep[0] + disting[0]), float(nonsep[0]),
                          float(disting[0]), axis, split_p, degenerate, search)


def _branch_probabilities(blocks: np.ndarray, axis: np.ndarray) -> tuple[float, float]:
    rho_f_tr = float(np.trace(blocks[0, 0] + blocks[1, 1]).real)
    g = np.array([np.trace(blocks[0, 1] + blocks[1, 0]).real,
                  np.trace(1j * (blocks[0, 1] - blocks[1, 0])).real,
                  np.trace(blocks[0, 0] - blocks[1, 1]).real])
    shift = float(axis @ g)
    return (rho_f_tr + shift) / 2, (rho_f_tr - shift) / 2


def discrimination_error(p, states, projectors) -> float:
    """sum_i p_i tr[rho_i (1 - Pi_i)] for a complete projector set on the fragment."""
    projectors = [np.asarray(q, dtype=complex) for q in projectors]
    if len(projectors) != len(p) or len(states) != len(p):
        raise ValueError("need one projector and one state per branch")
    d = projectors[0].shape[0]
    if not np.allclose(sum(projectors), np.eye(d), atol=1e-10):
        raise ValueError("projectors do not sum to the identity")
    for q in projectors:
        if not np.allclose(q @ q, q, atol=1e-10) or not np.allclose(q, q.conj().T, atol=1e-10):
            raise ValueError("measurement operators must be orthogonal projectors")
    eye = np.eye(d)
    return float(sum(pi * np.trace(np.asarray(rho) @ (eye - q)).real
                     for pi, rho, q in zip(p, states, projectors)))


def helstrom_projectors(p, states) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the positive / non-positive parts of p0 rho0 - p1 rho1."""
    gamma = p[0] * np.asarray(states[0]) - p[1] * np.asarray(states[1])
    w, v = np.linalg.eigh(gamma)
    pos = v[:, w > 0]
    q0 = pos @ pos.conj().T
    return q0, np.eye(len(w)) - q0
