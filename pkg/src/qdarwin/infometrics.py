"""Mutual information, Holevo (accessible) information and discord for qubit-fragment states."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .fragment import FragmentSelection
from .qstate import BlochVector, DensityMatrix, bloch_axis, partial_trace, von_neumann_entropy
from .search import DEFAULT_BUDGET, SearchBudget, optimize_axis


class SystemSource(str, enum.Enum):
    """Which reduced system state feeds H(S)."""

    TRUE = "true"          # tr_E of the joint state
    FRAGMENT = "fragment"  # tr_F of the system-fragment state


def qubit_blocks(rho_sf: DensityMatrix) -> np.ndarray:
    """Blocks <a|rho|b> of a (2, d) state, shape (2, 2, d, d)."""
    if len(rho_sf.dims) != 2 or rho_sf.dims[0] != 2:
        raise ValueError(f"expected a qubit-fragment state with dims (2, d), got {rho_sf.dims}")
    d = rho_sf.dims[1]
    return rho_sf.data.reshape(2, d, 2, d).transpose(0, 2, 1, 3)


def mutual_information(rho_sf: DensityMatrix, rho_s: DensityMatrix | None = None) -> float:
    """I(S:F) = H(S) + H(F) - H(SF) in bits.

    ``rho_s`` supplies H(S) directly (true system state); when omitted,
    H(S) comes from tr_F of ``rho_sf``.
    """
    if rho_sf.is_zero:
        return 0.0
    qubit_blocks(rho_sf)
    h_s = von_neumann_entropy(rho_s if rho_s is not None else partial_trace(rho_sf, [0]))
    h_f = von_neumann_entropy(partial_trace(rho_sf, [1]))
    return h_s + h_f - von_neumann_entropy(rho_sf)


def _hint_axes(rho_sf: DensityMatrix) -> np.ndarray:
    r = bloch_axis(partial_trace(rho_sf, [0]))
    norm = np.linalg.norm(r)
    return (r / norm)[None, :] if norm > 1e-12 else np.empty((0, 3))


def holevo_chi(rho_sf: DensityMatrix, search: SearchBudget = DEFAULT_BUDGET,
               seed: tuple[int, ...] | int = 0) -> tuple[float, BlochVector]:
    """Accessible information about S from F under rank-one projective system measurements."""
    if rho_sf.is_zero:
        return 0.0, BlochVector(0.0, 0.0, 1.0)
    blocks = qubit_blocks(rho_sf)
    h_f = von_neumann_entropy(partial_trace(rho_sf, [1]))
    stream = (seed,) if isinstance(seed, int) else tuple(seed)
    best_cond, axis = optimize_axis(
        lambda ax: kernels.conditional_entropy(blocks, ax),
        search, stream, maximize=False, hints=_hint_axes(rho_sf))
    return h_f - best_cond, BlochVector.from_array(axis)


def discord(rho_sf: DensityMatrix, rho_s: DensityMatrix | None = None,
            search: SearchBudget = DEFAULT_BUDGET, seed: tuple[int, ...] | int = 0) -> float:
    """I - chi; an upper bound on the discord since chi comes from a finite search."""
    return mutual_information(rho_sf, rho_s) - holevo_chi(rho_sf, search, seed)[0]


@dataclass(frozen=True)
class InformationReport:
    t: float
    fragment: FragmentSelection | None
    H_S: float
    H_F: float
    H_SF: float
    I: float
    chi: float
    discord: float
    best_axis: BlochVector
    system_source: SystemSource


def information_report(rho_sf: DensityMatrix, rho_s: DensityMatrix | None = None, *,
                       t: float = 0.0, fragment: FragmentSelection | None = None,
                       search: SearchBudget | None = DEFAULT_BUDGET,
                       seed: tuple[int, ...] | int = 0) -> InformationReport:
    """Entropies, I, chi and D for one system-fragment state.

    With ``search=None`` the chi optimisation is skipped and chi, discord
    are reported as NaN (mutual-information-only sweeps).
    """
    source = SystemSource.TRUE if rho_s is not None else SystemSource.FRAGMENT
    if rho_sf.is_zero:
        return InformationReport(t, fragment, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                                 BlochVector(0.0, 0.0, 1.0), source)
    h_s = von_neumann_entropy(rho_s if rho_s is not None else partial_trace(rho_sf, [0]))
    h_f = von_neumann_entropy(partial_trace(rho_sf, [1]))
    h_sf = von_neumann_entropy(rho_sf)
    mi = h_s + h_f - h_sf
    if search is None:
        chi, axis = float("nan"), BlochVector(0.0, 0.0, 1.0)
    else:
        chi, axis = holevo_chi(rho_sf, search, seed)
    return InformationReport(t, fragment, h_s, h_f, h_sf, mi, chi, mi - chi, axis, source)
