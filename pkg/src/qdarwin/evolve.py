"""Exact unitary propagation under a time-independent Hamiltonian (hbar = 1)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import HamiltonianSet
from .qstate import DensityMatrix, partial_trace, von_neumann_entropy


class Propagator:
    """exp(-i H t) from a single Hermitian eigendecomposition.

    The initial state is rotated into the energy eigenbasis once; each time
    point then costs one phase multiplication and one basis change back.
    """

    def __init__(self, H: HamiltonianSet | np.ndarray):
        if isinstance(H, HamiltonianSet):
            self.energies, self.basis = H.spectrum
            self.H = H.H_total
        else:
            self.H = np.asarray(H, dtype=complex)
            self.energies, self.basis = np.linalg.eigh(self.H)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        v = self.basis
        return (v * np.exp(-1j * self.energies * t)) @ v.conj().T

    def reconstruction_error(self) -> float:
        v = self.basis
        return float(np.max(np.abs((v * self.energies) @ v.conj().T - self.H)))

    def evolve(self, rho0: DensityMatrix, times: Iterable[float]) -> list[DensityMatrix]:
        if rho0.dim != self.dim:
            raise ValueError(f"state dimension {rho0.dim} does not match Hamiltonian {self.dim}")
        v = self.basis
        rho_eig = v.conj().T @ rho0.data @ v
        out = []
        for t in times:
            if t == 0:
                out.append(rho0)
                continue
            ph = np.exp(-1j * self.energies * t)
            rt = (ph[:, None] * rho_eig) * ph.conj()[None, :]
            data = v @ rt @ v.conj().T
            data = (data + data.conj().T) / 2
            out.append(DensityMatrix(data, rho0.dims, tol=rho0.tol, check=False))
        return out


def propagate(rho0: DensityMatrix, H: HamiltonianSet | Propagator, t: float) -> DensityMatrix:
    prop = H if isinstance(H, Propagator) else Propagator(H)
    return prop.evolve(rho0, [t])[0]


@dataclass(frozen=True)
class SystemObservables:
    t: float
    entropy: float
    excited: float
    coherence: float


def system_observables(rho_se: DensityMatrix, t: float = 0.0) -> SystemObservables:
    rho_s = partial_trace(rho_se, [0])
    return SystemObservables(
        t=float(t),
        entropy=von_neumann_entropy(rho_s),
        excited=float(rho_s.data[1, 1].real),
        coherence=float(abs(rho_s.data[0, 1])),
    )


def observables_series(rho0: DensityMatrix, H: HamiltonianSet | Propagator,
                       times) -> list[SystemObservables]:
    times = [float(t) for t in times]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("time grid must be monotone nondecreasing")
    prop = H if isinstance(H, Propagator) else Propagator(H)
    return [system_observables(rho, t) for rho, t in zip(prop.evolve(rho0, times), times)]
