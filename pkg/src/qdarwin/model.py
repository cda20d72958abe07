"""Qubit + N-level environment with a GOE random-matrix coupling."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .qstate import PAULI_X, PAULI_Z, DensityMatrix


class EnvInit(str, enum.Enum):
    SUPERPOSITION = "superposition"
    THERMAL = "thermal"


class SysInit(str, enum.Enum):
    PLUS = "plus"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters; energies in units of the system splitting."""

    delta_E: float = 1.0
    delta_eps: float = 1.0
    lam: float = 0.2
    N: int = 10
    beta: float = 10.0
    env_init: EnvInit = EnvInit.SUPERPOSITION
    sys_init: SysInit = SysInit.PLUS
    seed: int = 1

    def __post_init__(self):
        object.__setattr__(self, "env_init", EnvInit(self.env_init))
        object.__setattr__(self, "sys_init", SysInit(self.sys_init))
        if not self.delta_E > 0:
            raise ValueError(f"delta_E must be > 0, got {self.delta_E}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator keyed on ``(seed, *stream)``.

    Distinct stream tuples give statistically independent generators, so a
    task can be evaluated on any worker and still draw the same numbers.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, stream)])))


def goe_sample(N: int, seed: int, index: int = 0) -> np.ndarray:
    """Scaled GOE matrix R = X / sqrt(8N).

    X = (A + A^T)/sqrt(2) with A iid standard normal, giving unit variance off
    the diagonal and variance 2 on it. Normals come from numpy's ziggurat
    transform of the Philox stream ``(seed, index)``.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    a = make_rng(seed, 0x60E, index).standard_normal((N, N))
    x = (a + a.T) / np.sqrt(2.0)
    return x / np.sqrt(8.0 * N)


def env_levels(N: int, delta_eps: float) -> np.ndarray:
    return np.linspace(-delta_eps / 2, delta_eps / 2, N)


@dataclass(frozen=True, eq=False)
class HamiltonianSet:
    H_S: np.ndarray
    H_E: np.ndarray
    H_SE: np.ndarray
    H_total: np.ndarray
    levels: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.H_E.shape[0]

    @cached_property
    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors of the total Hamiltonian (computed once)."""
        return np.linalg.eigh(self.H_total)


def build_hamiltonians(params: ModelParams, R: np.ndarray | None = None) -> HamiltonianSet:
    N = params.N
    if R is None:
        R = goe_sample(N, params.seed)
    R = np.asarray(R, dtype=float)
    if R.shape != (N, N):
        raise ValueError(f"coupling matrix must be {N}x{N}, got {R.shape}")
    if not np.array_equal(R, R.T):
        raise ValueError("coupling matrix must be symmetric")
    levels = env_levels(N, params.delta_eps)
    # |1> is the excited level: H_S = (dE/2)(|1><1| - |0><0|)
    H_S = -params.delta_E / 2 * PAULI_Z
    H_E = np.diag(levels).astype(complex)
    H_SE = np.kron(PAULI_X, params.lam * R).astype(complex)
    H_total = np.kron(H_S, np.eye(N)) + np.kron(np.eye(2), H_E) + H_SE
    return HamiltonianSet(H_S, H_E, H_SE, H_total, levels)


def system_state(params: ModelParams) -> np.ndarray:
    psi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return np.outer(psi, psi).astype(complex)


def environment_state(params: ModelParams) -> np.ndarray:
    N = params.N
    if params.env_init is EnvInit.SUPERPOSITION:
        return np.full((N, N), 1.0 / N, dtype=complex)
    levels = env_levels(N, params.delta_eps)
    # shift by the minimum level before exponentiating to avoid overflow
    w = np.exp(-params.beta * (levels - levels.min()))
    return np.diag(w / w.sum()).astype(complex)


def initial_state(params: ModelParams) -> DensityMatrix:
    """Product state rho_S(0) (x) rho_E(0) with dims (2, N)."""
    return DensityMatrix(np.kron(system_state(params), environment_state(params)), (2, params.N))
