"""Density-operator algebra: validation, entropy, partial trace, norms, fidelity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# eigenvalues below this are treated as zero for 0 log 0 and matrix square roots
CLIP = 1e-12
DEFAULT_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class ValidationError(ValueError):
    """A matrix failed a density-operator check (Hermiticity, trace, positivity)."""


class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix on a tensor product of factors.

    The all-zero matrix (trace exactly 0) is also accepted; it is what the
    level-elimination fragment trace returns when the kept levels carry no
    weight, and all of its entropies are 0.
    """

    __slots__ = ("data", "dims", "tol")

    def __init__(self, data, dims: Sequence[int] | None = None,
                 tol: float = DEFAULT_TOL, check: bool = True):
        arr = np.array(data, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {arr.shape}")
        if dims is None:
            dims = (arr.shape[0],)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims) or int(np.prod(dims)) != arr.shape[0]:
            raise ValueError(f"dims {dims} do not match matrix size {arr.shape[0]}")
        if tol < 0:
            raise ValueError("tolerance must be non-negative")
        arr.setflags(write=False)
        self.data = arr
        self.dims = dims
        self.tol = float(tol)
        if check:
            self.validate()

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims}, trace={self.trace:.6g})"

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.data).real)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.data)

    def validate(self) -> None:
        herm = np.max(np.abs(self.data - self.data.conj().T)) if self.dim else 0.0
        if herm > self.tol:
            raise ValidationError(f"matrix not Hermitian (max deviation {herm:.3g})")
        if self.is_zero:
            return
        tr = np.trace(self.data)
        if abs(tr - 1.0) > self.tol:
            raise ValidationError(f"trace {tr.real:.12g} is neither 1 nor exactly 0")
        lo = np.linalg.eigvalsh(self.data)[0]
        if lo < -self.tol:
            raise ValidationError(f"negative eigenvalue {lo:.3g}")

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.data)

    def purity(self) -> float:
        return float(np.real(np.vdot(self.data.conj().T, self.data)))

    @classmethod
    def zero(cls, dims: Sequence[int]) -> "DensityMatrix":
        n = int(np.prod(dims))
        return cls(np.zeros((n, n), dtype=complex), dims, check=False)

    @classmethod
    def from_ket(cls, psi, dims: Sequence[int] | None = None, **kw) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims, **kw)


@dataclass(frozen=True)
class BlochVector:
    """Unit vector parameterising the qubit projectors (1 +- r.sigma)/2."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = np.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Bloch vector must have unit norm, got {norm!r}")

    @classmethod
    def from_array(cls, r) -> "BlochVector":
        r = np.asarray(r, dtype=float)
        r = r / np.linalg.norm(r)
        return cls(float(r[0]), float(r[1]), float(r[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        n_sigma = self.x * PAULI_X + self.y * PAULI_Y + self.z * PAULI_Z
        eye = np.eye(2, dtype=complex)
        return (eye + n_sigma) / 2, (eye - n_sigma) / 2


def _as_array(rho) -> np.ndarray:
    return rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def entropy_of_eigenvalues(evals) -> float:
    """-sum p log2 p over eigenvalues above the clip threshold."""
    p = np.asarray(evals, dtype=float)
    p = p[p > CLIP]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; 0 for the zero state."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    if rho.is_zero:
        return 0.0
    return entropy_of_eigenvalues(rho.eigvals())


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every factor of ``rho.dims`` not listed in ``keep``."""
    dims = rho.dims
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"factor indices {keep} out of range for dims {dims}")
    n = len(dims)
    t = rho.data.reshape(dims + dims)
    # trace out from the highest index so remaining axis numbers stay valid
    for idx in reversed(range(n)):
        if idx in keep:
            continue
        cur = t.ndim // 2
        t = np.trace(t, axis1=idx, axis2=idx + cur)
    new_dims = tuple(dims[k] for k in keep)
    d = int(np.prod(new_dims)) if new_dims else 1
    out = t.reshape(d, d)
    if not new_dims:
        new_dims = (1,)
    return DensityMatrix(out, new_dims, tol=rho.tol, check=False)


def trace_norm(a) -> float:
    """Sum of singular values."""
    a = _as_array(a)
    if a.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Square root of a PSD matrix via eigh, clipping small/negative eigenvalues."""
    w, v = np.linalg.eigh(a)
    w = np.where(w > CLIP, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity_B(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Root fidelity ||sqrt(rho1) sqrt(rho2)||_1."""
    a, b = _as_array(rho1), _as_array(rho2)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if isinstance(rho1, DensityMatrix) and isinstance(rho2, DensityMatrix) and rho1.dims != rho2.dims:
        raise ValueError(f"dims mismatch: {rho1.dims} vs {rho2.dims}")
    return trace_norm(psd_sqrt(a) @ psd_sqrt(b))


def bloch_axis(rho_s) -> np.ndarray:
    """Bloch vector (r_x, r_y, r_z) of a qubit operator; not normalised."""
    a = _as_array(rho_s)
    return np.array([np.trace(a @ s).real for s in PAULIS])


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-ensemble density matrix, handy for tests and benchmarks."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
