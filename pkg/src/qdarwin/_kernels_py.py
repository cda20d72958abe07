"""Batched numpy implementation of the axis-search kernels.

Both kernels take the system-fragment state split into qubit blocks
``B[a, b] = <a|rho_SF|b>`` (shape (2, 2, d, d)) and a stack of unit axes
(shape (M, 3)). Measuring the system along axis r leaves the unnormalised
fragment branches

    M_pm = (rho_F +- r . G) / 2,   G = (B01 + B10, i(B01 - B10), B00 - B11).
"""

from __future__ import annotations

import numpy as np

CLIP = 1e-12
BACKEND = "python"


def pauli_components(blocks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b00, b01, b10, b11 = blocks[0, 0], blocks[0, 1], blocks[1, 0], blocks[1, 1]
    rho_f = b00 + b11
    G = np.stack([b01 + b10, 1j * (b01 - b10), b00 - b11])
    return rho_f, G


def _branches(blocks, axes):
    rho_f, G = pauli_components(blocks)
    rg = np.einsum("ak,kij->aij", axes, G)
    return (rho_f[None] + rg) / 2, (rho_f[None] - rg) / 2


def _weighted_entropy(evals: np.ndarray) -> np.ndarray:
    # -sum lam log2 lam + p log2 p for each row, p = row sum
    lam = np.where(evals > CLIP, evals, 1.0)
    h = -np.sum(np.where(evals > CLIP, lam * np.log2(lam), 0.0), axis=-1)
    p = evals.sum(axis=-1)
    safe = np.where(p > CLIP, p, 1.0)
    return np.where(p > CLIP, h + p * np.log2(safe), 0.0)


def conditional_entropy(blocks: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """sum_pm p(pm) H(rho_F|pm) for each axis, in bits."""
    axes = np.atleast_2d(np.asarray(axes, dtype=float))
    m_plus, m_minus = _branches(blocks, axes)
    return (_weighted_entropy(np.linalg.eigvalsh(m_plus))
            + _weighted_entropy(np.linalg.eigvalsh(m_minus)))


def axis_kets(axes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors of r.sigma with eigenvalue +1 and -1, one row per axis."""
    x, y, z = axes[:, 0], axes[:, 1], axes[:, 2]
    c = np.sqrt(np.clip((1 + z) / 2, 0.0, 1.0))
    s = np.sqrt(np.clip((1 - z) / 2, 0.0, 1.0))
    rho = np.hypot(x, y)
    phase = np.where(rho > 0, (x + 1j * y) / np.where(rho > 0, rho, 1.0), 1.0)
    up = np.stack([c + 0j, phase * s], axis=-1)
    down = np.stack([-phase.conj() * s, c + 0j], axis=-1)
    return up, down


def _sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    w = np.where(w > CLIP, w, 0.0)
    return (v * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def eta_terms(blocks: np.ndarray, axes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(||sigma_SF||_1, sum_{i!=j} sqrt(p_i p_j) B(rho_i, rho_j)) per axis."""
    axes = np.atleast_2d(np.asarray(axes, dtype=float))
    up, down = axis_kets(axes)
    coh = np.einsum("ai,aj,ijkl->akl", up.conj(), down, blocks)
    nonsep = 2.0 * np.linalg.svd(coh, compute_uv=False).sum(axis=-1)
    m_plus, m_minus = _branches(blocks, axes)
    prod = _sqrt_psd(m_plus) @ _sqrt_psd(m_minus)
    disting = 2.0 * np.linalg.svd(prod, compute_uv=False).sum(axis=-1)
    p_plus = np.trace(m_plus, axis1=-2, axis2=-1).real
    p_minus = np.trace(m_minus, axis1=-2, axis2=-1).real
    disting = np.where((p_plus > CLIP) & (p_minus > CLIP), disting, 0.0)
    return nonsep, disting
