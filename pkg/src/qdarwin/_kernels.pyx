# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled axis-search kernels; same contract as ``_kernels_py``.

Loops over axes in C and calls LAPACK directly through scipy's Cython
bindings, avoiding the batched temporaries of the numpy path. Matrices are
handed to LAPACK as-is (row-major buffers read column-major, i.e.
transposed); only spectra and singular values are used, which the
transpose leaves unchanged.
"""

import numpy as np

from libc.math cimport sqrt, log2, hypot
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zheev, zgesvd

ctypedef double complex dcomplex

cdef double CLIP = 1e-12
BACKEND = "cython"


cdef struct Workspace:
    int n
    int lwork
    dcomplex* work
    double* rwork
    double* w
    dcomplex* a
    dcomplex* b
    dcomplex* s0
    dcomplex* s1


cdef int ws_init(Workspace* ws, int n) except -1:
    ws.n = n
    ws.lwork = 64 * n + 64
    ws.work = <dcomplex*> malloc(ws.lwork * sizeof(dcomplex))
    ws.rwork = <double*> malloc((5 * n + 8) * sizeof(double))
    ws.w = <double*> malloc((n + 1) * sizeof(double))
    ws.a = <dcomplex*> malloc(n * n * sizeof(dcomplex) + 16)
    ws.b = <dcomplex*> malloc(n * n * sizeof(dcomplex) + 16)
    ws.s0 = <dcomplex*> malloc(n * n * sizeof(dcomplex) + 16)
    ws.s1 = <dcomplex*> malloc(n * n * sizeof(dcomplex) + 16)
    if not (ws.work and ws.rwork and ws.w and ws.a and ws.b and ws.s0 and ws.s1):
        ws_free(ws)
        raise MemoryError()
    return 0


cdef void ws_free(Workspace* ws) noexcept:
    free(ws.work); free(ws.rwork); free(ws.w)
    free(ws.a); free(ws.b); free(ws.s0); free(ws.s1)


cdef int eig_herm(Workspace* ws, dcomplex* a, bint vectors) noexcept nogil:
    cdef char jobz = b'V' if vectors else b'N'
    cdef char uplo = b'L'
    cdef int n = ws.n, info = 0
    zheev(&jobz, &uplo, &n, a, &n, ws.w, ws.work, &ws.lwork, ws.rwork, &info)
    return info


cdef double singular_sum(Workspace* ws, dcomplex* a) noexcept nogil:
    cdef char job = b'N'
    cdef int n = ws.n, info = 0, one = 1, i
    cdef dcomplex dummy
    cdef double total = 0.0
    zgesvd(&job, &job, &n, &n, a, &n, ws.w, &dummy, &one, &dummy, &one,
           ws.work, &ws.lwork, ws.rwork, &info)
    for i in range(n):
        total += ws.w[i]
    return total


cdef void branch(const dcomplex[:, :] rho_f, const dcomplex[:, :, :] G,
                 double x, double y, double z, double sign, dcomplex* out) noexcept nogil:
    cdef Py_ssize_t i, j, n = rho_f.shape[0]
    for i in range(n):
        for j in range(n):
            out[i * n + j] = 0.5 * (rho_f[i, j] + sign * (x * G[0, i, j] + y * G[1, i, j] + z * G[2, i, j]))


cdef double weighted_entropy(Workspace* ws) noexcept nogil:
    cdef int i
    cdef double h = 0.0, p = 0.0, lam
    for i in range(ws.n):
        lam = ws.w[i]
        p += lam
        if lam > CLIP:
            h -= lam * log2(lam)
    if p <= CLIP:
        return 0.0
    return h + p * log2(p)


cdef double branch_trace(dcomplex* m, int n) noexcept nogil:
    cdef int i
    cdef double t = 0.0
    for i in range(n):
        t += m[i * n + i].real
    return t


cdef void sqrt_from_eig(Workspace* ws, dcomplex* vecs, dcomplex* out) noexcept nogil:
    # vecs holds eigenvectors column-major (vecs[i + k n] = V[i, k]), ws.w eigenvalues
    cdef int n = ws.n, i, j, k
    cdef double r
    cdef dcomplex acc
    for k in range(n):
        r = ws.w[k]
        ws.rwork[k] = sqrt(r) if r > CLIP else 0.0
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                if ws.rwork[k] != 0.0:
                    acc = acc + vecs[i + k * n] * ws.rwork[k] * vecs[j + k * n].conjugate()
            out[i + j * n] = acc


def pauli_components(blocks):
    b00, b01, b10, b11 = blocks[0, 0], blocks[0, 1], blocks[1, 0], blocks[1, 1]
    rho_f = b00 + b11
    G = np.stack([b01 + b10, 1j * (b01 - b10), b00 - b11])
    return rho_f, G


def conditional_entropy(blocks, axes):
    """sum_pm p(pm) H(rho_F|pm) for each axis, in bits."""
    axes_arr = np.ascontiguousarray(np.atleast_2d(np.asarray(axes, dtype=float)))
    rho_f_arr, G_arr = pauli_components(np.asarray(blocks, dtype=complex))
    cdef const dcomplex[:, :] rho_f = np.ascontiguousarray(rho_f_arr)
    cdef const dcomplex[:, :, :] G = np.ascontiguousarray(G_arr)
    cdef const double[:, :] ax = axes_arr
    cdef Py_ssize_t m = ax.shape[0], a
    out_arr = np.empty(m, dtype=float)
    cdef double[:] out = out_arr
    cdef Workspace ws
    cdef double total
    cdef int info
    ws_init(&ws, rho_f.shape[0])
    try:
        with nogil:
            for a in range(m):
                branch(rho_f, G, ax[a, 0], ax[a, 1], ax[a, 2], 1.0, ws.a)
                info = eig_herm(&ws, ws.a, False)
                if info != 0:
                    break
                total = weighted_entropy(&ws)
                branch(rho_f, G, ax[a, 0], ax[a, 1], ax[a, 2], -1.0, ws.a)
                info = eig_herm(&ws, ws.a, False)
                if info != 0:
                    break
                out[a] = total + weighted_entropy(&ws)
    finally:
        ws_free(&ws)
    if info != 0:
        raise np.linalg.LinAlgError(f"zheev failed with info={info}")
    return out_arr


def eta_terms(blocks, axes):
    """(||sigma_SF||_1, sum_{i!=j} sqrt(p_i p_j) B(rho_i, rho_j)) per axis."""
    axes_arr = np.ascontiguousarray(np.atleast_2d(np.asarray(axes, dtype=float)))
    blocks_arr = np.ascontiguousarray(np.asarray(blocks, dtype=complex))
    rho_f_arr, G_arr = pauli_components(blocks_arr)
    cdef const dcomplex[:, :, :, :] B = blocks_arr
    cdef const dcomplex[:, :] rho_f = np.ascontiguousarray(rho_f_arr)
    cdef const dcomplex[:, :, :] G = np.ascontiguousarray(G_arr)
    cdef const double[:, :] ax = axes_arr
    cdef Py_ssize_t m = ax.shape[0], a, i, j
    cdef int n = rho_f.shape[0], info = 0, k
    nonsep_arr = np.empty(m, dtype=float)
    disting_arr = np.empty(m, dtype=float)
    cdef double[:] nonsep = nonsep_arr
    cdef double[:] disting = disting_arr
    cdef double x, y, z, c, s, rho, p_plus, p_minus
    cdef dcomplex phase, u0, u1, v0, v1, acc
    cdef Workspace ws
    ws_init(&ws, n)
    try:
        with nogil:
            for a in range(m):
                x = ax[a, 0]; y = ax[a, 1]; z = ax[a, 2]
                c = sqrt(min(max((1 + z) / 2, 0.0), 1.0))
                s = sqrt(min(max((1 - z) / 2, 0.0), 1.0))
                rho = hypot(x, y)
                if rho > 0:
                    phase = (x + 1j * y) / rho
                else:
                    phase = 1.0
                u0 = c; u1 = phase * s
                v0 = -phase.conjugate() * s; v1 = c
                for i in range(n):
                    for j in range(n):
                        ws.a[i * n + j] = (u0.conjugate() * v0 * B[0, 0, i, j]
                                           + u0.conjugate() * v1 * B[0, 1, i, j]
                                           + u1.conjugate() * v0 * B[1, 0, i, j]
                                           + u1.conjugate() * v1 * B[1, 1, i, j])
                nonsep[a] = 2.0 * singular_sum(&ws, ws.a)

                branch(rho_f, G, x, y, z, 1.0, ws.a)
                p_plus = branch_trace(ws.a, n)
                info = eig_herm(&ws, ws.a, True)
                if info != 0:
                    break
                sqrt_from_eig(&ws, ws.a, ws.s0)
                branch(rho_f, G, x, y, z, -1.0, ws.b)
                p_minus = branch_trace(ws.b, n)
                if p_plus <= CLIP or p_minus <= CLIP:
                    disting[a] = 0.0
                    continue
                info = eig_herm(&ws, ws.b, True)
                if info != 0:
                    break
                sqrt_from_eig(&ws, ws.b, ws.s1)
                for i in range(n):
                    for j in range(n):
                        acc = 0.0
                        for k in range(n):
                            acc = acc + ws.s0[i + k * n] * ws.s1[k + j * n]
                        ws.a[i + j * n] = acc
                disting[a] = 2.0 * singular_sum(&ws, ws.a)
    finally:
        ws_free(&ws)
    if info != 0:
        raise np.linalg.LinAlgError(f"LAPACK failed with info={info}")
    return nonsep_arr, disting_arr
