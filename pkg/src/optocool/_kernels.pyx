# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-frequency response kernel: 4x4 complex inversion + contraction.

This is the hot inner loop of the exact-spectrum tier; adaptive quadrature of
the exact mechanical spectrum calls it once per abscissa.  The pure-Python
twin lives in ``optocool._kernels_py`` with identical semantics.
"""

ctypedef double complex cplx


def weighted_response_grid(const cplx[:, ::1] drift,
                           const cplx[:, ::1] noise,
                           const double[::1] weights,
                           const cplx[::1] coef,
                           const double[::1] omega,
                           double cond_limit,
                           double[::1] out):
    """Fill ``out[i]`` with the weighted response at ``omega[i]``.

    Returns the first index whose inf-norm condition estimate of
    M = i*omega*I - drift exceeds ``cond_limit``, or -1 on success.
    """
    cdef Py_ssize_t n = omega.shape[0]
    cdef Py_ssize_t idx, i, j, k, p
    cdef cplx work[4][8]
    cdef cplx x0, x2, x3, g, tmp, pivot, factor
    cdef double norm_m, norm_inv, row_sum, best, val, w

    for idx in range(n):
        w = omega[idx]
        for i in range(4):
            for j in range(4):
                work[i][j] = -drift[i, j]
                work[i][j + 4] = 0
            work[i][i] = work[i][i] + 1j * w
            work[i][i + 4] = 1
        norm_m = 0
        for i in range(4):
            row_sum = 0
            for j in range(4):
                row_sum += abs(work[i][j])
            if row_sum > norm_m:
                norm_m = row_sum
        # Gauss-Jordan with partial pivoting on the augmented [M | I]
        for k in range(4):
            p = k
            best = abs(work[k][k])
            for i in range(k + 1, 4):
                if abs(work[i][k]) > best:
                    best = abs(work[i][k])
                    p = i
            if best == 0:
                return idx
            if p != k:
                for j in range(8):
                    tmp = work[k][j]
                    work[k][j] = work[p][j]
                    work[p][j] = tmp
            pivot = work[k][k]
            for j in range(8):
                work[k][j] = work[k][j] / pivot
            for i in range(4):
                if i != k:
                    factor = work[i][k]
                    if factor != 0:
                        for j in range(8):
                            work[i][j] = work[i][j] - factor * work[k][j]
        norm_inv = 0
        for i in range(4):
            row_sum = 0
            for j in range(4):
                row_sum += abs(work[i][j + 4])
            if row_sum > norm_inv:
                norm_inv = row_sum
        if norm_m * norm_inv > cond_limit:
            return idx
        val = 0
        for k in range(4):
            x0 = 0
            x2 = 0
            x3 = 0
            for j in range(4):
                x0 = x0 + work[0][j + 4] * noise[j, k]
                x2 = x2 + work[2][j + 4] * noise[j, k]
                x3 = x3 + work[3][j + 4] * noise[j, k]
            g = coef[1] * x0 + coef[2] * x2 + coef[3] * x3
            if k == 0:
                g = g + coef[0]
            val += weights[k] * (g.real * g.real + g.imag * g.imag)
        out[idx] = val
    return -1
