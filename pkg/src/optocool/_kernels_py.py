"""Pure-numpy fallback for the per-frequency response kernel.

Semantics match ``optocool._kernels`` (the compiled extension): for each
omega, invert M = i*omega*I - drift, form X = M^-1 @ noise, and accumulate
sum_k weights[k] * |coef[0]*delta_k0 + coef[1]*X[0,k] + coef[2]*X[2,k]
+ coef[3]*X[3,k]|^2.  Returns the first index whose inf-norm condition number
exceeds ``cond_limit``, or -1 on success.
"""
from __future__ import annotations

import numpy as np

_EYE4 = np.eye(4)


def weighted_response_grid(drift, noise, weights, coef, omega, cond_limit, out):
    omega = np.asarray(omega, dtype=float)
    m = 1j * omega[:, None, None] * _EYE4 - drift[None, :, :]
    try:
        minv = np.linalg.inv(m)
    except np.linalg.LinAlgError:
        for idx in range(omega.size):
            try:
                np.linalg.inv(m[idx])
            except np.linalg.LinAlgError:
                return idx
        raise
    cond = np.abs(m).sum(axis=2).max(axis=1) * np.abs(minv).sum(axis=2).max(axis=1)
    bad = np.nonzero(cond > cond_limit)[0]
    if bad.size:
        return int(bad[0])
    x = minv @ noise
    g = coef[1] * x[:, 0, :] + coef[2] * x[:, 2, :] + coef[3] * x[:, 3, :]
    g[:, 0] += coef[0]
    out[:] = (np.abs(g) ** 2) @ weights
    return -1
