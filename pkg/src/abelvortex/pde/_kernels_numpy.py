"""Reference kernels in plain numpy (``np.roll`` stencils).

Arrays are indexed ``[i, j]`` with ``i`` along x. Every function here has a
loop twin in ``_kernels_numba`` with the same signature.
"""

import numpy as np

CLAMP = 500.0


def laplacian(f, ihx2, ihy2):
    return ((np.roll(f, 1, 0) + np.roll(f, -1, 0) - 2.0 * f) * ihx2
            + (np.roll(f, 1, 1) + np.roll(f, -1, 1) - 2.0 * f) * ihy2)


def helmholtz_apply(x, D, ihx2, ihy2):
    """``(diag(D) - Lap) x``."""
    return D * x - laplacian(x, ihx2, ihy2)


def logistic(u):
    return 1.0 / (1.0 + np.exp(-np.clip(u, -CLAMP, CLAMP)))


def residual_taubes(v, S, ihx2, ihy2, K, src):
    e = np.exp(S + v)
    R = laplacian(v, ihx2, ihy2) - K * (e - 1.0) - src
    return R, K * e


def residual_cp1(v, S, ihx2, ihy2, A, t, src):
    s = logistic(S + v)
    R = laplacian(v, ihx2, ihy2) - A * (np.pi * s - t) - src
    return R, A * np.pi * s * (1.0 - s)


def _grad2(f, ihx, ihy):
    gx = (np.roll(f, -1, 0) - np.roll(f, 1, 0)) * (0.5 * ihx)
    gy = (np.roll(f, -1, 1) - np.roll(f, 1, 1)) * (0.5 * ihy)
    return gx * gx + gy * gy


def energy_density_taubes(w, ihx, ihy, a, t):
    e = np.exp(w)
    return a * a * t * t * (e - 1.0) ** 2 + t / (4.0 * np.pi) * e * _grad2(w, ihx, ihy)


def energy_density_cp1(u, ihx, ihy, a, t):
    s = logistic(u)
    mu = t - np.pi * s
    return a * a * mu * mu + 0.25 * s * (1.0 - s) * _grad2(u, ihx, ihy)


def source_mask(nx, ny, hx, hy, nodes, radius):
    """Nodes within periodic distance ``radius`` of any of ``nodes``."""
    Lx, Ly = nx * hx, ny * hy
    x = np.arange(nx) * hx
    y = np.arange(ny) * hy
    mask = np.zeros((nx, ny), dtype=np.bool_)
    for k in range(nodes.shape[0]):
        dx = np.abs(x - nodes[k, 0] * hx)
        dx = np.minimum(dx, Lx - dx)
        dy = np.abs(y - nodes[k, 1] * hy)
        dy = np.minimum(dy, Ly - dy)
        mask |= dx[:, None] ** 2 + dy[None, :] ** 2 <= radius * radius
    return mask
