"""Loop kernels compiled with numba; see ``_kernels_numpy`` for the contract."""

import math

import numpy as np
from numba import njit

CLAMP = 500.0


@njit(cache=True)
def laplacian(f, ihx2, ihy2):
    nx, ny = f.shape
    out = np.empty_like(f)
    for i in range(nx):
        ip = i + 1 if i + 1 < nx else 0
        im = i - 1 if i > 0 else nx - 1
        for j in range(ny):
            jp = j + 1 if j + 1 < ny else 0
            jm = j - 1 if j > 0 else ny - 1
            c = f[i, j]
            out[i, j] = (f[ip, j] + f[im, j] - 2.0 * c) * ihx2 + (f[i, jp] + f[i, jm] - 2.0 * c) * ihy2
    return out


@njit(cache=True)
def helmholtz_apply(x, D, ihx2, ihy2):
    out = laplacian(x, ihx2, ihy2)
    nx, ny = x.shape
    for i in range(nx):
        for j in range(ny):
            out[i, j] = D[i, j] * x[i, j] - out[i, j]
    return out


@njit(cache=True)
def _logistic(u):
    if u > CLAMP:
        u = CLAMP
    elif u < -CLAMP:
        u = -CLAMP
    return 1.0 / (1.0 + math.exp(-u))


@njit(cache=True)
def logistic(u):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        for j in range(u.shape[1]):
            out[i, j] = _logistic(u[i, j])
    return out


@njit(cache=True)
def residual_taubes(v, S, ihx2, ihy2, K, src):
    R = laplacian(v, ihx2, ihy2)
    D = np.empty_like(v)
    nx, ny = v.shape
    for i in range(nx):
        for j in range(ny):
            e = math.exp(S[i, j] + v[i, j])
            R[i, j] -= K * (e - 1.0) + src
            D[i, j] = K * e
    return R, D


@njit(cache=True)
def residual_cp1(v, S, ihx2, ihy2, A, t, src):
    R = laplacian(v, ihx2, ihy2)
    D = np.empty_like(v)
    nx, ny = v.shape
    for i in range(nx):
        for j in range(ny):
            s = _logistic(S[i, j] + v[i, j])
            R[i, j] -= A * (math.pi * s - t) + src
            D[i, j] = A * math.pi * s * (1.0 - s)
    return R, D


@njit(cache=True)
def _grad2(f, i, j, ihx, ihy):
    nx, ny = f.shape
    ip = i + 1 if i + 1 < nx else 0
    im = i - 1 if i > 0 else nx - 1
    jp = j + 1 if j + 1 < ny else 0
    jm = j - 1 if j > 0 else ny - 1
    gx = (f[ip, j] - f[im, j]) * (0.5 * ihx)
    gy = (f[i, jp] - f[i, jm]) * (0.5 * ihy)
    return gx * gx + gy * gy


@njit(cache=True)
def energy_density_taubes(w, ihx, ihy, a, t):
    out = np.empty_like(w)
    for i in range(w.shape[0]):
        for j in range(w.shape[1]):
            e = math.exp(w[i, j])
            out[i, j] = a * a * t * t * (e - 1.0) ** 2 + t / (4.0 * math.pi) * e * _grad2(w, i, j, ihx, ihy)
    return out


@njit(cache=True)
def energy_density_cp1(u, ihx, ihy, a, t):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        for j in range(u.shape[1]):
            s = _logistic(u[i, j])
            mu = t - math.pi * s
            out[i, j] = a * a * mu * mu + 0.25 * s * (1.0 - s) * _grad2(u, i, j, ihx, ihy)
    return out


@njit(cache=True)
def source_mask(nx, ny, hx, hy, nodes, radius):
    Lx, Ly = nx * hx, ny * hy
    r2 = radius * radius
    mask = np.zeros((nx, ny), dtype=np.bool_)
    for i in range(nx):
        for j in range(ny):
            for k in range(nodes.shape[0]):
                dx = abs(i * hx - nodes[k, 0] * hx)
                dx = min(dx, Lx - dx)
                dy = abs(j * hy - nodes[k, 1] * hy)
                dy = min(dy, Ly - dy)
                if dx * dx + dy * dy <= r2:
                    mask[i, j] = True
                    break
    return mask
