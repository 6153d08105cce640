"""Spatial kernels for the axisymmetric graph flow u(v), v in [0, pi].

For the graph u(v) in the warped metric du^2 + sin^2 u (dv^2 + sin^2 v dzeta^2)
with L = sqrt(u_v^2 + sin^2 u) and the normal pointing towards u = 0:

    kappa_profile = (-sin u u_vv + sin^2 u cos u + 2 u_v^2 cos u) / L^3
    kappa_orbit   = cos u / L - u_v cos v / (L sin u sin v)
    du/dt         = -H L / sin u,    H = kappa_profile + (n-1) kappa_orbit

At the poles u_v = 0 (even ghost values u_{-1} = u_1) and both curvatures
tend to cot u - u_vv / sin^2 u.  Each kernel has a numba loop version and a
vectorised numpy version; ``PINCHFLOW_DISABLE_NUMBA=1`` selects numpy.
"""
import math

import numpy as np

from .._accel import HAVE_NUMBA, njit


# -- numpy ------------------------------------------------------------------

def _padded(u):
    up = np.empty(len(u) + 2)
    up[1:-1] = u
    up[0] = u[1]
    up[-1] = u[-2]
    return up


def curvatures_numpy(u, dv, cosv, sinv, n):
    up = _padded(u)
    uv = (up[2:] - up[:-2]) / (2 * dv)
    uvv = (up[2:] - 2 * u + up[:-2]) / (dv * dv)
    su, cu = np.sin(u), np.cos(u)
    L = np.sqrt(uv * uv + su * su)
    kp = (-su * uvv + su * su * cu + 2 * uv * uv * cu) / L ** 3
    ko = np.empty_like(u)
    ko[1:-1] = cu[1:-1] / L[1:-1] - uv[1:-1] * cosv[1:-1] / (L[1:-1] * su[1:-1] * sinv[1:-1])
    for j in (0, len(u) - 1):
        ko[j] = cu[j] / su[j] - uvv[j] / (su[j] * su[j])
    return kp, ko, L


def rhs_numpy(u, dv, cosv, sinv, n):
    kp, ko, L = curvatures_numpy(u, dv, cosv, sinv, n)
    return -(kp + (n - 1) * ko) * L / np.sin(u)


def heun_step_numpy(u, dt, dv, cosv, sinv, n):
    f0 = rhs_numpy(u, dv, cosv, sinv, n)
    u1 = u + dt * f0
    f1 = rhs_numpy(u1, dv, cosv, sinv, n)
    return u + 0.5 * dt * (f0 + f1)


# -- numba loops --------------------------------------------------------------

@njit(cache=True)
def _curvatures_loop(u, dv, cosv, sinv, n, kp, ko, L):
    m = u.shape[0]
    for j in range(m):
        um = u[j - 1] if j > 0 else u[1]
        upp = u[j + 1] if j < m - 1 else u[m - 2]
        uv = (upp - um) / (2 * dv)
        uvv = (upp - 2 * u[j] + um) / (dv * dv)
        su = math.sin(u[j])
        cu = math.cos(u[j])
        ll = math.sqrt(uv * uv + su * su)
        L[j] = ll
        kp[j] = (-su * uvv + su * su * cu + 2 * uv * uv * cu) / (ll * ll * ll)
        if j == 0 or j == m - 1:
            ko[j] = cu / su - uvv / (su * su)
        else:
            ko[j] = cu / ll - uv * cosv[j] / (ll * su * sinv[j])


@njit(cache=True)
def _rhs_loop(u, dv, cosv, sinv, n, out, kp, ko, L):
    _curvatures_loop(u, dv, cosv, sinv, n, kp, ko, L)
    for j in range(u.shape[0]):
        out[j] = -(kp[j] + (n - 1) * ko[j]) * L[j] / math.sin(u[j])


@njit(cache=True)
def _heun_loop(u, dt, dv, cosv, sinv, n):
    m = u.shape[0]
    f0 = np.empty(m)
    f1 = np.empty(m)
    kp = np.empty(m)
    ko = np.empty(m)
    L = np.empty(m)
    u1 = np.empty(m)
    _rhs_loop(u, dv, cosv, sinv, n, f0, kp, ko, L)
    for j in range(m):
        u1[j] = u[j] + dt * f0[j]
    _rhs_loop(u1, dv, cosv, sinv, n, f1, kp, ko, L)
    out = np.empty(m)
    for j in range(m):
        out[j] = u[j] + 0.5 * dt * (f0[j] + f1[j])
    return out


def curvatures_numba(u, dv, cosv, sinv, n):
    kp, ko, L = np.empty_like(u), np.empty_like(u), np.empty_like(u)
    _curvatures_loop(u, dv, cosv, sinv, n, kp, ko, L)
    return kp, ko, L


def heun_step_numba(u, dt, dv, cosv, sinv, n):
    return _heun_loop(u, dt, dv, cosv, sinv, n)


if HAVE_NUMBA:
    curvatures, heun_step = curvatures_numba, heun_step_numba
else:
    curvatures, heun_step = curvatures_numpy, heun_step_numpy


def stable_dt(u, dv, n, c_cfl):
    """Explicit step bound c dv^2 min(sin^2 u) / n for the diffusive part."""
    return c_cfl * dv * dv * float(np.min(np.sin(u) ** 2)) / n
