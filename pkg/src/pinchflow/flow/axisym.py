"""Method-of-lines mean curvature flow of axisymmetric spheres u(v).

The flow is integrated in the unit sphere and mapped to curvature K by
scaling: t = tau / K, curvatures times sqrt(K).  Time stepping is Heun's
method (RK2) under dt = c_cfl dv^2 min(sin^2 u) / n; a step that produces
non-finite values, leaves (0, pi) or moves u too far is retried with half
the step, up to 20 times.  The run stops once the round-point criteria
hold, at the blowup threshold, when the curvature has decayed, or at t_max.
"""
import math

import numpy as np

from .. import thresholds as th
from . import kernels
from .homogeneous import default_eps
from .trace import FlowConfig, FlowTrace, DiagnosticsRecord, verdict, extinction_estimate, is_round


class CFLViolation(RuntimeError):
    pass


MAX_HALVINGS = 20
PDE_BLOWUP = 1e12   # times kbar


class Grid:
    def __init__(self, size):
        self.v = np.linspace(0.0, math.pi, size)
        self.dv = math.pi / (size - 1)
        self.cosv = np.cos(self.v)
        self.sinv = np.sin(self.v)


def initial_profile(u0, grid):
    if callable(u0):
        u = np.asarray(u0(grid.v), dtype=float) * np.ones_like(grid.v)
        h = 1e-6
        ends = np.array([0.0, math.pi])
        slope = (np.asarray(u0(ends + h), dtype=float) - np.asarray(u0(ends - h), dtype=float)) / (2 * h)
        if np.any(np.abs(slope) > 1e-6):
            raise ValueError("initial profile must satisfy u'(0) = u'(pi) = 0")
    else:
        u = np.array(u0, dtype=float)
        if u.shape != grid.v.shape:
            raise ValueError(f"profile must have {len(grid.v)} samples, got {u.shape}")
    if not np.all(np.isfinite(u)) or np.any(u <= 0) or np.any(u >= math.pi):
        raise ValueError("initial profile values must lie in (0, pi)")
    return u


def diagnostics(u, grid, ctx, profile, eps, sigma, tau):
    """Pointwise invariants of the state (unit sphere) mapped to curvature K."""
    n, k = ctx.n, ctx.kbar
    kp, ko, L = kernels.curvatures(u, grid.dv, grid.cosv, grid.sinv, n)
    H = kp + (n - 1) * ko
    H2 = k * H * H
    A2 = k * (kp * kp + (n - 1) * ko * ko)
    ring = k * (n - 1) / n * (kp - ko) ** 2
    Hp = np.empty(len(H) + 2)
    Hp[1:-1], Hp[0], Hp[-1] = H, H[1], H[-2]
    Hv = (Hp[2:] - Hp[:-2]) / (2 * grid.dv)
    grad2 = k * k * Hv * Hv / (L * L)
    ar = th.ring_value(profile, ctx, H2)
    U = ring - ar + eps * th.omega(ctx, H2)
    f = ring / ar ** (1 - sigma)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(H2 > 0, ring / H2, np.where(ring == 0, 0.0, np.inf))
    mx = float(np.max(H2))
    return DiagnosticsRecord(
        t=tau / k, max_A2=float(np.max(A2)), min_H2=float(np.min(H2)), max_H2=mx,
        sup_U=float(np.max(U)), sup_f_sigma=float(np.max(f)),
        roundness=float(np.min(H2)) / mx if mx > 0 else 1.0,
        sup_gradH2=float(np.max(grad2)), sup_Aring2_over_H2=float(np.max(ratio)),
    ), (H2, ring)


def flow_axisymmetric(ctx, u0, cfg=None, keep_states=False):
    cfg = cfg or FlowConfig()
    cfg.profile.check(ctx)
    grid = Grid(cfg.grid_size)
    u = initial_profile(u0, grid)
    n, k = ctx.n, ctx.kbar
    rec, (H2, ring) = diagnostics(u, grid, ctx, cfg.profile, 0.0, cfg.sigma, 0.0)
    eps = cfg.eps if cfg.eps is not None else default_eps(ctx, cfg.profile, H2, ring)
    cfg.check_eps(ctx, eps)
    # the run normally ends on the round-point criteria; the threshold is a safety net
    thr = cfg.threshold(ctx, default=PDE_BLOWUP)
    trace = FlowTrace(records=[], kbar=k, eps=eps, sigma=cfg.sigma)

    def push(tau, state):
        r, _ = diagnostics(state, grid, ctx, cfg.profile, eps, cfg.sigma, tau)
        trace.records.append(r)
        if keep_states:
            trace.states.append(state.copy())
        return r

    tau, step, quiet, rounded = 0.0, 0, 0, False
    tau_max = cfg.t_max * k
    last = push(tau, u)
    while tau < tau_max and step < cfg.max_steps:
        if cfg.dt_policy == "cfl":
            dt = kernels.stable_dt(u, grid.dv, n, cfg.c_cfl)
        else:
            dt = cfg.dt * k
        dt = min(dt, tau_max - tau)
        for _ in range(MAX_HALVINGS + 1):
            new = kernels.heun_step(u, dt, grid.dv, grid.cosv, grid.sinv, n)
            su = np.sin(u)
            if (np.all(np.isfinite(new)) and np.all(new > 0) and np.all(new < math.pi)
                    and np.max(np.abs(new - u)) <= 0.1 * np.min(su)):
                break
            dt *= 0.5
        else:
            raise CFLViolation(f"step rejected {MAX_HALVINGS} times at t={tau / k}")
        u, tau, step = new, tau + dt, step + 1
        if step % cfg.record_stride == 0 or tau >= tau_max:
            last = push(tau, u)
            if last.max_A2 >= thr:
                trace.blowup = True
                break
            if is_round(last, k):
                rounded = True
                break
            quiet = quiet + 1 if last.max_A2 < 1e-8 * k else 0
            if quiet >= 10:
                break
    if not keep_states:
        trace.states = [u]
    if trace.blowup or rounded:
        trace.extinction_time = extinction_estimate(trace.records)
    trace.outcome = verdict(trace)
    return trace
