"""Exact mean curvature flow of geodesic spheres and Clifford tori.

Both families stay homogeneous, so the flow reduces to one ODE:

    sphere  (phi = sqrt(K) rho):  dphi/dt = -n K cot(phi)
    torus   (psi):                dpsi/dt =  K (tan psi - (n-1) cot psi)

integrated with classical RK4 under dt = min(dt_cap, c_stiff / |f'|).
"""
import math

import numpy as np

from .. import geometry as geo
from .. import thresholds as th
from .trace import FlowConfig, FlowTrace, DiagnosticsRecord, verdict, extinction_estimate


def default_eps(ctx, profile, H2, Aring2):
    """Half the initial pinching margin min (ring - |A_ring|^2)/omega, capped at 1/(2n^2)."""
    H2 = np.atleast_1d(np.asarray(H2, dtype=float))
    Aring2 = np.atleast_1d(np.asarray(Aring2, dtype=float))
    margin = np.min((th.ring_value(profile, ctx, H2) - Aring2) / th.omega(ctx, H2))
    return float(max(0.0, min(1.0 / (2 * ctx.n ** 2), margin / 2)))


def record_of(t, summary, ctx, profile, eps, sigma):
    U, f = geo.pinching_margin_U(summary, profile, ctx, eps, sigma)
    H2, ring = summary.normH2, summary.normAring2
    if H2 > 0:
        ratio = ring / H2
    else:
        ratio = 0.0 if ring == 0 else math.inf
    return DiagnosticsRecord(t=t, max_A2=summary.normA2, min_H2=H2, max_H2=H2, sup_U=U,
                             sup_f_sigma=f, roundness=1.0, sup_gradH2=0.0,
                             sup_Aring2_over_H2=ratio)


def _rk4(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


class _Family:
    """ODE right side, stiffness and model for one homogeneous family."""

    def __init__(self, kind, ctx):
        self.kind, self.ctx = kind, ctx
        n, k = ctx.n, ctx.kbar
        if kind == "sphere":
            self.rhs = lambda p: -n * k / math.tan(p)
            self.stiff = lambda p: n * k / math.sin(p) ** 2
            self.fixed = math.pi / 2
        elif kind == "clifford":
            self.rhs = lambda p: k * (math.tan(p) - (n - 1) / math.tan(p))
            self.stiff = lambda p: k * (1 / math.cos(p) ** 2 + (n - 1) / math.sin(p) ** 2)
            self.fixed = geo.minimal_clifford_psi(n)
        else:
            raise ValueError(f"homogeneous flows are 'sphere' or 'clifford', got {kind!r}")

    def model(self, p, stationary=False):
        n = self.ctx.n
        if self.kind == "sphere":
            if stationary:
                return geo.Equator(n)
            return geo.GeodesicSphere(n, p / math.sqrt(self.ctx.kbar))
        return geo.CliffordTorus(n, p)

    def summary(self, p, stationary=False, r1_factor=geo.R1_FACTOR):
        s = geo.curvature_of(self.model(p, stationary), self.ctx, r1_factor)
        if stationary and self.kind == "clifford":
            # minimal torus: H = 0 exactly, |A|^2 = n K
            s = geo.summarize(((math.sqrt(self.ctx.kbar * (self.ctx.n - 1)), 1),
                               (-math.sqrt(self.ctx.kbar / (self.ctx.n - 1)), self.ctx.n - 1)),
                              self.ctx.n, r1_factor)
            s = geo.CurvatureSummary(s.principal, 0.0, 0.0, self.ctx.n * self.ctx.kbar,
                                     self.ctx.n * self.ctx.kbar, s.R1, 0.0, 0.0)
        return s

    def is_fixed(self, p):
        return abs(p - self.fixed) <= 4 * math.ulp(self.fixed)


def _flow(kind, ctx, p0, cfg):
    fam = _Family(kind, ctx)
    stationary = fam.is_fixed(p0)
    s0 = fam.summary(p0, stationary)
    eps = cfg.eps if cfg.eps is not None else default_eps(ctx, cfg.profile, s0.normH2, s0.normAring2)
    cfg.check_eps(ctx, eps)
    sigma = cfg.sigma
    thr = cfg.threshold(ctx)
    trace = FlowTrace(records=[], kbar=ctx.kbar, eps=eps, sigma=sigma)

    def push(t, p):
        trace.records.append(record_of(t, fam.summary(p, stationary), ctx, cfg.profile, eps, sigma))
        trace.states.append(p)

    if stationary:
        for t in np.linspace(0.0, cfg.t_max, 11):
            push(float(t), p0)
        trace.outcome = verdict(trace)
        return trace

    t, p, step = 0.0, p0, 0
    push(t, p)
    while t < cfg.t_max and step < cfg.max_steps:
        dt = min(cfg.dt, cfg.c_stiff / fam.stiff(p), cfg.t_max - t)
        p = _rk4(fam.rhs, p, dt)
        t += dt
        step += 1
        if not 0 < p < (math.pi if kind == "sphere" else math.pi / 2):
            raise FloatingPointError(f"state left its domain at t={t}; reduce c_stiff")
        a2 = fam.summary(p).normA2
        done = a2 >= thr or t >= cfg.t_max
        if step % cfg.record_stride == 0 or done:
            push(t, p)
        if a2 >= thr:
            trace.blowup = True
            break
    if trace.blowup:
        trace.extinction_time = extinction_estimate(trace.records)
    trace.outcome = verdict(trace)
    return trace


def flow_geodesic_sphere(ctx, rho0, cfg=None):
    cfg = cfg or FlowConfig()
    phi0 = math.sqrt(ctx.kbar) * rho0
    if not 0 < phi0 < math.pi:
        raise ValueError(f"rho0 must lie in (0, pi/sqrt(kbar)), got {rho0}")
    trace = _flow("sphere", ctx, phi0, cfg)
    trace.states = [p / math.sqrt(ctx.kbar) for p in trace.states]
    return trace


def flow_clifford(ctx, psi0, cfg=None):
    cfg = cfg or FlowConfig()
    if not 0 < psi0 < math.pi / 2:
        raise ValueError(f"psi0 must lie in (0, pi/2), got {psi0}")
    return _flow("clifford", ctx, psi0, cfg)


def sphere_exact_rho(ctx, rho0, t):
    """Closed-form radius: cos(sqrt(K) rho) = cos(sqrt(K) rho0) exp(n K t)."""
    c = math.cos(math.sqrt(ctx.kbar) * rho0) * math.exp(ctx.n * ctx.kbar * t)
    return math.acos(max(-1.0, min(1.0, c))) / math.sqrt(ctx.kbar)


def sphere_extinction_time(ctx, rho0):
    c = math.cos(math.sqrt(ctx.kbar) * rho0)
    if c <= 0:
        return None
    return -math.log(c) / (ctx.n * ctx.kbar)


def _derivative(t, q):
    """Three-point derivative on a non-uniform grid (interior points)."""
    h0 = t[1:-1] - t[:-2]
    h1 = t[2:] - t[1:-1]
    return (-h1 / (h0 * (h0 + h1)) * q[:-2] + (h1 - h0) / (h0 * h1) * q[1:-1]
            + h0 / (h1 * (h0 + h1)) * q[2:])


def evolution_consistency(kind, which, r1_factor=1.0, ctx=None, x0=None, dt=1e-5,
                          t_end=0.02, c_stiff=1e-3):
    """Max relative residual of the homogeneous |H|^2 or |A|^2 evolution equation.

    On homogeneous states the Laplacian and gradient terms vanish, leaving
    d|H|^2/dt = 2 R2 + 2 n K |H|^2 and d|A|^2/dt = 2 R1 + 4 K |H|^2 - 2 n K |A|^2,
    with R1 evaluated using ``r1_factor``.
    """
    if which not in ("H2", "A2"):
        raise ValueError("which must be 'H2' or 'A2'")
    ctx = ctx or th.SphereContext(7)
    if kind == "equator":
        kind, x0 = "sphere", math.pi / 2
    if kind not in ("sphere", "clifford"):
        raise ValueError(f"consistency applies to homogeneous flows only, got {kind!r}")
    fam = _Family(kind, ctx)
    if x0 is None:
        x0 = math.pi / 3 if kind == "sphere" else fam.fixed + 0.01
    p0 = math.sqrt(ctx.kbar) * x0 if kind == "sphere" else x0
    stationary = fam.is_fixed(p0)
    ts, ps = [0.0], [p0]
    t, p = 0.0, p0
    while t < t_end and not stationary:
        h = min(dt, c_stiff / fam.stiff(p))
        p = _rk4(fam.rhs, p, h)
        t += h
        ts.append(t)
        ps.append(p)
    if stationary:
        ts, ps = [0.0, dt, 2 * dt], [p0] * 3
    n, k = ctx.n, ctx.kbar
    sums = [fam.summary(q, stationary, r1_factor) for q in ps]
    if which == "H2":
        q = np.array([s.normH2 for s in sums])
        rhs = np.array([2 * s.R2 + 2 * n * k * s.normH2 for s in sums])
    else:
        q = np.array([s.normA2 for s in sums])
        rhs = np.array([2 * s.R1 + 4 * k * s.normH2 - 2 * n * k * s.normA2 for s in sums])
    lhs = _derivative(np.array(ts), q)
    rhs = rhs[1:-1]
    err = np.abs(lhs - rhs)
    scale = np.abs(rhs)
    rel = np.where(scale > 0, err / np.where(scale > 0, scale, 1.0), np.where(err > 0, np.inf, 0.0))
    return float(np.max(rel))
