"""Finite-difference second fundamental form of axisymmetric hypersurfaces.

Two families in the sphere of radius 1/sqrt(K), embedded in R^{n+2}:

* ``sphere``: F(v, zeta) = (cos u, sin u cos v, sin u sin v zeta) / sqrt(K),
  a graph u(v) over the polar angle v in [0, pi];
* ``torus``:  F(a, zeta) = (cos psi cos a, cos psi sin a, sin psi zeta) / sqrt(K),
  a periodic profile psi(a).

zeta ranges over the unit sphere S^{n-1} of R^n.  Only the profile
direction is differentiated numerically; the orbit directions are great
circles through zeta, whose derivatives are written down exactly.  The
normal is oriented like the closed forms: towards u = 0 for the sphere
family (so small spheres have H > 0), along +d/dpsi for tori.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import summarize


class SingularParametrization(ValueError):
    """Frame degenerates (pole or vanishing profile tangent)."""


@dataclass
class AxisymmetricImmersion:
    family: str
    profile: object
    n: int
    kbar: float = 1.0
    zeta: np.ndarray = None
    _func: object = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.family not in ("sphere", "torus"):
            raise ValueError(f"family must be 'sphere' or 'torus', got {self.family!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.kbar > 0:
            raise ValueError("kbar must be positive")
        if self.zeta is None:
            self.zeta = np.eye(self.n)[0]
        self.zeta = np.asarray(self.zeta, dtype=float)
        if self.zeta.shape != (self.n,) or abs(np.linalg.norm(self.zeta) - 1) > 1e-12:
            raise ValueError("zeta must be a unit vector of R^n")
        top = math.pi if self.family == "sphere" else math.pi / 2
        if callable(self.profile):
            self._func = self.profile
            probe = np.asarray(self.profile(np.linspace(0, self.period, 257)), dtype=float)
        else:
            vals = np.asarray(self.profile, dtype=float)
            if self.family == "sphere":
                grid = np.linspace(0.0, math.pi, len(vals))
                self._func = CubicSpline(grid, vals, bc_type="clamped")
            else:
                grid = np.linspace(0.0, 2 * math.pi, len(vals) + 1)
                self._func = CubicSpline(grid, np.append(vals, vals[0]), bc_type="periodic")
            probe = vals
        if np.any(probe <= 0) or np.any(probe >= top):
            raise ValueError(f"profile values must lie in (0, {top:.6g})")

    @property
    def period(self):
        return math.pi if self.family == "sphere" else 2 * math.pi

    def grid_coordinate(self, index):
        if callable(self.profile):
            raise ValueError("grid indices need a sampled profile")
        m = len(self.profile)
        if self.family == "sphere":
            if not 0 <= index < m:
                raise ValueError("grid index out of range")
            return index * math.pi / (m - 1)
        return (index % m) * 2 * math.pi / m

    def value(self, s):
        return float(self._func(s))

    def components(self, s):
        """(f0, f1, w2) with F = (f0, f1, w2 zeta), unscaled by K."""
        w = self.value(s)
        if self.family == "sphere":
            return np.array([math.cos(w), math.sin(w) * math.cos(s), math.sin(w) * math.sin(s)])
        return np.array([math.cos(w) * math.cos(s), math.cos(w) * math.sin(s), math.sin(w)])

    def point(self, s, zeta):
        c = self.components(s)
        return np.concatenate([c[:2], c[2] * zeta]), c[2]

    def radial(self, s, zeta):
        """Derivative of the embedding in the profile value (u or psi)."""
        w = self.value(s)
        if self.family == "sphere":
            return np.concatenate([[-math.sin(w), math.cos(w) * math.cos(s)],
                                   math.cos(w) * math.sin(s) * zeta])
        return np.concatenate([[-math.sin(w) * math.cos(s), -math.sin(w) * math.sin(s)],
                               math.cos(w) * zeta])


def embed(imm, coords, zeta=None):
    """Ambient point (n+2 reals) at profile coordinate ``coords``."""
    s = float(coords)
    if imm.family == "sphere" and not 0 <= s <= math.pi:
        raise ValueError("v must lie in [0, pi]")
    z = imm.zeta if zeta is None else np.asarray(zeta, dtype=float)
    if z.shape != (imm.n,) or abs(np.linalg.norm(z) - 1) > 1e-12:
        raise ValueError("zeta must be a unit vector of R^n")
    p, _ = imm.point(s, z)
    return p / math.sqrt(imm.kbar)


def _orbit_basis(zeta):
    """Orthonormal basis of the tangent space of S^{n-1} at zeta."""
    n = len(zeta)
    q, _ = np.linalg.qr(np.column_stack([zeta, np.eye(n)]))
    return q[:, 1:n].T


def frame(imm, s, h=1e-4, zeta=None):
    """Profile tangent, second derivative, orbit vectors and unit normal at s."""
    z = imm.zeta if zeta is None else np.asarray(zeta, dtype=float)
    scale = 1.0 / math.sqrt(imm.kbar)
    # difference the three scalar components so the stencil does not depend on zeta
    c0 = imm.components(s)
    cp = imm.components(s + h)
    cm = imm.components(s - h)
    d1 = scale * (cp - cm) / (2 * h)
    d2 = scale * (cp - 2 * c0 + cm) / (h * h)
    lift = lambda c: np.concatenate([c[:2], c[2] * z])  # noqa: E731
    p, w2 = lift(c0), c0[2]
    ts, tss = lift(d1), lift(d2)
    if w2 < 1e-8 or np.linalg.norm(ts) < 1e-10:
        raise SingularParametrization(f"degenerate frame at s={s}")
    orbit = np.zeros((imm.n - 1, imm.n + 2))
    orbit[:, 2:] = _orbit_basis(z)
    rows = np.vstack([p, ts, orbit])
    _, _, vt = np.linalg.svd(rows)
    nu = vt[-1]
    if np.dot(nu, imm.radial(s, z)) * (1 if imm.family == "torus" else -1) < 0:
        nu = -nu
    return p * scale, w2 * scale, ts, tss, orbit, nu


def oracle_curvature(imm, index=None, h=1e-4, at=None, zeta=None):
    """CurvatureSummary at a grid index (or profile coordinate ``at``)."""
    if (index is None) == (at is None):
        raise ValueError("give exactly one of index or at")
    s = imm.grid_coordinate(index) if index is not None else float(at)
    if imm.family == "sphere":
        vmin = 10 * math.pi / (len(imm.profile) - 1) if not callable(imm.profile) else 1e-3
        if not vmin <= s <= math.pi - vmin:
            raise SingularParametrization(f"v={s} is within the pole exclusion zone")
    z = imm.zeta if zeta is None else np.asarray(zeta, dtype=float)
    _, w2, ts, tss, _, nu = frame(imm, s, h, z)
    k_profile = float(np.dot(tss, nu) / np.dot(ts, ts))
    # orbit great circle: second derivative is -w2 zeta (in the last n slots)
    acc = np.zeros(imm.n + 2)
    acc[2:] = -w2 * z
    k_orbit = float(np.dot(acc, nu) / (w2 * w2))
    return summarize(((k_profile, 1), (k_orbit, imm.n - 1)), imm.n)
