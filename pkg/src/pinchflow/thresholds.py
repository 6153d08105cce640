"""Pinching threshold functions |A|^2 <= f(|H|^2) and their traceless forms.

All functions take ``x = |H|^2`` as a float or a numpy array and work in
binary64.  Every threshold is jointly homogeneous of degree one in
``(x, kbar)``.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np


class DimensionError(ValueError):
    """Profile used outside the dimensions where it is defined."""


class DerivativeSingularity(ValueError):
    """Derivative requested at the x = 0 cusp of an Alpha-type profile."""


class Kind(Enum):
    LINEAR_HUISKEN = "LinearHuisken"
    LINEAR_BAKER = "LinearBaker"
    ALPHA = "Alpha"
    GAMMA = "Gamma"
    SQRT_A = "SqrtA"
    B = "B"


class DeltaConvention(Enum):
    INTRO = "Intro"
    SECTION5 = "Section5"


@dataclass(frozen=True)
class SphereContext:
    n: int
    kbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DimensionError(f"n must be an integer >= 2, got {self.n}")
        if not self.kbar > 0:
            raise ValueError(f"kbar must be positive, got {self.kbar}")


@dataclass(frozen=True)
class ThresholdProfile:
    kind: Kind
    delta_convention: DeltaConvention = DeltaConvention.SECTION5

    @classmethod
    def parse(cls, text):
        """Build a profile from names like ``SqrtA``, ``B`` or ``B(Intro)``."""
        text = text.strip()
        conv = DeltaConvention.SECTION5
        if "(" in text:
            name, _, rest = text.partition("(")
            conv = DeltaConvention(rest.rstrip(")").strip())
            text = name.strip()
        for kind in Kind:
            if kind.value.lower() == text.lower():
                return cls(kind, conv)
        raise ValueError(f"unknown threshold profile {text!r}")

    @property
    def label(self):
        if self.kind is Kind.B:
            return f"B({self.delta_convention.value})"
        return self.kind.value

    def check(self, ctx):
        n = ctx.n
        if self.kind is Kind.GAMMA and n < 6:
            raise DimensionError(f"Gamma requires n >= 6, got n={n}")
        if self.kind is Kind.B:
            if self.delta_convention is DeltaConvention.INTRO and not 4 <= n <= 6:
                raise DimensionError(f"B(Intro) requires 4 <= n <= 6, got n={n}")
            if n < 4:
                raise DimensionError(f"B requires n >= 4, got n={n}")


SQRT_A = ThresholdProfile(Kind.SQRT_A)
ALPHA = ThresholdProfile(Kind.ALPHA)


def _as_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("x = |H|^2 must be nonnegative")
    return arr


def _out(x, val):
    return float(val) if np.ndim(x) == 0 else val


def delta_coefficient(n, convention=DeltaConvention.SECTION5):
    """Blend weight of the b profile."""
    convention = DeltaConvention(convention)
    if n < 4:
        raise DimensionError(f"delta requires n >= 4, got n={n}")
    if convention is DeltaConvention.INTRO and n > 6:
        raise DimensionError(f"Intro delta is defined for n = 4, 5, 6, got n={n}")
    if convention is DeltaConvention.SECTION5 and n >= 13:
        return 2.0 * (2 * n - 5) / (n * n - 2)
    return (np.sqrt(12.0 * n + 9.0) - 7.0) / (2.0 * (n - 2))


# -- closed forms ---------------------------------------------------------

def _sqrt_a(n, k, x):
    u = x / (n - 1) + 2 * k
    return np.sqrt(u * u + (2 * n - 4) * k * k)


def _sqrt_a_d(n, k, x):
    a = _sqrt_a(n, k, x)
    u = x / (n - 1) + 2 * k
    return u / ((n - 1) * a), 2 * (n - 2) * k * k / ((n - 1) ** 2 * a ** 3)


def _alpha(n, k, x):
    s = np.sqrt(x * x + 4 * (n - 1) * k * x)
    return n * k + n * x / (2 * (n - 1)) - (n - 2) / (2 * (n - 1)) * s


def _alpha_d(n, k, x):
    s = np.sqrt(x * x + 4 * (n - 1) * k * x)
    d1 = n / (2 * (n - 1)) - (n - 2) / (2 * (n - 1)) * (x + 2 * (n - 1) * k) / s
    d2 = 2 * (n - 1) * (n - 2) * k * k / s ** 3
    return d1, d2


def gamma_x0(n, kbar=1.0):
    """Expansion point of the quadratic branch of Gamma."""
    r = np.sqrt(n - 1.0)
    return (2 * n + 2) / (n - 4) * r * (r - (n - 4) / (2 * n + 2)) ** 2 * kbar


def _beta(n, k, x):
    x0 = gamma_x0(n, k)
    d1, d2 = _alpha_d(n, k, x0)
    h = x - x0
    return _alpha(n, k, x0) + d1 * h + 0.5 * d2 * h * h


def _gamma(n, k, x):
    return np.minimum(_alpha(n, k, x), _beta(n, k, x))


def _gamma_d(n, k, x):
    x0 = gamma_x0(n, k)
    a1, a2 = _alpha_d(n, k, x)
    b1, b2 = _alpha_d(n, k, x0)
    b1 = b1 + b2 * (x - x0)
    use_alpha = x >= x0
    return np.where(use_alpha, a1, b1), np.where(use_alpha, a2, b2)


def _linear_coeffs(kind, n):
    if kind is Kind.LINEAR_HUISKEN:
        return (0.75, 4.0 / 3.0) if n == 2 else (1.0 / (n - 1), 2.0)
    return (4.0 / (3 * n), 2.0 * (n - 1) / 3.0) if n <= 3 else (1.0 / (n - 1), 2.0)


def threshold_value(profile, ctx, x):
    """f(x) for the pinching profile at x = |H|^2."""
    profile.check(ctx)
    xa = _as_x(x)
    n, k = ctx.n, ctx.kbar
    kind = profile.kind
    if kind in (Kind.LINEAR_HUISKEN, Kind.LINEAR_BAKER):
        c1, c0 = _linear_coeffs(kind, n)
        val = c1 * xa + c0 * k
    elif kind is Kind.SQRT_A:
        val = _sqrt_a(n, k, xa)
    elif kind is Kind.ALPHA:
        val = _alpha(n, k, xa)
    elif kind is Kind.GAMMA:
        val = _gamma(n, k, xa)
    else:
        d = delta_coefficient(n, profile.delta_convention)
        val = (1 - d) * (xa / (n - 1) + 2 * k) + d * _alpha(n, k, xa)
    return _out(x, val)


def threshold_derivatives(profile, ctx, x):
    """(f'(x), f''(x)); rejects x = 0 for the Alpha-type profiles."""
    profile.check(ctx)
    xa = _as_x(x)
    n, k = ctx.n, ctx.kbar
    kind = profile.kind
    if kind in (Kind.ALPHA, Kind.B) and np.any(xa == 0):
        raise DerivativeSingularity(f"{profile.label} has an infinite derivative at x = 0")
    if kind in (Kind.LINEAR_HUISKEN, Kind.LINEAR_BAKER):
        c1, _ = _linear_coeffs(kind, n)
        d1, d2 = c1 + 0 * xa, 0 * xa
    elif kind is Kind.SQRT_A:
        d1, d2 = _sqrt_a_d(n, k, xa)
    elif kind is Kind.ALPHA:
        d1, d2 = _alpha_d(n, k, xa)
    elif kind is Kind.GAMMA:
        d1, d2 = _gamma_d(n, k, xa)
    else:
        d = delta_coefficient(n, profile.delta_convention)
        a1, a2 = _alpha_d(n, k, xa)
        d1, d2 = (1 - d) / (n - 1) + d * a1, d * a2
    return _out(x, d1), _out(x, d2)


def ring_value(profile, ctx, x):
    """Traceless form f(x) - x/n (a-ring, b-ring)."""
    val = threshold_value(profile, ctx, x) - _as_x(x) / ctx.n
    return _out(x, val)


def ring_derivatives(profile, ctx, x):
    d1, d2 = threshold_derivatives(profile, ctx, x)
    return d1 - 1.0 / ctx.n, d2


def omega(ctx, x):
    """Comparison weight x/(n-1) + 2 n kbar used in the epsilon margin."""
    xa = _as_x(x)
    return _out(x, xa / (ctx.n - 1) + 2 * ctx.n * ctx.kbar)


def admissible_sigma(n, eps, p):
    """Largest sigma allowed by the L^p iteration, and the floor on p."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    if not 0 < eps < 1.0 / n ** 2:
        raise ValueError("eps must lie in (0, 1/n^2)")
    sigma = min(eps * eps / (3 * np.sqrt(2.0 * n)),
                n * eps * eps / 60.0,
                n * eps * np.sqrt(eps) / (24 * np.sqrt(p - 1.0)))
    return float(sigma), n ** 3 / (32.0 * eps) + 1.0
