"""Exact extrinsic invariants of model hypersurfaces in the round sphere.

Normal convention: a geodesic sphere of radius rho < pi/(2 sqrt(K)) has
H > 0 (inward normal).  Clifford tori S^1(cos psi) x S^{n-1}(sin psi) use the
normal for which the circle factor has curvature +tan(psi).
"""
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import thresholds as th

# factor multiplying sum_{a,b}(sum_{ij} h_ija h_ijb)^2 in R1; the flow
# consistency check selects 1 for hypersurfaces
R1_FACTOR = 1.0


@dataclass(frozen=True)
class GeodesicSphere:
    n: int
    rho: float


@dataclass(frozen=True)
class CliffordTorus:
    n: int
    psi: float


@dataclass(frozen=True)
class Equator:
    n: int


@dataclass(frozen=True)
class CurvatureSummary:
    principal: tuple
    H: float
    normH2: float
    normA2: float
    normAring2: float
    R1: float
    R2: float
    R3: float
    P2: float = 0.0
    normRmPerp2: float = 0.0


class Classification(Enum):
    STRICTLY_INSIDE = "StrictlyInside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


def _check_model(model, ctx):
    if model.n != ctx.n:
        raise ValueError(f"model dimension {model.n} does not match context n={ctx.n}")
    if isinstance(model, GeodesicSphere):
        if not 0 < model.rho < math.pi / math.sqrt(ctx.kbar):
            raise ValueError(f"rho must lie in (0, pi/sqrt(kbar)), got {model.rho}")
    elif isinstance(model, CliffordTorus):
        if not 0 < model.psi < math.pi / 2:
            raise ValueError(f"psi must lie in (0, pi/2), got {model.psi}")
    elif not isinstance(model, Equator):
        raise TypeError(f"unknown model {model!r}")


def principal_curvatures(model, ctx):
    """List of (curvature, multiplicity)."""
    _check_model(model, ctx)
    sk = math.sqrt(ctx.kbar)
    n = model.n
    if isinstance(model, GeodesicSphere):
        return ((sk / math.tan(sk * model.rho), n),)
    if isinstance(model, CliffordTorus):
        return ((sk * math.tan(model.psi), 1), (-sk / math.tan(model.psi), n - 1))
    return ((0.0, n),)


def _traceless(principal, n):
    """Traceless principal curvatures; exactly zero for a single distinct value."""
    if len({k for k, _ in principal}) == 1:
        return tuple((0.0, m) for _, m in principal)
    H = math.fsum(k * m for k, m in principal)
    return tuple((k - H / n, m) for k, m in principal)


def summarize(principal, n, r1_factor=R1_FACTOR):
    """CurvatureSummary of a hypersurface from its principal curvatures."""
    H = math.fsum(k * m for k, m in principal)
    A2 = math.fsum(k * k * m for k, m in principal)
    H2 = H * H
    ring = math.fsum(mu * mu * m for mu, m in _traceless(principal, n))
    cubes = math.fsum(k ** 3 * m for k, m in principal)
    return CurvatureSummary(principal=tuple(principal), H=H, normH2=H2, normA2=A2,
                            normAring2=ring, R1=r1_factor * A2 * A2, R2=H2 * A2,
                            R3=H * cubes)


def curvature_of(model, ctx, r1_factor=R1_FACTOR):
    return summarize(principal_curvatures(model, ctx), model.n, r1_factor)


def sharpness_gap(torus, ctx, exact=True):
    """Both sides of |A|^4 - (|H|^2/(n-1) + 2)^2 - (2n-4) = ((n-1)^2-1)/(n-1)^2 tan^4 psi.

    With ``exact`` the two sides are evaluated in rational arithmetic from the
    same binary64 value of tan(psi); the left side is a difference of terms of
    size cot^4(psi), so plain floats lose every digit as psi -> 0.
    """
    if ctx.kbar != 1.0:
        raise ValueError("the sharpness identity is stated for kbar = 1")
    _check_model(torus, ctx)
    n = torus.n
    if exact:
        t = Fraction(math.tan(torus.psi))
        m = n - 1
        a2 = t * t + m / (t * t)
        h2 = (t - m / t) ** 2
        lhs = a2 * a2 - (h2 / m + 2) ** 2 - (2 * n - 4)
        rhs = Fraction(m * m - 1, m * m) * t ** 4
        return float(lhs), float(rhs)
    s = curvature_of(torus, ctx)
    lhs = s.normA2 ** 2 - (s.normH2 / (n - 1) + 2) ** 2 - (2 * n - 4)
    rhs = ((n - 1) ** 2 - 1) / (n - 1) ** 2 * math.tan(torus.psi) ** 4
    return lhs, rhs


def classify(summary, profile, ctx):
    profile.check(ctx)
    f = th.threshold_value(profile, ctx, summary.normH2)
    tol = 1e-12 * (1 + f)
    if abs(summary.normA2 - f) <= tol:
        return Classification.BOUNDARY
    return Classification.STRICTLY_INSIDE if summary.normA2 < f else Classification.OUTSIDE


def pinching_margin_U(summary, profile, ctx, eps, sigma):
    """U = |A_ring|^2 - ring + eps omega and f_sigma = |A_ring|^2 / ring^(1-sigma)."""
    if not 0 <= eps < 1.0 / ctx.n ** 2:
        raise ValueError("eps must lie in [0, 1/n^2)")
    if not 0 <= sigma < 1:
        raise ValueError("sigma must lie in [0, 1)")
    ring = th.ring_value(profile, ctx, summary.normH2)
    U = summary.normAring2 - ring + eps * th.omega(ctx, summary.normH2)
    return U, summary.normAring2 / ring ** (1 - sigma)


def ricci_lower_bound(summary, ctx):
    n, k = ctx.n, ctx.kbar
    h = math.sqrt(summary.normH2)
    ar = math.sqrt(max(summary.normAring2, 0.0))
    return (n - 1) / n * (n * k + summary.normH2 / n - summary.normAring2
                          - (n - 2) / math.sqrt(n * (n - 1)) * h * ar)


def estimate_checks(summary, ctx, eps):
    """Slack (lhs - rhs, nonnegative when the estimate holds) of each curvature estimate.

    R3 - R1 and R1 - R2/n are expanded in traceless curvatures mu_i, where for a
    hypersurface R3 - R1 = |H|^2 |A_ring|^2 / n + H sum mu^3 - |A_ring|^4 and
    R1 - R2/n = |A|^2 |A_ring|^2, so umbilic points give exact zeros.  Any
    departure of R1 from |A|^4 (a non-default factor) is added back.
    """
    if summary.P2 != 0.0:
        raise ValueError("estimate checks are implemented for codimension one (P2 = 0)")
    n, k = ctx.n, ctx.kbar
    ring, H2, A2 = summary.normAring2, summary.normH2, summary.normA2
    mu3 = math.fsum(mu ** 3 * m for mu, m in _traceless(summary.principal, n))
    extra = summary.R1 - A2 * A2
    r3_r1 = ring * H2 / n + summary.H * mu3 - ring * ring - extra
    r1_r2 = A2 * ring + extra
    core = n * k * ring + r3_r1
    return {
        "lemma43": core - n / 2 * ring * (eps * A2 - math.sqrt(2 * n) * k),
        "lemma54": core - n / 2 * ring * (eps * A2 - 4 * k),
        "lemma22_r1_r2": ring * ring + ring * H2 / n - r1_r2,
        "lemma22_r3_r1": r3_r1 - (ring * H2 / (2 * (n - 1)) - n / 2 * ring * ring),
    }


def parse_model(text, n):
    """Model from specs like ``sphere:rho=1.0``, ``clifford:psi=0.7`` or ``equator``."""
    kind, _, rest = text.strip().partition(":")
    params = {}
    for part in filter(None, rest.split(",")):
        key, _, val = part.partition("=")
        params[key.strip()] = float(val)
    kind = kind.lower()
    if kind == "sphere":
        return GeodesicSphere(n, params["rho"])
    if kind == "clifford":
        return CliffordTorus(n, params["psi"])
    if kind == "equator":
        return Equator(n)
    raise ValueError(f"unknown model {text!r}")


def minimal_clifford_psi(n):
    return math.atan(math.sqrt(n - 1.0))

