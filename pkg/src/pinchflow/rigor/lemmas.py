"""Registry of the pinching inequalities checked by the prover.

Each entry carries two independent transcriptions:

* ``goal(x, n, kbar, delta)`` -- the inequality written in plain floats the
  way it is stated, as a quantity that must be negative (``<``) or
  nonpositive (``<=``);
* ``cleared(X, K, n, d)`` -- an interval expression equal to
  ``goal * multiplier`` for an explicitly positive ``multiplier``.  Radical
  differences are rationalised and vanishing factors such as ``x`` or
  ``K^4`` are divided out, so the cleared form is strictly negative on the
  closed domain including ``x = 0`` and ``x -> infinity``.

Cleared forms are jointly homogeneous in ``(X, K)``; the prover evaluates
them in projective coordinates, so they must never fix ``K = 1``
internally.  The agreement ``cleared == goal * multiplier`` is checked
numerically by the test suite.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .. import thresholds as th
from .interval import Interval, coerce, sqrt

SECTION5 = th.DeltaConvention.SECTION5
INTRO = th.DeltaConvention.INTRO


@dataclass(frozen=True)
class LemmaExpression:
    id: str
    cleared: Callable
    goal: Callable
    multiplier: Callable = None
    display: Callable = None
    arity: int = 1
    degree: float = 0.0
    valid_n: tuple = (2, None)
    strict: bool = True
    tol: float = 0.0
    uses_delta: bool = False
    scalar: bool = False
    reduces_to: tuple = ()
    description: str = ""
    homogeneous: bool = True

    def supports(self, n):
        lo, hi = self.valid_n
        return n >= lo and (hi is None or n <= hi)

    @property
    def singularity_free_form(self):
        return self.cleared

    def tail_form(self, u, n, d=None):
        """Cleared form in the variable u = 1/x (K normalised to 1)."""
        return self.cleared(coerce(1.0), coerce(u), n, d)

    def stated_value(self, x, n, kbar=1.0, delta=None):
        f = self.display or self.goal
        return f(x, n, kbar, delta)

    @classmethod
    def from_callable(cls, func, id="custom", strict=True, tol=0.0):
        """Wrap a one-variable function usable on floats and Intervals."""
        return cls(id=id, cleared=lambda x, k, n, d: func(x),
                   goal=lambda x, n, kbar, delta: func(x),
                   multiplier=lambda x, n, kbar, delta: 1.0,
                   strict=strict, tol=tol, homogeneous=False, description="ad hoc expression")


# ---------------------------------------------------------------------------
# exact constants


def I(v):
    return coerce(float(v)) if not isinstance(v, Interval) else v


@lru_cache(maxsize=None)
def delta_interval(n, convention=SECTION5):
    """Enclosure of the blend weight delta."""
    convention = th.DeltaConvention(convention)
    th.delta_coefficient(n, convention)  # range validation
    if convention is SECTION5 and n >= 13:
        return I(2 * (2 * n - 5)) / (n * n - 2)
    return (sqrt(I(12 * n + 9)) - 7) / (2 * (n - 2))


def _w(n):
    return sqrt(I(2 * n))


def _g(n):
    return sqrt(2 + sqrt(I(2 * n)))


def _frac(p, q):
    return I(p) / q


# ---------------------------------------------------------------------------
# float helpers for the stated forms


def _ctx(n, kbar):
    return th.SphereContext(n, kbar)


def _a(x, n, k):
    return th.threshold_value(th.SQRT_A, _ctx(n, k), x)


def _ar(x, n, k):
    return th.ring_value(th.SQRT_A, _ctx(n, k), x)


def _ar_d(x, n, k):
    return th.ring_derivatives(th.SQRT_A, _ctx(n, k), x)


def _b_parts(x, n, k, delta):
    """(b, b-ring, b-ring', b-ring'') from the b closed forms with weight ``delta``."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(x * x + 4 * (n - 1) * k * x)
    br = (delta * n * k + 2 * (1 - delta) * k
          + (delta * n * n - 2 * delta * n + 2) / (2 * (n - 1) * n) * x
          - delta * (n - 2) / (2 * (n - 1)) * s)
    with np.errstate(divide="ignore", invalid="ignore"):
        br1 = ((delta * n * n - 2 * delta * n + 2) / (2 * (n - 1) * n)
               - delta * (n - 2) / (2 * (n - 1)) * (x + 2 * (n - 1) * k) / s)
        br2 = 2 * delta * (n - 1) * (n - 2) * k * k / s ** 3
    return br + x / n, br, br1, br2


def _alpha(x, n, k):
    return th.threshold_value(th.ALPHA, _ctx(n, k), x)


# ---------------------------------------------------------------------------
# interval building blocks


def _A(x, c, n):
    """(n-1)*a(x) = sqrt(x^2 + 4cx + 2n c^2) with c = (n-1)K."""
    return sqrt(x * x + 4 * c * x + 2 * n * c * c)


# ---------------------------------------------------------------------------
# sqrt-profile lemma (items i .. vi)


def _l23_i_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    ar = (n * A - (n - 1) * x) / (n * (n - 1))
    ar1 = (x + 2 * c) / ((n - 1) * A) - _frac(1, n)
    return 4 * x * ar1 ** 2 - ar


def _l23_i_goal(x, n, k, delta):
    d1, _ = _ar_d(x, n, k)
    return 4 * x * d1 ** 2 / _ar(x, n, k) - 1


def _l23_i_mult(x, n, k, delta):
    return _ar(x, n, k)


def _l23_ii_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    ar1 = (x + 2 * c) / ((n - 1) * A) - _frac(1, n)
    return 4 * (n - 2) * (n - 1) * k * k * x / A ** 3 + ar1 - _frac(2 * (n - 1), n * (n + 2))


def _l23_ii_goal(x, n, k, delta):
    d1, d2 = _ar_d(x, n, k)
    return 2 * x * d2 + d1 - 2 * (n - 1) / (n * (n + 2))


def _l23_iii_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    a = A / (n - 1)
    u = x / (n - 1) + 2 * k
    ar = (n * A - (n - 1) * x) / (n * (n - 1))
    g3 = (n - 2) / sqrt(I(n * (n - 1)))
    R = 2 * x / n + n * k - a
    # x * ar >= 0; widening can push an exact zero below it
    return -2 * n * (n - 2) ** 2 / ((a + u) ** 2 * (g3 * sqrt(x * ar, clamp=True) + R))


def _l23_iii_goal(x, n, k, delta):
    ar = _ar(x, n, k)
    return (n - 2) / np.sqrt(n * (n - 1)) * np.sqrt(x * ar) + ar - x / n - n * k


def _l23_iii_mult(x, n, k, delta):
    return 1.0 / k ** 4


def _neg_quad_const(x, n, k):
    """n K (ar + x ar') - a (ar - x ar'), positive for x >= 0."""
    ar = _ar(x, n, k)
    d1, _ = _ar_d(x, n, k)
    return n * k * (ar + x * d1) - _a(x, n, k) * (ar - x * d1)


def _l23_iv_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    w, g = _w(n), _g(n)
    P = x * x + 3 * c * x + n * c * c
    lin = (4 * g + (n - 8) - w) * x + (2 * n * g - 3 * n - w) * c
    return -(2 * w - 4) * P / (A + x + w * c) - lin


def _l23_iv_goal(x, n, k, delta):
    g = np.sqrt(2 + np.sqrt(2 * n))
    rhs = 2 * n * (n - 2) * (n - 1) ** 2 * k ** 4 / (x + g * (n - 1) * k) ** 2
    return rhs - _neg_quad_const(x, n, k)


def _l23_iv_mult(x, n, k, delta):
    c = (n - 1) * k
    g = np.sqrt(2 + np.sqrt(2 * n))
    A = np.sqrt(x * x + 4 * c * x + 2 * n * c * c)
    P = x * x + 3 * c * x + n * c * c
    return (x + g * c) ** 2 * (P * A + (x + c) * A * A) / (2 * n * (n - 2) * (n - 1) ** 2 * k ** 4 * c * x)


def _l23_v_parts(x, c, n, w):
    p = (8 * w * n * n * c ** 3 + 20 * w * n * c * c * x + 12 * n * n * c * c * x
         + 6 * w * n * c * x * x + 30 * n * c * x * x + 9 * n * x ** 3)
    q = 8 * n * n * c * c + 6 * w * n * c * x + 12 * n * c * x + 9 * n * x * x
    den = n * (n - 1) * (2 * w * c + 3 * x)
    T = (n ** 3 * (80 * n + 128 - 144 * w) * c * c
         + n * n * (12 * w * n - 312 * w + 144 * n + 288) * c * x
         + n * n * (45 * n + 54 - 72 * w) * x * x)
    return p, q, den, T


def _l23_v_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    p, q, den, T = _l23_v_parts(x, c, n, _w(n))
    # A * goal = (p - q A) / den and (q A)^2 - p^2 = 2 c^2 x^2 T
    return -2 * T / ((p + q * A) * A * den)


def _l23_v_goal(x, n, k, delta):
    w = np.sqrt(2 * n)
    d1, _ = _ar_d(x, n, k)
    lhs = 2 * _ar(x, n, k) - x / n + x * d1
    rhs = (2 * w * k - (n - 4) * x / (n * (n - 1))
           - 6 * (w - 2) * k * x / (3 * x + 2 * w * (n - 1) * k))
    return lhs - rhs


def _l23_v_mult(x, n, k, delta):
    c = (n - 1) * k
    return 1.0 / (c * c * x * x)


def _l23_vi_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    qp = 4 * c * n + (n + 1) * x
    pp = 4 * c * c * n * n + 7 * c * n * x + (n + 1) * x * x
    S = 16 * n ** 3 * c ** 3 + 40 * n * n * c * c * x + n * (6 * n + 17) * c * x * x + 2 * (n + 1) * x ** 3
    return -2 * (n - 2) * S / ((n - 1) ** 2 * A * (qp * A + pp))


def _l23_vi_goal(x, n, k, delta):
    a = _a(x, n, k)
    ar = _ar(x, n, k)
    d1, _ = _ar_d(x, n, k)
    om = x / (n - 1) + 2 * n * k
    lhs = x / (n - 1) * (a + n * k) - om * (ar + a - n * k - x * d1)
    rhs = -2 * x * k / (n - 1) + 2 * n * (n - 4) * k * k
    return lhs - rhs


def _l23_vi_mult(x, n, k, delta):
    return 1.0 / ((n - 1) * k) ** 2


# ---------------------------------------------------------------------------
# quadratic-in-P2 inequality for the sqrt profile


def _l31_full_goal(x, n, k, delta, p2=0.0):
    d1, _ = _ar_d(x, n, k)
    B = 2 * _ar(x, n, k) - x / n + x * d1
    return -_neg_quad_const(x, n, k) + p2 * B - 1.5 * p2 * p2


def _l31_nega_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    P = x * x + 3 * c * x + n * c * c
    return -2 * n * (n - 2) * (n - 1) ** 2 * (2 * x + n * c) / (P * A + (x + c) * A * A)


def _l31_nega_goal(x, n, k, delta):
    return -_neg_quad_const(x, n, k)


def _l31_nega_mult(x, n, k, delta):
    return 1.0 / k ** 4


def _l31_delta_cleared(x, k, n, d):
    c = (n - 1) * k
    A = _A(x, c, n)
    P = x * x + 3 * c * x + n * c * c
    B = (3 * x * x + 10 * c * x + 4 * n * c * c) / ((n - 1) * A) - 4 * x / n
    neg = 2 * n * (n - 2) * (n - 1) ** 2 * (2 * x + n * c) * k ** 4 / (P * A + (x + c) * A * A)
    # neg >= 0 by construction; widening can push an exact zero below it
    return B - sqrt(6 * neg, clamp=True)


def _l31_delta_goal(x, n, k, delta):
    d1, _ = _ar_d(x, n, k)
    B = 2 * _ar(x, n, k) - x / n + x * d1
    return B - np.sqrt(6 * _neg_quad_const(x, n, k))


def _l31_reduced_cleared(x, k, n, d):
    w, g = _w(n), _g(n)
    bv = (2 * w * k - (n - 4) * x / (n * (n - 1))
          - 6 * (w - 2) * k * x / (3 * x + 2 * w * (n - 1) * k))
    return (x + g * (n - 1) * k) * bv - 2 * sqrt(I(3 * n * (n - 2))) * (n - 1) * k * k


def _l31_reduced_goal(x, n, k, delta):
    w, g = np.sqrt(2 * n), np.sqrt(2 + np.sqrt(2 * n))
    bv = (2 * w * k - (n - 4) * x / (n * (n - 1))
          - 6 * (w - 2) * k * x / (3 * x + 2 * w * (n - 1) * k))
    return (x + g * (n - 1) * k) * bv - 2 * np.sqrt(3 * n * (n - 2)) * (n - 1) * k * k


def _l31_quadratic_cleared(x, k, n, d):
    w, g = _w(n), _g(n)
    lin = 2 * w - (4 - _frac(4, n) - 3 * sqrt(_frac(2, n))) * g
    const = 2 * sqrt(I(n)) * (n - 1) * (sqrt(I(3 * (n - 2))) - sqrt(4 + 2 * w))
    return -(n - 4) * x * x / (n * (n - 1)) + lin * k * x - const * k * k


def _l31_quadratic_goal(x, n, k, delta):
    w, g = np.sqrt(2 * n), np.sqrt(2 + np.sqrt(2 * n))
    lin = 2 * w - (4 - 4 / n - 3 * np.sqrt(2 / n)) * g
    const = 2 * np.sqrt(n) * (n - 1) * (np.sqrt(3 * (n - 2)) - np.sqrt(4 + 2 * w))
    return -(n - 4) / (n * (n - 1)) * x * x + lin * k * x - const * k * k


def _n8_cubic(x, k, s6):
    return (3 * x ** 3 / 14 - (8 - 3 * s6 / 2) * k * x * x
            - 56 * (s6 - 1) * k * k * x + 56 * 56 * (3 - s6) * k ** 3)


def _l31_n8_cleared(x, k, n, d):
    return -_n8_cubic(x, k, sqrt(I(6)))


def _l31_n8_display(x, n, k, delta):
    return _n8_cubic(np.asarray(x, dtype=float), k, np.sqrt(6.0))


def _l31_n8_goal(x, n, k, delta):
    return -_l31_n8_display(x, n, k, delta)


def disc_lhs(n, interval=False):
    """1 - (2 - 2/n - 3/sqrt(2n)) * sqrt((2 + sqrt(2n)) / (2n))."""
    if interval:
        w = _w(n)
        return 1 - (2 - _frac(2, n) - 3 / w) * sqrt((2 + w) / (2 * n))
    w = np.sqrt(2.0 * n)
    return 1 - (2 - 2 / n - 3 / w) * np.sqrt((2 + w) / (2 * n))


def disc_rhs(n, interval=False):
    """(n-4)/(n sqrt n) * (sqrt(3(n-2)) - sqrt(4 + 2 sqrt(2n)))."""
    if interval:
        w = _w(n)
        return (n - 4) / (n * sqrt(I(n))) * (sqrt(I(3 * (n - 2))) - sqrt(4 + 2 * w))
    w = np.sqrt(2.0 * n)
    return (n - 4) / (n * np.sqrt(n)) * (np.sqrt(3 * (n - 2)) - np.sqrt(4 + 2 * w))


def band_constant(n):
    """Case constant bounding the discriminant condition for the given n."""
    if 9 <= n <= 12:
        return 0.1814
    if 13 <= n <= 65:
        return 0.3555
    if n >= 66:
        return 1.0
    raise ValueError(f"no case constant for n={n}")


def _scalar(func_interval, func_float):
    return dict(cleared=lambda x, k, n, d: func_interval(n, d),
                goal=lambda x, n, k, delta: func_float(n, delta),
                scalar=True)


# ---------------------------------------------------------------------------
# b-profile lemma (items i .. vi)


def _bparts_interval(x, k, n, d):
    c = (n - 1) * k
    y = sqrt(x)
    r = sqrt(x + 4 * c)
    C1 = (d * (n * n - 2 * n) + 2) / (2 * n * (n - 1))
    D1 = _frac(n - 2, 2 * (n - 1))
    br = d * n * k + 2 * (1 - d) * k + C1 * x - d * D1 * y * r
    return c, y, r, C1, D1, br


def _l52_i_cleared(x, k, n, d):
    c, y, r, C1, D1, br = _bparts_interval(x, k, n, d)
    ybr1 = y * C1 - d * D1 * (x + 2 * c) / r
    return 4 * ybr1 ** 2 - br


def _l52_i_goal(x, n, k, delta):
    _, br, br1, _ = _b_parts(x, n, k, delta)
    return 4 * x * br1 ** 2 / br - 1


def _l52_i_mult(x, n, k, delta):
    return _b_parts(x, n, k, delta)[1]


def _l52_ii_cleared(x, k, n, d):
    c, y, r, C1, D1, _ = _bparts_interval(x, k, n, d)
    return C1 - d * D1 * y * (x + 6 * c) / r ** 3 - _frac(2 * (n - 1), n * (n + 2))


def _l52_ii_goal(x, n, k, delta):
    _, _, br1, br2 = _b_parts(x, n, k, delta)
    return 2 * x * br2 + br1 - 2 * (n - 1) / (n * (n + 2))


def _l52_iii_cleared(x, k, n, d):
    c, y, r, C1, D1, br = _bparts_interval(x, k, n, d)
    alr = n * k + (n * n - 2 * n + 2) * x / (2 * n * (n - 1)) - D1 * y * r
    g3 = (n - 2) / sqrt(I(n * (n - 1)))
    return -4 * (1 - d) * D1 * (1 + g3 * y / (sqrt(br) + sqrt(alr))) / (x + 2 * c + y * r)


def _l52_iii_goal(x, n, k, delta):
    _, br, _, _ = _b_parts(x, n, k, delta)
    return (n - 2) / np.sqrt(n * (n - 1)) * np.sqrt(x * br) + br - x / n - n * k


def _l52_iii_mult(x, n, k, delta):
    return 1.0 / ((n - 1) * k) ** 2


def _l52_iv_cleared(x, k, n, d):
    c, y, r, _, _, _ = _bparts_interval(x, k, n, d)
    return -4 * d * (1 - d) * (n - 2) ** 2 / ((n - 1) ** 2 * r * (y * (3 * c + x) + (c + x) * r))


def _l52_iv_goal(x, n, k, delta):
    b, br, br1, _ = _b_parts(x, n, k, delta)
    return br * (b - n * k) - x * br1 * (b + n * k) + 2 * (1 - delta) * (n - 2) * k * k


def _l52_iv_mult(x, n, k, delta):
    return 1.0 / ((n - 1) * k) ** 4


def _l52_v_cleared(x, k, n, d):
    c, y, r, _, _, _ = _bparts_interval(x, k, n, d)
    S = 16 * n * n * c * c + (3 * n * n + 8 * n) * c * x + (n + 1) * x * x
    W = y * (6 * c * n + (n + 1) * x) + (4 * c * n + (n + 1) * x) * r
    return -4 * d * (n - 2) * S / ((n - 1) ** 2 * r * W)


def _l52_v_goal(x, n, k, delta):
    b, br, br1, _ = _b_parts(x, n, k, delta)
    om = x / (n - 1) + 2 * n * k
    lhs = x / (n - 1) * (b + n * k) - om * (br + b - n * k - x * br1)
    return lhs - (-2 * k * x / (n - 1) + 2 * n * (n - 4) * k * k)


def _l52_v_mult(x, n, k, delta):
    return 1.0 / ((n - 1) * k) ** 2


def _l52_vi_cleared(x, k, n, d):
    c, y, r, _, _, _ = _bparts_interval(x, k, n, d)
    m = n * (n - 2)
    q6 = 3 * d * m - 2 * (n - 4)
    W = d * m * (10 * c + 3 * x) + y * q6 * r
    T1 = 25 * d * d * m * m * c + (6 * d * d * m * m + 12 * d * m * (n - 4) - 4 * (n - 4) ** 2) * x
    if n == 4:
        return -2 * T1 / (n * (n - 1) * r * W)
    T = c * T1 + (n - 4) * (3 * d * m - (n - 4)) * x * x
    return -2 * T / (n * (n - 1) * r * W)


def _l52_vi_goal(x, n, k, delta):
    _, br, br1, _ = _b_parts(x, n, k, delta)
    return 2 * br - x / n + x * br1 - 2 * (delta * (n - 2) + 2) * k


def _l52_vi_mult(x, n, k, delta):
    m = 1.0 / np.sqrt(x)
    return m / ((n - 1) * k) if n == 4 else m


def _l52_hyp(n, d):
    return d - I(2 * (2 * n - 5)) / (n * n - 4)


def _l52_hyp_f(n, delta):
    return delta - 2 * (2 * n - 5) / (n * n - 4)


# ---------------------------------------------------------------------------
# cores of the epsilon estimates and the P2 discriminant


def _l43_cleared(x, k, n, d):
    c = (n - 1) * k
    w = _w(n)
    a = _A(x, c, n) / (n - 1)
    v = x / (n - 1) + w * k
    return -(2 * w - 4) / ((n - 1) * (a + v))


def _l43_goal(x, n, k, delta):
    return _a(x, n, k) - x / (n - 1) - np.sqrt(2 * n) * k


def _l43_mult(x, n, k, delta):
    return 1.0 / (x * k)


def _l54_cleared(x, k, n, d):
    c = (n - 1) * k
    return -2 * d * (n - 2) / ((n - 1) * (sqrt(x) + sqrt(x + 4 * c)))


def _l54_goal(x, n, k, delta):
    b = _b_parts(x, n, k, delta)[0]
    return b - x / (n - 1) - 2 * k - delta * (n - 2) * k


def _l54_mult(x, n, k, delta):
    return 1.0 / ((n - 1) * k * np.sqrt(x))


def _p53(n, d):
    m = n - 2
    return d * d * m * m + 7 * d * m + 4 - 3 * m


def _p53_f(n, delta):
    m = n - 2
    return delta * delta * m * m + 7 * delta * m + 4 - 3 * m


# ---------------------------------------------------------------------------


def _entry(id, cleared, goal, mult=None, **kw):
    if mult is None:
        mult = lambda x, n, k, delta: 1.0  # noqa: E731
    return LemmaExpression(id=id, cleared=cleared, goal=goal, multiplier=mult, **kw)


REGISTRY = {}


def _register(expr):
    REGISTRY[expr.id] = expr
    return expr


for _e in [
    _entry("L2.3.i", _l23_i_cleared, _l23_i_goal, _l23_i_mult, degree=1, valid_n=(3, None),
           description="4x(a')^2/a < 1 (sqrt profile)"),
    _entry("L2.3.ii", _l23_ii_cleared, _l23_ii_goal, degree=0, valid_n=(3, None),
           description="2x a'' + a' < 2(n-1)/(n(n+2))"),
    _entry("L2.3.iii", _l23_iii_cleared, _l23_iii_goal, _l23_iii_mult, degree=-3, valid_n=(3, None),
           description="(n-2)/sqrt(n(n-1)) sqrt(x a) + a < x/n + nK"),
    _entry("L2.3.iv", _l23_iv_cleared, _l23_iv_goal, _l23_iv_mult, degree=1, valid_n=(3, None),
           description="lower bound of nK(a + x a') - a(a - x a'); equality at x = 0"),
    _entry("L2.3.v", _l23_v_cleared, _l23_v_goal, _l23_v_mult, degree=-3, valid_n=(3, None),
           description="upper bound of 2a - x/n + x a'; equality at x = 0"),
    _entry("L2.3.vi", _l23_vi_cleared, _l23_vi_goal, _l23_vi_mult, degree=0, valid_n=(3, None),
           description="omega-weighted inequality of the sqrt profile"),
    LemmaExpression(id="L3.1", arity=2, cleared=None,
                    goal=lambda x, n, k, delta, p2=0.0: _l31_full_goal(x, n, k, delta, p2),
                    valid_n=(7, None), reduces_to=("L3.1.negA", "L3.1.delta"),
                    description="concave quadratic in P2 is negative for all P2 >= 0"),
    _entry("L3.1.negA", _l31_nega_cleared, _l31_nega_goal, _l31_nega_mult, degree=0, valid_n=(3, None),
           description="constant term of the P2 quadratic is negative"),
    _entry("L3.1.delta", _l31_delta_cleared, _l31_delta_goal, degree=1, valid_n=(7, None),
           description="vertex discriminant Delta < 0"),
    _entry("L3.1.reduced", _l31_reduced_cleared, _l31_reduced_goal, degree=2, valid_n=(8, None),
           description="sufficient inequality built from items iv and v"),
    _entry("L3.1.quadratic", _l31_quadratic_cleared, _l31_quadratic_goal, degree=2, valid_n=(9, None),
           description="quadratic majorant of the reduced inequality"),
    _entry("L3.1.n8cubic", _l31_n8_cleared, _l31_n8_goal, display=_l31_n8_display, degree=3,
           valid_n=(8, 8), description="n = 8 form of the reduced inequality: cubic > 0"),
    _entry("L3.1.band.lower",
           **_scalar(lambda n, d: disc_lhs(n, True) - sqrt(I(band_constant(n))),
                     lambda n, delta: disc_lhs(n) - np.sqrt(band_constant(n))),
           valid_n=(9, None), description="discriminant left side below the case constant"),
    _entry("L3.1.band.upper",
           **_scalar(lambda n, d: I(band_constant(n)) - disc_rhs(n, True),
                     lambda n, delta: band_constant(n) - disc_rhs(n)),
           valid_n=(9, None), description="case constant below the discriminant right side"),
    _entry("L3.1.discriminant",
           **_scalar(lambda n, d: disc_lhs(n, True) - sqrt(disc_rhs(n, True)),
                     lambda n, delta: disc_lhs(n) - np.sqrt(disc_rhs(n))),
           valid_n=(9, None), description="negative discriminant of the quadratic majorant"),
    _entry("L5.2.i", _l52_i_cleared, _l52_i_goal, _l52_i_mult, degree=1, valid_n=(4, None),
           uses_delta=True, description="4x(b')^2/b < 1"),
    _entry("L5.2.ii", _l52_ii_cleared, _l52_ii_goal, degree=0, valid_n=(4, None), uses_delta=True,
           description="2x b'' + b' < 2(n-1)/(n(n+2))"),
    _entry("L5.2.ii.hyp", **_scalar(_l52_hyp, _l52_hyp_f), valid_n=(4, None), uses_delta=True,
           description="delta <= 2(2n-5)/(n^2-4), hypothesis of item ii"),
    _entry("L5.2.iii", _l52_iii_cleared, _l52_iii_goal, _l52_iii_mult, degree=-1, valid_n=(4, None),
           uses_delta=True, description="(n-2)/sqrt(n(n-1)) sqrt(x b) + b < x/n + nK"),
    _entry("L5.2.iv", _l52_iv_cleared, _l52_iv_goal, _l52_iv_mult, degree=-2, valid_n=(4, None),
           uses_delta=True, description="b(b - nK) - x b'(b + nK) < -2(1-delta)(n-2)K^2"),
    _entry("L5.2.v", _l52_v_cleared, _l52_v_goal, _l52_v_mult, degree=0, valid_n=(4, None),
           uses_delta=True, description="omega-weighted inequality of the b profile"),
    _entry("L5.2.vi", _l52_vi_cleared, _l52_vi_goal, _l52_vi_mult, degree=0.5, valid_n=(4, None),
           uses_delta=True, description="2b - x/n + x b' <= 2(delta(n-2)+2)K; equality at x = 0"),
    _entry("P5.3.discriminant", **_scalar(_p53, _p53_f), valid_n=(4, None), uses_delta=True,
           strict=False, tol=1e-9, description="discriminant of the b-profile P2 quadratic"),
    _entry("L4.3.core", _l43_cleared, _l43_goal, _l43_mult, degree=-1, valid_n=(3, None),
           description="a(x) <= x/(n-1) + sqrt(2n)K; equality at x = 0"),
    _entry("L5.4.core", _l54_cleared, _l54_goal, _l54_mult, degree=-0.5, valid_n=(4, None),
           uses_delta=True, description="b(x) <= x/(n-1) + 2K + delta(n-2)K; equality at x = 0"),
    _entry("L5.4.const", **_scalar(lambda n, d: d * (n - 2) - 4, lambda n, delta: delta * (n - 2) - 4),
           valid_n=(4, None), uses_delta=True, description="delta(n-2) < 4"),
]:
    _register(_e)


def get(expr_id):
    try:
        return REGISTRY[expr_id]
    except KeyError:
        raise KeyError(f"unknown expression id {expr_id!r}") from None


def p53_is_root(n, convention):
    """True when the discriminant vanishes identically (delta is the root)."""
    return th.DeltaConvention(convention) is INTRO or n <= 12


def p53_exact_residual(n, convention, digits=60):
    """Discriminant at delta evaluated in high-precision decimal arithmetic."""
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = digits
        if th.DeltaConvention(convention) is SECTION5 and n >= 13:
            d = Decimal(2 * (2 * n - 5)) / Decimal(n * n - 2)
        else:
            d = (Decimal(12 * n + 9).sqrt() - 7) / Decimal(2 * (n - 2))
        m = Decimal(n - 2)
        return d * d * m * m + 7 * d * m + 4 - 3 * m
