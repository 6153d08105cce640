"""Outward-rounded interval arithmetic over floats or numpy arrays.

Endpoints may be scalars or equally shaped arrays, so one ``Interval``
can carry a whole batch of cells.  Results of ``+ - * /`` are widened by
four units in the last place on each side, ``sqrt`` by two (it is
correctly rounded), which keeps every result a superset of the exact image.

Domain violations (division by an interval containing zero, square root of
a negative interval) raise ``IntervalDomainError``.  Inside ``relaxed()``
they instead produce NaN endpoints for the offending entries, so a batched
proof marks just those cells as unresolved.
"""
import contextlib
import contextvars
import math
import numbers

import numpy as np


class IntervalDomainError(ArithmeticError):
    pass


_RELAXED = contextvars.ContextVar("pinchflow_interval_relaxed", default=False)

_ULPS = 4.0
_SQRT_ULPS = 2.0


@contextlib.contextmanager
def relaxed():
    token = _RELAXED.set(True)
    try:
        yield
    finally:
        _RELAXED.reset(token)


def _down(v, ulps=_ULPS):
    v = np.asarray(v, dtype=float)
    w = v - ulps * np.abs(np.spacing(v))
    return np.where(np.isfinite(v), w, v)


def _up(v, ulps=_ULPS):
    v = np.asarray(v, dtype=float)
    w = v + ulps * np.abs(np.spacing(v))
    return np.where(np.isfinite(v), w, v)


def _scalarize(v):
    return float(v) if np.ndim(v) == 0 else v


class Interval:
    """Closed interval [lo, hi] (or a batch of them)."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo = _scalarize(np.asarray(lo, dtype=float))
        hi = _scalarize(np.asarray(hi, dtype=float))
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo, hi):
        obj = cls.__new__(cls)
        obj.lo = _scalarize(lo)
        obj.hi = _scalarize(hi)
        return obj

    # -- basic accessors --------------------------------------------------
    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __len__(self):
        return np.size(self.lo)

    def __getitem__(self, idx):
        return Interval._raw(np.asarray(self.lo)[idx], np.asarray(self.hi)[idx])

    @property
    def width(self):
        return _scalarize(np.asarray(self.hi) - np.asarray(self.lo))

    @property
    def mid(self):
        return _scalarize(0.5 * (np.asarray(self.lo) + np.asarray(self.hi)))

    def contains(self, value):
        v = np.asarray(value, dtype=float)
        return _scalarize((np.asarray(self.lo) <= v) & (v <= np.asarray(self.hi)))

    def __contains__(self, value):
        return bool(np.all(self.contains(value)))

    def as_tuple(self):
        return float(self.lo), float(self.hi)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = coerce(other)
        return Interval._raw(_down(np.add(self.lo, o.lo)), _up(np.add(self.hi, o.hi)))

    __radd__ = __add__

    def __sub__(self, other):
        o = coerce(other)
        return Interval._raw(_down(np.subtract(self.lo, o.hi)), _up(np.subtract(self.hi, o.lo)))

    def __rsub__(self, other):
        return coerce(other) - self

    def __neg__(self):
        return Interval._raw(np.negative(self.hi), np.negative(self.lo))

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = coerce(other)
        p1 = np.multiply(self.lo, o.lo)
        p2 = np.multiply(self.lo, o.hi)
        p3 = np.multiply(self.hi, o.lo)
        p4 = np.multiply(self.hi, o.hi)
        lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        return Interval._raw(_down(lo), _up(hi))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = coerce(other)
        bad = (np.asarray(o.lo) <= 0) & (np.asarray(o.hi) >= 0)
        if np.any(bad):
            if not _RELAXED.get():
                raise IntervalDomainError("division by an interval containing zero")
            blo = np.where(bad, 1.0, o.lo)
            bhi = np.where(bad, 1.0, o.hi)
        else:
            blo, bhi = o.lo, o.hi
        with np.errstate(invalid="ignore", over="ignore"):
            q1 = np.divide(self.lo, blo)
            q2 = np.divide(self.lo, bhi)
            q3 = np.divide(self.hi, blo)
            q4 = np.divide(self.hi, bhi)
        lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
        hi = np.maximum(np.maximum(q1, q2), np.maximum(q3, q4))
        if np.any(bad):
            lo = np.where(bad, np.nan, lo)
            hi = np.where(bad, np.nan, hi)
        return Interval._raw(_down(lo), _up(hi))

    def __rtruediv__(self, other):
        return coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, numbers.Integral) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        if k == 0:
            return Interval._raw(np.ones_like(np.asarray(self.lo)), np.ones_like(np.asarray(self.hi)))
        if k == 1:
            return self
        if k % 2 == 1:
            return self * self ** (k - 1)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        mag_lo = np.where(lo >= 0, lo, np.where(hi <= 0, -hi, 0.0))
        mag_hi = np.maximum(np.abs(lo), np.abs(hi))
        rlo, rhi = mag_lo, mag_hi
        for _ in range(k - 1):
            rlo = np.maximum(_down(np.multiply(rlo, mag_lo)), 0.0)
            rhi = _up(np.multiply(rhi, mag_hi))
        return Interval._raw(rlo, rhi)

    # -- comparisons used by the prover ----------------------------------
    def certainly_negative(self):
        return _scalarize(np.asarray(self.hi) < 0)

    def certainly_nonnegative(self):
        return _scalarize(np.asarray(self.lo) >= 0)


def coerce(value):
    """Interval view of a number (treated as exact) or an Interval."""
    if isinstance(value, Interval):
        return value
    return Interval._raw(value, value)


def sqrt(a, clamp=False):
    a = coerce(a)
    lo = np.asarray(a.lo)
    hi = np.asarray(a.hi)
    neg = lo < 0
    if np.any(neg):
        if clamp:
            lo = np.where(neg, 0.0, lo)
        elif _RELAXED.get():
            lo = np.where(neg, np.nan, lo)
        else:
            raise IntervalDomainError("square root of an interval with negative part")
        if np.any(hi < 0) and not _RELAXED.get():
            raise IntervalDomainError("square root of a negative interval")
    with np.errstate(invalid="ignore"):
        rlo = np.sqrt(lo)
        rhi = np.sqrt(hi)
    rlo = np.maximum(_down(rlo, _SQRT_ULPS), 0.0)
    return Interval._raw(rlo, _up(rhi, _SQRT_ULPS))


def imin(a, b):
    a, b = coerce(a), coerce(b)
    return Interval._raw(np.minimum(a.lo, b.lo), np.minimum(a.hi, b.hi))


def imax(a, b):
    a, b = coerce(a), coerce(b)
    return Interval._raw(np.maximum(a.lo, b.lo), np.maximum(a.hi, b.hi))


def interval_ops(a, b, op):
    """Dispatch one arithmetic operation by name."""
    if op == "add":
        return coerce(a) + b
    if op == "sub":
        return coerce(a) - b
    if op == "mul":
        return coerce(a) * b
    if op == "div":
        return coerce(a) / b
    if op == "sqrt":
        return sqrt(a)
    if op == "min":
        return imin(a, b)
    if op == "max":
        return imax(a, b)
    if op == "pow":
        if isinstance(b, Interval):
            if b.lo != b.hi:
                raise ValueError("pow needs an exact integer exponent")
            b = b.lo
        if float(b) != math.floor(float(b)):
            raise ValueError("pow needs an integer exponent")
        return coerce(a) ** int(b)
    raise ValueError(f"unknown interval operation {op!r}")


def hull(values):
    """Tight interval around a sequence of floats."""
    arr = np.asarray(values, dtype=float)
    return Interval(arr.min(), arr.max())
