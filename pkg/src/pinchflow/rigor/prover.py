"""Branch-and-bound certification of one-variable inequalities on [0, inf).

The half line is split at ``x = scale = 4(n-1)K``.  On ``[0, scale]`` the
cleared form is evaluated in projective coordinates ``(X, K) = (t, (1-t)/scale)``
with ``t in [0, 1/2]`` (so ``x = scale t / (1-t)``).  On ``[scale, inf)`` it is
evaluated as ``(X, K) = (1, u)`` with ``u = 1/x in [0, 1/scale]``, which is
the tail form and includes the limit ``x -> inf`` at ``u = 0``.  Both maps
only rescale the homogeneous cleared form by a positive factor, so signs
carry over.

Ad hoc expressions that are not homogeneous are evaluated at the actual x
of each cell (K = 1), starting from a single root cell covering [0, inf].

Cells are refined breadth first and always kept in bisection-index order,
which makes the outcome independent of how a level is split among workers.
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
import contextvars
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import thresholds as th
from .interval import Interval, coerce, relaxed
from . import lemmas
from .lemmas import LemmaExpression, delta_interval

MAIN = 0
TAIL = 1
WHOLE = 2


@dataclass(frozen=True)
class Budget:
    max_cells: int = 400_000
    min_width: float = 1e-12


@dataclass
class ProofResult:
    verified: bool
    cells_explored: int
    min_cell_width: float
    counterexample_box: Optional[Interval] = None
    max_upper_bound: float = -math.inf

    @property
    def refuted(self):
        return self.counterexample_box is not None

    def to_dict(self):
        out = {"verified": self.verified, "cells": self.cells_explored,
               "min_cell_width": self.min_cell_width,
               "max_upper_bound": self.max_upper_bound}
        if self.counterexample_box is not None:
            out["counterexample"] = [float(self.counterexample_box.lo), float(self.counterexample_box.hi)]
        return out


def _x_cells(region, lo, hi, scale):
    """Actual x range of each cell, for expressions evaluated at K = 1."""
    t = Interval._raw(lo, hi)
    main = scale * t / (1 - t)
    with np.errstate(divide="ignore"):
        tail_lo = np.where(hi > 0, 1.0 / np.asarray(hi, dtype=float), np.inf)
        tail_hi = np.where(lo > 0, 1.0 / np.asarray(lo, dtype=float), np.inf)
    x_lo = np.where(region == MAIN, main.lo, np.where(region == TAIL, tail_lo * (1 - 1e-15), 0.0))
    x_hi = np.where(region == MAIN, main.hi, np.where(region == TAIL, tail_hi * (1 + 1e-15), np.inf))
    return Interval._raw(np.maximum(x_lo, 0.0), x_hi)


def _evaluate(expr, n, d, region, lo, hi, scale, finite):
    """Upper and lower bounds of the cleared form on a batch of cells."""
    one = coerce(np.ones_like(lo))
    with relaxed(), np.errstate(all="ignore"):
        if finite:
            val = expr.cleared(Interval._raw(lo, hi), one, n, d)
        elif not expr.homogeneous:
            val = expr.cleared(_x_cells(region, lo, hi, scale), one, n, d)
        else:
            main = region == MAIN
            ones = np.ones_like(lo)
            # main cells: X = t, K = (1 - t)/scale;  tail cells: X = 1, K = u
            x_lo = np.where(main, lo, ones)
            x_hi = np.where(main, hi, ones)
            kk = (1 - Interval._raw(lo, hi)) / scale
            k_lo = np.where(main, kk.lo, lo)
            k_hi = np.where(main, kk.hi, hi)
            val = expr.cleared(Interval._raw(x_lo, x_hi), Interval._raw(k_lo, k_hi), n, d)
    val = coerce(val)
    up = np.broadcast_to(np.asarray(val.hi, dtype=float), lo.shape)
    dn = np.broadcast_to(np.asarray(val.lo, dtype=float), lo.shape)
    return np.array(up), np.array(dn)


def _to_x(region, lo, hi, scale, finite):
    if finite:
        return Interval(lo, hi)
    if region == MAIN:
        f = lambda t: scale * t / (1 - t)  # noqa: E731
        return Interval(f(lo), f(hi))
    if region == WHOLE:
        return Interval(0.0, math.inf)
    return Interval(1.0 / hi, math.inf if lo == 0 else 1.0 / lo)


def prove_nonpositive(expr, n, budget=None, delta_convention=th.DeltaConvention.SECTION5,
                      domain=None, workers=1):
    """Certify ``expr < 0`` (or ``<= tol`` for non-strict goals) on x >= 0.

    ``domain`` restricts the check to a finite x interval with K = 1
    instead of the whole half line.
    """
    budget = budget or Budget()
    if not isinstance(expr, LemmaExpression):
        raise TypeError("expr must be a LemmaExpression")
    if expr.arity == 2:
        raise ValueError(f"{expr.id} has a free P2 variable; prove its reductions {expr.reduces_to}")
    if expr.cleared is not None and not expr.supports(n):
        raise ValueError(f"n={n} outside the valid range {expr.valid_n} of {expr.id}")
    d = delta_interval(n, delta_convention) if expr.uses_delta else None
    finite = domain is not None
    scale = 4.0 * (n - 1)

    if expr.scalar:
        regions = np.array([MAIN])
        los, his = np.array([0.0]), np.array([0.0])
        finite = True
    elif finite:
        dom = domain if isinstance(domain, Interval) else Interval(*domain)
        regions = np.array([MAIN])
        los, his = np.array([float(dom.lo)]), np.array([float(dom.hi)])
    elif not expr.homogeneous:
        regions = np.array([WHOLE])
        los, his = np.array([0.0]), np.array([1.0])
    else:
        regions, los, his = _half_line(scale)

    explored = 0
    min_width = math.inf
    max_upper = -math.inf
    thr = expr.tol if not expr.strict else 0.0

    while len(los):
        ups, dns = _batched(expr, n, d, regions, los, his, scale, finite, workers)
        explored += len(los)
        min_width = min(min_width, float(np.min(his - los)))
        if expr.strict:
            ok = ups < thr
            bad = dns >= thr
        else:
            ok = ups <= thr
            bad = dns > thr
        if np.any(ok):
            max_upper = max(max_upper, float(np.max(ups[ok])))
        if np.any(bad):
            i = int(np.argmax(bad))
            box = _to_x(int(regions[i]), float(los[i]), float(his[i]), scale, finite)
            return ProofResult(False, explored, min_width, box, max_upper)
        todo = ~ok
        if not np.any(todo):
            return ProofResult(True, explored, min_width, None, max_upper)
        r, lo, hi = regions[todo], los[todo], his[todo]
        if r[0] == WHOLE:
            regions, los, his = _half_line(scale)
            continue
        mid = 0.5 * (lo + hi)
        if np.any(hi - lo <= 2 * budget.min_width) or np.any((mid <= lo) | (mid >= hi)) \
                or explored + 2 * len(lo) > budget.max_cells:
            return ProofResult(False, explored, min_width, None, max_upper)
        regions = np.repeat(r, 2)
        los = np.column_stack([lo, mid]).ravel()
        his = np.column_stack([mid, hi]).ravel()
    return ProofResult(True, explored, min_width, None, max_upper)


def _half_line(scale):
    u0 = 1.0 / scale
    u0 = u0 + 4 * math.ulp(u0)
    return np.array([MAIN, TAIL]), np.array([0.0, 0.0]), np.array([0.5, u0])


def _batched(expr, n, d, regions, los, his, scale, finite, workers):
    if workers <= 1 or len(los) < 2 * workers:
        return _evaluate(expr, n, d, regions, los, his, scale, finite)
    chunks = np.array_split(np.arange(len(los)), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(contextvars.copy_context().run, _evaluate, expr, n, d,
                               regions[c], los[c], his[c], scale, finite) for c in chunks]
        parts = [f.result() for f in futures]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


# ---------------------------------------------------------------------------
# extremum search


@dataclass(frozen=True)
class ExtremumReport:
    x_star: float
    f_star: float
    mode: str
    refinement_tolerance: float

    def to_dict(self):
        return {"x_star": self.x_star, "f_star": self.f_star, "mode": self.mode,
                "refinement_tolerance": self.refinement_tolerance}


_INVPHI = (math.sqrt(5.0) - 1) / 2


def find_extremum(expr, n, mode="Max", domain=(0.0, 200.0), tol=1e-9, kbar=1.0,
                  delta_convention=th.DeltaConvention.SECTION5, grid=4001):
    """Coarse scan of the stated expression followed by golden-section refinement."""
    mode = mode.capitalize()
    if mode not in ("Min", "Max"):
        raise ValueError("mode must be Min or Max")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if isinstance(domain, Interval):
        lo, hi = float(domain.lo), float(domain.hi)
    else:
        lo, hi = map(float, domain)
    if not hi > lo:
        raise ValueError("empty search domain")
    delta = th.delta_coefficient(n, delta_convention) if expr.uses_delta else None
    sign = 1.0 if mode == "Min" else -1.0

    def f(x):
        with np.errstate(all="ignore"):
            return sign * np.asarray(expr.stated_value(x, n, kbar, delta), dtype=float)

    xs = np.linspace(lo, hi, grid)
    vals = np.where(np.isfinite(f(xs)), f(xs), np.inf)
    i = int(np.argmin(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc, fe = float(f(c)), float(f(e))
    xtol = 1e-12 * max(1.0, abs(a) + abs(b))
    while b - a > xtol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - _INVPHI * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, e, fe
            e = a + _INVPHI * (b - a)
            fe = float(f(e))
    cands = [(float(f(v)), v) for v in (a, b, 0.5 * (a + b), xs[i])]
    fbest, xbest = min(cands)
    return ExtremumReport(float(xbest), sign * fbest, mode, tol)


# ---------------------------------------------------------------------------
# lemma-level reports


@dataclass
class LemmaReport:
    lemma: str
    n: int
    items: list
    wall_time_ms: float

    @property
    def verified(self):
        return all(r.verified for _, r in self.items)

    def to_dict(self):
        items = []
        for item_id, res in self.items:
            d = {"id": item_id, "verified": res.verified, "cells": res.cells_explored,
                 "max_upper_bound": res.max_upper_bound}
            if res.counterexample_box is not None:
                d["counterexample"] = [float(res.counterexample_box.lo), float(res.counterexample_box.hi)]
            items.append(d)
        return {"lemma": self.lemma, "n": self.n, "verified": self.verified,
                "items": items, "wall_time_ms": self.wall_time_ms}


_ITEMS = ("i", "ii", "iii", "iv", "v", "vi")


def _conventions(n):
    out = [th.DeltaConvention.INTRO] if 4 <= n <= 6 else []
    return out + [th.DeltaConvention.SECTION5]


def _plan(lemma_id, n, convention):
    """List of (label, expression id, delta convention) to certify."""
    if lemma_id == "L2.3":
        return [(f"L2.3.{i}", f"L2.3.{i}", None) for i in _ITEMS]
    if lemma_id == "L5.2":
        plan = [(f"L5.2.{i}", f"L5.2.{i}", convention) for i in _ITEMS]
        return plan + [("L5.2.ii.hyp", "L5.2.ii.hyp", convention)]
    if lemma_id == "L3.1":
        plan = [("L3.1.negA", "L3.1.negA", None), ("L3.1.delta", "L3.1.delta", None)]
        if n == 8:
            plan += [("L3.1.reduced", "L3.1.reduced", None), ("L3.1.n8cubic", "L3.1.n8cubic", None)]
        elif n >= 9:
            plan += [(e, e, None) for e in ("L3.1.reduced", "L3.1.quadratic", "L3.1.band.lower",
                                            "L3.1.band.upper", "L3.1.discriminant")]
        return plan
    if lemma_id in ("P5.3", "P5.3.discriminant"):
        convs = [convention] if convention is not None else _conventions(n)
        return [(f"P5.3.discriminant[{c.value}]", "P5.3.discriminant", c) for c in convs]
    if lemma_id == "L4.3":
        return [("L4.3.core", "L4.3.core", None)]
    if lemma_id == "L5.4":
        return [("L5.4.core", "L5.4.core", convention), ("L5.4.const", "L5.4.const", convention)]
    if lemma_id == "L5.2.ii":
        return [("L5.2.ii", "L5.2.ii", convention), ("L5.2.ii.hyp", "L5.2.ii.hyp", convention)]
    expr = lemmas.get(lemma_id)
    if expr.arity == 2:
        return [(e, e, None) for e in expr.reduces_to]
    return [(lemma_id, lemma_id, convention if expr.uses_delta else None)]


def _root_result(n, convention):
    """Exact check that the discriminant vanishes at the root delta."""
    residual = lemmas.p53_exact_residual(n, convention)
    ok = abs(residual) < 1e-40
    return ProofResult(ok, 0, 0.0, None, float(residual))


def verify_lemma(lemma_id, n, budget=None, delta_convention=None, workers=1):
    """Certify every sub-inequality registered under ``lemma_id`` at dimension n."""
    start = time.perf_counter()
    plan = _plan(lemma_id, n, delta_convention)
    items = []
    for label, expr_id, conv in plan:
        expr = lemmas.get(expr_id)
        if not expr.supports(n):
            raise ValueError(f"n={n} outside the valid range {expr.valid_n} of {expr_id}")
        conv = conv or th.DeltaConvention.SECTION5
        if expr.uses_delta:
            th.delta_coefficient(n, conv)
        res = prove_nonpositive(expr, n, budget, conv, workers=workers)
        items.append((label, res))
        if expr_id == "P5.3.discriminant" and lemmas.p53_is_root(n, conv):
            items.append((f"P5.3.root[{conv.value}]", _root_result(n, conv)))
    wall = 1000.0 * (time.perf_counter() - start)
    return LemmaReport(lemma_id, n, items, wall)
