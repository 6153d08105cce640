"""Flow configuration, diagnostics records and outcome classification."""
import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field, fields, asdict
from enum import Enum
from typing import Optional

from .. import thresholds as th


class Outcome(Enum):
    ROUND_POINT = "RoundPoint"
    TOTALLY_GEODESIC = "TotallyGeodesic"
    COLLAPSE = "Collapse"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass
class FlowConfig:
    dt_policy: str = "cfl"          # "cfl" or "fixed"
    c_cfl: float = 0.2
    dt: float = 1e-4                # fixed step, or the cap for ODE flows
    grid_size: int = 129
    t_max: float = 10.0
    blowup_threshold: Optional[float] = None   # default set per integrator, times kbar
    eps: Optional[float] = None     # default from the initial pinching margin
    sigma: float = 0.0
    profile: th.ThresholdProfile = th.SQRT_A
    record_stride: int = 10
    c_stiff: float = 0.01
    max_steps: int = 5_000_000

    def __post_init__(self):
        if self.dt_policy not in ("cfl", "fixed"):
            raise ValueError("dt_policy must be 'cfl' or 'fixed'")
        if not 0 < self.c_cfl <= 0.5:
            raise ValueError("c_cfl must lie in (0, 0.5]")
        if not 0 <= self.sigma < 1:
            raise ValueError("sigma must lie in [0, 1)")
        if self.eps is not None and self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if self.record_stride < 1 or self.grid_size < 5:
            raise ValueError("record_stride >= 1 and grid_size >= 5 required")

    def threshold(self, ctx, default=1e5):
        return default * ctx.kbar if self.blowup_threshold is None else self.blowup_threshold

    def check_eps(self, ctx, eps):
        if not 0 <= eps < 1.0 / ctx.n ** 2:
            raise ValueError(f"eps must lie in [0, 1/n^2), got {eps}")


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    max_A2: float
    min_H2: float
    max_H2: float
    sup_U: float
    sup_f_sigma: float
    roundness: float
    sup_gradH2: float
    sup_Aring2_over_H2: float


CSV_HEADER = [f.name for f in fields(DiagnosticsRecord)]


@dataclass
class FlowTrace:
    records: list
    outcome: Outcome = Outcome.BUDGET_EXHAUSTED
    extinction_time: Optional[float] = None
    kbar: float = 1.0
    blowup: bool = False
    eps: float = 0.0
    sigma: float = 0.0
    states: list = field(default_factory=list)

    def column(self, name):
        return [getattr(r, name) for r in self.records]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow([fmt(v) for v in asdict(r).values()])
        ext = "NA" if self.extinction_time is None else fmt(self.extinction_time)
        buf.write(f"# outcome={self.outcome.value} extinction_time={ext}\n")
        return buf.getvalue()


def fmt(value):
    """17 significant digits, enough to round-trip binary64."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def write_atomic(path, text):
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class Tolerances:
    round_tol: float = 1e-3
    roundness: float = 0.99
    round_H2: float = 1e4        # times kbar
    geodesic_A2: float = 1e-6    # times kbar
    tail_fraction: float = 0.1


def is_round(record, kbar, tol=None):
    tol = tol or Tolerances()
    return (record.sup_Aring2_over_H2 < tol.round_tol and record.roundness > tol.roundness
            and record.max_H2 > tol.round_H2 * kbar)


def verdict(trace, tol=None):
    tol = tol or Tolerances()
    if not trace.records:
        raise ValueError("empty trace")
    k = trace.kbar
    if is_round(trace.records[-1], k, tol):
        return Outcome.ROUND_POINT
    tail = trace.records[-max(1, int(math.ceil(tol.tail_fraction * len(trace.records)))):]
    if all(r.max_A2 < tol.geodesic_A2 * k for r in tail):
        return Outcome.TOTALLY_GEODESIC
    if trace.blowup:
        return Outcome.COLLAPSE
    return Outcome.BUDGET_EXHAUSTED


def extinction_estimate(records):
    """Zero of 1/max|A|^2 extrapolated linearly from the last two records."""
    if len(records) < 2:
        return None
    a, b = records[-2], records[-1]
    ya, yb = 1.0 / a.max_A2, 1.0 / b.max_A2
    if not yb < ya or b.t <= a.t:
        return None
    return b.t + yb * (b.t - a.t) / (ya - yb)
