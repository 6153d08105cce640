"""Command-line front end: rigorous checks, classification and flow runs.

Exit status: 0 on success, 2 when a verification goal fails, 1 on usage or
runtime errors.  A JSON file given with ``--config`` supplies defaults for
the chosen subcommand; explicit flags override it.
"""
import argparse
import json
import math
import sys

import numpy as np

from . import _accel
from . import geometry as geo
from . import thresholds as th
from .flow import axisym, homogeneous
from .flow.trace import FlowConfig, fmt, write_atomic
from .rigor import lemmas, prover

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output -----------------------------------------------------------------

def to_json(obj, indent=2, _level=0):
    """JSON with every float written to 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return fmt(v)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}"
                          for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ",\n".join(inner + to_json(v, indent, _level + 1) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit(text, out):
    if not text.endswith("\n"):
        text += "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


# -- helpers ----------------------------------------------------------------

def _ctx(args):
    return th.SphereContext(args.n, args.kbar)


def _convention(text):
    return None if text is None else th.DeltaConvention(text)


def _budget(args):
    return prover.Budget(max_cells=args.max_cells, min_width=args.min_width)


def initial_profile(args):
    """u0(v) = base + amp cos(mode v) plus an optional seeded cosine perturbation."""
    coeffs = np.zeros(0)
    if args.noise > 0:
        rng = np.random.default_rng(args.seed)
        k = np.arange(1, args.noise_modes + 1)
        coeffs = args.noise * rng.standard_normal(len(k)) / k ** 2

    def u0(v):
        v = np.asarray(v, dtype=float)
        u = args.base + args.amp * np.cos(args.mode * v)
        for j, c in enumerate(coeffs, start=1):
            u = u + c * np.cos(j * v)
        return u

    return u0


def _flow_config(args):
    return FlowConfig(dt_policy=args.dt_policy, c_cfl=args.c_cfl, dt=args.dt,
                      grid_size=args.grid_size, t_max=args.t_max,
                      blowup_threshold=args.blowup_threshold, eps=args.eps,
                      sigma=args.sigma, profile=th.ThresholdProfile.parse(args.profile),
                      record_stride=args.record_stride, c_stiff=args.c_stiff)


# -- subcommands --------------------------------------------------------------

def cmd_verify(args):
    report = prover.verify_lemma(args.lemma, args.n, _budget(args), _convention(args.delta),
                                 workers=args.workers)
    data = report.to_dict()
    if args.no_timing:
        data.pop("wall_time_ms")
    emit(to_json(data), args.out)
    return EXIT_OK if report.verified else EXIT_FAILED


def cmd_extrema(args):
    expr = lemmas.get(args.expr)
    if not expr.supports(args.n):
        raise ValueError(f"n={args.n} outside the valid range {expr.valid_n} of {expr.id}")
    mode = args.mode or ("Min" if expr.id == "L3.1.n8cubic" else "Max")
    conv = _convention(args.delta) or th.DeltaConvention.SECTION5
    rep = prover.find_extremum(expr, args.n, mode=mode, domain=(args.lo, args.hi),
                               tol=args.tol, kbar=args.kbar, delta_convention=conv)
    data = {"expr": expr.id, "n": args.n, **rep.to_dict()}
    emit(to_json(data), args.out)
    return EXIT_OK


def cmd_thresholds(args):
    ctx = _ctx(args)
    profiles = [th.ThresholdProfile.parse(p) for p in args.profiles.split(",") if p.strip()]
    if args.steps < 2 or not args.xmax > 0:
        raise ValueError("need --steps >= 2 and --xmax > 0")
    x = np.linspace(0.0, args.xmax, args.steps)
    cols = [th.threshold_value(p, ctx, x) for p in profiles]
    lines = [",".join(["x"] + [p.label for p in profiles])]
    for i, xi in enumerate(x):
        lines.append(",".join([fmt(xi)] + [fmt(c[i]) for c in cols]))
    emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_classify(args):
    ctx = _ctx(args)
    model = geo.parse_model(args.model, args.n)
    profile = th.ThresholdProfile.parse(args.profile)
    s = geo.curvature_of(model, ctx)
    f = float(th.threshold_value(profile, ctx, s.normH2))
    data = {"model": args.model, "n": args.n, "kbar": args.kbar, "profile": profile.label,
            "classification": geo.classify(s, profile, ctx).value,
            "normH2": s.normH2, "normA2": s.normA2, "threshold": f, "gap": s.normA2 - f}
    emit(to_json(data), args.out)
    return EXIT_OK


def cmd_flow(args):
    ctx = _ctx(args)
    cfg = _flow_config(args)
    if args.kind == "sphere":
        trace = homogeneous.flow_geodesic_sphere(ctx, args.rho0, cfg)
    elif args.kind == "clifford":
        psi0 = args.psi0 if args.psi0 is not None else geo.minimal_clifford_psi(args.n)
        trace = homogeneous.flow_clifford(ctx, psi0, cfg)
    else:
        trace = axisym.flow_axisymmetric(ctx, initial_profile(args), cfg)
    emit(trace.to_csv(), args.out)
    return EXIT_OK


def cmd_consistency(args):
    ctx = _ctx(args)
    res = homogeneous.evolution_consistency(args.kind, args.which, args.r1_factor, ctx,
                                            x0=args.x0, dt=args.dt)
    ok = res <= args.tol
    data = {"kind": args.kind, "which": args.which, "r1_factor": args.r1_factor, "n": args.n,
            "kbar": args.kbar, "residual": res, "tolerance": args.tol, "consistent": ok}
    emit(to_json(data), args.out)
    return EXIT_OK if ok else EXIT_FAILED


# -- parser -----------------------------------------------------------------

def _common(p, n_default=7):
    p.add_argument("--config", help="JSON file of defaults for this subcommand")
    p.add_argument("--out", "-o", help="output path (default stdout)")
    p.add_argument("--n", type=int, default=n_default)
    p.add_argument("--kbar", type=float, default=1.0)


def build_parser():
    parser = _Parser(prog="pinchflow", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, help="thread cap (else PINCHFLOW_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="certify a lemma with interval branch and bound")
    _common(p)
    p.add_argument("--lemma", required=True)
    p.add_argument("--delta", choices=["Intro", "Section5"])
    p.add_argument("--max-cells", type=int, default=prover.Budget.max_cells)
    p.add_argument("--min-width", type=float, default=prover.Budget.min_width)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="omit wall time for reproducible output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extrema", help="locate the extremum of a registered expression")
    _common(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--mode", choices=["Min", "Max"])
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=200.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--delta", choices=["Intro", "Section5"])
    p.set_defaults(func=cmd_extrema)

    p = sub.add_parser("thresholds", help="CSV table of threshold profiles")
    _common(p)
    p.add_argument("--profiles", default="SqrtA,Alpha,LinearHuisken,LinearBaker")
    p.add_argument("--xmax", type=float, default=100.0)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("classify", help="classify a model hypersurface against a profile")
    _common(p)
    p.add_argument("--model", required=True, help="sphere:rho=R, clifford:psi=P or equator")
    p.add_argument("--profile", default="SqrtA")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("flow", help="run a mean curvature flow and write its trace CSV")
    _common(p)
    p.add_argument("--kind", required=True, choices=["sphere", "clifford", "axisym"])
    p.add_argument("--rho0", type=float, default=math.pi / 3)
    p.add_argument("--psi0", type=float)
    p.add_argument("--base", type=float, default=1.0)
    p.add_argument("--amp", type=float, default=0.0)
    p.add_argument("--mode", type=int, default=2)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--noise-modes", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    d = FlowConfig()
    p.add_argument("--profile", default="SqrtA")
    p.add_argument("--dt-policy", default=d.dt_policy, choices=["cfl", "fixed"])
    p.add_argument("--c-cfl", type=float, default=d.c_cfl)
    p.add_argument("--dt", type=float, default=d.dt)
    p.add_argument("--grid-size", type=int, default=d.grid_size)
    p.add_argument("--t-max", type=float, default=d.t_max)
    p.add_argument("--blowup-threshold", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--sigma", type=float, default=d.sigma)
    p.add_argument("--record-stride", type=int, default=d.record_stride)
    p.add_argument("--c-stiff", type=float, default=d.c_stiff)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("consistency", help="residual of the homogeneous evolution equations")
    _common(p)
    p.add_argument("--kind", required=True, choices=["sphere", "clifford", "equator"])
    p.add_argument("--which", required=True, choices=["H2", "A2"])
    p.add_argument("--r1-factor", type=float, default=1.0)
    p.add_argument("--x0", type=float)
    p.add_argument("--dt", type=float, default=1e-5)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_consistency)
    return parser, sub.choices


def _apply_config(argv, subparsers):
    """Load --config for the chosen subcommand and install its values as defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if known.config is None:
        return
    command = next((a for a in rest if a in subparsers), None)
    if command is None:
        raise UsageError("--config needs a subcommand")
    try:
        with open(known.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    sp = subparsers[command]
    dests = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in dests or dest in ("config", "help", "func"):
            raise UsageError(f"unknown config key {key!r} for {command}")
        action = dests[dest]
        if action.type is not None and value is not None:
            try:
                value = action.type(value)
            except (TypeError, ValueError):
                raise UsageError(f"bad value for {key!r}: {value!r}") from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"{key!r} must be one of {list(action.choices)}")
        action.required = False   # supplied by the file
        defaults[dest] = value
    sp.set_defaults(**defaults)


def dump_config(args):
    """The effective parameters of a parsed invocation, as a JSON-ready dict."""
    skip = {"func", "command", "config", "out", "threads"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        _apply_config(argv, subparsers)
        args = parser.parse_args(argv)
        _accel.set_threads(args.threads)
        return args.func(args)
    except UsageError as exc:
        print(f"pinchflow: usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, KeyError, TypeError, ArithmeticError, OSError, RuntimeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"pinchflow: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
