"""Command-line front end.

Subcommands ``design``, ``curve``, ``bound``, ``disturbance`` and ``verify``
emit plot-ready CSV or JSON. SNRs are linear unless ``--db`` is given; rates
are in nats unless ``--units bits``.

Exit codes: 0 ok, 2 usage or invalid input, 3 infeasible or outside the
validity region, 4 a verification check failed.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import disturbance, finite_length, oracle, superposition
from .gaussian import db_to_linear

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 2, 3, 4

_BOOL_KEYS = {"db", "strict_sum"}


class UsageError(ValueError):
    pass


def _floats(text):
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _grid(text):
    parts = str(text).split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("grid must be START:STOP or START:STOP:STEP")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")


def _expand_grid(spec, points):
    start, stop = spec[0], spec[1]
    if stop < start:
        raise UsageError("grid stop must not precede start")
    if stop == start:
        return np.array([start])
    if len(spec) == 3:
        step = spec[2]
        if step <= 0:
            raise UsageError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        grid = start + step * np.arange(count)
        if stop - grid[-1] > 1e-9 * step:
            grid = np.append(grid, stop)
        else:
            grid[-1] = stop
        return grid
    if points < 2:
        raise UsageError("--points must be at least 2")
    return np.linspace(start, stop, points)


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _round_floats(obj, digits):
    if isinstance(obj, float):
        return float(format(obj, f".{digits}g"))
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v, digits) for v in obj]
    return obj


def _to_builtin(obj):
    if isinstance(obj, dict):
        return {k: _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class _Emitter:
    def __init__(self, args, default_format):
        self.args = args
        self.format = args.format or default_format
        self.to_file = args.out is not None
        self.digits = None if self.to_file else args.display_digits

    def rate(self, nats):
        return nats / math.log(2.0) if self.args.units == "bits" else nats

    def write(self, text):
        if self.to_file:
            with open(self.args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def table(self, columns, rows, meta=None):
        if self.format == "json":
            records = [dict(zip(columns, r)) for r in rows]
            return self.document({**(meta or {}), "rows": records})
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            if self.digits:
                writer.writerow([format(float(v), f".{self.digits}g") for v in r])
            else:
                writer.writerow([_fmt(v) for v in r])
        self.write(buf.getvalue())

    def document(self, obj):
        obj = _to_builtin(obj)
        if self.format == "csv":
            rows = [(k, v) for k, v in obj.items() if not isinstance(v, (dict, list))]
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["key", "value"])
            for k, v in rows:
                writer.writerow([k, _fmt(v) if isinstance(v, (int, float)) else v])
            self.write(buf.getvalue())
            return
        if self.digits:
            obj = _round_floats(obj, self.digits)
        self.write(json.dumps(obj, indent=2) + "\n")


def _snr(args, values):
    values = list(values)
    return [float(v) for v in db_to_linear(values)] if args.db else values


def _design_from_args(args):
    if getattr(args, "design", None):
        with open(args.design) as fh:
            doc = json.load(fh)
        try:
            return superposition.make_design(doc["ladder"], doc["betas"])
        except KeyError as exc:
            raise UsageError(f"design file lacks {exc}")
    if args.snrs is None:
        raise UsageError("need --snrs (or --design)")
    snrs = _snr(args, args.snrs)
    if len(snrs) < 2:
        raise UsageError("--snrs needs at least two SNRs")
    if args.alpha is not None:
        if len(snrs) != 2:
            raise UsageError("--alpha applies to a two-point ladder only")
        betas = [superposition.alpha_to_beta(snrs[0], snrs[1], args.alpha)]
    elif args.betas is not None:
        betas = list(args.betas)
    else:
        raise UsageError("need --betas or --alpha")
    if len(betas) != len(snrs) - 1:
        raise UsageError(f"need {len(snrs) - 1} betas for {len(snrs)} SNRs, got {len(betas)}")
    if any(b <= a for a, b in zip(snrs, snrs[1:])):
        raise UsageError("--snrs must be strictly increasing")
    if args.strict_sum and sum(betas) > 1.0:
        raise superposition.InfeasibleError(f"sum of betas {sum(betas)} exceeds 1")
    constraints = list(zip(snrs[:-1], betas))
    _, design = superposition.max_rate_multi(constraints, snrs[-1])
    return design


def cmd_design(args):
    design = _design_from_args(args)
    out = _Emitter(args, "json")
    if out.format == "csv":
        rows = [(k, s, p, out.rate(r)) for k, (s, p, r) in
                enumerate(zip(design.ladder, design.layer_powers, design.layer_rates))]
        out.table(["layer", "decode_snr", "power", "rate"], rows)
        return EXIT_OK
    doc = {
        "ladder": list(design.ladder),
        "betas": list(design.betas),
        "layer_powers": list(design.layer_powers),
        "layer_rates": [out.rate(r) for r in design.layer_rates],
        "total_rate": out.rate(design.total_rate),
        "units": args.units,
    }
    out.document(doc)
    return EXIT_OK


def curve_rows(design, grid):
    """``(gamma, mmse, mi)`` rows over `grid` plus every breakpoint in range.

    At a breakpoint where the MMSE jumps, two rows share the same gamma: the
    left limit first, then the (right-continuous) value.
    """
    mmse = superposition.mmse_curve(design)
    mi = superposition.mi_curve(design)
    lo, hi = grid[0], grid[-1]
    inside = [b for b in design.ladder if lo <= b <= hi]
    gammas = np.unique(np.concatenate([grid, inside]))
    rows = []
    for g in gammas:
        if g in inside and g > 0:
            left = mmse.left_limit(g)
            right = mmse(g)
            if left != right:
                rows.append((g, left, mi(g)))
        rows.append((g, mmse(g), mi(g)))
    return rows


def cmd_curve(args):
    design = _design_from_args(args)
    grid = _expand_grid(args.grid, args.points)
    if args.db:
        grid = db_to_linear(grid)
    if grid[0] < 0:
        raise UsageError("grid must start at gamma >= 0")
    out = _Emitter(args, "csv")
    rows = [(g, m, out.rate(i)) for g, m, i in curve_rows(design, grid)]
    out.table(["gamma", "mmse", "mi"], rows,
              {"design": design.to_dict(), "units": args.units})
    return EXIT_OK


def cmd_bound(args):
    if args.snr1 is None:
        raise UsageError("need --snr1")
    snr1 = _snr(args, [args.snr1])[0]
    if (args.rate is None) == (args.alpha is None):
        raise UsageError("give exactly one of --rate or --alpha")
    if args.rate is not None:
        rate = args.rate * math.log(2.0) if args.units == "bits" else args.rate
        params = finite_length.FiniteLengthParams.from_rate(rate, snr1, args.pe)
    else:
        params = finite_length.FiniteLengthParams(snr1, args.alpha, args.pe)
    limit = params.alpha * params.snr1
    if args.grid is None:
        grid = np.linspace(0.0, limit, args.points + 2)[1:-1]
    else:
        grid = _expand_grid(args.grid, args.points)
        if args.db:
            grid = db_to_linear(grid)
    if grid[0] < 0 or grid[-1] >= limit:
        raise superposition.InfeasibleError(
            f"snr0 grid must lie in [0, alpha*snr1) = [0, {limit:.17g})")
    rows = []
    for s0 in grid:
        b = finite_length.finite_length_mmse_lower_bound(params, s0, detail=True)
        rows.append((s0, b.value, 1.0 / (1.0 + s0), b.vacuous))
    out = _Emitter(args, "csv")
    out.table(["snr0", "bound", "uncoded", "vacuous"], rows,
              {"snr1": params.snr1, "alpha": params.alpha, "pe": params.pe})
    return EXIT_OK


def cmd_disturbance(args):
    if args.snrs is None or args.alphas is None:
        raise UsageError("need --snrs and --alphas")
    snrs = _snr(args, args.snrs)
    alphas = list(args.alphas)
    if len(alphas) != len(snrs) - 1:
        raise UsageError(f"need {len(snrs) - 1} alphas for {len(snrs)} SNRs")
    out = _Emitter(args, "json")
    constraints = list(zip(snrs[:-1], alphas))
    eff = disturbance.effective_alpha(constraints)
    doc = {
        "constraints": [list(c) for c in constraints],
        "snrK": snrs[-1],
        "effective_alpha": eff,
        "max_rate": out.rate(disturbance.max_rate_disturbance(constraints, snrs[-1])),
        "units": args.units,
    }
    if len(constraints) == 1:
        r_max, r_d = disturbance.rate_disturbance_point(snrs[0], snrs[1], alphas[0])
        doc["rate"] = out.rate(r_max)
        doc["disturbance"] = out.rate(r_d)
    if args.compare_beta is not None:
        if len(constraints) != 1:
            raise UsageError("--compare-beta needs a single constraint")
        cmp = disturbance.compare_measures(snrs[0], snrs[1], args.compare_beta, alphas[0])
        rec = cmp.to_dict()
        rec["mmse_rate"] = out.rate(rec["mmse_rate"])
        rec["disturbance_rate"] = out.rate(rec["disturbance_rate"])
        doc["comparison"] = rec
    out.document(doc)
    return EXIT_OK


def _codebook_from_args(args):
    if args.codebook_file:
        with open(args.codebook_file) as fh:
            return oracle.DiscreteCodebook(np.asarray(json.load(fh), dtype=float))
    if args.codebook == "bpsk":
        return oracle.bpsk()
    if args.codebook == "single":
        return oracle.DiscreteCodebook(np.ones((1, args.length)))
    if args.codebook == "random":
        return oracle.random_codebook(args.size, args.length, seed=args.seed)
    raise UsageError(f"unknown codebook {args.codebook!r}")


def cmd_verify(args):
    codebook = _codebook_from_args(args)
    checks = []
    status = "pass"
    if args.check in ("crossing", "all"):
        variance = codebook.prior_variance if args.variance is None else args.variance
        grid = np.asarray(_snr(args, args.gammas), dtype=float)
        method = args.method if args.method != "auto" else (
            "quadrature" if codebook.length == 1 else "monte_carlo")
        rep = oracle.verify_single_crossing(codebook, variance, grid, args.samples,
                                            seed=args.seed, method=method)
        checks.append({"name": "single_crossing", "variance": variance, "method": method,
                       **rep.to_dict()})
        if not rep.verdict:
            status = "fail"
    if args.check in ("identity", "all"):
        snr = _snr(args, [args.snr])[0]
        try:
            rep = oracle.verify_immse_identity(codebook, snr, args.grid_density, args.samples,
                                               seed=args.seed, method=args.method)
        except oracle.BudgetExceeded as exc:
            checks.append({"name": "immse_identity", "verdict": "infeasible",
                           "message": str(exc)})
            status = "infeasible" if status == "pass" else status
        else:
            checks.append({"name": "immse_identity", **rep.to_dict()})
            if not rep.passed:
                status = "fail"
    out = _Emitter(args, "json")
    out.format = "json"
    out.document({"codebook": {"size": codebook.size, "length": codebook.length},
                  "seed": args.seed, "status": status, "checks": checks})
    if status == "fail":
        return EXIT_VERIFY
    if status == "infeasible":
        return EXIT_INFEASIBLE
    return EXIT_OK


def _common(p):
    p.add_argument("--units", choices=["nats", "bits"], default="nats")
    p.add_argument("--db", action="store_true", help="SNR inputs are in dB")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--out", default=None, help="write to this file instead of stdout")
    p.add_argument("--display-digits", type=int, default=None,
                   help="round stdout output; never applied with --out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None, help="key=value file mirroring the flags")


def _design_flags(p):
    p.add_argument("--snrs", type=_floats, help="SNR ladder snr_0,...,snr_K")
    p.add_argument("--betas", type=_floats, help="constraint betas, one per SNR but the last")
    p.add_argument("--alpha", type=float, help="rate parameter instead of --betas (two SNRs)")
    p.add_argument("--strict-sum", action="store_true", help="require sum(betas) <= 1")


def build_parser():
    parser = argparse.ArgumentParser(prog="immse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="optimal superposition design and its rate")
    _common(p)
    _design_flags(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("curve", help="MMSE and mutual information over an SNR grid")
    _common(p)
    _design_flags(p)
    p.add_argument("--design", help="JSON written by the design subcommand")
    p.add_argument("--grid", type=_grid, default=[0.0, 3.0, 0.01])
    p.add_argument("--points", type=int, default=301)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("bound", help="finite-length MMSE lower bound over snr0")
    _common(p)
    p.add_argument("--snr1", type=float)
    p.add_argument("--rate", type=float, help="code rate in --units")
    p.add_argument("--alpha", type=float)
    p.add_argument("--pe", type=float, default=0.0)
    p.add_argument("--grid", type=_grid, default=None)
    p.add_argument("--points", type=int, default=99)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("disturbance", help="mutual-information disturbance region")
    _common(p)
    p.add_argument("--snrs", type=_floats)
    p.add_argument("--alphas", type=_floats)
    p.add_argument("--compare-beta", type=float, default=None)
    p.set_defaults(func=cmd_disturbance)

    p = sub.add_parser("verify", help="oracle checks on a discrete codebook")
    _common(p)
    p.add_argument("--codebook", choices=["bpsk", "single", "random"], default="bpsk")
    p.add_argument("--codebook-file", default=None, help="JSON list of codewords")
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--length", type=int, default=1)
    p.add_argument("--check", choices=["crossing", "identity", "all"], default="all")
    p.add_argument("--variance", type=float, default=None)
    p.add_argument("--gammas", type=_floats, default=[0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
    p.add_argument("--snr", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--grid-density", type=int, default=65)
    p.add_argument("--method", choices=["auto", "monte_carlo", "quadrature"], default="auto")
    p.set_defaults(func=cmd_verify)
    return parser


def read_config(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key in _BOOL_KEYS:
                values[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                values[key] = value
    return values


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    command = next((a for a in argv if not a.startswith("-")), None)
    subparsers = parser._subparsers._group_actions[0].choices
    if command not in subparsers:
        return
    target = subparsers[command]
    dests = {a.dest for a in target._actions}
    unknown = set(cfg) - dests
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    target.set_defaults(**cfg)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (UsageError, OSError) as exc:
        print(f"immse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except superposition.InfeasibleError as exc:
        print(f"immse: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except oracle.BudgetExceeded as exc:
        print(f"immse: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"immse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
