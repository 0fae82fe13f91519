"""Command-line front end.

Exit codes: 0 success, 1 a verify suite failed, 2 bad usage,
configuration or input files (including missing seed tables), 3 the
computation itself failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .checks import SUITES, run_suite
from .curve import CurveData, CurveError, poincare_curve
from .genfun import (
    GenSeries,
    GenSeriesError,
    betti_extract,
    genseries_from_json,
    genseries_to_json,
    pf_from_pfa,
    pfa_f,
)
from .geometry import DivisorClass, RuledSurface, in_positive_cone, polarization_divisor
from .hall import HallParseError, b_sum, hall_mul, parse_hall_element, skew_derivation
from .scalar import ScalarParseError, parse_scalar
from .wallcross import (
    MissingSeries,
    WallContext,
    WallError,
    blowup_ratio_lf,
    blowup_ratio_tf,
    blowup_theta,
    cross_wall,
    pullback_pf,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_COMPUTE = 3


class ConfigError(ValueError):
    pass


# -- argument helpers -----------------------------------------------------------------


def _pair(text: str) -> tuple[Fraction, Fraction]:
    parts = [p.strip() for p in str(text).strip("[]() ").split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return Fraction(parts[0]), Fraction(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _order(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad order {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("order must be nonnegative")
    return value


def _curve(args) -> CurveData:
    if getattr(args, "weil", None):
        coeffs = [parse_scalar(x) for x in args.weil.split(",")]
        if len(coeffs) % 2 != 1:
            raise ConfigError("an explicit Weil polynomial has odd length 2g+1")
        curve = CurveData.explicit((len(coeffs) - 1) // 2, coeffs)
        if curve.genus != args.genus:
            raise ConfigError(f"Weil polynomial has genus {curve.genus}, surface has genus {args.genus}")
        return curve
    return poincare_curve(args.genus)


def _surface(args) -> RuledSurface:
    if args.genus < 0 or args.e < 0:
        raise ConfigError("genus and e must be nonnegative")
    return RuledSurface(args.genus, args.e)


def _divisor(pair) -> DivisorClass:
    if pair[0].denominator != 1 or pair[1].denominator != 1:
        raise ConfigError(f"c1 must be integral, got {pair}")
    return DivisorClass(pair[0], pair[1])


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(objs) -> str:
    return json.dumps(objs, indent=2, sort_keys=True) + "\n"


def _load_series(paths: list[str]) -> list[GenSeries]:
    out = []
    for p in paths:
        try:
            data = json.loads(Path(p).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
        for obj in data if isinstance(data, list) else [data]:
            out.append(genseries_from_json(obj))
    return out


def _render_series(g: GenSeries, fmt: str) -> str:
    if fmt == "json":
        return _dump(genseries_to_json(g))
    if fmt == "csv":
        return betti_extract(g, False).to_csv()
    return str(g.series) + "\n"


# -- commands -------------------------------------------------------------------------


def cmd_ruled(args) -> int:
    surface = _surface(args)
    curve = _curve(args)
    c1 = _divisor(args.c1)
    if args.rank < 1:
        raise ConfigError("rank must be positive")
    pol = args.polarization
    if not in_positive_cone(surface, polarization_divisor(surface, *pol)) or pol == (0, 0):
        raise ConfigError(f"polarization {pol} is not in the positive cone")
    if pol[0] != 0:
        raise ConfigError("only the fibre polarization is computed directly; use wallcross for other rays")
    flag = "tf" if args.tf else "lf"
    g = pfa_f(surface, curve, args.rank, c1, flag, args.order)
    if c1.a % args.rank:
        _emit("empty (r does not divide f·c1)\n", args.output)
        return EXIT_OK
    if args.pf:
        g = pf_from_pfa(g)
    if args.gerbe or args.format == "csv":
        table = betti_extract(g, args.gerbe)
        text = {"json": table.to_json, "csv": table.to_csv, "text": table.to_text}[args.format]()
    else:
        text = _render_series(g, args.format)
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}, all", file=sys.stderr)
        return EXIT_CONFIG
    results = run_suite(args.suite)
    for res in results:
        print(res.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK_FAILED


def cmd_hall(args) -> int:
    if args.op == "mul":
        if len(args.operands) < 2:
            raise ConfigError("hall mul needs at least two operands")
        acc = parse_hall_element(args.operands[0])
        for text in args.operands[1:]:
            acc = hall_mul(acc, parse_hall_element(text))
        out = acc
    elif args.op == "skew":
        if len(args.operands) != 2:
            raise ConfigError("hall skew needs a degree and an element")
        out = skew_derivation(int(args.operands[0]), parse_hall_element(args.operands[1]))
    else:
        if len(args.operands) != 3:
            raise ConfigError("hall bsum needs r d n")
        r, d, n = (int(x) for x in args.operands)
        out = b_sum(r, d, n)
    if args.format == "json":
        text = _dump({"terms": [[str(k), str(v)] for k, v in sorted(out.terms.items())]})
    else:
        text = str(out) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_blowup(args) -> int:
    if args.input:
        series = _load_series(args.input)
        out = [genseries_to_json(pullback_pf(g, args.m, args.order)) for g in series]
        _emit(_dump(out[0] if len(out) == 1 else out), args.output)
        return EXIT_OK
    if args.rank < 1:
        raise ConfigError("rank must be positive")
    if args.theta:
        s = blowup_theta(args.rank, args.m, args.order)
    elif args.lf:
        s = blowup_ratio_lf(args.rank, args.m, args.order)
    else:
        s = blowup_ratio_tf(args.rank, args.m, args.order)
    if args.format == "json":
        text = _dump({"terms": [[str(te), str(c)] for te, _, c in s.terms()], "order": str(s.order)})
    else:
        text = str(s) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_wallcross(args) -> int:
    if not args.input:
        raise ConfigError("wallcross needs --input seed tables")
    series = _load_series(args.input)
    surface = series[0].surface
    if any(g.surface != surface for g in series):
        raise ConfigError("input tables live on different surfaces")
    ctx = WallContext(surface, args.wall, args.perturb, args.source if args.source != "wall" else "plus")
    inputs = {}
    for g in series:
        if g.normalization == "pfa":
            g = pf_from_pfa(g)
        inputs[(g.rank, g.c1)] = g
    targets = None
    if args.rank is not None:
        if args.c1 is None:
            raise ConfigError("--rank needs --c1")
        key = (args.rank, _divisor(args.c1))
        order = args.order
        if order is None and key in inputs:
            order = inputs[key].series.order
        if order is None:
            raise ConfigError("--order is required for a class that is not among the inputs")
        targets = [(args.rank, _divisor(args.c1), Fraction(order))]
    elif args.order is not None:
        targets = [(r, c, args.order) for (r, c) in inputs]
    out = cross_wall(ctx, inputs, targets, source=args.source, target=args.target, extra=args.extra)
    objs = [genseries_to_json(g) for _, g in sorted(out.items(), key=lambda kv: (kv[0][0], kv[0][1]))]
    _emit(_dump(objs[0] if len(objs) == 1 else objs), args.output)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def _surface_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--e", type=int, default=0)
    p.add_argument("--weil", help="explicit Weil coefficients, constant term first, e.g. '1,-2*s,q'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ruledsurf", description="Generating functions of sheaves on ruled surfaces.")
    parser.add_argument("--config", help="key = value file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ruled", help="fibre-polarized generating function or Betti table")
    _surface_args(p)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--c1", type=_pair, default=(Fraction(0), Fraction(0)))
    p.add_argument("--polarization", type=_pair, default=(Fraction(0), Fraction(1)))
    p.add_argument("--order", type=_order, default=Fraction(4))
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--tf", action="store_true", help="torsion-free sheaves")
    kind.add_argument("--lf", action="store_true", help="locally free sheaves (default)")
    p.add_argument("--pf", action="store_true", help="emit the q^{chi/2} t^{-ch2} normalization")
    p.add_argument("--gerbe", action="store_true", help="multiply by q-1 and emit a Betti table")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_ruled)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", help="hall, phi, quot, genfun, wallcross, blowup or all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hall", help="Hall algebra of P^1")
    p.add_argument("op", choices=("mul", "skew", "bsum"))
    p.add_argument("operands", nargs="+")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_hall)

    p = sub.add_parser("blowup", help="blow-up ratios and theta sums, or pull back a pf table")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--order", type=_order, default=Fraction(4))
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--tf", action="store_true", help="torsion-free ratio (default)")
    kind.add_argument("--lf", action="store_true", help="locally free ratio")
    kind.add_argument("--theta", action="store_true", help="the bare theta sum")
    p.add_argument("--input", nargs="*", help="pf-normalized GenSeries JSON files to pull back")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("wallcross", help="move pf tables across a wall")
    p.add_argument("--input", nargs="*", help="GenSeries JSON files (pf or pfa, torsion-free)")
    p.add_argument("--wall", type=_pair, required=False, default=(Fraction(2), Fraction(1)))
    p.add_argument("--perturb", type=_pair, default=(Fraction(0), Fraction(1)))
    p.add_argument("--from", dest="source", choices=("plus", "minus", "wall"), default="plus")
    p.add_argument("--to", dest="target", choices=("plus", "minus", "wall"), default="minus")
    p.add_argument("--rank", type=int)
    p.add_argument("--c1", type=_pair)
    p.add_argument("--order", type=_order)
    p.add_argument("--extra", type=int, default=0, help="enlarge the decomposition search bound")
    p.add_argument("--output")
    p.set_defaults(func=cmd_wallcross)
    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    config = read_config(args.config)
    sub = next(a for a in parser._subparsers._group_actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub.choices[args.command]
    known = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in config.items():
        action = known.get(key)
        if action is None:
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        if action.nargs == 0:
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("*", "+"):
            defaults[key] = value.split()
        else:
            try:
                defaults[key] = action.type(value) if action.type else value
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ConfigError(f"config key {key}: {exc}") from exc
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, CurveError, ScalarParseError, HallParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GenSeriesError, MissingSeries) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WallError, ArithmeticError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
