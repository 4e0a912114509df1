"""Command-line front end.

Exit codes:
  0  success
  1  malformed input or configuration
  2  precision exhausted (the suggested precision is printed)
  3  budget exceeded
  4  a checked bound or verdict failed (analysis bound, invalid order, non-COP map)
  5  inconclusive factor count (did not stabilize on doubling)

Option values come from flags, then the JSON ``--config`` file (keys are
the option names with dashes replaced by underscores), then defaults.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import warnings
from fractions import Fraction
from typing import Any, Sequence

from . import jsonio
from .analysis.complexity import DEFAULT_WINDOW, complexity_counts
from .analysis.covers import ArcCover, join_cover_growth, min_subcover_count
from .analysis.independence import DEFAULT_BUDGET, arc_indicator_family, independence_max
from .analysis.language import language_equality
from .analysis.variation import FunctionSample, variation, variation_cut_inequality
from .coding import Coloring, CyclicPartition, coding_pattern
from .corder import cut_at, is_cop, lex_product, validate_circular_order
from .errors import BudgetExceeded, InconclusiveComplexity, InputError, PrecisionExhausted
from .rotation import AngleSpec, NonMinimalWarning, default_precision, parse_point
from .split import double_circle_sample, rotation_number_estimate, split

EXIT_OK, EXIT_INPUT, EXIT_PRECISION, EXIT_BUDGET, EXIT_CHECK, EXIT_INCONCLUSIVE = range(6)

DEFAULTS: dict[str, Any] = {
    "alpha": "golden",
    "cuts": "0,1-alpha",
    "colors": None,
    "z": "0",
    "range": "0..20",
    "box": None,
    "format": None,
    "output": None,
    "seed": 0,
    "n": "1..10",
    "window": DEFAULT_WINDOW,
    "arcs": None,
    "sample": 1000,
    "cap": 4,
    "budget": DEFAULT_BUDGET,
    "family": None,
    "input": None,
    "cut": None,
    "gap": False,
    "a_seq": "consecutive",
    "n_max": 12,
    "shape": None,
    "N": 10_000,
    "at": None,
    "A": "[]",
    "linear": '["-","+"]',
    "markers": "",
    "count": 5,
}


# parsing helpers -------------------------------------------------------------


def parse_range(text: str) -> tuple[int, int]:
    """``"a..b"`` (inclusive) or a single integer."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
        else:
            lo_i = hi_i = int(text)
    except ValueError:
        raise InputError(f"bad range {text!r}; expected a..b") from None
    if hi_i < lo_i:
        raise InputError(f"empty range {text!r}")
    return lo_i, hi_i


def parse_box(text: str) -> list[tuple[int, int]]:
    return [parse_range(part) for part in str(text).split(",")]


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad integer list {text!r}") from None


def load_json_arg(text: str) -> Any:
    """A JSON literal, or ``@path`` / a path to a JSON file."""
    text = str(text)
    path = text[1:] if text.startswith("@") else None
    if path is None:
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            path = text
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def make_spec(opts) -> AngleSpec:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonMinimalWarning)
        spec = AngleSpec.from_strings(str(opts.alpha), opts.precision)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return spec


def make_coloring(spec: AngleSpec, opts) -> Coloring:
    part = CyclicPartition.parse(spec, str(opts.cuts))
    if opts.colors is None:
        return Coloring.standard(part)
    return Coloring(part, tuple(parse_int_list(opts.colors)))


# commands ------------------------------------------------------------------------


def cmd_gen(opts) -> tuple[int, Any]:
    spec = make_spec(opts)
    coloring = make_coloring(spec, opts)
    z = parse_point(spec, str(opts.z))
    box = parse_box(opts.box) if opts.box else [parse_range(opts.range)] + [(0, 0)] * (spec.k - 1)
    pattern = coding_pattern(spec, coloring, z, box)
    fmt = opts.format or ("text" if spec.k == 1 else "json")
    if fmt == "json":
        return EXIT_OK, pattern.to_json()
    if fmt == "csv":
        return EXIT_OK, pattern.to_csv()
    if spec.k != 1:
        return EXIT_OK, pattern.to_csv()
    return EXIT_OK, "".join(str(int(x)) for x in pattern.symbols.reshape(-1)) + "\n"


def cmd_complexity(opts) -> tuple[int, Any]:
    spec = make_spec(opts)
    coloring = make_coloring(spec, opts)
    z = parse_point(spec, str(opts.z))
    if opts.shape:
        shapes = [tuple(parse_int_list(opts.shape))]
    else:
        lo, hi = parse_range(opts.n)
        if lo < 1:
            raise InputError("window lengths start at 1")
        shapes = [(n,) + (1,) * (spec.k - 1) for n in range(lo, hi + 1)]
    counts = complexity_counts(spec, coloring, z, shapes, int(opts.window))
    report = {
        "p": [c.count for c in counts],
        "stabilized": all(c.stabilized for c in counts),
        "details": [c.to_json() for c in counts],
        "window": int(opts.window),
    }
    code = EXIT_OK if report["stabilized"] else EXIT_INCONCLUSIVE
    return code, report


def cmd_independence(opts) -> tuple[int, Any]:
    rng = random.Random(int(opts.seed))
    if opts.family:
        data = load_json_arg(opts.family)
        family = data["family"] if isinstance(data, dict) else data
    else:
        if not opts.arcs:
            raise InputError("give --arcs 's:t;...' or --family JSON")
        arcs = []
        for item in str(opts.arcs).split(";"):
            if item.strip():
                try:
                    s, t = item.split(":")
                    arcs.append((float(Fraction(s)), float(Fraction(t))))
                except ValueError:
                    raise InputError(f"bad arc {item!r}") from None
        sample = sorted(rng.random() for _ in range(int(opts.sample)))
        family = arc_indicator_family(arcs, sample).tolist()
    result = independence_max(family, int(opts.cap), int(opts.budget))
    report = {"independence": result.to_json(), "cap": int(opts.cap), "seed": int(opts.seed)}
    return EXIT_OK, report


def _function_sample(data) -> FunctionSample:
    try:
        order = jsonio.order_from_json(data)
        raw = data["values"]
    except (KeyError, TypeError):
        raise InputError("expected {'arrangement': [...], 'values': {...} or [...]}") from None
    if isinstance(raw, list):
        if len(raw) != len(data["arrangement"]):
            raise InputError("values list must match the arrangement")
        labels = [jsonio.decode_label(x) for x in data["arrangement"]]
        values = dict(zip(labels, raw))
    elif isinstance(raw, dict):
        by_str = {jsonio.label_str(x): x for x in order.arrangement}
        values = {}
        for k, v in raw.items():
            if k not in by_str:
                raise InputError(f"value for unknown label {k!r}")
            values[by_str[k]] = v
    else:
        raise InputError("'values' must be a list or an object")
    values = {k: Fraction(str(v)) if isinstance(v, (int, float, str)) else v for k, v in values.items()}
    return FunctionSample(order, values)


def cmd_variation(opts) -> tuple[int, Any]:
    if not opts.input:
        raise InputError("give --input with a function sample")
    data = load_json_arg(opts.input)
    f0 = _function_sample(data)
    report: dict = {"variation": _num(variation(f0))}
    code = EXIT_OK
    if opts.cut is not None:
        c = jsonio.decode_label(json.loads(opts.cut) if _is_json(opts.cut) else opts.cut)
        cut = variation_cut_inequality(f0, c, gap=bool(opts.gap))
        report["cut"] = cut.to_json()
        if not cut.holds:
            code = EXIT_CHECK
    return code, report


def cmd_cover_growth(opts) -> tuple[int, Any]:
    spec = make_spec(opts)
    if not opts.arcs:
        raise InputError("give --arcs 's:t;...'")
    cover = ArcCover.parse(spec, str(opts.arcs))
    n_max = int(opts.n_max)
    if opts.a_seq == "consecutive":
        A = list(range(n_max))
    elif opts.a_seq in ("powers", "powers2"):
        A = [2**i for i in range(n_max)]
    else:
        A = parse_int_list(opts.a_seq)
    growth = join_cover_growth(cover, A, n_max)
    report = growth.to_json()
    report["N1_direct"] = min_subcover_count(cover)
    report["A"] = A[:n_max]
    ok = growth.step_bound_holds and growth.linear_bound_holds and report["N1_direct"] == growth.counts[0]
    return (EXIT_OK if ok else EXIT_CHECK), report


def cmd_language(opts) -> tuple[int, Any]:
    spec = make_spec(opts)
    coloring = make_coloring(spec, opts)
    z = parse_point(spec, str(opts.z))
    if opts.shape:
        shapes = [tuple(parse_int_list(opts.shape))]
    else:
        lo, hi = parse_range(opts.n)
        shapes = [(n,) + (1,) * (spec.k - 1) for n in range(lo, hi + 1)]
    reports = [language_equality(spec, coloring, z, s, int(opts.sample)) for s in shapes]
    ok = all(r.equal for r in reports)
    return (EXIT_OK if ok else EXIT_CHECK), {"language_eq": [r.to_json() for r in reports], "equal": ok}


def cmd_rotation(opts) -> tuple[int, Any]:
    spec = make_spec(opts)
    if spec.k != 1:
        raise InputError("rotation-number needs a single angle")
    N = int(opts.N)
    # classical coding: symbol 1 on D = [1 - alpha, 1)
    coloring = Coloring.standard(CyclicPartition.parse(spec, "0,1-alpha"))
    z = parse_point(spec, str(opts.z))
    seq = coding_pattern(spec, coloring, z, [(0, N - 1)]).symbols
    est = rotation_number_estimate(seq, N)
    report = est.to_json()
    report["alpha"] = float(spec.angles[0].value)
    report["error"] = abs(report["estimate"] - report["alpha"])
    return EXIT_OK, report


def _order_arg(opts):
    if not opts.input:
        raise InputError("give an input JSON file")
    return load_json_arg(opts.input)


def cmd_validate(opts) -> tuple[int, Any]:
    data = _order_arg(opts)
    if isinstance(data, dict) and "triples" in data:
        rel = jsonio.relation_from_json(data)
    else:
        from .corder import derived_relation

        rel = derived_relation(jsonio.order_from_json(data))
    report = validate_circular_order(rel)
    out = {
        "is_corder": report.is_corder,
        "violations": [
            {"axiom": axiom, "witness": [[jsonio.encode_label(x) for x in t] for t in witness]}
            for axiom, witness in report.violations
        ],
    }
    return (EXIT_OK if report.is_corder else EXIT_CHECK), out


def cmd_cop(opts) -> tuple[int, Any]:
    data = _order_arg(opts)
    try:
        dom = jsonio.order_from_json(data["domain"])
        cod = jsonio.order_from_json(data["codomain"])
    except (KeyError, TypeError):
        raise InputError("expected {'domain': {...}, 'codomain': {...}, 'map': {...}}") from None
    f = jsonio.map_from_json(data, dom, cod)
    verdict = is_cop(f)
    out = {
        "cop": verdict.cop,
        "condition": verdict.condition,
        "witness": [jsonio.encode_label(x) for x in verdict.witness] if verdict.witness else None,
    }
    return (EXIT_OK if verdict.cop else EXIT_CHECK), out


def cmd_cut(opts) -> tuple[int, Any]:
    order = jsonio.order_from_json(_order_arg(opts))
    if opts.at is None:
        raise InputError("give --at LABEL")
    c = jsonio.decode_label(json.loads(opts.at) if _is_json(opts.at) else opts.at)
    cut = cut_at(order, c)
    return EXIT_OK, {
        "cut": jsonio.encode_label(c),
        "order": [jsonio.encode_label(tuple(x)) if isinstance(x, tuple) else jsonio.encode_label(x) for x in cut.order],
        "restores": cut.restore() == order,
    }


def cmd_split(opts) -> tuple[int, Any]:
    order = jsonio.order_from_json(_order_arg(opts))
    A = load_json_arg(opts.A)
    if not isinstance(A, list):
        raise InputError("--A must be a JSON list of labels")
    S = split(order, [jsonio.decode_label(x) for x in A])
    return EXIT_OK, S.to_json()


def cmd_lexprod(opts) -> tuple[int, Any]:
    order = jsonio.order_from_json(_order_arg(opts))
    L = load_json_arg(opts.linear)
    if not isinstance(L, list):
        raise InputError("--linear must be a JSON list")
    return EXIT_OK, lex_product(order, [jsonio.decode_label(x) for x in L]).to_json()


def cmd_double_circle(opts) -> tuple[int, Any]:
    spec = make_spec(opts)
    order = double_circle_sample(int(opts.count), parse_int_list(opts.markers), spec)
    report = order.to_json()
    from .corder import derived_relation

    if len(order) <= 60:
        report["valid"] = validate_circular_order(derived_relation(order)).is_corder
    return EXIT_OK, report


def _is_json(text: str) -> bool:
    try:
        json.loads(text)
        return True
    except (json.JSONDecodeError, TypeError):
        return False


def _num(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(v)
    return v


# argument parser -------------------------------------------------------------------------


def _spec_opts(p: argparse.ArgumentParser, coloring: bool = True) -> None:
    p.add_argument("--alpha", help="comma-separated angles: golden, sqrt2m1, decimals or a/b")
    if coloring:
        p.add_argument("--cuts", help="comma-separated cut points, e.g. 0,1-alpha")
        p.add_argument("--colors", help="comma-separated arc colors (default: standard coloring)")
    p.add_argument("--z", help="base point expression")


def _global_opts(p: argparse.ArgumentParser, default=None) -> None:
    p.add_argument("--config", default=default, help="JSON file with option defaults")
    p.add_argument("--precision", type=int, default=default, help="working precision P in decimal digits")
    p.add_argument("--seed", type=int, default=default, help="seed for randomized sampling")
    p.add_argument("--format", choices=["text", "json", "csv"], default=default, help="output format")
    p.add_argument("--output", default=default, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclord", description="Circular orders, rotation codings and tameness diagnostics.")
    _global_opts(parser)
    # global options are also accepted after the subcommand; SUPPRESS keeps
    # a leaf parser from overwriting a value given before it
    common = argparse.ArgumentParser(add_help=False)
    _global_opts(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="emit a coding sequence or pattern")
    _spec_opts(gen)
    gen.add_argument("--range", help="index range a..b for k = 1")
    gen.add_argument("--box", help="comma-separated ranges, one per angle")
    gen.set_defaults(func=cmd_gen)

    analyze = sub.add_parser("analyze", help="tameness diagnostics")
    asub = analyze.add_subparsers(dest="analysis", required=True)

    p = asub.add_parser("complexity", parents=[common])
    _spec_opts(p)
    p.add_argument("--n", help="window lengths a..b")
    p.add_argument("--shape", help="box window shape for k >= 2, e.g. 3,3")
    p.add_argument("--window", type=int, help="number of sampled window starts")
    p.set_defaults(func=cmd_complexity)

    p = asub.add_parser("independence", parents=[common])
    p.add_argument("--arcs", help="arc indicators 's:t;...' sampled at random circle points")
    p.add_argument("--family", help="JSON (or @file) matrix of function values")
    p.add_argument("--sample", type=int, help="number of random sample points")
    p.add_argument("--cap", type=int, help="largest subfamily size searched")
    p.add_argument("--budget", type=int, help="search step budget")
    p.set_defaults(func=cmd_independence)

    p = asub.add_parser("variation", parents=[common])
    p.add_argument("--input", help="JSON (or @file): {'arrangement': [...], 'values': ...}")
    p.add_argument("--cut", help="also check the cut inequality at this label")
    p.add_argument("--gap", action="store_const", const=True, help="cut in the gap after --cut")
    p.set_defaults(func=cmd_variation)

    p = asub.add_parser("cover-growth", parents=[common])
    p.add_argument("--alpha")
    p.add_argument("--arcs", help="open arcs 's:t;...'")
    p.add_argument("--A", dest="a_seq", help="consecutive, powers, or a comma-separated list")
    p.add_argument("--n-max", dest="n_max", type=int)
    p.set_defaults(func=cmd_cover_growth)

    p = asub.add_parser("language-eq", parents=[common])
    _spec_opts(p)
    p.add_argument("--n", help="window lengths a..b")
    p.add_argument("--shape", help="box window shape for k >= 2")
    p.add_argument("--sample", type=int, help="about this many window positions")
    p.set_defaults(func=cmd_language)

    p = asub.add_parser("rotation-number", parents=[common])
    p.add_argument("--alpha")
    p.add_argument("--z")
    p.add_argument("--N", type=int)
    p.set_defaults(func=cmd_rotation)

    corder = sub.add_parser("corder", help="finite circular orders")
    csub = corder.add_subparsers(dest="operation", required=True)
    for name, func, extra in [
        ("validate", cmd_validate, []),
        ("cop", cmd_cop, []),
        ("cut", cmd_cut, ["--at"]),
        ("split", cmd_split, ["--A"]),
        ("lexprod", cmd_lexprod, ["--linear"]),
    ]:
        p = csub.add_parser(name, parents=[common])
        p.add_argument("input", nargs="?", help="JSON file (or inline JSON)")
        for flag in extra:
            p.add_argument(flag, dest=flag.lstrip("-"))
        p.set_defaults(func=func)
    p = csub.add_parser("double-circle", parents=[common])
    p.add_argument("--n", dest="count", type=int, help="number of base orbit points")
    p.add_argument("--markers", help="comma-separated orbit indices to mark")
    p.add_argument("--alpha")
    p.set_defaults(func=cmd_double_circle)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then from defaults."""
    config: dict = {}
    if args.config:
        config = load_json_arg("@" + args.config)
        if not isinstance(config, dict):
            raise InputError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if value is None:
            if key in config:
                setattr(args, key, config[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])
    if args.precision is None:
        args.precision = config.get("precision", default_precision())
    return args


def emit(payload: Any, opts) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        text = jsonio.dumps(payload) + "\n"
    if opts.output:
        with open(opts.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        opts = resolve(args)
        code, payload = opts.func(opts)
        emit(payload, opts)
        return code
    except PrecisionExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"suggested precision: {exc.suggested_precision}", file=sys.stderr)
        return EXIT_PRECISION
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InconclusiveComplexity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
