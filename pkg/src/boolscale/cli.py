"""Command-line front end.

Every subcommand loads a scaling document (a literal path, or the name of a
bundled document such as ``middlescale`` or ``kps``), runs one library
analysis, and prints a deterministic report.  Exit codes: 0 for a passing
result, 1 for a verification failure or undefined result (reason on standard
output), 2 for input errors (diagnostics on standard error).
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import documents
from .algebra import Algebra, Element
from .beliefs import BeliefError, derivation_counterexample_search
from .census import UnsupportedSizeError, enumerate_scalings
from .cfrac import (
    ConditionOnZeroError,
    NotLinearError,
    ZeroDenominatorError,
    continued_fraction,
    scale_multiply,
    verify_product_rule,
)
from .divide import (
    Indivisible,
    InfeasibilityCertificate,
    Measure,
    NotDividedError,
    OrderMismatchError,
    construct_division,
    find_agreeing_measure,
    is_divided,
    kleene_tuple_representation,
    kps_example,
    KPS_GENERATORS,
)
from .documents import DocumentError
from .scaling import Scaling, ScalingError, Undefined, verify_axioms
from . import upsets

PASS, FAIL, BAD_INPUT = 0, 1, 2


def _bundled_names() -> list[str]:
    root = resources.files("boolscale.data")
    return sorted(p.name[: -len(".json")] for p in root.iterdir()
                  if p.name.endswith(".json"))


def load_document(spec: str) -> documents.ScalingDocument:
    path = Path(spec)
    if path.exists():
        return documents.parse(path.read_text(encoding="utf-8"))
    name = spec[: -len(".json")] if spec.endswith(".json") else spec
    candidate = resources.files("boolscale.data") / f"{name}.json"
    if candidate.is_file():
        return documents.parse(candidate.read_text(encoding="utf-8"))
    raise DocumentError(
        f"no such file, and no bundled document named {name!r} "
        f"(bundled: {', '.join(_bundled_names())})"
    )


def _scaling_for(spec: str) -> Scaling:
    if spec == "kps" and not Path(spec).exists():
        # regenerate rather than parse: identical content, but keeps the
        # closure construction on the hot path where tests can see it
        return kps_example()
    return load_document(spec).to_scaling()


def _parse_set(algebra: Algebra, text: str) -> Element:
    if text in ("0", ""):
        return algebra.bottom
    if "," in text:
        labels = text.split(",")
    elif text in algebra.atom_labels:
        labels = [text]
    else:
        labels = list(text)  # compact form: one character per atom
    for lab in labels:
        if lab not in algebra.atom_labels:
            raise DocumentError(f"unknown atom {lab!r} in set {text!r}")
    return algebra.element(labels)


def _fmt_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


# -- subcommand handlers --------------------------------------------------


def cmd_check(args) -> int:
    s = _scaling_for(args.file)
    report = verify_axioms(s)
    if report.ok:
        print(f"PASS: valid scaling, {s.k} classes")
        return PASS
    print(report.summary())
    return FAIL


def cmd_axioms(args) -> int:
    s = _scaling_for(args.file)
    report = verify_axioms(s)
    print(f"classes: {s.k}; intervals checked: {report.intervals_checked}")
    if report.ok:
        print("PASS: strictly increasing; complement reversal holds "
              "on every interval")
        return PASS
    for v in report.violations:
        print(v.describe())
    print(f"FAIL: {len(report.violations)} violation(s)")
    return FAIL


def cmd_table(args) -> int:
    scale = _scaling_for(args.file).scale()
    print(scale.render_table(which=args.op, unicode_symbols=args.unicode))
    return PASS


def cmd_divided(args) -> int:
    s = _scaling_for(args.file)
    check = is_divided(s)
    if check:
        print("DIVIDED")
        return PASS
    x, y = check.counterexample
    print(f"NOT DIVIDED: rho({x!r}) < rho({y!r}) with no part of {y!r} "
          f"matching rho({x!r})")
    return FAIL


def cmd_measure(args) -> int:
    s = _scaling_for(args.file)
    result = find_agreeing_measure(s)
    if isinstance(result, Measure):
        for lab, m in zip(s.algebra.atom_labels, result.masses):
            print(f"{lab} = {_fmt_fraction(m)}")
        return PASS
    print("INFEASIBLE")
    print(result.describe())
    return FAIL


def cmd_divide(args) -> int:
    s = _scaling_for(args.file)
    result = construct_division(s)
    if isinstance(result, Indivisible):
        print("INDIVISIBLE")
        print(result.certificate.describe())
        return FAIL
    print(f"DIVISION: {result.algebra1.n} fragment atoms, "
          f"class sizes {result.class_sizes}")
    for row in result.vertices.matrix:
        print("vertex: (" + ", ".join(_fmt_fraction(q) for q in row) + ")")
    for lab in s.algebra.atom_labels:
        print(f"sigma({lab}) = {result.sigma[lab]}")
    return PASS


def cmd_kleene(args) -> int:
    s = _scaling_for(args.file)
    try:
        rep = kleene_tuple_representation(s)
    except (NotDividedError, OrderMismatchError) as exc:
        print(f"NO TUPLE REPRESENTATION: {exc}")
        return FAIL
    for group in rep.groups:
        print("group: " + " ".join(group))
    return PASS


def cmd_census(args) -> int:
    one_to_one = True if args.one_to_one else None
    result = enumerate_scalings(args.n, one_to_one=one_to_one,
                                linear_only=args.linear)
    if args.one_to_one and args.linear:
        print(f"n={args.n}: one-to-one linear {result.one_to_one_linear}")
    elif args.one_to_one:
        print(f"n={args.n}: one-to-one {result.one_to_one_total} "
              f"(linear {result.one_to_one_linear})")
    elif args.linear:
        linear = result.one_to_one_linear + result.many_to_one_linear
        print(f"n={args.n}: linear {linear}")
    else:
        print(f"n={args.n}: one-to-one {result.one_to_one_total} "
              f"(linear {result.one_to_one_linear}), "
              f"many-to-one {result.many_to_one_total} "
              f"(linear {result.many_to_one_linear}), "
              f"total {result.total}")
    return PASS


def cmd_kps(args) -> int:
    s = kps_example()
    report = verify_axioms(s)
    if not report.ok:
        print(report.summary())
        return FAIL
    print(f"PASS: valid scaling, {s.k} classes")
    for lo, hi in KPS_GENERATORS:
        lo_el = s.algebra.element(lo)
        hi_el = s.algebra.element(hi)
        ok = s.lt_class(s.rho(lo_el), s.rho(hi_el))
        print(f"rho({lo_el!r}) < rho({hi_el!r}): {ok}")
    return PASS


def cmd_cf(args) -> int:
    scale = _scaling_for(args.file).scale()
    num = scale.class_named(args.num)
    den = scale.class_named(args.den)
    try:
        entries = continued_fraction(scale, num, den)
    except (NotLinearError, ZeroDenominatorError, NotDividedError) as exc:
        print(f"UNDEFINED: {exc}")
        return FAIL
    print("[" + ", ".join(map(str, entries)) + "]")
    return PASS


def cmd_multiply(args) -> int:
    scale = _scaling_for(args.file).scale()
    x = scale.class_named(args.x)
    y = scale.class_named(args.y)
    try:
        result = scale_multiply(scale, x, y)
    except (NotLinearError, ZeroDenominatorError, NotDividedError) as exc:
        print(f"UNDEFINED: {exc}")
        return FAIL
    if isinstance(result, Undefined):
        print(f"UNDEFINED: {result.reason}")
        return FAIL
    print(scale.name_of(result))
    return PASS


def cmd_prodrule(args) -> int:
    s = _scaling_for(args.file)
    x = _parse_set(s.algebra, args.x)
    z = _parse_set(s.algebra, args.z)
    try:
        report = verify_product_rule(s, x, z)
    except (ConditionOnZeroError, NotLinearError, NotDividedError) as exc:
        print(f"UNDEFINED: {exc}")
        return FAIL
    line = (f"joint {_fmt_fraction(report.joint)} = "
            f"conditional {_fmt_fraction(report.conditional)} "
            f"* given {_fmt_fraction(report.given)}; "
            f"quotient cf {report.quotient_entries} vs "
            f"conditional cf {report.conditional_entries}")
    if report.ok:
        print("PASS: " + line)
        return PASS
    print("FAIL: " + line + f" ({report.witness})")
    return FAIL


def cmd_beliefs(args) -> int:
    skip = tuple(args.skip or ())
    result = derivation_counterexample_search(args.n, skip_axioms=skip)
    if result is None:
        print(f"no counterexample at n={args.n}"
              + (f" with {', '.join(skip)} disabled" if skip else ""))
        return PASS
    print("COUNTEREXAMPLE: " + result.describe())
    return FAIL


def cmd_demo_nonarch(args) -> int:
    evens, odds = upsets.EVENS, upsets.ODDS
    one = upsets.UPSet.finite((1,))
    if args.what == "compare":
        pairs = [
            ("evens", evens, "odds", odds),
            ("evens", evens, "evens+{1}", evens | one),
            ("{0}", upsets.UPSet.finite((0,)), "{2}", upsets.UPSet.finite((2,))),
            ("multiples of 4", upsets.UPSet.periodic(4, (0,)), "evens", evens),
        ]
        for la, a, lb, b in pairs:
            print(f"{la} vs {lb}: {upsets.nonarch_compare(a, b).value}")
    elif args.what == "infinitesimal":
        for label, v in [
            ("rho(empty)", upsets.galaxy_value(upsets.EMPTY)),
            ("rho(empty)+3", upsets.GalaxyValue(upsets.EMPTY, 3)),
            ("rho(evens)", upsets.galaxy_value(evens)),
        ]:
            rep = upsets.is_infinitesimal(v)
            print(f"{label}: {'infinitesimal' if rep else 'not infinitesimal'}"
                  f" ({rep.reason})")
    elif args.what == "discontinuity":
        print(upsets.discontinuity_witness().summary())
    elif args.what == "divided":
        cases = [
            ("{0}", upsets.UPSet.finite((0,)), "evens", evens),
            ("evens+{1}", evens | one, "N", upsets.NATURALS),
            ("multiples of 4", upsets.UPSet.periodic(4, (0,)), "evens", evens),
        ]
        for la, a, lb, b in cases:
            w = upsets.divided_witness(a, b)
            print(f"{la} < {lb}: witness {w!r}")
    elif args.what == "shift":
        print(upsets.galaxy_shift_report().summary())
    else:  # bounds
        v, w = upsets.galaxy_value(evens), upsets.galaxy_value(odds)
        ub = upsets.galaxy_value(upsets.NATURALS)
        for _ in range(3):
            nxt = upsets.upper_bound_predecessor(v, w, ub)
            print(f"{ub!r} bounds both; so does its predecessor {nxt!r}")
            ub = nxt
    return PASS


def cmd_report(args) -> int:
    from . import figures  # deferred: pulls in matplotlib

    s = _scaling_for(args.file)
    scale = s.scale()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    measure = find_agreeing_measure(s)
    values = None
    if isinstance(measure, Measure):
        values = [measure(s.algebra.from_mask(next(
            m for m in range(s.algebra.size) if s.class_of[m] == c)))
            for c in range(s.k)]
    csv_path = out / "summary.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["class", "fiber_size", "measure"])
        sizes = [len(f) for f in s.fibers()]
        for c in scale.display:
            writer.writerow([
                scale.names[c],
                sizes[c],
                _fmt_fraction(values[c]) if values is not None else "",
            ])
    add_path = out / "add_table.png"
    dual_path = out / "dual_table.png"
    order_path = out / "order.png"
    figures.render_table_figure(scale, str(add_path), which="add")
    figures.render_table_figure(scale, str(dual_path), which="dualadd")
    figures.render_order_figure(scale, str(order_path))
    for p in (csv_path, add_path, dual_path, order_path):
        print(f"wrote {p}")
    return PASS


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boolscale",
        description="Analyze scalings of finite Boolean algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        return p

    p = add("check", cmd_check, help="verify the scaling axioms")
    p.add_argument("file")
    p = add("axioms", cmd_axioms, help="verbose axiom report")
    p.add_argument("file")
    p = add("table", cmd_table, help="render the + or dual-+ table")
    p.add_argument("file")
    p.add_argument("--op", choices=("add", "dualadd"), default="add")
    p.add_argument("--unicode", action="store_true")
    p = add("divided", cmd_divided, help="check dividedness")
    p.add_argument("file")
    p = add("measure", cmd_measure, help="find an agreeing measure")
    p.add_argument("file")
    p = add("divide", cmd_divide, help="construct a division")
    p.add_argument("file")
    p = add("kleene", cmd_kleene, help="tuple representation of a divided scale")
    p.add_argument("file")
    p = add("census", cmd_census, help="count scalings up to isomorphism")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--one-to-one", action="store_true")
    p.add_argument("--linear", action="store_true")
    add("kps", cmd_kps, help="build and verify the five-atom example")
    p = add("cf", cmd_cf, help="continued fraction of a class ratio")
    p.add_argument("file")
    p.add_argument("--num", required=True)
    p.add_argument("--den", required=True)
    p = add("multiply", cmd_multiply, help="scale multiplication")
    p.add_argument("file")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p = add("prodrule", cmd_prodrule, help="verify the product rule")
    p.add_argument("file")
    p.add_argument("--x", required=True)
    p.add_argument("--z", required=True)
    p = add("beliefs", cmd_beliefs,
            help="exhaustive search for axiom-passing non-scalings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--skip", action="append", metavar="AXIOM")
    p = add("demo-nonarch", cmd_demo_nonarch,
            help="demonstrations on the ultimately periodic carrier")
    p.add_argument("what", choices=("compare", "infinitesimal",
                                    "discontinuity", "divided", "shift",
                                    "bounds"))
    p = add("report", cmd_report,
            help="write CSV summary and figure renderings")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DocumentError, UnsupportedSizeError, BeliefError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ScalingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
