"""Command line entry point ``operadforge``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import cooperad, groebner, koszul, species
from .dsl import DSLSyntaxError, format_operad, parse_operad_presentation
from .engine import component_dimension, in_ideal
from .linalg import DEFAULT_PRIMES
from .presets import UnknownPreset, preset_with_params
from .report import ConfigError, SuiteConfig, run_suite


def parse_params(text: str | None) -> dict[str, Fraction]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = Fraction(v.strip())
    return out


def _operad(ref: str, params: dict):
    pres, inline = preset_with_params(ref)
    if hasattr(pres, "generators"):
        merged = {k: Fraction(v) for k, v in inline.items()}
        merged.update(params)
        return pres, {k: v for k, v in merged.items() if k in pres.params}
    raise UnknownPreset(f"{ref!r} is not an operad preset")


def _emit(obj, as_json: bool = True) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(obj)


def cmd_dim(args) -> int:
    pres, params = _operad(args.preset, parse_params(args.params))
    primes = tuple(args.primes) if args.primes else DEFAULT_PRIMES
    rep = component_dimension(pres, params, args.n, args.mode, primes)
    out = rep.to_json()
    if args.expect is not None:
        out["expected"] = args.expect
    _emit(out)
    return 0 if args.expect is None or rep.dim == args.expect else 1


def cmd_member(args) -> int:
    pres, params = _operad(args.preset, parse_params(args.params))
    ok = in_ideal(pres, params, args.element)
    _emit({"preset": pres.name, "element": args.element, "in_ideal": ok})
    return 0 if ok else 1


def cmd_dual(args) -> int:
    pres, params = _operad(args.preset, parse_params(args.params))
    dual = koszul.quadratic_dual(pres, params)
    print(format_operad(dual), end="")
    if args.compare:
        other = parse_operad_presentation(Path(args.compare).read_text())
        other_params = {k: v for k, v in parse_params(args.params).items() if k in other.params}
        ok = koszul.same_relations(dual, None, other, other_params)
        print(f"# relation span equals {args.compare}: {ok}")
        return 0 if ok else 1
    return 0


def cmd_koszul(args) -> int:
    raw = parse_params(args.params)
    P, pp = _operad(args.p, raw)
    if args.pdual == "auto":
        D, dp = koszul.quadratic_dual(P, pp), {}
    else:
        D, dp = _operad(args.pdual, raw)
    N = args.degree
    dims_p = [component_dimension(P, pp, n).dim for n in range(1, N + 1)]
    dims_d = [component_dimension(D, dp, n).dim for n in range(1, N + 1)]
    r = koszul.koszulness_series_test(dims_p, dims_d, N)
    out = r.to_json()
    out.update({"dims": dims_p, "dual_dims": dims_d})
    _emit(out)
    return 0 if r.passed else 1


def cmd_species(args) -> int:
    raw = parse_params(args.params)
    A, pa = _operad(args.a, raw)
    B, pb = _operad(args.b, raw)
    da = [component_dimension(A, pa, n).dim for n in range(1, args.n + 1)]
    db = [component_dimension(B, pb, n).dim for n in range(1, args.n + 1)]
    _emit({"dims_A": da, "dims_B": db, "n": args.n, "dim": species.species_compose_dims(da, db, args.n)})
    return 0


def cmd_xi(args) -> int:
    raw = parse_params(args.params)
    A, _ = _operad(args.a, raw)
    B, _ = _operad(args.b, raw)
    C, pc = _operad(args.c, raw)
    r = species.xi_check(A, B, C, {**raw, **pc})
    _emit(r.to_json())
    return 0 if r.passed else 1


def cmd_algebra(args) -> int:
    if args.action != "dim":
        raise SystemExit(f"unknown algebra action {args.action!r}")
    ref = args.preset if "(" in args.preset else f"{args.preset}({args.n})"
    pres, inline = preset_with_params(ref)
    if hasattr(pres, "generators"):
        raise UnknownPreset(f"{args.preset!r} is not an algebra preset")
    params = {k: Fraction(v) for k, v in inline.items()}
    params.update(parse_params(args.params))
    gb = groebner.buchberger(pres, params, args.order)
    d = gb.dimension()
    _emit({"preset": pres.name, "variables": len(pres.variables), "params": {k: str(v) for k, v in params.items()},
           "order": args.order, "basis_size": len(gb), "dim": d})
    return 0 if args.expect is None or d == args.expect else 1


def cmd_cooperad(args) -> int:
    params = parse_params(args.params) or {"h1": Fraction(1), "h2": Fraction(1)}
    sizes = [int(x) for x in args.sizes.split(",")] if args.sizes else None
    if args.check == "rho":
        a, b = sizes or (1, 2)
        I = tuple(range(1, a + 1))
        J = tuple(range(a + 1, a + b + 1))
        r = cooperad.rho_well_defined(I, J, params)
        _emit({"I": I, "J": J, "checked": r.checked, "passed": r.passed, "failures": r.failures})
    elif args.check == "coassoc":
        r = cooperad.coassociativity_check(tuple(sizes or (1, 1, 1)), params)
        _emit({"sizes": sizes or [1, 1, 1], "checked": r.checked, "passed": r.passed, "failures": r.failures})
    else:
        n = sizes[0] if sizes else 3
        r = cooperad.dim_match_operad(n, params)
        _emit({"n": n, "algebra_dim": r.algebra_dim, "operad_dim": r.operad_dim, "passed": r.passed})
    return 0 if r.passed else 1


def cmd_suite(args) -> int:
    config = SuiteConfig.load(args.config) if args.config else SuiteConfig()
    if args.out:
        config.out = None
    if args.jobs:
        config.jobs = args.jobs
    report = run_suite(config)
    text = report.dumps(timing=args.timing)
    if args.out:
        Path(args.out).write_text(text)
    for line in report.summary_lines():
        print(line)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="operadforge", description="Exact computations with binary quadratic operads.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="dimension of an operad component")
    p.add_argument("preset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--params")
    p.add_argument("--mode", choices=("auto", "exact", "modular"), default="auto")
    p.add_argument("--primes", type=int, nargs="+")
    p.add_argument("--expect", type=int)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("member", help="ideal membership of an element")
    p.add_argument("--preset", required=True)
    p.add_argument("--params")
    p.add_argument("--element", required=True)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("dual", help="quadratic dual presentation")
    p.add_argument("preset")
    p.add_argument("--params")
    p.add_argument("--compare", help="DSL file whose relation span the dual should equal")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("koszul-test", help="generating-series test")
    p.add_argument("p")
    p.add_argument("pdual", help="preset of the dual, or 'auto' for the computed dual")
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--params")
    p.set_defaults(func=cmd_koszul)

    p = sub.add_parser("species", help="dimension of a composition product")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--params")
    p.set_defaults(func=cmd_species)

    p = sub.add_parser("xi", help="arity-4 composition-product check")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--params")
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("algebra", help="commutative algebra computations")
    p.add_argument("action", choices=("dim",))
    p.add_argument("preset")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--params")
    p.add_argument("--order", choices=groebner.ORDERS, default="degrevlex")
    p.add_argument("--expect", type=int)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("cooperad", help="cocomposition checks")
    p.add_argument("--check", choices=("rho", "coassoc", "dimmatch"), required=True)
    p.add_argument("--sizes", help="block sizes, e.g. 1,2 or 1,1,1 (n for dimmatch)")
    p.add_argument("--params")
    p.set_defaults(func=cmd_cooperad)

    p = sub.add_parser("suite", help="run the claim catalog")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int)
    p.add_argument("--timing", action="store_true", help="include elapsed times (breaks byte-identity)")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (UnknownPreset, DSLSyntaxError, ConfigError, KeyError, ValueError, OSError) as exc:
        print(f"operadforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
