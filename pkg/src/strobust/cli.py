"""Command-line front end.

Exit status: 0 holds / success, 1 refuted (or no routing), 2 usage or
budget refusal, 3 an input file failed to parse.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import construct, suites
from .fileformat import ParseError, load, render
from .graph import GraphError, IoDag
from .routing import MalformedEncoding, decode_permutation, encode_permutation, route_pairing
from .search import DEFAULT_BUDGET, DEFAULT_TRIALS, BudgetExceeded, SearchMode
from .transform.overlay import overlay
from .transform.reduce import reduce
from . import verify

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# Output plumbing


def _guard(out: str | None, inputs: list[str], force: bool) -> None:
    if out is None or force:
        return
    target = Path(out).resolve()
    for src in inputs:
        if src and Path(src).resolve() == target:
            raise UsageError(f"refusing to overwrite input {src} (pass --force)")


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sidecar(out: str | None, suffix: str, text: str) -> None:
    if out is not None:
        Path(out + suffix).write_text(text)


def _load(path: str) -> IoDag:
    try:
        return load(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc


def _mode(args) -> SearchMode:
    if args.mode == "sampled":
        if args.seed is None:
            raise UsageError("sampled mode needs --seed")
        return SearchMode.sampled(args.trials, args.seed, args.budget)
    return SearchMode.exhaustive(args.budget, args.order)


def _need_seed(args) -> int:
    if args.seed is None:
        raise UsageError(f"'{args.command} {getattr(args, 'what', '')}' is randomized and needs --seed")
    return args.seed


def _emit_report(args, report) -> int:
    text = report.to_json(timing=args.timing) + "\n"
    _write(args.report, text)
    return EXIT_OK if report.holds else EXIT_REFUTED


# Commands


def cmd_gen(args) -> int:
    _guard(args.output, [getattr(args, "input", None)], args.force)
    cert = None
    if args.what == "butterfly":
        g = construct.butterfly(args.k)
    elif args.what == "superconcentrator":
        g = construct.superconcentrator(args.n)
    elif args.what == "base":
        cert = construct.base_depth_robust(args.n, _need_seed(args), e=args.e, tau_base=args.tau_base)
        g = cert.graph
    elif args.what == "three-grates":
        h = _load(args.input)
        g = construct.three_grates(h, h, h, args.tau, _need_seed(args))
    elif args.what == "sandwich":
        parts = construct.sandwich_parts(args.n, args.tau, _need_seed(args), base_e=args.base_e)
        g, cert = parts.graph, parts.base
    else:  # amplify
        g = construct.amplify(_load(args.input), Fraction(args.c))
    _write(args.output, render(g))
    if cert is not None:
        _sidecar(args.output, ".cert.json", cert.to_json() + "\n")
    return EXIT_OK


def cmd_transform(args) -> int:
    _guard(args.output, [args.input], args.force)
    g = _load(args.input)
    if args.what == "reduce":
        reduced, rmap = reduce(g, uniform=args.uniform)
        _write(args.output, render(reduced))
        _sidecar(args.output, ".map.json", rmap.to_json() + "\n")
    else:
        h, vc = overlay(g, challenge_size=args.challenge_size)
        _write(args.output, render(h))
        _sidecar(args.output, ".challenges.json", json.dumps({"challenges": vc}) + "\n")
    return EXIT_OK


def _challenges(args, g: IoDag) -> list[int]:
    if args.challenges is None:
        return list(g.outputs)
    p = Path(args.challenges)
    if p.exists():
        return list(json.loads(p.read_text())["challenges"])
    return [int(x) for x in args.challenges.split(",") if x]


def cmd_check(args) -> int:
    _guard(args.report, [args.graph], args.force)
    g = _load(args.graph)
    mode = _mode(args)
    what = args.what
    if what == "depth":
        r = verify.check_depth_robust(g, args.e, args.d, mode)
    elif what == "edge-depth":
        r = verify.check_edge_depth_robust(g, args.e, args.d, mode)
    elif what == "st":
        r = verify.check_st_robust(g, args.k1, args.k2, args.d_min, mode)
    elif what == "max-st":
        r = verify.check_maximally_st_robust(g, Fraction(args.c1), mode, args.d_min, record_depth=True)
    elif what == "superconcentrator":
        r = verify.check_superconcentrator(g, mode)
    elif what == "connector":
        r = verify.check_connector(g, mode, partial=args.partial)
    elif what == "grate":
        r = verify.check_grate(g, Fraction(args.c0), Fraction(args.c1), mode)
    elif what == "ssdr":
        r = verify.check_ssdr(g, args.e, args.d, mode)
    else:  # hardness
        r = verify.check_hardness(g, _challenges(args, g), args.s, args.t, Fraction(args.eps), mode)
    return _emit_report(args, r)


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        a, _, b = item.partition(":")
        if not b:
            raise UsageError(f"pairing item {item!r} is not of the form i:j")
        out.append((int(a), int(b)))
    return out


def cmd_route(args) -> int:
    _guard(args.output, [args.graph], args.force)
    g = _load(args.graph)
    pairs = _pairs(args.pairing)
    for i, j in pairs:
        if not (0 <= i < len(g.inputs) and 0 <= j < len(g.outputs)):
            raise UsageError(f"terminal pair {i}:{j} out of range")
    routing = route_pairing(g, [(g.inputs[i], g.outputs[j]) for i, j in pairs], args.budget)
    doc = {
        "schema": verify.SCHEMA,
        "pairing": [list(p) for p in pairs],
        "routed": routing is not None,
        "paths": [list(p.nodes) for p in routing.paths] if routing else None,
    }
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if routing else EXIT_REFUTED


def cmd_codec(args) -> int:
    _guard(args.output, [args.graph, getattr(args, "bits", None)], args.force)
    g = _load(args.graph)
    if args.what == "encode":
        perm = [int(x) for x in args.perm.split(",")]
        bits = encode_permutation(g, perm, args.budget)
        _write(args.output, "".join(str(int(b)) for b in bits) + "\n")
        return EXIT_OK
    p = Path(args.bits)
    text = p.read_text() if p.exists() else args.bits
    digits = text.strip()
    if set(digits) - {"0", "1"}:
        raise MalformedEncoding("bit string may only contain 0 and 1")
    perm = decode_permutation(g, [int(c) for c in digits])
    _write(args.output, json.dumps({"perm": perm}) + "\n")
    return EXIT_OK


def cmd_suite(args) -> int:
    _guard(args.report, [args.graph], args.force)
    mode = SearchMode.exhaustive(args.budget, args.order)
    name = args.what
    if name == "theorem6":
        rep = suites.theorem6(args.n, args.tau, _need_seed(args), mode)
    else:
        if args.graph is None:
            raise UsageError(f"suite {name} needs --graph")
        g = _load(args.graph)
        if name == "theorem2":
            rep = suites.theorem2(g, _need_seed(args), args.samples, mode)
        elif name == "theorem5":
            rep = suites.theorem5(g, mode)
        elif name == "theorem7":
            rep = suites.theorem7(g, args.s, mode)
        else:
            rep = suites.theorem8(g, mode)
    _write(args.report, rep.to_json() + "\n")
    print(rep.summary(), file=sys.stderr)
    return EXIT_OK if rep.holds else EXIT_REFUTED


# Parser


def _search_flags(p: argparse.ArgumentParser, modes: bool = True) -> None:
    if modes:
        p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
        p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        p.add_argument("--order", choices=("lex", "revlex"), default="lex", help="exhaustive enumeration order")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--force", action="store_true", help="allow an output path to overwrite an input")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strobust", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a graph").add_subparsers(dest="what", required=True)
    p = gen.add_parser("butterfly")
    p.add_argument("--k", type=int, required=True)
    p = gen.add_parser("superconcentrator")
    p.add_argument("--n", type=int, required=True)
    p = gen.add_parser("base")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--e", type=int, default=0)
    p.add_argument("--tau-base", type=int, default=2)
    p = gen.add_parser("three-grates")
    p.add_argument("input", help="base graph file used for all three layers")
    p.add_argument("--tau", type=int, required=True)
    p = gen.add_parser("sandwich")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--base-e", type=int, default=0)
    p = gen.add_parser("amplify")
    p.add_argument("input")
    p.add_argument("--c", required=True, help="fraction in (0, 1], e.g. 1/2")
    for p in gen.choices.values():
        p.add_argument("-o", "--output")
        _search_flags(p, modes=False)

    tr = sub.add_parser("transform", help="reduce or overlay a graph").add_subparsers(dest="what", required=True)
    p = tr.add_parser("reduce")
    p.add_argument("--uniform", type=int)
    p = tr.add_parser("overlay")
    p.add_argument("--challenge-size", type=int)
    for p in tr.choices.values():
        p.add_argument("input")
        p.add_argument("-o", "--output")
        _search_flags(p, modes=False)

    ck = sub.add_parser("check", help="check a property").add_subparsers(dest="what", required=True)
    for name in ("depth", "edge-depth", "ssdr"):
        p = ck.add_parser(name)
        p.add_argument("--e", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
    p = ck.add_parser("st")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--d-min", type=int, default=0)
    p = ck.add_parser("max-st")
    p.add_argument("--c1", default="1")
    p.add_argument("--d-min", type=int, default=0)
    ck.add_parser("superconcentrator")
    p = ck.add_parser("connector")
    p.add_argument("--partial", action="store_true", help="enumerate partial pairings too")
    p = ck.add_parser("grate")
    p.add_argument("--c0", required=True)
    p.add_argument("--c1", required=True)
    p = ck.add_parser("hardness")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--challenges", help="comma list of node ids or a JSON challenges file; default all outputs")
    for p in ck.choices.values():
        p.add_argument("graph")
        p.add_argument("--report", help="JSON report path (default stdout)")
        _search_flags(p)

    p = sub.add_parser("route", help="route a pairing of terminal positions")
    p.add_argument("graph")
    p.add_argument("--pairing", required=True, help="comma list of input:output positions, e.g. 0:3,1:2")
    p.add_argument("-o", "--output")
    _search_flags(p, modes=False)

    cd = sub.add_parser("codec", help="permutation codec").add_subparsers(dest="what", required=True)
    p = cd.add_parser("encode")
    p.add_argument("graph")
    p.add_argument("--perm", required=True, help="comma list, e.g. 1,0,3,2")
    p = cd.add_parser("decode")
    p.add_argument("graph")
    p.add_argument("bits", help="bit string or a file holding it")
    for p in cd.choices.values():
        p.add_argument("-o", "--output")
        _search_flags(p, modes=False)

    st = sub.add_parser("suite", help="run an end-to-end property suite").add_subparsers(dest="what", required=True)
    for name in suites.SUITES:
        p = st.add_parser(name)
        p.add_argument("--graph")
        p.add_argument("--report")
        p.add_argument("--order", choices=("lex", "revlex"), default="lex")
        _search_flags(p, modes=False)
        if name == "theorem2":
            p.add_argument("--samples", type=int, default=200)
        if name == "theorem6":
            p.add_argument("--n", type=int, default=4)
            p.add_argument("--tau", type=int, default=3)
        if name == "theorem7":
            p.add_argument("--s", type=int, default=1)
    return ap


COMMANDS = {
    "gen": cmd_gen,
    "transform": cmd_transform,
    "check": cmd_check,
    "route": cmd_route,
    "codec": cmd_codec,
    "suite": cmd_suite,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (ParseError, MalformedEncoding) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, BudgetExceeded, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
