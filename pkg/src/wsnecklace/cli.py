"""Command-line front end.

Exit codes: 0 pass, 1 a checked property was falsified, 2 invalid input,
3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .conjectures import MODES, run_conjectures
from .cyclic_core import GroundContext, Subset, dominates_mask, neighbors, parse_elements, weakly_separated
from .errors import InputError, InvalidComplexError, ResourceLimitError
from .necklace import (
    Necklace,
    Permutation,
    alignments,
    average_rotation,
    find_simple_alignment,
    format_necklace,
    largest_necklace,
    necklace_to_permutation,
    parse_necklace,
    permutation_to_necklace,
    reduce_dummies,
    reduce_to_rotation,
)
from .plabic import build_tiling, complex_check, geometry_report, necklace_curve, render_svg
from .purity import DEFAULT_LIMIT, apply_mutation, find_mutations, grassmann_rank, purity_report
from .regions import Collection, exterior, format_collection, interior, parse_collection, separated_fan
from .verify import SUITES, run_verify

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


def _emit(args, payload: dict[str, Any], text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read_lines(path: str) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_necklace(args) -> Necklace:
    if getattr(args, "perm", None):
        N = permutation_to_necklace(Permutation.parse(args.perm))
    elif getattr(args, "necklace", None):
        N = parse_necklace(_read_lines(args.necklace))
    else:
        raise InputError("give a necklace with --necklace FILE or --perm LIST")
    if N.dummies and args.auto_reduce:
        N, removed = reduce_dummies(N)
        print(f"# removed dummies {sorted(removed)}", file=sys.stderr)
    return N


def _load_collection(path: str, n: int | None) -> Collection:
    return parse_collection(_read_lines(path), n)


# ---------------------------------------------------------------- commands


def cmd_ws(args) -> int:
    lits = [parse_elements(t) for t in (args.x, args.y)]
    n = args.n or max((max(p) for p in lits if p), default=1)
    x, y = (Subset.of(p, n) for p in lits)
    sep = weakly_separated(x, y)
    shifts = [j for j in range(1, n + 1) if dominates_mask(x.mask, y.mask, j, n)]
    payload = {"X": str(x), "Y": str(y), "n": n, "separated": sep, "shifts": shifts,
               "neighbors": neighbors(x, y)}
    text = f"{x} {'||' if sep else 'not ||'} {y}  (X <<_j Y for j in {shifts})"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_necklace(args) -> int:
    if args.largest:
        if args.n is None or args.r is None:
            raise InputError("--largest needs --n and --r")
        N = largest_necklace(GroundContext(args.n, args.r))
    else:
        N = _load_necklace(args)
    payload: dict[str, Any] = {
        "n": N.n,
        "r": N.r,
        "sets": [str(s) for s in N.sets],
        "dummies": list(N.dummies),
        "connected": N.connected,
    }
    if N.dummy_free:
        pi = necklace_to_permutation(N)
        payload["perm"] = str(pi)
        payload["average_rotation"] = average_rotation(pi)
        payload["alignments"] = [list(a) for a in sorted(alignments(pi))]
        simple = find_simple_alignment(pi)
        payload["simple_alignment"] = list(simple) if simple else None
        if args.reduce:
            payload["reduction"] = [str(p) for p in reduce_to_rotation(pi)]
    if args.json:
        _emit(args, payload, "")
    else:
        sys.stdout.write(format_necklace(N))
        info = {k: v for k, v in payload.items() if k != "sets"}
        for k in sorted(info):
            print(f"# {k}: {info[k]}", file=sys.stderr)
    return EXIT_OK


def cmd_region(args) -> int:
    N = _load_necklace(args)
    region = {"int": interior, "out": exterior, "sep": separated_fan}[args.kind](N)
    payload = {"n": N.n, "r": N.r, "region": args.kind, "size": len(region), "members": region.literals()}
    _emit(args, payload, format_collection(region) or "# empty\n")
    return EXIT_OK


def cmd_purity(args) -> int:
    kind = args.domain
    N = None
    if kind == "grassmannian":
        if args.n is None or args.r is None:
            raise InputError("--domain grassmannian needs --n and --r")
        domain = Collection.grassmannian(GroundContext(args.n, args.r))
    elif kind == "file":
        if not args.path:
            raise InputError("--domain file needs a PATH")
        domain = _load_collection(args.path, args.n)
    else:
        N = _load_necklace(args)
        domain = interior(N) if kind == "int" else exterior(N)
    rep = purity_report(domain, args.limit, label=kind)
    rep.seed = args.seed
    expected = None
    if kind == "grassmannian":
        expected = grassmann_rank(domain.ctx)
    elif N is not None:
        a = len(alignments(necklace_to_permutation(N)))
        rep.alignments = a
        expected = grassmann_rank(N.ctx) - a if kind == "int" else a
    payload = rep.to_dict()
    payload["expected_rank"] = expected
    text = (f"{kind} domain over C({domain.ctx.n},{domain.ctx.r}): {len(domain)} sets, "
            f"{len(rep.maximal_collections)} maximal systems, sizes {sorted(set(rep.sizes))}, "
            f"{'pure' if rep.pure else 'NOT pure'} rank {rep.rank}"
            + (f" (expected {expected})" if expected is not None else ""))
    _emit(args, payload, text)
    if expected is not None and (not rep.pure or rep.rank != expected):
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_mutate(args) -> int:
    C = _load_collection(args.collection, args.n)
    if not C.is_separated():
        raise InputError("the collection is not weakly separated")
    muts = find_mutations(C)
    if args.apply is not None:
        if not 0 <= args.apply < len(muts):
            raise InputError(f"mutation index {args.apply} out of range [0, {len(muts)})")
        C2 = apply_mutation(C, muts[args.apply])
        _emit(args, {"mutation": str(muts[args.apply]), "members": C2.literals()}, format_collection(C2))
        return EXIT_OK
    payload = {"n": C.ctx.n, "r": C.ctx.r, "mutations": [
        {"index": t, "A": str(m.A), "quad": list(m.quad), "source": str(m.source), "target": str(m.target)}
        for t, m in enumerate(muts)
    ]}
    _emit(args, payload, "\n".join(f"{t}: {m}" for t, m in enumerate(muts)) or "# no mutations")
    return EXIT_OK


def cmd_tile(args) -> int:
    C = _load_collection(args.collection, args.n)
    if not C.is_separated():
        raise InputError("the collection is not weakly separated")
    T = build_tiling(C)
    curve = necklace_curve(_load_necklace(args)) if args.necklace else None
    report = geometry_report(T, curve)
    status = EXIT_OK
    if args.check:
        rep = complex_check(T)
        report["complex_ok"] = rep.ok
        report["violations"] = rep.violations
        if not rep.ok:
            status = EXIT_FALSIFIED
    if args.svg:
        try:
            render_svg(T, curve, args.svg)
        except OSError as exc:
            raise InputError(str(exc)) from None
    text = "\n".join(f"{k}: {report[k]}" for k in sorted(report) if k != "violations")
    _emit(args, report, text)
    return status


def cmd_verify(args) -> int:
    run = run_verify(args.suite, args.n_max, args.seed, args.trials, args.threads, args.claims)
    text = "\n".join(c.line() + ("" if c.passed else f"\n    witness: {json.dumps(c.witness, sort_keys=True)}")
                     for c in run.claims)
    text += f"\n{'ALL PASS' if run.passed else 'FAILURES'} ({run.elapsed_ms / 1000:.1f}s)"
    _emit(args, run.to_dict(), text)
    if not run.complete:
        return EXIT_LIMIT
    return EXIT_OK if run.passed else EXIT_FALSIFIED


def cmd_conjectures(args) -> int:
    if args.n is None:
        raise InputError("conjectures needs --n")
    rs = [args.r] if args.r is not None else list(range(1, args.n))
    reports = [run_conjectures(args.n, r, args.mode, args.trials, args.seed, args.limit) for r in rs]
    payload = {"n": args.n, "mode": args.mode, "seed": args.seed, "reports": reports}
    lines = []
    for rep in reports:
        ce = {k: len(v) for k, v in rep["counterexamples"].items()}
        lines.append(f"C({rep['n']},{rep['r']}): {rep['generalized_necklaces']} generalized necklaces, "
                     f"{rep['necklace_cases']} Grassmann necklaces (all hold: {rep['necklace_cases_hold']}), "
                     f"counterexamples {ce}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="ground set size")
    common.add_argument("--r", type=int, help="subset size")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                        help="largest domain handed to maximal-system enumeration")
    common.add_argument("--auto-reduce", action="store_true", help="strip dummies from input necklaces")

    def necklace_source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--necklace", metavar="FILE", help="necklace file, line k holding N_k")
        g.add_argument("--perm", metavar="LIST", help="permutation such as 4,3,1,2")

    parser = argparse.ArgumentParser(prog="wsnecklace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ws", parents=[common], help="weak separation of two sets")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_ws)

    p = sub.add_parser("necklace", parents=[common], help="inspect or convert a necklace")
    necklace_source(p)
    p.add_argument("--largest", action="store_true", help="the necklace of cyclic intervals")
    p.add_argument("--reduce", action="store_true", help="show the simple-alignment reduction chain")
    p.set_defaults(func=cmd_necklace)

    p = sub.add_parser("region", parents=[common], help="interior, exterior or separated fan")
    p.add_argument("kind", choices=["int", "out", "sep"])
    necklace_source(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("purity", parents=[common], help="enumerate maximal separated subsystems")
    p.add_argument("--domain", choices=["grassmannian", "int", "out", "file"], required=True)
    p.add_argument("path", nargs="?", help="collection file for --domain file")
    necklace_source(p)
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("mutate", parents=[common], help="list or apply square mutations")
    p.add_argument("--collection", metavar="FILE", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--apply", type=int, metavar="INDEX")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("tile", parents=[common], help="plabic tiling geometry and SVG")
    p.add_argument("--collection", metavar="FILE", required=True)
    necklace_source(p)
    p.add_argument("--svg", metavar="OUT")
    p.add_argument("--check", action="store_true", help="run the complex check")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("verify", parents=[common], help="run the claim batteries")
    p.add_argument("--suite", choices=SUITES, default="theorems")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--claims", nargs="+", metavar="ID")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("conjectures", parents=[common], help="generalized-necklace conjecture harness")
    p.add_argument("--mode", choices=MODES, default="exhaustive")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_conjectures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidComplexError as exc:
        print(f"falsified: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())
