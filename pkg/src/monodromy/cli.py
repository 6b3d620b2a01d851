"""Command-line front end.

Matrices are given as row-major quadruples ``"a,b,c,d"``; factor tuples as
``eps:c:d`` triples joined by semicolons, e.g. ``"+1:2:1;+1:1:2"``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
limit hit under ``--strict``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import List, Optional

from . import __version__
from . import classifier as cl
from .diophantine import (hyperbola_brute_force, hyperbola_generate,
                          markov_brute_force, markov_tree)
from .factorization import (Factorization, FactorizationError, apply_moves,
                            orbit_explore, product)
from .sl2z import Mat2, ParabolicParams, parse_matrix, parse_params

SCHEMA_VERSION = "1.0"
INT64_MIN, INT64_MAX = -(2 ** 63), 2 ** 63 - 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- serialization ------------------------------------------------------------

def to_jsonable(obj):
    """Convert results to plain JSON values.

    Integers outside the signed 64-bit range become decimal strings.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj if INT64_MIN <= obj <= INT64_MAX else str(obj)
    if isinstance(obj, Mat2):
        return [to_jsonable(x) for x in obj.flat()]
    if isinstance(obj, ParabolicParams):
        return [obj.eps, to_jsonable(obj.c), to_jsonable(obj.d)]
    if isinstance(obj, Factorization):
        return {"params": [to_jsonable(p) for p in obj.params],
                "factors": [to_jsonable(m) for m in obj.factors],
                "target": to_jsonable(obj.target)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "as_tuple"):
        return [to_jsonable(x) for x in obj.as_tuple()]
    if hasattr(obj, "vector"):
        return [to_jsonable(x) for x in obj.vector]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def make_record(command: str, inputs: dict, results: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "inputs": to_jsonable(inputs), "results": to_jsonable(results)}


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


# -- argument types -----------------------------------------------------------

def _matrix(text: str) -> Mat2:
    try:
        return parse_matrix(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad matrix {text!r}: {exc}")


def _tuple(text: str) -> List[ParabolicParams]:
    out = []
    for tok in text.split(";"):
        if not tok.strip():
            continue
        try:
            out.append(parse_params(tok))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad factor {tok!r}: {exc}")
    if not out:
        raise argparse.ArgumentTypeError("empty factor tuple")
    return out


def _moves(text: str) -> List[int]:
    try:
        moves = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad move list {text!r}")
    if 0 in moves:
        raise argparse.ArgumentTypeError(f"bad move list {text!r}: moves are 1-based")
    return moves


def _eps(text: str) -> int:
    if text in ("+1", "1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError(f"eps must be +1 or -1, got {text!r}")


def _eps_or_all(text: str):
    return None if text == "all" else _eps(text)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return n


# -- subcommands --------------------------------------------------------------

def cmd_hyperbola(args):
    sols = hyperbola_brute_force(args.eps, args.bound)
    results = {"solutions": [s.vector for s in sols], "count": len(sols)}
    lines = [f"{s.d1} {s.d2}" for s in sols]
    if args.generate is not None:
        if args.eps != 1:
            raise UsageError("--generate applies to --eps +1 only")
        gen = sorted(hyperbola_generate(args.generate))
        in_box = [s for s in gen if max(abs(s.d1), abs(s.d2)) <= args.bound]
        results["generated"] = [s.vector for s in gen]
        results["generated_in_box_matches"] = in_box == sols
        lines.append(f"# generated {len(gen)}; in-box agreement: {in_box == sols}")
    inputs = {"eps": args.eps, "bound": args.bound, "generate": args.generate}
    return EXIT_OK, make_record("hyperbola", inputs, results), lines


def cmd_markov(args):
    if args.mode == "brute":
        triples = markov_brute_force(args.max)
        results = {"triples": triples, "count": len(triples)}
        inputs = {"mode": "brute", "max": args.max}
        lines = [f"{t.d1} {t.d2} {t.d3}" for t in triples]
    else:
        tree = markov_tree(args.depth)
        nodes = [{"triple": t, "parent": tree.parent[t], "depth": tree.depth[t]}
                 for t in tree.nodes]
        results = {"nodes": nodes, "count": len(nodes)}
        inputs = {"mode": "tree", "depth": args.depth}
        lines = [f"{'  ' * tree.depth[t]}{t}" for t in tree.nodes]
    return EXIT_OK, make_record("markov", inputs, results), lines


def cmd_factorize(args):
    target, eps = args.target, args.eps
    if args.length == 2:
        sols = [p for p in cl.scan_pairs(target, args.bound)
                if eps is None or p[0].eps == p[1].eps == eps]
    else:
        signs = [(eps, eps)] if eps is not None else [(a, b) for a in (1, -1) for b in (1, -1)]
        sols = []
        for e1, e2 in signs:
            sols.extend(cl.scan_triples(target, args.bound, e1, e2, eps))
        sols.sort()
    results = {"solutions": [list(s) for s in sols], "count": len(sols)}
    inputs = {"target": target, "length": args.length, "bound": args.bound,
              "eps": "all" if eps is None else eps}
    lines = [";".join(str(p) for p in s) for s in sols]
    return EXIT_OK, make_record("factorize", inputs, results), lines


def cmd_hurwitz(args):
    f = Factorization.from_params(args.tuple)
    try:
        g = apply_moves(f, args.moves)
    except IndexError as exc:
        raise UsageError(str(exc))
    results = {"start": f, "result": g, "product_preserved": product(g.factors) == f.target}
    inputs = {"tuple": args.tuple, "moves": args.moves}
    lines = [str(g), f"product {g.target}"]
    return EXIT_OK, make_record("hurwitz", inputs, results), lines


def cmd_orbit(args):
    f = Factorization.from_params(args.tuple)
    rep = orbit_explore(f, args.conjugator or [], args.max_nodes)
    results = {"representatives": rep.representatives, "size": len(rep.representatives),
               "move_count": rep.move_count, "truncated": rep.truncated,
               "target_changed": rep.target_changed, "shift_step": rep.shift_step}
    inputs = {"tuple": args.tuple, "conjugators": args.conjugator or [],
              "max_nodes": args.max_nodes}
    lines = [str(r) for r in rep.representatives]
    lines.append(f"# size {len(rep.representatives)}, truncated {rep.truncated}")
    code = EXIT_LIMIT if rep.truncated and args.strict else EXIT_OK
    return code, make_record("orbit", inputs, results), lines


def cmd_verify(args):
    from .verify import VerifyConfig, verify_paper
    cfg = VerifyConfig(bound_2pt=args.bound_2pt, bound_3pt=args.bound_3pt, depth=args.depth)
    report = verify_paper(cfg, report_path=args.report)
    results = {"passed": report.passed, "checks": [r.to_dict() for r in report.records]}
    inputs = {"bound_2pt": args.bound_2pt, "bound_3pt": args.bound_3pt,
              "depth": args.depth, "report": args.report}
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.check_id}: {r.anchor}" for r in report.records]
    lines.append("all checks passed" if report.passed else f"failed: {', '.join(report.failed)}")
    return (EXIT_OK if report.passed else EXIT_FAIL), make_record("verify-paper", inputs, results), lines


def build_parser() -> argparse.ArgumentParser:
    def flags(default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--json", action="store_true", default=default,
                       help="emit a JSON record")
        p.add_argument("--quiet", action="store_true", default=default,
                       help="suppress stdout")
        p.add_argument("--strict", action="store_true", default=default,
                       help="exit 3 when a node budget is exhausted")
        return p

    # subcommands must not reset flags given before the subcommand name
    common = flags(argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="monodromy", parents=[flags(False)],
        description="Factorizations of SL(2,Z) matrices into primitive parabolic factors.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hyperbola", parents=[common], help="integer points on the hyperbola")
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--bound", type=_nonnegative, required=True)
    p.add_argument("--generate", type=_nonnegative, metavar="DEPTH")
    p.set_defaults(func=cmd_hyperbola)

    p = sub.add_parser("markov", parents=[common], help="Markov triples")
    msub = p.add_subparsers(dest="mode", required=True)
    q = msub.add_parser("brute", parents=[common])
    q.add_argument("--max", type=_positive, required=True)
    q = msub.add_parser("tree", parents=[common])
    q.add_argument("--depth", type=_nonnegative, required=True)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("factorize", parents=[common], help="scan for factorizations of a target")
    p.add_argument("--target", type=_matrix, required=True)
    p.add_argument("--length", type=int, choices=(2, 3), required=True)
    p.add_argument("--bound", type=_positive, required=True)
    p.add_argument("--eps", type=_eps_or_all, default=None)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("hurwitz", parents=[common], help="apply Hurwitz moves")
    p.add_argument("--tuple", type=_tuple, required=True)
    p.add_argument("--moves", type=_moves, required=True,
                   help="1-based indices; i moves pair (i, i+1), -i undoes it")
    p.set_defaults(func=cmd_hurwitz)

    p = sub.add_parser("orbit", parents=[common], help="explore a Hurwitz/conjugation orbit")
    p.add_argument("--tuple", type=_tuple, required=True)
    p.add_argument("--conjugator", type=_matrix, action="append")
    p.add_argument("--max-nodes", type=_positive, default=1000)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("verify-paper", parents=[common], help="run every verification check")
    p.add_argument("--bound-2pt", type=_positive, default=40)
    p.add_argument("--bound-3pt", type=_positive, default=50)
    p.add_argument("--depth", type=_nonnegative, default=5)
    p.add_argument("--report", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, record, lines = args.func(args)
    except (UsageError, FactorizationError, ValueError) as exc:
        print(f"monodromy: error: {exc}", file=stderr)
        return EXIT_USAGE
    if not args.quiet:
        stdout.write(dumps(record) if args.json else "\n".join(lines) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
