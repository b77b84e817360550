"""Command-line surface.

Exit codes: 0 for a positive answer (reachable / accepts / exists wins /
valid), 1 for a negative answer, 2 for usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import sys as _sys
from pathlib import Path
from typing import Optional

from . import formats, gadgets, reductions, solver
from .model import VassError, validate_run_tree, validate_system, with_bound


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise VassError(f"cannot read {path}: {e}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise VassError(f"cannot write {path}: {e}") from None


def _load_system(path: str):
    sys_ = formats.parse_system(_read(path))
    return sys_


def _cmd_check(args) -> int:
    try:
        _load_system(args.file)
    except formats.ValidationError as e:
        for p in e.problems:
            print(p)
        return 1
    print("ok")
    return 0


def _cmd_reach(args) -> int:
    sys_ = _load_system(args.file)
    src = formats.parse_configuration(args.src, sys_)
    dst = formats.parse_configuration(args.dst, sys_)
    if sys_.has_branching:
        answer = solver.reach_context(sys_, src, dst)
    else:
        answer = solver.reach_linear(sys_, src, dst)
    if answer.reachable:
        if args.witness:
            _write(args.witness, formats.serialize_witness(answer.witness))
        print("reachable")
        return 0
    print("unreachable")
    return 1


def _cmd_accepts(args) -> int:
    sys_ = _load_system(args.file)
    root = formats.parse_configuration(args.root, sys_)
    if solver.accepts(sys_, root):
        print("accepts")
        return 0
    print("rejects")
    return 1


def _cmd_computes(args) -> int:
    sys_ = _load_system(args.file)
    table = _parse_table(_read(args.table))
    report = solver.check_computes(sys_, args.src, args.dst, table, args.max)
    if report.ok:
        print(f"computes ({report.points_checked} domain points)")
        return 0
    print(f"counterexample: {report.failure}")
    return 1


def _parse_table(text: str) -> dict:
    doc = formats._loads(text)
    points = doc.get("points") if isinstance(doc, dict) else None
    if not isinstance(points, list):
        raise formats.ParseError('function table must be {"points": [{"in": [...], "out": [...]}]}')
    table = {}
    for i, p in enumerate(points):
        if not isinstance(p, dict) or "in" not in p or "out" not in p:
            raise formats.ParseError(f"points[{i}]: expected 'in' and 'out'")
        table[tuple(p["in"])] = tuple(p["out"])
    return table


def _cmd_gadget(args) -> int:
    if args.gadget == "copy2":
        handle = gadgets.gadget_copy2(args.M)
    elif args.gadget == "xmx":
        handle = gadgets.gadget_xmx(args.M)
    elif args.gadget == "branch-copy":
        handle = gadgets.gadget_branch_copy(args.M)
    elif args.gadget == "desugar":
        _write(args.out, formats.serialize_system(gadgets.desugar_tests(_load_system(args.file))))
        return 0
    else:  # raise-bound
        _write(args.out, formats.serialize_system(
            gadgets.raise_bound(_load_system(args.file), args.bound)))
        return 0
    _write(args.out, formats.serialize_system(handle.system))
    print(f"entry {handle.entry}; exits {','.join(handle.exits)}; bound {handle.declared_bound}")
    return 0


def _cmd_compile(args) -> int:
    sys_ = _load_system(args.file)
    if args.pass_ == "to-2d":
        out = gadgets.compile_to_2d(sys_)
    elif args.pass_ == "doubling-only":
        out = gadgets.compile_doubling_only(sys_)
    else:
        out = gadgets.compile_halving_only(sys_)
    _write(args.out, formats.serialize_system(out))
    return 0


def _cmd_game_solve(args) -> int:
    game, start = formats.parse_game(_read(args.file))
    solution = reductions.solve_countdown(game, start)
    print(solution.winner.value)
    return 0 if solution.winner is reductions.Player.EXISTS else 1


def _cmd_reduce_countdown(args) -> int:
    game, start = formats.parse_game(_read(args.file))
    game, start = reductions.normalize_game(game, start)
    sys_, root = reductions.reduce_countdown(game, start)
    _write(args.out, formats.serialize_system(sys_))
    print(formats.format_configuration(root))
    return 0


def _cmd_reduce_2brvass(args) -> int:
    sys_ = _load_system(args.file)
    sys_ = gadgets.desugar_tests(sys_)
    image = reductions.reduce_to_2brvass(sys_)
    out = image.system if args.aux_bound is None else with_bound(image.system, args.aux_bound)
    _write(args.out, formats.serialize_system(out))
    return 0


def _cmd_verify_run(args) -> int:
    sys_ = _load_system(args.system)
    tree = formats.parse_witness(_read(args.witness), sys_)
    report = validate_run_tree(sys_, tree)
    if report.ok:
        print("valid")
        return 0
    for p in report.problems:
        print(p)
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vasskit",
        description="Decision procedures and reductions for bounded (branching) "
                    "vector addition systems with states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a system document")
    p.add_argument("file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reach", help="decide reachability between two configurations")
    p.add_argument("file")
    p.add_argument("--from", dest="src", required=True, metavar="CONF")
    p.add_argument("--to", dest="dst", required=True, metavar="CONF")
    p.add_argument("--witness", metavar="OUT")
    p.set_defaults(func=_cmd_reach)

    p = sub.add_parser("accepts", help="decide whether a full run exists below a root")
    p.add_argument("file")
    p.add_argument("--root", required=True, metavar="CONF")
    p.set_defaults(func=_cmd_accepts)

    p = sub.add_parser("computes", help="check a system against a finite function table")
    p.add_argument("file")
    p.add_argument("--from", dest="src", required=True, metavar="STATE")
    p.add_argument("--to", dest="dst", required=True, metavar="STATE")
    p.add_argument("--table", required=True, metavar="JSON")
    p.add_argument("--max", type=int, required=True, metavar="M",
                   help="domain is {0..M}^d")
    p.set_defaults(func=_cmd_computes)

    p = sub.add_parser("gadget", help="emit a gadget or rewrite tests/bounds")
    gsub = p.add_subparsers(dest="gadget", required=True)
    for name in ("copy2", "xmx", "branch-copy"):
        g = gsub.add_parser(name)
        g.add_argument("--M", type=int, required=True)
        g.add_argument("-o", "--out", required=True)
        g.set_defaults(func=_cmd_gadget)
    g = gsub.add_parser("desugar")
    g.add_argument("file")
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=_cmd_gadget)
    g = gsub.add_parser("raise-bound")
    g.add_argument("file")
    g.add_argument("--bound", type=int, required=True)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("compile", help="eliminate doubling/halving")
    csub = p.add_subparsers(dest="pass_", required=True)
    for name in ("to-2d", "doubling-only", "halving-only"):
        c = csub.add_parser(name)
        c.add_argument("file")
        c.add_argument("-o", "--out", required=True)
        c.set_defaults(func=_cmd_compile)

    p = sub.add_parser("game", help="countdown games")
    gsub = p.add_subparsers(dest="game_command", required=True)
    g = gsub.add_parser("solve")
    g.add_argument("file")
    g.set_defaults(func=_cmd_game_solve)

    p = sub.add_parser("reduce", help="run a reduction")
    rsub = p.add_subparsers(dest="reduction", required=True)
    r = rsub.add_parser("countdown", help="countdown game to branching system")
    r.add_argument("file")
    r.add_argument("-o", "--out", required=True)
    r.set_defaults(func=_cmd_reduce_countdown)
    r = rsub.add_parser("to-2brvass", help="bounded 1-d branching system to unbounded 2-d")
    r.add_argument("file")
    r.add_argument("-o", "--out", required=True)
    r.add_argument("--aux-bound", type=int, default=None,
                   help="emit the image with this bound for desk-scale solving")
    r.set_defaults(func=_cmd_reduce_2brvass)

    p = sub.add_parser("verify-run", help="validate a witness document against a system")
    p.add_argument("system")
    p.add_argument("witness")
    p.set_defaults(func=_cmd_verify_run)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except VassError as e:
        print(f"error: {e}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
