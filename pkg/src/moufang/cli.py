"""Command line: ``moufang analyze | verify | gen``.

Exit codes: 0 pass, 1 a mathematical check failed, 2 input error,
3 a group enumeration exceeded ``--max-group-order``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .congruence import abelian_oracle, is_classically_solvable, is_congruence_solvable
from .corpus import CORPORA, DEFAULT_SEED
from .errors import CapExceeded, InputError, LoopError
from .loopcore import (
    BUILTIN_GROUPS,
    build_abelian_extension,
    builtin_group,
    chein_double,
    check_identity_suite,
    format_table,
    is_d_divisible,
    is_moufang,
    is_power_associative,
    load_tbl,
    normal_subloops,
    nuclei,
    random_extension_data,
)
from .permgrp import DEFAULT_CAP
from .suites import SUITES, loop_checks, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def build_report(Q, source: str, cap: int = DEFAULT_CAP) -> dict:
    ids = check_identity_suite(Q)
    nuc = nuclei(Q)
    normals = normal_subloops(Q)
    classical = is_classically_solvable(Q)
    congruence = is_congruence_solvable(Q)
    checks = loop_checks(source, Q, cap)
    return {
        "source": source,
        "order": Q.n,
        "moufang": bool(is_moufang(Q)),
        "three_divisible": is_d_divisible(Q, 3) if is_power_associative(Q) else None,
        "inverse_property": ids.inverse_property,
        "power_associative": ids.power_associative,
        "diassociative": ids.diassociative,
        "flexible": ids.flexible,
        "nucleus_size": len(nuc.nucleus.elements),
        "left_nucleus_size": len(nuc.left_nucleus.elements),
        "center_size": len(nuc.center.elements),
        "normal_subloops": {
            "count": len(normals),
            "sizes": [len(S.elements) for S in normals],
            "abelian": [len(S.elements) for S in normals if abelian_oracle(Q, S)],
        },
        "classically_solvable": {"verdict": classical.solvable, "series": list(classical.sizes)},
        "congruence_solvable": {"verdict": congruence.solvable, "series": list(congruence.sizes)},
        "checks": checks,
        "ok": all(v.get("ok", True) for v in checks.values()),
    }


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={_scalar(v)}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def emit(doc: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(_text(doc)) + "\n")


def cmd_analyze(args) -> int:
    Q = load_tbl(args.path)
    doc = build_report(Q, str(args.path), args.max_group_order)
    emit(doc, args.json)
    return EXIT_PASS if doc["ok"] else EXIT_FAIL


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    corpus = CORPORA[args.corpus](args.seed)
    results = [run_suite(name, corpus, args.max_group_order) for name in names]
    doc = {
        "corpus": args.corpus,
        "seed": args.seed,
        "loops": len(corpus),
        "suites": [r.as_dict() for r in results],
        "ok": all(r.ok for r in results),
    }
    emit(doc, args.json)
    return EXIT_PASS if doc["ok"] else EXIT_FAIL


def _parse_group(spec: str):
    kind, _, order = spec.partition(":")
    try:
        return builtin_group(kind, int(order))
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"group spec must look like 'cyclic:4', got {spec!r}") from None


def cmd_gen(args) -> int:
    if args.kind == "group":
        Q = builtin_group(args.family, args.order)
        comment = f"{args.family} group of order {args.order}"
    elif args.kind == "chein":
        G = load_tbl(args.path)
        Q = chein_double(G)
        comment = f"Chein double of {args.path}"
    else:
        X, F = _parse_group(args.base), _parse_group(args.factor)
        Q = build_abelian_extension(random_extension_data(X, F, random.Random(args.seed)))
        comment = f"abelian extension of {args.base} by {args.factor}, seed {args.seed}"
    text = format_table(Q, comment)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-group-order", type=int, default=DEFAULT_CAP, metavar="N")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="moufang", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="structural report for a .tbl file")
    p.add_argument("path", type=Path)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite over a corpus")
    p.add_argument("--suite", required=True, help=f"one of: all, {', '.join(SUITES)}")
    p.add_argument("--corpus", choices=sorted(CORPORA), default="default")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="write a Cayley table")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("group", parents=[common])
    g.add_argument("family", choices=sorted(BUILTIN_GROUPS))
    g.add_argument("order", type=int)
    g = gen.add_parser("chein", parents=[common])
    g.add_argument("path", type=Path, help=".tbl file of a group")
    g = gen.add_parser("extension", parents=[common])
    g.add_argument("--base", default="cyclic:4", help="commutative group, e.g. cyclic:4")
    g.add_argument("--factor", default="dihedral:4", help="factor group, e.g. dihedral:4")
    for g in gen.choices.values():
        g.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LoopError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
