"""Command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import io as pio
from .effects import build_effects, check_axioms
from .ortho import ortho_basis_greedy, validate_star
from .space import SpaceError, StateSpace, is_distributive

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str) -> tuple[StateSpace, dict | None]:
    return pio.parse_space_file(path)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _parse_pairs(text: str, A: StateSpace, B: StateSpace) -> list[tuple[int, int]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"tensor literal is not JSON: {exc.msg}") from None
    if not isinstance(data, list) or not data:
        raise UsageError("tensor literal must be a nonempty JSON array of [a, b] pairs")
    out = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2):
            raise UsageError(f"bad pair {item!r}")
        try:
            out.append((A.index(str(item[0])), B.index(str(item[1]))))
        except KeyError as exc:
            raise UsageError(f"unknown label {exc}") from None
    return out


def cmd_check(args) -> int:
    space, star = _load(args.space)
    report = check_axioms(space)
    dist, wit = is_distributive(space)
    payload = {"name": space.name, "axioms": report.to_dict(), "distributive": dist}
    lines = [f"{space.name}: {space.n} states"]
    for k, v in report.to_dict().items():
        extra = f" (witness {v['witness']})" if "witness" in v else ""
        lines.append(f"  {k}: {'pass' if v['ok'] else 'fail'}{extra}")
    lines.append(f"  distributive: {str(dist).lower()}")
    if wit is not None:
        payload["distributivity_witness"] = space.sub_labels(wit)
        lines.append(f"    witness {space.sub_labels(wit)}")
    ok = report.passed
    if star is not None:
        r = validate_star(space, star)
        payload["star"] = {**r.flags(), "inconsistencies": r.inconsistencies}
        lines.append("  star: " + ", ".join(f"{k}={str(v).lower()}" for k, v in r.flags().items()))
        ok = ok and r.has_star and not r.inconsistencies
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_effects(args) -> int:
    space, _ = _load(args.space)
    E = build_effects(space)
    rows = []
    for e in E:
        vals = [str(E.eval(e, s)) for s in space]
        rows.append({"effect": pio.effect_to_dict(space, e), "label": E.label(e), "values": vals})
    width = max(len(r["label"]) for r in rows)
    header = " " * width + " | " + " ".join(space.labels)
    text = [header] + [r["label"].ljust(width) + " | " + " ".join(r["values"]) for r in rows]
    _emit(args, {"states": list(space.labels), "effects": rows}, "\n".join(text))
    return EXIT_OK


def cmd_basis(args) -> int:
    space, star = _load(args.space)
    basis = ortho_basis_greedy(space, star) if star is not None else None
    if basis is None:
        _emit(args, {"basis": None}, "none")
        return EXIT_FAIL
    labels = space.sub_labels(basis)
    _emit(args, {"basis": labels}, " ".join(labels))
    return EXIT_OK


def cmd_symmetry(args) -> int:
    from .symmetry import ChannelError, chu_map_from_labels, verify_symmetry

    s1, _ = _load(args.space1)
    s2, _ = _load(args.space2)
    try:
        table = json.loads(Path(args.map).read_text(encoding="utf-8"))["map"]
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"map file {args.map}: {exc}") from None
    try:
        m = chu_map_from_labels(s1, s2, table)
    except (ChannelError, KeyError) as exc:
        _emit(args, {"passed": False, "error": str(exc)}, f"not a channel: {exc}")
        return EXIT_FAIL
    report = verify_symmetry(m)
    laws = {k: ok for k, (ok, _) in report.laws.items()}
    text = "\n".join(f"{k}: {'pass' if ok else 'fail'}" for k, ok in laws.items())
    _emit(args, {"passed": report.passed, "bijective": m.bijective, "laws": laws}, text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_tensor(args) -> int:
    A, sa = _load(args.A)
    B, sb = _load(args.B)
    if args.kind == "basic":
        from .tensor_basic import check_bipartite_axioms, enumerate_tensor

        enum = enumerate_tensor(A, B, max_pairs=args.max_pairs)
        axioms = {k: ok for k, (ok, _) in check_bipartite_axioms(enum).items()} if args.enumerate else {}
        if args.out:
            Path(args.out).write_text(pio.serialize_space(enum.space), encoding="utf-8")
        text = [f"basic tensor {enum.space.name}: {enum.space.n} states"]
        text += [f"  {k}: {'pass' if ok else 'fail'}" for k, ok in axioms.items()]
        if args.enumerate:
            text += [f"  {enum.space.label(x)}" for x in enum.space]
        _emit(args, {"kind": "basic", "size": enum.space.n, "axioms": axioms, "elements": list(enum.space.labels)}, "\n".join(text))
        return EXIT_OK if all(axioms.values()) else EXIT_FAIL
    if args.kind == "maximal":
        from .bimorphic import count_maximal, gamma_scan

        EA, EB = build_effects(A), build_effects(B)
        total = count_maximal(EA, EB)
        payload = {"kind": "maximal", "size": total}
        text = [f"maximal tensor: {total} bimorphisms"]
        if args.enumerate:
            scan = gamma_scan(EA, EB)
            payload["gamma_scan"] = {"total": scan.total, "invalid": scan.invalid}
            text.append(f"  gamma tables: {scan.total}, not bimorphisms: {scan.invalid}")
        _emit(args, payload, "\n".join(text))
        return EXIT_OK
    from .bimorphic import StarTensor, enumerate_star_tensor, star_tensor_star

    if sa is None or sb is None:
        raise UsageError("the star tensor needs a star map in both space files")
    enum = enumerate_star_tensor(StarTensor(A, sa, B, sb))
    star = star_tensor_star(enum)
    flags = validate_star(enum.space, star).flags()
    if args.out:
        Path(args.out).write_text(pio.serialize_space(enum.space, star), encoding="utf-8")
    text = [f"star tensor {enum.space.name}: {enum.space.n} states"]
    text += [f"  {k}: {str(v).lower()}" for k, v in flags.items()]
    _emit(args, {"kind": "star", "size": enum.space.n, "star": flags}, "\n".join(text))
    return EXIT_OK


def cmd_order(args) -> int:
    A, _ = _load(args.A)
    B, _ = _load(args.B)
    left = _parse_pairs(args.left, A, B)
    right = _parse_pairs(args.right, A, B)
    if args.kind == "basic":
        from .tensor_basic import BasicTensor

        result = BasicTensor(A, B).tensor_leq(left, right)
    else:
        from .tensor_canonical import bifilter_closure

        closure = bifilter_closure(A, B, left)
        result = all(p in closure for p in right)
    _emit(args, {"kind": args.kind, "leq": result}, f"leq: {str(result).lower()}")
    return EXIT_OK


def cmd_quantum(args) -> int:
    from .quantum import DimensionMismatch, fragment_closure, parse_rays

    try:
        rays = json.loads(args.rays)
        subs = parse_rays([[str(x) for x in r] for r in rays], args.dim)
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        if isinstance(exc, DimensionMismatch):
            raise UsageError(str(exc)) from None
        raise UsageError(f"bad rays: {exc}") from None
    names = args.names.split(",") if args.names else None
    frag = fragment_closure(subs, names=names, name=args.name)
    print(pio.serialize_space(frag.space, frag.star), end="")
    return EXIT_OK


def cmd_counterexamples(args) -> int:
    from .certificates import certificates_json, run_counterexamples

    spaces = None
    if args.fixtures:
        spaces = {}
        for key in ("f2", "f3", "s4"):
            sp, st = _load(str(Path(args.fixtures) / f"{key}.json"))
            spaces[key] = (sp, st) if key != "f3" else sp
    try:
        certs = run_counterexamples(args.only, spaces)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    done = sum(c.reproduced for c in certs)
    if args.json:
        print(certificates_json(certs), end="")
    else:
        for c in certs:
            print(f"{c.name}: {'reproduced' if c.reproduced else 'NOT reproduced'}")
            print(json.dumps(c.to_dict(), indent=2, sort_keys=True))
        print(f"{done}/{len(certs)} reproduced")
    return EXIT_OK if done == len(certs) else EXIT_FAIL


def cmd_dot(args) -> int:
    space, _ = _load(args.space)
    print(pio.emit_dot(space), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="possibilistic", description="Finite possibilistic state spaces and their tensors.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("check", parents=[common], help="axioms, distributivity and star")
    s.add_argument("space")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("effects", parents=[common], help="effect table")
    s.add_argument("space")
    s.set_defaults(func=cmd_effects)

    s = sub.add_parser("basis", parents=[common], help="greedy orthonormal basis")
    s.add_argument("space")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("symmetry", parents=[common], help="verify a channel")
    s.add_argument("space1")
    s.add_argument("space2")
    s.add_argument("--map", required=True)
    s.set_defaults(func=cmd_symmetry)

    s = sub.add_parser("tensor", parents=[common], help="build a tensor product")
    s.add_argument("--kind", choices=["basic", "maximal", "star"], default="basic")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--enumerate", action="store_true")
    s.add_argument("--out")
    s.add_argument("--max-pairs", type=int, default=20)
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("order", parents=[common], help="compare two tensor elements")
    s.add_argument("--kind", choices=["basic", "canonical"], default="basic")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("quantum", parents=[common], help="subspace fragment from rays")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--rays", required=True)
    s.add_argument("--names")
    s.add_argument("--name", default="Q")
    s.set_defaults(func=cmd_quantum)

    s = sub.add_parser("counterexamples", parents=[common], help="reproduce the certificates")
    s.add_argument("--only", nargs="+")
    s.add_argument("--fixtures")
    s.set_defaults(func=cmd_counterexamples)

    s = sub.add_parser("dot", parents=[common], help="Hasse diagram in DOT")
    s.add_argument("space")
    s.set_defaults(func=cmd_dot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, SpaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
