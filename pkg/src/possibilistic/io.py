"""JSON space files and DOT rendering."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .effects import Effect
from .space import ParseError, StateSpace, build_space

StarMap = Mapping[int, int]


def _fail(source: str, where: str, msg: str) -> ParseError:
    return ParseError(f"{source}: {where}: {msg}")


def space_from_dict(data: Any, source: str = "<data>") -> tuple[StateSpace, dict[int, int] | None]:
    if not isinstance(data, dict):
        raise _fail(source, "top level", "expected a JSON object")
    unknown = sorted(set(data) - {"name", "elements", "covers", "star"})
    if unknown:
        raise _fail(source, "top level", f"unknown fields {unknown}")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise _fail(source, "name", "expected a string")
    elements = data.get("elements")
    if not isinstance(elements, list) or not all(isinstance(x, str) for x in elements):
        raise _fail(source, "elements", "expected a list of strings")
    covers = data.get("covers", [])
    if not isinstance(covers, list):
        raise _fail(source, "covers", "expected a list of [lower, upper] pairs")
    known = set(elements)
    pairs = []
    for k, c in enumerate(covers):
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(x, str) for x in c)):
            raise _fail(source, f"covers[{k}]", "expected [lower, upper]")
        for x in c:
            if x not in known:
                raise _fail(source, f"covers[{k}]", f"unknown element {x!r}")
        pairs.append((c[0], c[1]))
    try:
        space = build_space(elements, pairs, name=name)
    except ParseError as exc:
        raise _fail(source, "elements", str(exc)) from None
    star = None
    if "star" in data:
        table = data["star"]
        if not isinstance(table, dict):
            raise _fail(source, "star", "expected an object mapping labels to labels")
        star = {}
        for k, v in table.items():
            if k not in known or not isinstance(v, str) or v not in known:
                raise _fail(source, f"star[{k!r}]", "labels must name elements")
            star[space.index(k)] = space.index(v)
    return space, star


def parse_space_text(text: str, source: str = "<text>") -> tuple[StateSpace, dict[int, int] | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return space_from_dict(data, source)


def parse_space_file(path: str | Path) -> tuple[StateSpace, dict[int, int] | None]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"{p}: cannot read: {exc}") from None
    return parse_space_text(text, str(p))


def space_to_dict(space: StateSpace, star: StarMap | None = None) -> dict:
    out: dict[str, Any] = {
        "name": space.name,
        "elements": list(space.labels),
        "covers": [[space.label(lo), space.label(hi)] for lo, hi in sorted(space.covers())],
    }
    if star:
        out["star"] = {space.label(k): space.label(v) for k, v in sorted(star.items())}
    return out


def serialize_space(space: StateSpace, star: StarMap | None = None) -> str:
    return json.dumps(space_to_dict(space, star), indent=2, ensure_ascii=False) + "\n"


def effect_to_dict(space: StateSpace, e: Effect) -> dict:
    return {
        "yes": None if e.yes is None else space.label(e.yes),
        "no": None if e.no is None else space.label(e.no),
    }


def effect_from_dict(space: StateSpace, data: Mapping) -> Effect:
    def side(key: str) -> int | None:
        v = data.get(key)
        return None if v is None else space.index(v)

    return Effect(side("yes"), side("no"))


def emit_dot(space: StateSpace) -> str:
    """Hasse diagram, bottom first, edges along the covering relation."""
    lines = [f"digraph {json.dumps(space.name or 'space')} {{", "  rankdir=BT;"]
    for x in space:
        lines.append(f"  {json.dumps(space.label(x))};")
    for lo, hi in sorted(space.covers()):
        lines.append(f"  {json.dumps(space.label(lo))} -> {json.dumps(space.label(hi))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


FIXTURES = ("f2", "f3", "s4", "c3", "chain2", "q4_rays")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("possibilistic") / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> tuple[StateSpace, dict[int, int] | None]:
    return parse_space_file(fixture_path(name))


def load_rays_fixture(path: str | Path | None = None) -> dict:
    p = Path(path) if path else fixture_path("q4_rays")
    return json.loads(p.read_text(encoding="utf-8"))
