"""Reproducible counterexample certificates, emitted as stable JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bimorphic import StarTensor, star_orthocomplementation_check
from .io import load_fixture
from .space import StateSpace, quasi_antipodal
from .tensor_basic import BasicTensor, enumerate_tensor
from .tensor_canonical import fraser_leq

NAMES = ("f3", "s4_basic", "s4_star")


@dataclass
class Certificate:
    name: str
    reproduced: bool
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "reproduced": self.reproduced, **self.data}


def _pairs(A: StateSpace, B: StateSpace, pairs) -> list[list[str]]:
    return [[A.label(a), B.label(b)] for a, b in sorted(pairs)]


def f3_diagonal(spaces: dict | None = None) -> Certificate:
    """The diagonal triple lies below (bot, bot) in the basic order but not in the canonical one."""
    f3 = (spaces or {}).get("f3") or load_fixture("f3")[0]
    atoms = list(f3.atoms)
    gens = [(s, s) for s in atoms]
    target = (f3.bottom, f3.bottom)
    basic = BasicTensor(f3, f3).leq_pure(gens, target)
    fraser = fraser_leq(f3, f3, gens, target)
    return Certificate(
        "f3",
        basic and not fraser,
        {
            "generators": _pairs(f3, f3, gens),
            "target": [f3.label(target[0]), f3.label(target[1])],
            "basic_leq": basic,
            "fraser_leq": fraser,
        },
    )


def _first_incompatibility(sp: StateSpace, x: int, y: int) -> str | None:
    """A strictly smaller state on one side with no common upper bound with the other side."""
    for z in sp.downset(y):
        if z != y and not sp.widehat((x, z)):
            return sp.label(z)
    for z in sp.downset(x):
        if z != x and not sp.widehat((y, z)):
            return sp.label(z)
    return None


def s4_basic(spaces: dict | None = None) -> Certificate:
    """No star on the basic tensor of S4 with itself can be an orthocomplementation."""
    spaces = spaces or {}
    if "s4" in spaces:
        s4, star = spaces["s4"]
    else:
        s4, star = load_fixture("s4")
    a1 = s4.index("a1")
    a2 = s4.index("a2")
    a1s = star[a1]
    enum = enumerate_tensor(s4, s4, max_pairs=s4.n * s4.n)
    ctx = enum.context
    sp = enum.space
    bot = s4.bottom
    named_star = enum.class_of([(a1s, bot), (bot, a1s)])
    mixed = enum.class_of([(a1, a1), (a2, a2)])
    pure = enum.class_of([(a1, a1)])
    common = sorted(
        sp.label(p) for p in sp.pure if sp.leq(named_star, p) and sp.leq(mixed, p)
    )
    candidates = [a for a in sp.atoms if not sp.widehat((a, pure))]
    scan = []
    for c in candidates:
        scan.append(
            {
                "candidate": sp.label(c),
                "quasi_antipodal": quasi_antipodal(sp, pure, c),
                "witness": _first_incompatibility(sp, pure, c),
            }
        )
    reproduced = not common and not any(row["quasi_antipodal"] for row in scan)
    return Certificate(
        "s4_basic",
        reproduced,
        {
            "pure_tensor": sp.label(pure),
            "star_candidate": ctx.label(enum.element_at(named_star)),
            "mixture": ctx.label(enum.element_at(mixed)),
            "common_pure_upper_bounds": common,
            "tensor_size": sp.n,
            "atom_candidates": scan,
        },
    )


def s4_star(spaces: dict | None = None) -> Certificate:
    """The star tensor of S4 with itself fails orthocomplementation; with F2 it does not."""
    spaces = spaces or {}
    s4, st4 = spaces["s4"] if "s4" in spaces else load_fixture("s4")
    f2, st2 = spaces["f2"] if "f2" in spaces else load_fixture("f2")
    bad = star_orthocomplementation_check(s4, st4, s4, st4)
    good = star_orthocomplementation_check(f2, st2, s4, st4)
    ctx = StarTensor(s4, st4, s4, st4)
    witness = bad.witness or {}
    under_ok = False
    if witness:
        (a, b), (a2, b2) = (
            [s4.index(x) for x in witness["pure"]],
            [s4.index(x) for x in witness["other"]],
        )
        u = ctx.meet([ctx.star_generator(a, b), ctx.star_generator(a2, b2)])
        under_ok = ctx.underline(u) == frozenset({(a, b), (a2, b2)})
    return Certificate(
        "s4_star",
        (not bad.orthocomplemented) and good.orthocomplemented and under_ok,
        {
            "s4_s4": {
                "flags": bad.report.flags(),
                "failures": sorted(bad.report.failures),
                "witness": witness,
            },
            "f2_s4": {"flags": good.report.flags()},
        },
    )


BUILDERS = {"f3": f3_diagonal, "s4_basic": s4_basic, "s4_star": s4_star}


def run_counterexamples(only: list[str] | None = None, spaces: dict | None = None) -> list[Certificate]:
    names = only or list(NAMES)
    unknown = [n for n in names if n not in BUILDERS]
    if unknown:
        raise KeyError(f"unknown certificates {unknown}; choose from {list(NAMES)}")
    return [BUILDERS[n](spaces) for n in names]


def certificates_json(certs: list[Certificate]) -> str:
    return json.dumps([c.to_dict() for c in certs], indent=2, sort_keys=True) + "\n"
