"""Canonical semilattice tensor: order by bi-filter closure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .space import StateSpace, is_distributive
from .tensor_basic import BasicTensor, Pair


class ImplicationViolated(AssertionError):
    """The canonical order claimed something the basic order denies (or the isomorphism broke)."""


def bifilter_closure(A: StateSpace, B: StateSpace, gens: Iterable[Pair]) -> frozenset:
    """Least set containing ``gens`` that is upward closed and closed under one-sided meets."""
    found = set()
    work = sorted(set(gens))
    if not work:
        raise ValueError("a bi-filter needs at least one generator")
    while work:
        work.sort(reverse=True)
        p = work.pop()
        if p in found:
            continue
        found.add(p)
        x, y = p
        new = [(x2, y2) for x2 in A.upset(x) for y2 in B.upset(y)]
        for x2, y2 in list(found):
            if y2 == y:
                new.append((A.meet2(x, x2), y))
            if x2 == x:
                new.append((x, B.meet2(y, y2)))
        work.extend(q for q in new if q not in found)
    return frozenset(found)


def fraser_leq(A: StateSpace, B: StateSpace, gens: Iterable[Pair], target: Pair) -> bool:
    return tuple(target) in bifilter_closure(A, B, gens)


def is_bifilter(A: StateSpace, B: StateSpace, pairs: Iterable[Pair]) -> bool:
    return BasicTensor(A, B).is_bifilter(pairs)


@dataclass(frozen=True)
class Comparison:
    fraser: bool
    basic: bool

    def to_dict(self) -> dict:
        return {"fraser": self.fraser, "basic": self.basic}


def compare_with_basic(A: StateSpace, B: StateSpace, gens: Iterable[Pair], target: Pair) -> Comparison:
    gens = list(gens)
    fr = fraser_leq(A, B, gens, target)
    ba = BasicTensor(A, B).leq_pure(gens, tuple(target))
    if fr and not ba:
        raise ImplicationViolated(f"canonical order holds but basic fails for {gens} vs {target}")
    if fr != ba and (is_distributive(A)[0] or is_distributive(B)[0]):
        raise ImplicationViolated(f"orders differ with a distributive factor for {gens} vs {target}")
    return Comparison(fr, ba)


def alpha_of_filter(enum, principal: int) -> frozenset:
    """Pairs whose pure tensor lies in the principal filter above ``principal``."""
    out = set()
    for a, b in enum.context.pairs:
        if enum.space.leq(principal, enum.class_of([(a, b)])):
            out.add((a, b))
    return frozenset(out)
