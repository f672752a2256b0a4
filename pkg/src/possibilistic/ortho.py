"""Star maps, the bracket pairing, orthocomplementation and orthonormal bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .determination import BOT, NO, YES, Det
from .space import StateSpace, build_space, is_distributive, quasi_antipodal

StarMap = Mapping[int, int]


class StarError(ValueError):
    pass


class NotABasis(ValueError):
    pass


@dataclass
class OrthoReport:
    has_star: bool
    orthocomplemented: bool
    orthogonal: bool
    failures: dict[str, tuple] = field(default_factory=dict)
    inconsistencies: list[str] = field(default_factory=list)

    def flags(self) -> dict[str, bool]:
        return {
            "has_star": self.has_star,
            "orthocomplemented": self.orthocomplemented,
            "orthogonal": self.orthogonal,
        }


def _nonbottom(space: StateSpace) -> list[int]:
    return [x for x in space if x != space.bottom]


def validate_star(space: StateSpace, star: StarMap) -> OrthoReport:
    """Check the star laws, then classify the space."""
    failures: dict[str, tuple] = {}
    elems = _nonbottom(space)
    missing = [x for x in elems if x not in star or star[x] == space.bottom]
    if missing:
        failures["total"] = (missing[0],)
        return OrthoReport(False, False, False, failures)
    for x in elems:
        if star[star[x]] != x:
            failures.setdefault("involutive", (x,))
        if space.widehat((x, star[x])):
            failures.setdefault("inconsistent", (x,))
        for y in elems:
            if space.leq(x, y) and not space.leq(star[y], star[x]):
                failures.setdefault("order_reversing", (x, y))
    atoms = set(space.atoms)
    for p in space.pure:
        if p != space.bottom and star[p] not in atoms:
            failures.setdefault("star_atom", (p,))
    has_star = not failures
    ortho_fail = [x for x in elems if not quasi_antipodal(space, x, star[x])]
    if ortho_fail:
        failures["orthocomplemented"] = (ortho_fail[0],)
    pure = set(space.pure)
    orth_fail = [
        x for x in elems if set(space.underline(x)) | set(space.underline(star[x])) != pure
    ]
    if orth_fail:
        failures["orthogonal"] = (orth_fail[0],)
    orthocomplemented = has_star and not ortho_fail
    orthogonal = orthocomplemented and not orth_fail
    report = OrthoReport(has_star, orthocomplemented, orthogonal, failures)
    if has_star:
        lemma = _perp_meets_every_strict_lower(space, star)
        if lemma != (not ortho_fail):
            report.inconsistencies.append(
                "orthocomplementation and the orthogonal-filter criterion disagree"
            )
        for x in elems:
            if recover_star(space, star, x) != star[x]:
                report.inconsistencies.append(f"star not recovered from bracket at {space.label(x)}")
                break
    return report


def _perp_meets_every_strict_lower(space: StateSpace, star: StarMap) -> bool:
    # for every x and every y not above x: the filter above x* meets the up-set of x ^ y
    for x in _nonbottom(space):
        for y in space:
            lower = space.meet2(x, y)
            if lower == x:
                continue
            if not (space.up_mask(star[x]) & space.up_mask(lower)):
                return False
    return True


def bracket(space: StateSpace, star: StarMap, x: int, y: int) -> Det:
    if x in set(space.pure) and x == y:
        return YES
    if x != space.bottom and space.leq(star[x], y):
        return NO
    return BOT


def recover_star(space: StateSpace, star: StarMap, x: int) -> int:
    """Meet of everything orthogonal to ``x``."""
    return space.meet(y for y in space if bracket(space, star, y, x) == NO)


def is_orthonormal_basis(space: StateSpace, star: StarMap | None, family: Sequence[int]) -> bool:
    if star is None or not family:
        return False
    pure = set(space.pure)
    if any(a not in pure for a in family):
        return False
    for i, a in enumerate(family):
        if bracket(space, star, a, a) != YES:
            return False
        for j, b in enumerate(family):
            if i != j and bracket(space, star, a, b) != NO:
                return False
    sub_meets = {space.meet(c) for k in range(1, len(family) + 1) for c in combinations(family, k)}
    return all(any(space.leq(m, s) for m in sub_meets) for s in space)


def ortho_basis_greedy(space: StateSpace, star: StarMap | None) -> list[int] | None:
    """Grow an orthonormal basis from the first pure state, lowest index first."""
    if star is None:
        raise StarError("a validated star map is required")
    pure = list(space.pure)
    basis = [pure[0]]
    current = pure[0]
    while current != space.bottom:
        uncovered = next((s for s in pure if not space.leq(current, s)), None)
        if uncovered is None:
            break
        low = space.meet2(current, uncovered)
        nxt = next(
            (p for p in pure if space.leq(low, p) and space.leq(star[current], p)),
            None,
        )
        if nxt is None:
            return None
        basis.append(nxt)
        current = space.meet2(current, nxt)
    return basis


def basis_sublattice(
    space: StateSpace, star: StarMap | None, basis: Sequence[int]
) -> tuple[StateSpace, dict[int, int]]:
    """The meet-closure of a basis, with the complementary-subfamily star."""
    if not is_orthonormal_basis(space, star, basis):
        raise NotABasis(f"not an orthonormal basis: {space.sub_labels(basis)}")
    members = sorted(
        {space.meet(c) for k in range(1, len(basis) + 1) for c in combinations(basis, k)}
        | {space.bottom}
    )
    labels = [space.label(x) for x in members]
    pairs = [
        (space.label(x), space.label(y)) for x in members for y in members if x != y and space.leq(x, y)
    ]
    sub = build_space(labels, pairs, name=f"{space.name}[basis]")
    sub_star = {}
    for x in members:
        if x == space.bottom:
            continue
        above = [a for a in basis if space.leq(x, a)]
        rest = [a for a in basis if a not in above]
        sub_star[sub.index(space.label(x))] = sub.index(space.label(space.meet(rest)))
    return sub, sub_star


def check_basis_sublattice(space: StateSpace, star: StarMap) -> dict[str, bool]:
    report = validate_star(space, star)
    return {
        "orthogonal": report.orthogonal,
        "distributive": is_distributive(space)[0],
    }


def enumerate_stars(space: StateSpace) -> list[dict[int, int]]:
    """Every map on non-bottom elements passing the star laws (small spaces only)."""
    elems = _nonbottom(space)
    found = []

    def extend(assign: dict[int, int]):
        free = [x for x in elems if x not in assign]
        if not free:
            if validate_star(space, assign).has_star:
                found.append(dict(assign))
            return
        x = free[0]
        for y in free:
            if y == x or space.widehat((x, y)):
                continue
            assign[x], assign[y] = y, x
            extend(assign)
            del assign[x], assign[y]

    extend({})
    return found


def star_from_labels(space: StateSpace, table: Mapping[str, str]) -> dict[int, int]:
    return {space.index(k): space.index(v) for k, v in table.items()}


def star_to_labels(space: StateSpace, star: StarMap) -> dict[str, str]:
    return {space.label(k): space.label(v) for k, v in sorted(star.items())}

