"""Finite bottomed Inf semi-lattices used as spaces of states."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from typing import Iterable, Mapping, Sequence

import numpy as np


class SpaceError(ValueError):
    """Base class for invalid space descriptions."""


class ParseError(SpaceError):
    pass


class NotALattice(SpaceError):
    def __init__(self, pair: tuple[str, str]):
        super().__init__(f"no greatest lower bound for {pair[0]!r} and {pair[1]!r}")
        self.pair = pair


class NoBottom(SpaceError):
    def __init__(self, minimal: Sequence[str] = ()):
        super().__init__(f"no global bottom element (minimal elements: {list(minimal)})")
        self.minimal = tuple(minimal)


class CycleDetected(SpaceError):
    def __init__(self, cycle: Sequence[str]):
        super().__init__(f"order relation has a cycle through {list(cycle)}")
        self.cycle = tuple(cycle)


class EmptySet(SpaceError):
    def __init__(self) -> None:
        super().__init__("meet of the empty set is not defined")


class PureType(str, Enum):
    TYPE1 = "Type1"  # maximal
    TYPE2 = "Type2"  # strict up-set has a minimum


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class StateSpace:
    """An immutable finite bottomed Inf semi-lattice.

    Elements are integer handles ``0..n-1`` in canonical order: by depth from
    the bottom (longest chain), then by label. Handle 0 is always the bottom.
    """

    def __init__(self, name: str, labels: Sequence[str], below: Sequence[int]):
        # below[i] is the bitmask of elements x with x <= i
        n = len(labels)
        self.name = name
        self.labels: tuple[str, ...] = tuple(labels)
        self.n = n
        self._down = tuple(below)
        up = [0] * n
        for y in range(n):
            for x in _bits(self._down[y]):
                up[x] |= 1 << y
        self._up = tuple(up)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        by_down = {m: i for i, m in enumerate(self._down)}
        by_up = {m: i for i, m in enumerate(self._up)}
        meet = [[0] * n for _ in range(n)]
        join: list[list[int | None]] = [[None] * n for _ in range(n)]
        for x in range(n):
            for y in range(x, n):
                g = by_down.get(self._down[x] & self._down[y])
                if g is None:
                    raise NotALattice((self.labels[x], self.labels[y]))
                meet[x][y] = meet[y][x] = g
                common = self._up[x] & self._up[y]
                j = by_up.get(common) if common else None
                join[x][y] = join[y][x] = j
        self._meet = tuple(tuple(r) for r in meet)
        self._join = tuple(tuple(r) for r in join)
        self._pure: dict[int, PureType] | None = None

    # basic access

    def __repr__(self) -> str:
        return f"StateSpace({self.name!r}, n={self.n})"

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(range(self.n))

    @property
    def bottom(self) -> int:
        return 0

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r} in space {self.name!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def leq(self, x: int, y: int) -> bool:
        return bool((self._down[y] >> x) & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def down_mask(self, x: int) -> int:
        return self._down[x]

    def up_mask(self, x: int) -> int:
        return self._up[x]

    def upset(self, x: int) -> list[int]:
        return _bits(self._up[x])

    def downset(self, x: int) -> list[int]:
        return _bits(self._down[x])

    def leq_matrix(self) -> np.ndarray:
        mat = np.zeros((self.n, self.n), dtype=bool)
        for y in range(self.n):
            for x in _bits(self._down[y]):
                mat[x, y] = True
        return mat

    # lattice operations

    def meet2(self, x: int, y: int) -> int:
        return self._meet[x][y]

    def meet(self, xs: Iterable[int]) -> int:
        it = iter(xs)
        try:
            acc = next(it)
        except StopIteration:
            raise EmptySet() from None
        for x in it:
            acc = self._meet[acc][x]
        return acc

    def join2(self, x: int, y: int) -> int | None:
        return self._join[x][y]

    def bounded_join(self, xs: Iterable[int]) -> int | None:
        """Least upper bound of a nonempty set, or None without a common upper bound."""
        it = iter(xs)
        try:
            acc: int | None = next(it)
        except StopIteration:
            raise EmptySet() from None
        for x in it:
            acc = self._join[acc][x]
            if acc is None:
                return None
        return acc

    def widehat(self, xs: Iterable[int]) -> bool:
        """True iff the elements share a common upper bound."""
        mask = (1 << self.n) - 1
        for x in xs:
            mask &= self._up[x]
        return mask != 0

    # derived structure

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs (lower, upper), sorted."""
        out = []
        for y in range(self.n):
            strict = self._down[y] & ~(1 << y)
            for x in _bits(strict):
                between = strict & self._up[x] & ~(1 << x)
                if not between:
                    out.append((x, y))
        return sorted(out)

    def maximal(self) -> list[int]:
        return [x for x in range(self.n) if self._up[x] == 1 << x]

    @property
    def atoms(self) -> tuple[int, ...]:
        return tuple(y for (x, y) in self.covers() if x == self.bottom)

    def pure_states(self) -> dict[int, PureType]:
        """Completely meet-irreducible elements, tagged by type."""
        if self._pure is None:
            pure = {}
            for x in range(self.n):
                strict_up = _bits(self._up[x] & ~(1 << x))
                if not strict_up:
                    pure[x] = PureType.TYPE1
                elif self.meet(strict_up) != x:
                    pure[x] = PureType.TYPE2
            self._pure = pure
        return dict(self._pure)

    @property
    def pure(self) -> tuple[int, ...]:
        return tuple(sorted(self.pure_states()))

    def underline(self, x: int) -> tuple[int, ...]:
        """Pure states above ``x``."""
        return tuple(p for p in self.pure if self.leq(x, p))

    def depth(self, x: int) -> int:
        d = 0
        frontier = {x}
        while frontier != {self.bottom}:
            nxt = set()
            for y in frontier:
                for lo, hi in self._lower_covers(y):
                    nxt.add(lo)
            frontier = nxt or {self.bottom}
            d += 1
        return d

    def _lower_covers(self, y: int) -> list[tuple[int, int]]:
        strict = self._down[y] & ~(1 << y)
        return [(x, y) for x in _bits(strict) if not (strict & self._up[x] & ~(1 << x))]

    def sub_labels(self, xs: Iterable[int]) -> list[str]:
        return [self.labels[x] for x in sorted(xs)]


def _closure(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    reach = np.eye(n, dtype=bool)
    for lo, hi in pairs:
        reach[lo, hi] = True
    while True:
        nxt = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        if (nxt == reach).all():
            return reach
        reach = nxt


def build_space(
    labels: Sequence[str],
    covers: Iterable[tuple[str, str]],
    name: str = "",
) -> StateSpace:
    """Build a space from labels and generating order pairs ``(lower, upper)``.

    The pairs need not be covers; the reflexive-transitive closure is taken.
    """
    labels = list(labels)
    if len(set(labels)) != len(labels):
        dup = sorted({x for x in labels if labels.count(x) > 1})
        raise ParseError(f"duplicate labels: {dup}")
    if not labels:
        raise NoBottom(())
    pos = {lab: i for i, lab in enumerate(labels)}
    pairs = []
    for lo, hi in covers:
        if lo not in pos or hi not in pos:
            raise ParseError(f"cover ({lo!r}, {hi!r}) names an unknown element")
        if lo == hi:
            raise CycleDetected([lo])
        pairs.append((pos[lo], pos[hi]))
    n = len(labels)
    reach = _closure(n, pairs)
    both = reach & reach.T & ~np.eye(n, dtype=bool)
    if both.any():
        i = int(np.argwhere(both)[0][0])
        raise CycleDetected(sorted(labels[j] for j in range(n) if both[i, j] or j == i))
    bottoms = [i for i in range(n) if reach[i].all()]
    if not bottoms:
        minimal = [labels[i] for i in range(n) if reach[:, i].sum() == 1]
        raise NoBottom(sorted(minimal))
    # canonical order: longest chain from bottom, then label
    depth = [0] * n
    for y in sorted(range(n), key=lambda i: int(reach[:, i].sum())):
        below = [x for x in range(n) if reach[x, y] and x != y]
        depth[y] = 1 + max((depth[x] for x in below), default=-1)
    order = sorted(range(n), key=lambda i: (depth[i], labels[i]))
    new = {old: k for k, old in enumerate(order)}
    down = []
    for old_y in order:
        mask = 0
        for old_x in range(n):
            if reach[old_x, old_y]:
                mask |= 1 << new[old_x]
        down.append(mask)
    return StateSpace(name, [labels[i] for i in order], down)


def space_from_leq(labels: Sequence[str], leq: np.ndarray, name: str = "") -> StateSpace:
    """Build a space from a full order matrix (``leq[i, j]`` iff ``i <= j``)."""
    n = len(labels)
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n) if i != j and leq[i, j]]
    return build_space(labels, pairs, name)


@dataclass
class Verdict:
    ok: bool
    witness: int | None = None
    detail: str = ""


@dataclass
class AxiomReport:
    space: StateSpace
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.ok for v in self.verdicts.values())

    def to_dict(self) -> dict:
        out = {}
        for key, v in self.verdicts.items():
            entry: dict = {"ok": v.ok}
            if v.witness is not None:
                entry["witness"] = self.space.label(v.witness)
            if v.detail:
                entry["detail"] = v.detail
            out[key] = entry
        return out


def check_state_axioms(space: StateSpace) -> AxiomReport:
    """Check A1, A2, A4 and A5 on a built space.

    A1 and A2 hold by construction. A4 asks that every state be the meet of
    the maximal states above it: in a finite space the decomposition over all
    completely meet-irreducible elements is automatic, so the informative
    check is the one over Type 1 pure states. A5 asks that every pure state
    be maximal; its witness is the last offending element in canonical order.
    """
    rep = AxiomReport(space)
    rep.verdicts["A1"] = Verdict(True, detail="all nonempty meets exist")
    rep.verdicts["A2"] = Verdict(True, detail=f"bottom is {space.label(space.bottom)}")
    maximal = set(space.maximal())
    bad = [x for x in space if space.meet(m for m in maximal if space.leq(x, m)) != x]
    rep.verdicts["A4"] = Verdict(
        not bad, bad[0] if bad else None,
        "" if not bad else "not the meet of the maximal states above it",
    )
    pure = space.pure_states()
    redundant = [x for x, t in pure.items() if t is PureType.TYPE2]
    rep.verdicts["A5"] = Verdict(
        not redundant, max(redundant) if redundant else None,
        "" if not redundant else "pure state that is not maximal",
    )
    return rep


def is_distributive(space: StateSpace, strict: bool = False) -> tuple[bool, tuple[int, int, int] | None]:
    """Distributivity of an Inf semi-lattice, with a failing triple as witness.

    For ``sigma`` above ``s1 ^ s2`` (and distinct from both) there must be
    ``t1 >= s1`` and ``t2 >= s2`` with ``sigma = t1 ^ t2``. Any such ``t_i`` lies
    above ``sigma v s_i``, so the test reduces to those joins. By default only
    incomparable pairs ``(s1, s2)`` are tested: for comparable pairs the
    condition demands a common upper bound of ``sigma`` and the larger element,
    which spaces without a top generally lack. ``strict=True`` tests all pairs.
    """
    n = space.n
    meet = np.array(space._meet, dtype=np.int64)
    join = np.array([[(-1 if j is None else j) for j in row] for row in space._join], dtype=np.int64)
    leq = space.leq_matrix()
    comparable = leq | leq.T
    idx = np.arange(n)
    for s in range(n):
        cond = leq[meet, s]
        cond &= (idx[:, None] != s) & (idx[None, :] != s)
        if not strict:
            cond &= ~comparable
        if not cond.any():
            continue
        j1 = join[s][:, None].repeat(n, axis=1)
        j2 = join[s][None, :].repeat(n, axis=0)
        exists = (j1 >= 0) & (j2 >= 0)
        ok = np.zeros((n, n), dtype=bool)
        ok[exists] = meet[j1[exists], j2[exists]] == s
        fail = cond & ~ok
        if fail.any():
            a, b = (int(v) for v in np.argwhere(fail)[0])
            return False, (s, a, b)
    return True, None


def quasi_antipodal(space: StateSpace, x: int, y: int) -> bool:
    """Maximal incompatibility: no common upper bound, but every strictly
    smaller element on either side is compatible with the other side."""
    if space.widehat((x, y)):
        return False
    for z in space.downset(y):
        if z != y and not space.widehat((x, z)):
            return False
    for z in space.downset(x):
        if z != x and not space.widehat((y, z)):
            return False
    return True


def find_isomorphism(
    s1: StateSpace,
    s2: StateSpace,
    star1: Mapping[int, int] | None = None,
    star2: Mapping[int, int] | None = None,
) -> dict[int, int] | None:
    """Search an order isomorphism (commuting with the stars when given)."""
    if s1.n != s2.n:
        return None
    depth1 = [s1.depth(x) for x in s1]
    depth2 = [s2.depth(x) for x in s2]
    if sorted(depth1) != sorted(depth2):
        return None
    groups: dict[int, list[int]] = {}
    for x in s1:
        groups.setdefault(depth1[x], []).append(x)
    levels = sorted(groups)

    def extend(level: int, mapping: dict[int, int]):
        if level == len(levels):
            yield dict(mapping)
            return
        src = groups[levels[level]]
        dst = [y for y in s2 if depth2[y] == levels[level]]
        for perm in permutations(dst):
            trial = dict(mapping)
            trial.update(zip(src, perm))
            placed = list(trial)
            if all(s1.leq(a, b) == s2.leq(trial[a], trial[b]) for a in src for b in placed) and all(
                s1.leq(b, a) == s2.leq(trial[b], trial[a]) for a in src for b in placed
            ):
                yield from extend(level + 1, trial)

    for mapping in extend(0, {}):
        if star1 is None or star2 is None:
            return mapping
        if all(mapping[star1[x]] == star2[mapping[x]] for x in star1):
            return mapping
    return None
