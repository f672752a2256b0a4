"""Basic tensor product of two spaces of states.

An element is presented by a finite set of pairs ``u`` (the meet of its pure
tensors) and is stored through its canonical form: every pair ``(x, y)`` whose
tensor lies above ``u``. Membership is decided by the subset expansion

    for all K in I:  meet_K(A-components) <= x  or  meet_(I-K)(B-components) <= y

with the empty meet never below anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .determination import BOT, NO, YES, Det, bullet2, det_bullet, det_meet
from .effects import Effect, EffectSpace, build_effects, effect_eval, effect_meet
from .space import StateSpace, check_state_axioms, space_from_leq

Pair = tuple[int, int]


class GeneratorCapExceeded(ValueError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"{size} generators exceed the cap of {cap}")
        self.size, self.cap = size, cap


class EnumerationTooLarge(ValueError):
    pass


def _subset_meets(space: StateSpace, comps: Sequence[int]) -> list[int]:
    """meet over every nonempty subset, indexed by bitmask (entry 0 unused)."""
    out = [-1] * (1 << len(comps))
    for mask in range(1, 1 << len(comps)):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        out[mask] = comps[i] if rest == 0 else space.meet2(out[rest], comps[i])
    return out


@dataclass(frozen=True)
class BasicTensorElement:
    canonical: frozenset  # of Pair
    generators: tuple  # minimal pairs of the canonical set

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BasicTensorElement) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)


class BasicTensor:
    """Order, meets and joins of the basic tensor of ``A`` and ``B``."""

    def __init__(self, A: StateSpace, B: StateSpace, cap: int = 12):
        self.A, self.B, self.cap = A, B, cap
        self.pairs: tuple[Pair, ...] = tuple(product(range(A.n), range(B.n)))

    # order

    def _prepare(self, u: Iterable[Pair]) -> tuple[list[Pair], list[int], list[int]]:
        gens = sorted(set(u))
        if not gens:
            raise ValueError("a tensor generator set must be nonempty")
        if len(gens) > self.cap:
            raise GeneratorCapExceeded(len(gens), self.cap)
        return (
            gens,
            _subset_meets(self.A, [a for a, _ in gens]),
            _subset_meets(self.B, [b for _, b in gens]),
        )

    def _below(self, k: int, ma: list[int], mb: list[int], x: int, y: int) -> bool:
        full = (1 << k) - 1
        A, B = self.A, self.B
        for mask in range(full + 1):
            comp = full ^ mask
            if mask and A.leq(ma[mask], x):
                continue
            if comp and B.leq(mb[comp], y):
                continue
            return False
        return True

    def leq_pure(self, u: Iterable[Pair], target: Pair) -> bool:
        """Is the element generated by ``u`` below the tensor of ``target``?"""
        gens, ma, mb = self._prepare(u)
        return self._below(len(gens), ma, mb, *target)

    def canonical(self, u: Iterable[Pair]) -> frozenset:
        gens, ma, mb = self._prepare(u)
        k = len(gens)
        return frozenset(p for p in self.pairs if self._below(k, ma, mb, *p))

    def minimal_pairs(self, pairs: Iterable[Pair]) -> tuple[Pair, ...]:
        ps = sorted(set(pairs))
        A, B = self.A, self.B
        return tuple(
            p for p in ps
            if not any(q != p and A.leq(q[0], p[0]) and B.leq(q[1], p[1]) for q in ps)
        )

    def element(self, u: Iterable[Pair]) -> BasicTensorElement:
        canon = self.canonical(u)
        return BasicTensorElement(canon, self.minimal_pairs(canon))

    def tensor_leq(self, u: Iterable[Pair], v: Iterable[Pair]) -> bool:
        gens, ma, mb = self._prepare(u)
        return all(self._below(len(gens), ma, mb, x, y) for x, y in set(v))

    def tensor_eq(self, u: Iterable[Pair], v: Iterable[Pair]) -> bool:
        u, v = list(u), list(v)
        return self.tensor_leq(u, v) and self.tensor_leq(v, u)

    def elem_leq(self, s: BasicTensorElement, t: BasicTensorElement) -> bool:
        return t.canonical <= s.canonical

    # lattice operations

    def meet(self, us: Iterable[Iterable[Pair]]) -> BasicTensorElement:
        union: set[Pair] = set()
        for u in us:
            union |= set(u)
        return self.element(union)

    def meet_elements(self, elems: Iterable[BasicTensorElement]) -> BasicTensorElement:
        return self.meet(e.generators for e in elems)

    def pure_pairs(self) -> list[Pair]:
        return [(a, b) for a in self.A.pure for b in self.B.pure]

    def pure_upper_bounds(self, u: Iterable[Pair]) -> list[Pair]:
        canon = self.canonical(u)
        return [p for p in self.pure_pairs() if p in canon]

    def join(self, u: Iterable[Pair], v: Iterable[Pair]) -> BasicTensorElement | None:
        """Meet of the common pure-tensor upper bounds; None if there are none."""
        u, v = list(u), list(v)
        common = set(self.pure_upper_bounds(u)) & set(self.pure_upper_bounds(v))
        if not common:
            return None
        return self.element(common)

    def join_by_pairs(self, u: Iterable[Pair], v: Iterable[Pair]) -> BasicTensorElement | None:
        """Join by pairwise componentwise joins (valid for distributive factors).

        A pair whose componentwise join is missing imposes no constraint.
        """
        terms = []
        for a, b in set(u):
            for c, d in set(v):
                x, y = self.A.join2(a, c), self.B.join2(b, d)
                if x is not None and y is not None:
                    terms.append((x, y))
        return self.element(terms) if terms else None

    # distinguished elements

    def pure_tensor(self, a: int, b: int) -> BasicTensorElement:
        return self.element([(a, b)])

    def bottom(self) -> BasicTensorElement:
        return self.pure_tensor(self.A.bottom, self.B.bottom)

    def pure_states(self) -> list[BasicTensorElement]:
        return [self.pure_tensor(a, b) for a, b in self.pure_pairs()]

    def atom_generators(self) -> list[tuple[Pair, Pair]]:
        return [
            ((a, self.B.bottom), (self.A.bottom, b)) for a in self.A.atoms for b in self.B.atoms
        ]

    def atoms(self) -> list[BasicTensorElement]:
        return [self.element(g) for g in self.atom_generators()]

    def is_bifilter(self, pairs: Iterable[Pair]) -> bool:
        s = set(pairs)
        A, B = self.A, self.B
        for x, y in s:
            for x2 in A.upset(x):
                for y2 in B.upset(y):
                    if (x2, y2) not in s:
                        return False
        for (x, y), (x2, y2) in product(s, s):
            if y == y2 and (A.meet2(x, x2), y) not in s:
                return False
            if x == x2 and (x, B.meet2(y, y2)) not in s:
                return False
        return True

    # evaluation

    def nu_eval(self, u: Iterable[Pair], la: Effect, lb: Effect) -> Det:
        return det_meet(
            det_bullet([effect_eval(self.A, la, a), effect_eval(self.B, lb, b)]) for a, b in u
        )

    @cached_property
    def effects_A(self) -> EffectSpace:
        return build_effects(self.A)

    @cached_property
    def effects_B(self) -> EffectSpace:
        return build_effects(self.B)

    def nu_table(self, u: Iterable[Pair]) -> np.ndarray:
        """Values of every product effect, shape ``(len(E_A), len(E_B))``."""
        ta, tb = self.effects_A.table, self.effects_B.table
        out = None
        for a, b in set(u):
            col = _bullet_outer(ta[:, a], tb[:, b])
            out = col if out is None else np.where(out == col, out, BOT).astype(np.int8)
        if out is None:
            raise ValueError("empty generator set")
        return out

    def label(self, elem: BasicTensorElement) -> str:
        return "^".join(f"({self.A.label(a)},{self.B.label(b)})" for a, b in elem.generators)


def _bullet_outer(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    xx = x[:, None]
    yy = y[None, :]
    out = np.full((len(x), len(y)), YES, dtype=np.int8)
    out[(xx == BOT) | (yy == BOT)] = BOT
    out[(xx == NO) | (yy == NO)] = NO
    return out


@dataclass
class TensorEnumeration:
    """The quotient materialized as a space of states."""

    context: BasicTensor
    elements: list[BasicTensorElement]
    space: StateSpace
    _to_space: list[int]

    def space_index(self, elem: BasicTensorElement) -> int:
        return self._to_space[self.elements.index(elem)]

    def element_at(self, space_index: int) -> BasicTensorElement:
        return self.elements[self._to_space.index(space_index)]

    def class_of(self, u: Iterable[Pair]) -> int:
        return self.space_index(self.context.element(u))


def enumerate_tensor(A: StateSpace, B: StateSpace, max_pairs: int = 20, cap: int = 12) -> TensorEnumeration:
    if A.n * B.n > max_pairs:
        raise EnumerationTooLarge(f"{A.n}x{B.n} pairs exceed the limit of {max_pairs}")
    ctx = BasicTensor(A, B, cap=cap)
    seeds = {ctx.element([p]) for p in ctx.pairs}
    found = set(seeds)
    work = list(seeds)
    while work:
        e = work.pop()
        for s in seeds:
            m = ctx.element(set(e.generators) | set(s.generators))
            if m not in found:
                found.add(m)
                work.append(m)
    elements = sorted(found, key=lambda e: sorted(e.canonical))
    labels = [ctx.label(e) for e in elements]
    n = len(elements)
    leq = np.zeros((n, n), dtype=bool)
    for i, s in enumerate(elements):
        for j, t in enumerate(elements):
            leq[i, j] = t.canonical <= s.canonical
    space = space_from_leq(labels, leq, name=f"{A.name}(x){B.name}")
    to_space = [space.index(lab) for lab in labels]
    return TensorEnumeration(ctx, elements, space, to_space)


class TensorEffects:
    """Effects of the basic tensor, generated by pairs of factor effects."""

    def __init__(self, context: BasicTensor):
        self.context = context

    def eval(self, lam: Iterable[tuple[Effect, Effect]], u: Iterable[Pair]) -> Det:
        u = list(u)
        return det_meet(self.context.nu_eval(u, la, lb) for la, lb in lam)


def check_bipartite_axioms(enum: TensorEnumeration) -> dict[str, tuple[bool, tuple]]:
    """Bipartite axioms B1-B5 (with primes) and C, exhaustively on an enumeration."""
    ctx = enum.context
    A, B = ctx.A, ctx.B
    EA, EB = ctx.effects_A, ctx.effects_B
    sp = enum.space
    tables = {}
    for e in enum.elements:
        t = ctx.nu_table(e.generators)
        if not np.array_equal(t, ctx.nu_table(e.canonical)):
            return {"well_defined": (False, (ctx.label(e),))}
        tables[enum.space_index(e)] = t
    out: dict[str, tuple[bool, tuple]] = {"well_defined": (True, ())}

    valid = check_state_axioms(sp)
    out["A_axioms"] = (valid.passed, tuple(k for k, v in valid.verdicts.items() if not v.ok))

    w = None
    for x in sp:
        for y in sp:
            m = tables[sp.meet2(x, y)]
            if not np.array_equal(m, np.where(tables[x] == tables[y], tables[x], BOT)):
                w = (sp.label(x), sp.label(y))
                break
        if w:
            break
    out["B1"] = (w is None, w or ())

    effs_a, effs_b = list(EA), list(EB)
    # mixed effects: a two-pair effect evaluates as the meet of its pairs
    w = None
    teff = TensorEffects(ctx)
    sample = list(product(range(len(effs_a)), range(len(effs_b))))
    stride = max(1, len(sample) // 24)
    for p, q in combinations(sample[::stride], 2):
        lam = [(effs_a[p[0]], effs_b[p[1]]), (effs_a[q[0]], effs_b[q[1]])]
        for x in sp:
            lhs = teff.eval(lam, enum.element_at(x).generators)
            rhs = det_meet([Det(int(tables[x][p])), Det(int(tables[x][q]))])
            if lhs != rhs:
                w = (sp.label(x),)
    out["B2"] = (w is None, w or ())

    w = None
    for la, la2 in combinations(effs_a, 2):
        m = effect_meet(A, (la, la2))
        i, j, k = EA.index(la), EA.index(la2), EA.index(m)
        for x in sp:
            t = tables[x]
            if not np.array_equal(t[k], np.where(t[i] == t[j], t[i], BOT)):
                w = (EA.label(la), EA.label(la2))
    out["B3'"] = (w is None, w or ())
    w = None
    for lb, lb2 in combinations(effs_b, 2):
        m = effect_meet(B, (lb, lb2))
        i, j, k = EB.index(lb), EB.index(lb2), EB.index(m)
        for x in sp:
            t = tables[x]
            if not np.array_equal(t[:, k], np.where(t[:, i] == t[:, j], t[:, i], BOT)):
                w = (EB.label(lb), EB.label(lb2))
    out['B3"'] = (w is None, w or ())
    out["B3"] = (True, ())  # the effect inclusion exists by construction

    pure_cls = {(a, b): enum.class_of([(a, b)]) for a, b in ctx.pairs}
    # the inclusion exists by construction; check it is injective on pure pairs and lands on maximal states
    pure_img = [pure_cls[p] for p in ctx.pure_pairs()]
    maximal = set(sp.maximal())
    ok4 = len(set(pure_img)) == len(pure_img) and all(x in maximal for x in pure_img)
    out["B4"] = (ok4, ())
    w = None
    for a, a2 in combinations(range(A.n), 2):
        for b in range(B.n):
            if pure_cls[(A.meet2(a, a2), b)] != sp.meet2(pure_cls[(a, b)], pure_cls[(a2, b)]):
                w = (A.label(a), A.label(a2), B.label(b))
    out["B4'"] = (w is None, w or ())
    w = None
    for b, b2 in combinations(range(B.n), 2):
        for a in range(A.n):
            if pure_cls[(a, B.meet2(b, b2))] != sp.meet2(pure_cls[(a, b)], pure_cls[(a, b2)]):
                w = (A.label(a), B.label(b), B.label(b2))
    out['B4"'] = (w is None, w or ())

    seen: dict[bytes, int] = {}
    w = None
    for x in sp:
        key = tables[x].tobytes()
        if key in seen:
            w = (sp.label(seen[key]), sp.label(x))
        seen[key] = x
    out["B5"] = (w is None, w or ())

    w = None
    for a, b in ctx.pairs:
        t = tables[pure_cls[(a, b)]]
        for i, la in enumerate(effs_a):
            for j, lb in enumerate(effs_b):
                if t[i, j] != bullet2(EA.eval(la, a), EB.eval(lb, b)):
                    w = (A.label(a), B.label(b))
    out["C"] = (w is None, w or ())
    return out


# multipartite products


def multipartite_leq(
    spaces: Sequence[StateSpace], gens: Iterable[Sequence[int]], target: Sequence[int], cap: int = 8
) -> bool:
    """Is the meet of the tuples in ``gens`` below the tensor of ``target``?

    Every assignment of the generators to the parties must leave some party
    whose assigned block is nonempty with a meet below its target component.
    """
    gens = sorted({tuple(g) for g in gens})
    if not gens:
        raise ValueError("a tensor generator set must be nonempty")
    J = len(spaces)
    if len(gens) > cap or J > 3:
        raise GeneratorCapExceeded(len(gens), cap)
    for assign in product(range(J), repeat=len(gens)):
        ok = False
        for j in range(J):
            block = [g[j] for g, who in zip(gens, assign) if who == j]
            if block and spaces[j].leq(spaces[j].meet(block), target[j]):
                ok = True
                break
        if not ok:
            return False
    return True


def multipartite_canonical(spaces: Sequence[StateSpace], gens: Iterable[Sequence[int]]) -> frozenset:
    gens = list(gens)
    return frozenset(
        t for t in product(*(range(s.n) for s in spaces)) if multipartite_leq(spaces, gens, t)
    )


def multipartite_nu(spaces: Sequence[StateSpace], gens: Iterable[Sequence[int]], effects: Sequence[Effect]) -> Det:
    return det_meet(
        det_bullet(effect_eval(s, e, x) for s, e, x in zip(spaces, effects, g)) for g in gens
    )


@dataclass
class AssocReport:
    left_right_agree: bool
    direct_agrees: bool
    generator_sets: int
    classes: int

    @property
    def passed(self) -> bool:
        return self.left_right_agree and self.direct_agrees


def multipartite_assoc_check(A: StateSpace, B: StateSpace, C: StateSpace, max_gens: int = 2) -> AssocReport:
    """Compare the congruences of (A x B) x C, A x (B x C) and the direct tripartite order."""
    ab = enumerate_tensor(A, B)
    bc = enumerate_tensor(B, C)
    left = BasicTensor(ab.space, C)
    right = BasicTensor(A, bc.space)
    triples = list(product(range(A.n), range(B.n), range(C.n)))
    cls_ab = {(a, b): ab.class_of([(a, b)]) for a in range(A.n) for b in range(B.n)}
    cls_bc = {(b, c): bc.class_of([(b, c)]) for b in range(B.n) for c in range(C.n)}
    sets = [s for k in range(1, max_gens + 1) for s in combinations(triples, k)]
    part_l: dict = {}
    part_r: dict = {}
    part_d: dict = {}
    key_l, key_r, key_d = [], [], []
    for s in sets:
        kl = left.canonical({(cls_ab[(a, b)], c) for a, b, c in s})
        kr = right.canonical({(a, cls_bc[(b, c)]) for a, b, c in s})
        kd = multipartite_canonical((A, B, C), s)
        key_l.append(part_l.setdefault(kl, len(part_l)))
        key_r.append(part_r.setdefault(kr, len(part_r)))
        key_d.append(part_d.setdefault(kd, len(part_d)))
    same_lr = _same_partition(key_l, key_r)
    same_d = _same_partition(key_l, key_d)
    return AssocReport(same_lr, same_d, len(sets), len(part_l))


def _same_partition(k1: list[int], k2: list[int]) -> bool:
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    for a, b in zip(k1, k2):
        if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
            return False
    return True


# functional interface


def nu_eval(A: StateSpace, B: StateSpace, u: Iterable[Pair], la: Effect, lb: Effect) -> Det:
    return BasicTensor(A, B).nu_eval(list(u), la, lb)


def leq_pure(A: StateSpace, B: StateSpace, u: Iterable[Pair], target: Pair, cap: int = 12) -> bool:
    return BasicTensor(A, B, cap).leq_pure(u, target)


def canonicalize(A: StateSpace, B: StateSpace, u: Iterable[Pair], cap: int = 12) -> BasicTensorElement:
    ctx = BasicTensor(A, B, cap)
    elem = ctx.element(u)
    assert ctx.is_bifilter(elem.canonical)
    return elem


def tensor_leq(A: StateSpace, B: StateSpace, u: Iterable[Pair], v: Iterable[Pair]) -> bool:
    return BasicTensor(A, B).tensor_leq(u, v)


def tensor_eq(A: StateSpace, B: StateSpace, u: Iterable[Pair], v: Iterable[Pair]) -> bool:
    return BasicTensor(A, B).tensor_eq(u, v)


def tensor_meet(A: StateSpace, B: StateSpace, us: Sequence[Iterable[Pair]]) -> BasicTensorElement:
    if not us:
        raise ValueError("tensor_meet needs at least one argument")
    return BasicTensor(A, B).meet(us)


class JoinMismatch(AssertionError):
    pass


def tensor_join(A: StateSpace, B: StateSpace, u: Iterable[Pair], v: Iterable[Pair]) -> BasicTensorElement | None:
    """Join via common pure upper bounds, cross-checked by pairwise joins when both factors are distributive."""
    from .space import is_distributive

    ctx = BasicTensor(A, B)
    u, v = list(u), list(v)
    res = ctx.join(u, v)
    if is_distributive(A)[0] and is_distributive(B)[0]:
        alt = ctx.join_by_pairs(u, v)
        if alt != res:
            raise JoinMismatch(f"pure-bound join {res} differs from pairwise join {alt}")
    return res


def tensor_pure_states(A: StateSpace, B: StateSpace) -> list[BasicTensorElement]:
    return BasicTensor(A, B).pure_states()


def tensor_atoms(A: StateSpace, B: StateSpace) -> list[BasicTensorElement]:
    return BasicTensor(A, B).atoms()


def tensor_effects(A: StateSpace, B: StateSpace) -> TensorEffects:
    return TensorEffects(BasicTensor(A, B))
