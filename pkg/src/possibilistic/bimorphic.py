"""Bimorphism-based tensors: the maximal tensor over effect pairs and the star tensor over state pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .determination import BOT, NO, YES, Det
from .effects import Effect, EffectSpace, build_effects
from .ortho import OrthoReport, bracket, validate_star
from .space import StateSpace, space_from_leq
from .tensor_basic import TensorEnumeration, _bullet_outer

Domain = StateSpace | EffectSpace


class NotPure(ValueError):
    pass


class MaximalTooLarge(ValueError):
    pass


class NotDeterminedByPure(ValueError):
    """The effect space has effects that are not meets of the pure effects above them."""


def _table_meet(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x == y, x, BOT).astype(np.int8)


def _table_leq(x: np.ndarray, y: np.ndarray) -> bool:
    return bool(np.all((x == BOT) | (x == y)))


def meet_table(domain: Domain) -> np.ndarray:
    """Binary meet table in the domain's own indexing."""
    if isinstance(domain, EffectSpace):
        effs = list(domain)
        return np.array(
            [[domain.index(domain.meet((e, f))) for f in effs] for e in effs], dtype=np.int64
        )
    return np.array([[domain.meet2(x, y) for y in domain] for x in domain], dtype=np.int64)


def _size(domain: Domain) -> int:
    return len(domain) if isinstance(domain, EffectSpace) else domain.n


def _global_meet(domain: Domain) -> int:
    if isinstance(domain, EffectSpace):
        return domain.index(domain.meet(list(domain)))
    return domain.bottom


# bimorphisms


def _first_row_violation(table: np.ndarray, meets: np.ndarray) -> tuple | None:
    n = table.shape[0]
    for i in range(n):
        lhs = table[meets[i]]  # (n, m)
        rhs = np.where(table[i][None, :] == table, table, BOT)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            j, col = bad[0]
            return (i, int(j), int(col))
    return None


def is_bimorphism(dom_a: Domain, dom_b: Domain, table: np.ndarray) -> tuple[bool, tuple | None]:
    """Meet preservation in each argument, checked on the full domain.

    The witness is ``("A", x, x2, y)`` or ``("B", y, y2, x)``.
    """
    table = np.asarray(table, dtype=np.int8)
    if table.shape != (_size(dom_a), _size(dom_b)):
        raise ValueError(f"table shape {table.shape} does not match the domains")
    w = _first_row_violation(table, meet_table(dom_a))
    if w:
        return False, ("A",) + w
    w = _first_row_violation(table.T.copy(), meet_table(dom_b))
    if w:
        return False, ("B",) + w
    # full-set meets, redundant for finite domains but cheap
    ga, gb = _global_meet(dom_a), _global_meet(dom_b)
    col = table[0]
    for row in table[1:]:
        col = _table_meet(col, row)
    if not np.array_equal(table[ga], col):
        return False, ("A", "all", ga)
    row = table[:, 0]
    for c in table.T[1:]:
        row = _table_meet(row, c)
    if not np.array_equal(table[:, gb], row):
        return False, ("B", "all", gb)
    return True, None


def phi_pure_tensor(EA: EffectSpace, EB: EffectSpace, a: int, b: int) -> np.ndarray:
    """(lA, lB) -> eval(lA, a) * eval(lB, b)."""
    return _bullet_outer(EA.table[:, a], EB.table[:, b])


def _underline_masks(E: EffectSpace, pure: Sequence[Effect]) -> list[list[int]]:
    return [[k for k, u in enumerate(pure) if E.leq(e, u)] for e in E]


@dataclass
class GammaBimorphism:
    table: np.ndarray
    valid: bool
    witness: tuple | None


def phi_gamma(EA: EffectSpace, EB: EffectSpace, gamma: np.ndarray) -> GammaBimorphism:
    """Expand a Y/N table on pure effect pairs by meets over the pure effects above each argument."""
    pa, pb = EA.pure_effects(), EB.pure_effects()
    gamma = np.asarray(gamma, dtype=np.int8)
    if gamma.shape != (len(pa), len(pb)) or np.any(gamma == BOT):
        raise ValueError("gamma must be a Yes/No table on pure effect pairs")
    ua, ub = _underline_masks(EA, pa), _underline_masks(EB, pb)
    table = np.zeros((len(EA), len(EB)), dtype=np.int8)
    for i, ra in enumerate(ua):
        for j, rb in enumerate(ub):
            block = gamma[np.ix_(ra, rb)]
            if np.all(block == YES):
                table[i, j] = YES
            elif np.all(block == NO):
                table[i, j] = NO
    ok, w = is_bimorphism(EA, EB, table)
    return GammaBimorphism(table, ok, w)


@dataclass
class GammaScan:
    total: int
    invalid: int
    first_invalid: np.ndarray | None

    @property
    def valid(self) -> int:
        return self.total - self.invalid


def gamma_scan(EA: EffectSpace, EB: EffectSpace, limit: int = 1 << 16) -> GammaScan:
    """Try every Y/N table on pure effect pairs, vectorized over all tables at once."""
    pa, pb = EA.pure_effects(), EB.pure_effects()
    cells = len(pa) * len(pb)
    total = 1 << cells
    if total > limit:
        raise MaximalTooLarge(f"{total} gamma tables exceed the limit of {limit}")
    codes = np.arange(total, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(cells)) & 1).astype(bool).reshape(total, len(pa), len(pb))
    ua, ub = _underline_masks(EA, pa), _underline_masks(EB, pb)
    na, nb = len(EA), len(EB)
    tables = np.zeros((total, na, nb), dtype=np.int8)
    for i, ra in enumerate(ua):
        for j, rb in enumerate(ub):
            block = bits[:, ra][:, :, rb].reshape(total, -1)
            tables[:, i, j] = np.where(block.all(1), YES, np.where((~block).all(1), NO, BOT))
    bad = np.zeros(total, dtype=bool)
    ma, mb = meet_table(EA), meet_table(EB)
    for i in range(na):
        for k in range(na):
            lhs = tables[:, ma[i, k], :]
            rhs = np.where(tables[:, i, :] == tables[:, k, :], tables[:, i, :], BOT)
            bad |= (lhs != rhs).any(1)
    for j in range(nb):
        for k in range(nb):
            lhs = tables[:, :, mb[j, k]]
            rhs = np.where(tables[:, :, j] == tables[:, :, k], tables[:, :, j], BOT)
            bad |= (lhs != rhs).any(1)
    first = None
    if bad.any():
        first = np.where(bits[int(np.argmax(bad))], YES, NO).astype(np.int8)
    return GammaScan(total, int(bad.sum()), first)


def _restrictions(E: EffectSpace, limit: int) -> list[tuple[int, ...]]:
    """Value vectors on pure effects whose meet expansion preserves meets."""
    from .space import check_state_axioms

    if not check_state_axioms(E.as_space).passed:
        raise NotDeterminedByPure(f"effects of {E.base.name} fail the state axioms")
    pure = E.pure_effects()
    if len(pure) > limit:
        raise MaximalTooLarge(f"{len(pure)} pure effects exceed the limit of {limit}")
    under = _underline_masks(E, pure)
    meets = meet_table(E)
    out = []
    for vals in product((BOT, YES, NO), repeat=len(pure)):
        v = np.array(vals, dtype=np.int8)
        ext = np.zeros(len(E), dtype=np.int8)
        for i, r in enumerate(under):
            sub = v[r]
            ext[i] = sub[0] if np.all(sub == sub[0]) else BOT
        if np.array_equal(ext[meets], np.where(ext[:, None] == ext[None, :], ext[:, None], BOT)):
            out.append(tuple(int(x) for x in vals))
    return out


def _column_search(EA: EffectSpace, EB: EffectSpace, limit: int):
    ra = _restrictions(EA, limit)
    rb = set(_restrictions(EB, limit))
    width = len(EB.pure_effects())
    prefixes = {row[:k] for row in rb for k in range(width + 1)}
    return ra, prefixes, width


def count_maximal(EA: EffectSpace, EB: EffectSpace, limit: int = 6) -> int:
    """Number of bimorphisms on effect pairs: pure tables with admissible rows and columns."""
    ra, prefixes, width = _column_search(EA, EB, limit)
    rows = len(EA.pure_effects())
    states = {tuple(() for _ in range(rows)): 1}
    for _ in range(width):
        nxt: dict[tuple, int] = {}
        for st, count in states.items():
            for col in ra:
                trial = tuple(r + (c,) for r, c in zip(st, col))
                if all(r in prefixes for r in trial):
                    nxt[trial] = nxt.get(trial, 0) + count
        states = nxt
    return sum(states.values())


def enumerate_maximal(
    EA: EffectSpace, EB: EffectSpace, limit: int = 6, max_tables: int = 100_000
) -> list[np.ndarray]:
    """All bimorphisms on effect pairs, as full tables."""
    total = count_maximal(EA, EB, limit)
    if total > max_tables:
        raise MaximalTooLarge(f"{total} bimorphisms exceed the limit of {max_tables}")
    ra, prefixes, width = _column_search(EA, EB, limit)
    pa, pb = EA.pure_effects(), EB.pure_effects()
    ua, ub = _underline_masks(EA, pa), _underline_masks(EB, pb)
    gammas: list[np.ndarray] = []

    def extend(cols: list[tuple[int, ...]]) -> None:
        if len(cols) == width:
            gammas.append(np.array(cols, dtype=np.int8).T)
            return
        for col in ra:
            trial = cols + [col]
            if all(tuple(c[i] for c in trial) in prefixes for i in range(len(pa))):
                extend(trial)

    extend([])
    found = []
    for gamma in gammas:
        table = np.zeros((len(EA), len(EB)), dtype=np.int8)
        for i, r in enumerate(ua):
            for j, c in enumerate(ub):
                block = gamma[np.ix_(r, c)].ravel()
                table[i, j] = block[0] if np.all(block == block[0]) else BOT
        found.append(table)
    return found


@dataclass
class MuReport:
    injective: bool
    meet_preserving: bool
    all_bimorphisms: bool
    pure_match: bool
    tables: dict[int, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.injective and self.meet_preserving and self.all_bimorphisms and self.pure_match


def mu_embedding(enum: TensorEnumeration) -> MuReport:
    """Send each enumerated basic-tensor state to its table of product-effect values."""
    ctx = enum.context
    EA, EB = ctx.effects_A, ctx.effects_B
    tables = {enum.space_index(e): ctx.nu_table(e.generators) for e in enum.elements}
    sp = enum.space
    keys = {t.tobytes() for t in tables.values()}
    injective = len(keys) == len(tables)
    meet_ok = all(
        np.array_equal(tables[sp.meet2(x, y)], _table_meet(tables[x], tables[y]))
        for x in sp
        for y in sp
    )
    bim = all(is_bimorphism(EA, EB, t)[0] for t in tables.values())
    pure_ok = all(
        np.array_equal(tables[enum.class_of([(a, b)])], phi_pure_tensor(EA, EB, a, b))
        for a, b in ctx.pairs
    )
    return MuReport(injective, meet_ok, bim, pure_ok, tables)


# star tensor


@dataclass(frozen=True)
class StarTensorElement:
    generators: frozenset  # of pure pairs (alpha, beta)


class StarTensor:
    """Meets of bracket products of pure pairs, as tables over state pairs."""

    def __init__(self, A: StateSpace, star_a: Mapping[int, int], B: StateSpace, star_b: Mapping[int, int]):
        self.A, self.B = A, B
        self.star_a, self.star_b = dict(star_a), dict(star_b)
        self.pure_a, self.pure_b = tuple(A.pure), tuple(B.pure)
        self.br_a = np.array([[bracket(A, star_a, p, s) for s in A] for p in self.pure_a], dtype=np.int8)
        self.br_b = np.array([[bracket(B, star_b, p, s) for s in B] for p in self.pure_b], dtype=np.int8)
        self._ia = {p: i for i, p in enumerate(self.pure_a)}
        self._ib = {p: i for i, p in enumerate(self.pure_b)}
        self.pure_pairs = tuple(product(self.pure_a, self.pure_b))

    def _check_pure(self, alpha: int, beta: int) -> None:
        if alpha not in self._ia or beta not in self._ib:
            raise NotPure(f"({self.A.label(alpha)}, {self.B.label(beta)}) is not a pure pair")

    def generator_table(self, alpha: int, beta: int) -> np.ndarray:
        self._check_pure(alpha, beta)
        return _bullet_outer(self.br_a[self._ia[alpha]], self.br_b[self._ib[beta]])

    def star_generator(self, alpha: int, beta: int) -> StarTensorElement:
        self._check_pure(alpha, beta)
        return StarTensorElement(frozenset({(alpha, beta)}))

    def state_tensor(self, sa: int, sb: int) -> StarTensorElement:
        """General states tensor as the meet over their pure upper bounds."""
        return StarTensorElement(
            frozenset(product(self.A.underline(sa), self.B.underline(sb)))
        )

    def meet(self, elems: Iterable[StarTensorElement]) -> StarTensorElement:
        gens: set = set()
        for e in elems:
            gens |= e.generators
        if not gens:
            raise ValueError("empty meet")
        return StarTensorElement(frozenset(gens))

    def table(self, elem: StarTensorElement) -> np.ndarray:
        out = None
        for a, b in sorted(elem.generators):
            t = self.generator_table(a, b)
            out = t if out is None else _table_meet(out, t)
        return out

    def star_eval(self, elem: StarTensorElement, sa: int, sb: int) -> Det:
        return Det(int(self.table(elem)[sa, sb]))

    def leq(self, e1: StarTensorElement, e2: StarTensorElement) -> bool:
        return _table_leq(self.table(e1), self.table(e2))

    def canonical(self, elem: StarTensorElement) -> frozenset:
        t = self.table(elem)
        return frozenset(p for p in self.pure_pairs if _table_leq(t, self.generator_table(*p)))

    def underline(self, elem: StarTensorElement) -> frozenset:
        return self.canonical(elem)

    def common_upper_bound(self, e1: StarTensorElement, e2: StarTensorElement) -> bool:
        return bool(self.canonical(e1) & self.canonical(e2))

    def double_bracket(self, e1: StarTensorElement, e2: StarTensorElement) -> Det:
        vals = []
        for a, b in e1.generators:
            for a2, b2 in e2.generators:
                x = Det(int(self.br_a[self._ia[a], a2]))
                y = Det(int(self.br_b[self._ib[b], b2]))
                vals.append(NO if NO in (x, y) else BOT if BOT in (x, y) else YES)
        return YES if all(v == YES for v in vals) else NO if all(v == NO for v in vals) else BOT

    def pure_star(self, alpha: int, beta: int) -> StarTensorElement:
        """Closed form for a pure tensor: star(alpha) x bottom meet bottom x star(beta)."""
        return self.meet(
            [
                self.state_tensor(self.star_a[alpha], self.B.bottom),
                self.state_tensor(self.A.bottom, self.star_b[beta]),
            ]
        )

    def label(self, elem: StarTensorElement) -> str:
        return "^".join(f"({self.A.label(a)}*{self.B.label(b)})" for a, b in _irredundant(self, elem))


def _irredundant(ctx: StarTensor, elem: StarTensorElement) -> list:
    gens = sorted(ctx.canonical(elem))
    target = ctx.table(elem)
    keep = list(gens)
    for g in gens:
        trial = [h for h in keep if h != g]
        if trial and np.array_equal(ctx.table(StarTensorElement(frozenset(trial))), target):
            keep = trial
    return keep


@dataclass
class StarEnumeration:
    context: StarTensor
    elements: list[StarTensorElement]
    space: StateSpace
    _to_space: list[int]
    _by_canon: dict = field(repr=False, default_factory=dict)

    def space_index(self, elem: StarTensorElement) -> int:
        return self._to_space[self._by_canon[self.context.canonical(elem)]]

    def element_at(self, x: int) -> StarTensorElement:
        return self.elements[self._to_space.index(x)]


def enumerate_star_tensor(ctx: StarTensor, max_elements: int = 5000) -> StarEnumeration:
    gens = [ctx.star_generator(a, b) for a, b in ctx.pure_pairs]
    seen: dict[bytes, StarTensorElement] = {}
    for g in gens:
        seen.setdefault(ctx.table(g).tobytes(), g)
    work = list(seen.values())
    while work:
        e = work.pop()
        for g in gens:
            m = ctx.meet([e, g])
            key = ctx.table(m).tobytes()
            if key not in seen:
                if len(seen) >= max_elements:
                    raise MaximalTooLarge(f"star tensor exceeds {max_elements} elements")
                canon = StarTensorElement(ctx.canonical(m))
                seen[key] = canon
                work.append(canon)
    elems = sorted(
        (StarTensorElement(ctx.canonical(e)) for e in seen.values()),
        key=lambda e: sorted(e.generators),
    )
    tables = [ctx.table(e) for e in elems]
    n = len(elems)
    leq = np.array([[_table_leq(tables[i], tables[j]) for j in range(n)] for i in range(n)], dtype=bool)
    labels = [ctx.label(e) for e in elems]
    space = space_from_leq(labels, leq, name=f"{ctx.A.name}(*){ctx.B.name}")
    to_space = [space.index(lab) for lab in labels]
    by_canon = {e.generators: i for i, e in enumerate(elems)}
    return StarEnumeration(ctx, elems, space, to_space, by_canon)


def star_tensor_star(enum: StarEnumeration) -> dict[int, int]:
    """Star on the enumeration: meet of everything whose double bracket with the element is No."""
    ctx, sp = enum.context, enum.space
    out = {}
    for x in sp:
        if x == sp.bottom:
            continue
        e = enum.element_at(x)
        perp = [enum.element_at(y) for y in sp if ctx.double_bracket(e, enum.element_at(y)) == NO]
        if perp:
            out[x] = enum.space_index(ctx.meet(perp))
        else:
            out[x] = sp.bottom
    return out


def star_tensor_atoms(ctx: StarTensor) -> list[StarTensorElement]:
    A, B = ctx.A, ctx.B
    return [
        ctx.meet([ctx.state_tensor(a, B.bottom), ctx.state_tensor(A.bottom, b)])
        for a in A.atoms
        for b in B.atoms
    ]


@dataclass
class StarOrthoCertificate:
    orthocomplemented: bool
    report: OrthoReport
    witness: dict | None = None


def star_orthocomplementation_check(
    A: StateSpace, star_a: Mapping[int, int], B: StateSpace, star_b: Mapping[int, int]
) -> StarOrthoCertificate:
    ctx = StarTensor(A, star_a, B, star_b)
    enum = enumerate_star_tensor(ctx)
    star = star_tensor_star(enum)
    report = validate_star(enum.space, star)
    if report.orthocomplemented:
        return StarOrthoCertificate(True, report)
    witness = None
    for (a, b), (a2, b2) in product(ctx.pure_pairs, ctx.pure_pairs):
        if a2 == a or b2 == b:
            continue
        u = ctx.meet([ctx.star_generator(a, b), ctx.star_generator(a2, b2)])
        w = ctx.pure_star(a, b)
        if not ctx.common_upper_bound(u, w):
            sl = lambda s, x: s.label(x)  # noqa: E731
            witness = {
                "pure": [sl(A, a), sl(B, b)],
                "other": [sl(A, a2), sl(B, b2)],
                "meet": ctx.label(u),
                "star": ctx.label(w),
                "star_formula": f"{sl(A, ctx.star_a[a])}(x)bot ^ bot(x){sl(B, ctx.star_b[b])}",
                "underline_of_meet": sorted(
                    [sl(A, p), sl(B, q)] for p, q in ctx.underline(u)
                ),
            }
            break
    return StarOrthoCertificate(False, report, witness)


# the attempted completion


@dataclass
class DeltaFailure:
    table: np.ndarray
    bimorphism: bool
    witness: tuple | None
    triple: tuple[int, int, int]
    values: tuple[Det, Det, Det]


def delta_completion(ctx: StarTensor, alpha: int, alpha2: int, beta: int, beta2: int) -> DeltaFailure:
    """Pointwise join of (a*b ^ a'*b') with (a*b)^star, tested for bimorphy."""
    A = ctx.A
    u = ctx.table(ctx.meet([ctx.star_generator(alpha, beta), ctx.star_generator(alpha2, beta2)]))
    w = ctx.table(ctx.pure_star(alpha, beta))
    if np.any(u == YES) or np.any(w == YES):
        raise ValueError("the completion needs both tables valued in {No, Bot}")
    delta = np.where((u == NO) | (w == NO), NO, BOT).astype(np.int8)
    ok, wit = is_bimorphism(ctx.A, ctx.B, delta)
    high = A.join2(ctx.star_a[alpha], ctx.star_a[alpha2])
    if high is None:
        raise ValueError("the two starred states need a join")
    low = A.meet2(alpha, high)
    vals = (Det(int(delta[low, beta])), Det(int(delta[alpha, beta])), Det(int(delta[high, beta])))
    return DeltaFailure(delta, ok, wit, (low, alpha, high), vals)
