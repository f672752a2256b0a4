"""Channels and symmetries as Chu morphisms between spaces of states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .effects import Effect, EffectSpace, build_effects, effect_bar, effect_meet, y_effect
from .space import StateSpace, check_state_axioms


class ChannelError(ValueError):
    pass


@dataclass
class ChuMap:
    """A state map ``f12`` with its dual effect map ``f21`` (target effects to source effects)."""

    source: StateSpace
    target: StateSpace
    f12: tuple[int, ...]
    f21: dict[Effect, Effect]
    source_effects: EffectSpace
    target_effects: EffectSpace

    def __call__(self, state: int) -> int:
        return self.f12[state]

    @property
    def bijective(self) -> bool:
        return self.source.n == self.target.n and len(set(self.f12)) == self.target.n

    def state_labels(self) -> dict[str, str]:
        return {self.source.label(x): self.target.label(y) for x, y in enumerate(self.f12)}


@dataclass
class SymmetryReport:
    laws: dict[str, tuple[bool, tuple]] = field(default_factory=dict)
    bijective: bool = False

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.laws.values())

    def failures(self) -> list[str]:
        return [k for k, (ok, _) in self.laws.items() if not ok]


def _first_meet_violation(space1: StateSpace, space2: StateSpace, f12: Sequence[int]) -> tuple | None:
    for x in space1:
        for y in space1:
            if f12[space1.meet2(x, y)] != space2.meet2(f12[x], f12[y]):
                return (x, y)
    return None


def derive_effect_map(space1: StateSpace, space2: StateSpace, f12: Sequence[int]) -> dict[Effect, Effect]:
    """Pull each certainty filter of a target effect back through ``f12``."""
    bad = _first_meet_violation(space1, space2, f12)
    if bad is not None:
        raise ChannelError(f"NotMeetPreserving at {[space1.label(x) for x in bad]}")

    def pull(side: int | None) -> int | None:
        if side is None:
            return None
        pre = [x for x in space1 if space2.leq(side, f12[x])]
        return space1.meet(pre) if pre else None

    return {e: Effect(pull(e.yes), pull(e.no)) for e in build_effects(space2)}


def chu_map(space1: StateSpace, space2: StateSpace, f12: Sequence[int] | Mapping[int, int]) -> ChuMap:
    table = tuple(f12[x] for x in space1)
    return ChuMap(
        space1, space2, table, derive_effect_map(space1, space2, table),
        build_effects(space1), build_effects(space2),
    )


def chu_map_from_labels(space1: StateSpace, space2: StateSpace, table: Mapping[str, str]) -> ChuMap:
    missing = [lab for lab in space1.labels if lab not in table]
    if missing:
        raise ChannelError(f"map is not total: missing {missing}")
    return chu_map(space1, space2, [space2.index(table[lab]) for lab in space1.labels])


def duality_violation(m: ChuMap) -> tuple | None:
    e1, e2 = m.source_effects, m.target_effects
    for l2 in e2:
        l1 = m.f21[l2]
        for s in m.source:
            if e2.eval(l2, m.f12[s]) != e1.eval(l1, s):
                return (s, l2)
    return None


def verify_symmetry(m: ChuMap) -> SymmetryReport:
    """Check every law a channel must satisfy, exhaustively."""
    s1, s2 = m.source, m.target
    rep = SymmetryReport(bijective=m.bijective)
    f = m.f12
    rep.laws["duality"] = _verdict(duality_violation(m))
    rep.laws["f12cap"] = _verdict(_first_meet_violation(s1, s2, f))
    chain = next(
        ((x, y) for x in s1 for y in s1 if s1.leq(x, y) and s2.join2(f[x], f[y]) != f[y]),
        None,
    )
    rep.laws["f12cupchain"] = _verdict(chain)
    effs = list(m.target_effects)
    src = m.source_effects
    cap = next(
        (
            (a, b)
            for a in effs
            for b in effs
            if m.f21[effect_meet(s2, (a, b))] != effect_meet(s1, (m.f21[a], m.f21[b]))
        ),
        None,
    )
    rep.laws["f21cap"] = _verdict(cap)
    cup = next(
        (
            (a, b)
            for a in effs
            for b in effs
            if m.target_effects.leq(a, b) and not src.leq(m.f21[a], m.f21[b])
        ),
        None,
    )
    rep.laws["f21cupchain"] = _verdict(cup)
    bar = next((a for a in effs if m.f21[effect_bar(a)] != effect_bar(m.f21[a])), None)
    rep.laws["f21bar"] = _verdict(None if bar is None else (bar,))
    rep.laws["f21Y"] = _verdict(
        None if m.f21[y_effect(s2)] == y_effect(s1) else (y_effect(s2),)
    )
    if m.bijective:
        image_pure = {f[p] for p in s1.pure}
        rep.laws["pure_transport"] = (image_pure == set(s2.pure), ())
        image_max = {f[p] for p in s1.maximal()}
        rep.laws["max_transport"] = (image_max == set(s2.maximal()), ())
        rep.laws["axiom_transport"] = (
            check_state_axioms(s1).passed == check_state_axioms(s2).passed, ()
        )
    return rep


def _verdict(witness: tuple | None) -> tuple[bool, tuple]:
    return (witness is None, () if witness is None else tuple(witness))


def compose(m_ab: ChuMap, m_bc: ChuMap) -> ChuMap:
    """``m_bc`` after ``m_ab``; the effect side composes contravariantly."""
    if m_ab.target is not m_bc.source and m_ab.target.labels != m_bc.source.labels:
        raise ChannelError("codomain of the first map is not the domain of the second")
    f12 = tuple(m_bc.f12[m_ab.f12[x]] for x in m_ab.source)
    f21 = {e: m_ab.f21[m_bc.f21[e]] for e in m_bc.target_effects}
    return ChuMap(m_ab.source, m_bc.target, f12, f21, m_ab.source_effects, m_bc.target_effects)


def meet_channels(m1: ChuMap, m2: ChuMap) -> ChuMap:
    """Pointwise infimum of two parallel channels."""
    if m1.source.labels != m2.source.labels or m1.target.labels != m2.target.labels:
        raise ChannelError("channels are not parallel")
    t = m1.target
    f12 = tuple(t.meet2(a, b) for a, b in zip(m1.f12, m2.f12))
    f21 = {e: effect_meet(m1.source, (m1.f21[e], m2.f21[e])) for e in m1.target_effects}
    return ChuMap(m1.source, t, f12, f21, m1.source_effects, m1.target_effects)


def identity(space: StateSpace) -> ChuMap:
    return chu_map(space, space, list(space))


def respects_star(f12: Sequence[int], star1: Mapping[int, int], star2: Mapping[int, int]) -> bool:
    return all(f12[star1[x]] == star2[f12[x]] for x in star1)


def tensor_symmetries(f: ChuMap, g: ChuMap, kind: str = "basic", max_pairs: int = 25):
    """The product map on enumerated basic tensors, with its product-effect duality checked.

    Returns ``(map, source_enumeration, target_enumeration)``.
    """
    from .determination import det_meet
    from .tensor_basic import enumerate_tensor

    if kind != "basic":
        raise ChannelError(f"unsupported tensor kind {kind!r}")
    if not (verify_symmetry(f).passed and verify_symmetry(g).passed):
        raise ChannelError("factor maps are not verified channels")
    src = enumerate_tensor(f.source, g.source, max_pairs=max_pairs)
    dst = enumerate_tensor(f.target, g.target, max_pairs=max_pairs)
    table = [0] * src.space.n
    for elem in src.elements:
        image = [(f.f12[a], g.f12[b]) for a, b in elem.generators]
        table[src.space_index(elem)] = dst.class_of(image)
    m = chu_map(src.space, dst.space, table)
    sctx, dctx = src.context, dst.context
    for lb_t in g.target_effects:
        for la_t in f.target_effects:
            la_s, lb_s = f.f21[la_t], g.f21[lb_t]
            for elem in src.elements:
                image = [(f.f12[a], g.f12[b]) for a, b in elem.generators]
                if dctx.nu_eval(image, la_t, lb_t) != sctx.nu_eval(elem.generators, la_s, lb_s):
                    raise ChannelError(f"product duality fails at {sctx.label(elem)}")
    return m, src, dst
