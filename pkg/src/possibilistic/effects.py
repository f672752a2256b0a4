"""Effects of a space of states and the Chu evaluation pairing."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .determination import BOT, NO, YES, Det, det_bar, det_leq, det_meet
from .space import StateSpace, quasi_antipodal, space_from_leq


class Effect(NamedTuple):
    """Certainty states for the two outcomes; None means never certain."""

    yes: int | None
    no: int | None


class ValuationError(ValueError):
    def __init__(self, kind: str, witness: tuple, message: str = ""):
        super().__init__(message or f"{kind}: {witness}")
        self.kind = kind
        self.witness = witness


class NotMonotone(ValuationError):
    def __init__(self, witness: tuple):
        super().__init__("NotMonotone", witness)


class NotMeetPreserving(ValuationError):
    def __init__(self, witness: tuple):
        super().__init__("NotMeetPreserving", witness)


def y_effect(space: StateSpace) -> Effect:
    return Effect(space.bottom, None)


BOTTOM_EFFECT = Effect(None, None)


def effect_eval(space: StateSpace, effect: Effect, state: int) -> Det:
    if effect.yes is not None and space.leq(effect.yes, state):
        return YES
    if effect.no is not None and space.leq(effect.no, state):
        return NO
    return BOT


def effect_bar(effect: Effect) -> Effect:
    return Effect(effect.no, effect.yes)


def effect_state(effect: Effect) -> int | None:
    """The least state on which the effect is certainly yes, if any."""
    return effect.yes


def _side_join(space: StateSpace, sides: list[int | None]) -> int | None:
    if any(s is None for s in sides):
        return None
    return space.bounded_join(sides)  # type: ignore[arg-type]


def effect_meet(space: StateSpace, effects: Iterable[Effect]) -> Effect:
    effects = list(effects)
    if not effects:
        raise ValueError("effect meet of an empty set")
    return Effect(
        _side_join(space, [e.yes for e in effects]),
        _side_join(space, [e.no for e in effects]),
    )


def effect_leq(space: StateSpace, e1: Effect, e2: Effect) -> bool:
    """Pointwise order: the certainty filters of ``e1`` sit inside those of ``e2``."""
    for a, b in ((e1.yes, e2.yes), (e1.no, e2.no)):
        if a is None:
            continue
        if b is None or not space.leq(b, a):
            return False
    return True


def effect_label(space: StateSpace, effect: Effect) -> str:
    def side(s: int | None) -> str:
        return "." if s is None else space.label(s)

    return f"l({side(effect.yes)},{side(effect.no)})"


class EffectSpace:
    """All effects of a space, with their evaluation table."""

    def __init__(self, base: StateSpace):
        self.base = base
        n = base.n
        effects = [BOTTOM_EFFECT]
        effects += [Effect(s, None) for s in range(n)]
        effects += [Effect(None, s) for s in range(n)]
        effects += [
            Effect(s, t) for s in range(n) for t in range(n) if not base.widehat((s, t))
        ]
        self.effects: tuple[Effect, ...] = tuple(effects)
        self._index = {e: i for i, e in enumerate(self.effects)}
        table = np.zeros((len(effects), n), dtype=np.int8)
        for i, e in enumerate(effects):
            for s in range(n):
                table[i, s] = effect_eval(base, e, s)
        self.table = table
        rows = {table[i].tobytes() for i in range(len(effects))}
        if len(rows) != len(effects):
            raise AssertionError("effect enumeration is not extensional")

    def __len__(self) -> int:
        return len(self.effects)

    def __iter__(self):
        return iter(self.effects)

    def index(self, effect: Effect) -> int:
        return self._index[effect]

    def eval(self, effect: Effect, state: int) -> Det:
        return Det(int(self.table[self._index[effect], state]))

    def label(self, effect: Effect) -> str:
        return effect_label(self.base, effect)

    @property
    def top_yes(self) -> Effect:
        return y_effect(self.base)

    def leq(self, e1: Effect, e2: Effect) -> bool:
        return effect_leq(self.base, e1, e2)

    def meet(self, effects: Iterable[Effect]) -> Effect:
        return effect_meet(self.base, effects)

    @cached_property
    def as_space(self) -> StateSpace:
        """The effects ordered pointwise, packaged as a space of states."""
        labels = [self.label(e) for e in self.effects]
        m = len(self.effects)
        leq = np.zeros((m, m), dtype=bool)
        for i, e in enumerate(self.effects):
            for j, f in enumerate(self.effects):
                leq[i, j] = self.leq(e, f)
        return space_from_leq(labels, leq, name=f"E({self.base.name})")

    def effect_of(self, element: int) -> Effect:
        """Effect behind a handle of :attr:`as_space`."""
        return self._by_label[self.as_space.label(element)]

    def element_of(self, effect: Effect) -> int:
        return self.as_space.index(self.label(effect))

    @cached_property
    def _by_label(self) -> dict[str, Effect]:
        return {self.label(e): e for e in self.effects}

    def pure_effects(self) -> list[Effect]:
        return [self.effect_of(x) for x in self.as_space.pure]

    def atom_effects(self) -> list[Effect]:
        return [self.effect_of(x) for x in self.as_space.atoms]


def build_effects(space: StateSpace) -> EffectSpace:
    return EffectSpace(space)


def max_effects(space: StateSpace) -> list[Effect]:
    """Maximal effects: quasi-antipodal pairs plus the two trivial effects."""
    out = [
        Effect(s, t)
        for s in space
        for t in space
        if quasi_antipodal(space, s, t)
    ]
    out += [y_effect(space), effect_bar(y_effect(space))]
    return sorted(out, key=effect_key)


def atom_effects_formula(space: StateSpace) -> list[Effect]:
    out = [Effect(s, None) for s in space.pure] + [Effect(None, s) for s in space.pure]
    return sorted(out, key=effect_key)


def effect_key(e: Effect) -> tuple:
    return (-1 if e.yes is None else e.yes, -1 if e.no is None else e.no)


def _check_valuation(space: StateSpace, value: Mapping[int, Det] | Sequence[Det]) -> None:
    for x in space:
        for y in space:
            if space.leq(x, y) and not det_leq(value[x], value[y]):
                raise NotMonotone((x, y))
    for x in space:
        for y in space:
            if value[space.meet2(x, y)] != det_meet([value[x], value[y]]):
                raise NotMeetPreserving((x, y))


def effect_from_valuation(space: StateSpace, value: Mapping[int, Det] | Sequence[Det]) -> Effect:
    """The unique effect whose evaluation is ``value`` (a monotone meet-preserving map)."""
    _check_valuation(space, value)
    yes = [x for x in space if value[x] == YES]
    no = [x for x in space if value[x] == NO]
    effect = Effect(space.meet(yes) if yes else None, space.meet(no) if no else None)
    for x in space:
        if effect_eval(space, effect, x) != value[x]:
            raise ValuationError("NotRealized", (x,))
    return effect


def state_from_valuation(
    space: StateSpace, effects: EffectSpace, value: Mapping[Effect, Det]
) -> int:
    """The unique state whose column of evaluations is ``value``."""
    es = effects.effects
    if value[effects.top_yes] != YES:
        raise ValuationError("NotUnital", (effects.top_yes,))
    for e in es:
        if value[effect_bar(e)] != det_bar(value[e]):
            raise ValuationError("NotBarCompatible", (e,))
    for e in es:
        for f in es:
            if effects.leq(e, f) and not det_leq(value[e], value[f]):
                raise NotMonotone((e, f))
            if value[effect_meet(space, (e, f))] != det_meet([value[e], value[f]]):
                raise NotMeetPreserving((e, f))
    sure = [e for e in es if value[e] == YES]
    state = effect_meet(space, sure).yes
    if state is None:
        raise ValuationError("NotRealized", ())
    for e in es:
        if effect_eval(space, e, state) != value[e]:
            raise ValuationError("NotRealized", (e,))
    return state


def check_effect_meets(effects: EffectSpace) -> tuple[bool, tuple[Effect, Effect] | None]:
    """A3 on binary meets: the meet effect evaluates as the meet of the two evaluations."""
    effs = list(effects)
    t = effects.table
    for i, e in enumerate(effs):
        for j in range(i + 1, len(effs)):
            k = effects.index(effects.meet((e, effs[j])))
            if not np.array_equal(t[k], np.where(t[i] == t[j], t[i], BOT)):
                return False, (e, effs[j])
    return True, None


def check_axioms(space: StateSpace):
    """State axioms A1, A2, A4, A5 plus A3 on the enumerated effects."""
    from .space import Verdict, check_state_axioms

    report = check_state_axioms(space)
    ok, _ = check_effect_meets(build_effects(space))
    report.verdicts["A3"] = Verdict(ok, None, "" if ok else "an effect meet is not evaluated pointwise")
    report.verdicts = {k: report.verdicts[k] for k in sorted(report.verdicts)}
    return report
