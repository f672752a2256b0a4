"""Three-valued determinations: indeterminate, certainly yes, certainly no."""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable


class Det(IntEnum):
    """A possibilistic verdict.

    The order has ``BOT`` below the two incomparable values ``YES`` and ``NO``.
    """

    BOT = 0
    YES = 1
    NO = 2

    def __str__(self) -> str:
        return _TEXT[self]

    @classmethod
    def parse(cls, text: str) -> "Det":
        try:
            return _FROM_TEXT[text]
        except KeyError:
            raise ValueError(f"not a determination: {text!r}") from None


_TEXT = {Det.BOT: "bot", Det.YES: "Y", Det.NO: "N"}
_FROM_TEXT = {v: k for k, v in _TEXT.items()}

BOT, YES, NO = Det.BOT, Det.YES, Det.NO
ALL = (BOT, YES, NO)


def _nonempty(xs: Iterable[Det]) -> list[Det]:
    xs = list(xs)
    if not xs:
        raise ValueError("empty input: n-ary operations need at least one value")
    return xs


def det_meet(xs: Iterable[Det]) -> Det:
    """Greatest lower bound: the common value if all agree, else ``BOT``."""
    xs = _nonempty(xs)
    first = xs[0]
    for x in xs[1:]:
        if x != first:
            return BOT
    return first


def det_bullet(xs: Iterable[Det]) -> Det:
    """Product of independent determinations."""
    xs = _nonempty(xs)
    if NO in xs:
        return NO
    if BOT in xs:
        return BOT
    return YES


def det_bar(x: Det) -> Det:
    """Involution exchanging ``YES`` and ``NO``."""
    if x == YES:
        return NO
    if x == NO:
        return YES
    return BOT


def det_leq(x: Det, y: Det) -> bool:
    return x == BOT or x == y


def det_join(x: Det, y: Det) -> Det | None:
    """Join of two values, defined only when they are comparable."""
    if det_leq(x, y):
        return y
    if det_leq(y, x):
        return x
    return None


def meet2(x: Det, y: Det) -> Det:
    return x if x == y else BOT


def bullet2(x: Det, y: Det) -> Det:
    if x == NO or y == NO:
        return NO
    if x == BOT or y == BOT:
        return BOT
    return YES
