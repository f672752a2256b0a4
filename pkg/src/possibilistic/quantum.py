"""Finite families of subspaces of a Gaussian-rational inner-product space, as spaces of states.

Larger subspaces carry less information: the order is reverse inclusion, the
meet is the sum, the bottom is the whole space and rays are the pure states.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .determination import BOT, NO, YES, Det
from .space import StateSpace, space_from_leq


class DimensionMismatch(ValueError):
    pass


class NotOrthogonal(ValueError):
    pass


class FragmentTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value: "GaussianRational | int | Fraction | str") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(Fraction(value))

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Accepts ``"re"``, ``"re+im i"``, ``"im i"`` with rational parts like ``-1/2``."""
        t = text.replace(" ", "")
        num = r"[+-]?\d+(?:/\d+)?"
        try:
            if re.fullmatch(num, t):
                return cls(Fraction(t))
            m = re.fullmatch(rf"({num})?([+-]?(?:\d+(?:/\d+)?)?)i", t)
            if not m or (m.group(1) and m.group(2) and m.group(2)[0] not in "+-"):
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a Gaussian rational: {text!r}") from None
        re_text, im_text = m.group(1), m.group(2)
        if re_text and not im_text:
            # "2/3i" is a pure imaginary coefficient
            re_text, im_text = None, re_text
        re_part = Fraction(re_text) if re_text else Fraction(0)
        if im_text in ("", "+"):
            im_part = Fraction(1)
        elif im_text == "-":
            im_part = Fraction(-1)
        else:
            im_part = Fraction(im_text)
        return cls(re_part, im_part)

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * o.conj()
        return GaussianRational(p.re / n, p.im / n)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = "" if self.im == 1 else "-" if self.im == -1 else str(self.im)
        if not self.re:
            return f"{im}i"
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im}i"


ZERO = GaussianRational()
ONE = GaussianRational(1)
Vector = tuple[GaussianRational, ...]


def vector(entries: Iterable) -> Vector:
    return tuple(GaussianRational.of(x) for x in entries)


def inner(x: Vector, y: Vector) -> GaussianRational:
    """Conjugate-linear in the first argument."""
    total = ZERO
    for a, b in zip(x, y):
        total = total + a.conj() * b
    return total


def _rref(rows: Sequence[Vector], dim: int) -> tuple[Vector, ...]:
    m = [list(r) for r in rows if any(r)]
    out: list[list[GaussianRational]] = []
    col = 0
    for col in range(dim):
        piv = next((i for i, r in enumerate(m) if r[col]), None)
        if piv is None:
            continue
        row = m.pop(piv)
        lead = row[col]
        row = [x / lead for x in row]
        for r in m + out:
            if r[col]:
                f = r[col]
                for k in range(dim):
                    r[k] = r[k] - f * row[k]
        out.append(row)
        m = [r for r in m if any(r)]
    out.sort(key=lambda r: next(k for k, x in enumerate(r) if x))
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class Subspace:
    dim: int
    rows: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Iterable], dim: int | None = None) -> "Subspace":
        vs = [vector(v) for v in vectors]
        if dim is None:
            if not vs:
                raise ValueError("dimension needed for an empty span")
            dim = len(vs[0])
        if any(len(v) != dim for v in vs):
            raise DimensionMismatch(f"vectors must have {dim} entries")
        return cls(dim, _rref(vs, dim))

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls.span([[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)], dim)

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        return cls(dim, ())

    @property
    def rank(self) -> int:
        return len(self.rows)

    def label(self) -> str:
        if self.rank == self.dim:
            return "H"
        if self.rank == 0:
            return "0"
        return "span(" + ";".join(",".join(str(x) for x in r) for r in self.rows) + ")"


def _same_dim(g1: Subspace, g2: Subspace) -> None:
    if g1.dim != g2.dim:
        raise DimensionMismatch(f"ambient dimensions {g1.dim} and {g2.dim} differ")


def subspace_sum(g1: Subspace, g2: Subspace) -> Subspace:
    _same_dim(g1, g2)
    return Subspace(g1.dim, _rref(g1.rows + g2.rows, g1.dim))


def subspace_perp(g: Subspace) -> Subspace:
    """Vectors orthogonal to every row, read off the reduced conjugate system."""
    n = g.dim
    system = _rref([tuple(x.conj() for x in r) for r in g.rows], n)
    pivots = [next(k for k, x in enumerate(r) if x) for r in system]
    free = [k for k in range(n) if k not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, p in zip(system, pivots):
            v[p] = -r[f]
        basis.append(tuple(v))
    return Subspace(n, _rref(basis, n))


def subspace_intersect(g1: Subspace, g2: Subspace) -> Subspace:
    _same_dim(g1, g2)
    return subspace_perp(subspace_sum(subspace_perp(g1), subspace_perp(g2)))


def subspace_contains(g1: Subspace, g2: Subspace) -> bool:
    """Does ``g1`` contain ``g2``?"""
    _same_dim(g1, g2)
    return subspace_sum(g1, g2) == g1


def orthogonal(g1: Subspace, g2: Subspace) -> bool:
    _same_dim(g1, g2)
    return all(not inner(x, y) for x in g1.rows for y in g2.rows)


def quantum_effect_eval(g_yes: Subspace, g_no: Subspace, g: Subspace) -> Det:
    if not orthogonal(g_yes, g_no):
        raise NotOrthogonal(f"{g_yes.label()} is not orthogonal to {g_no.label()}")
    _same_dim(g_yes, g)
    if g.rank and subspace_contains(g_yes, g):
        return YES
    if g.rank and subspace_contains(g_no, g):
        return NO
    return BOT


@dataclass
class Fragment:
    space: StateSpace
    subspaces: dict[int, Subspace]
    star: dict[int, int] | None

    def index_of(self, g: Subspace) -> int | None:
        for i, h in self.subspaces.items():
            if h == g:
                return i
        return None


def fragment_closure(
    generators: Sequence[Subspace],
    names: Sequence[str] | None = None,
    cap: int | None = None,
    name: str = "Q",
) -> Fragment:
    """Close under pairwise sums, add the whole space as bottom, and package as a space of states."""
    if not generators:
        raise ValueError("at least one generator is needed")
    dim = generators[0].dim
    for g in generators:
        _same_dim(generators[0], g)
    cap = cap if cap is not None else 1 << len(generators)
    found: list[Subspace] = []
    for g in generators:
        if g.rank and g not in found:
            found.append(g)
    work = list(found)
    while work:
        g = work.pop()
        for h in list(found):
            s = subspace_sum(g, h)
            if s not in found:
                found.append(s)
                work.append(s)
                if len(found) > cap:
                    raise FragmentTooLarge(f"closure exceeds {cap} subspaces")
    full = Subspace.full(dim)
    if full not in found:
        found.append(full)
    given = dict(zip(generators, names)) if names else {}
    labels = [given.get(g, g.label()) for g in found]
    n = len(found)
    leq = np.array(
        [[subspace_contains(found[i], found[j]) for j in range(n)] for i in range(n)], dtype=bool
    )
    space = space_from_leq(labels, leq, name=name)
    subs = {space.index(lab): g for lab, g in zip(labels, found)}
    star: dict[int, int] | None = {}
    by_sub = {g: i for i, g in subs.items()}
    for i, g in subs.items():
        if i == space.bottom:
            continue
        p = subspace_perp(g)
        if p not in by_sub:
            star = None
            break
        star[i] = by_sub[p]
    return Fragment(space, subs, star)


def parse_rays(rays: Sequence[Sequence], dim: int | None = None) -> list[Subspace]:
    return [Subspace.span([r], dim) for r in rays]
