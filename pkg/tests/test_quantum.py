from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from possibilistic.determination import BOT, NO, YES
from possibilistic.effects import Effect, effect_eval
from possibilistic.io import load_rays_fixture
from possibilistic.quantum import (
    DimensionMismatch,
    GaussianRational,
    NotOrthogonal,
    Subspace,
    fragment_closure,
    inner,
    parse_rays,
    quantum_effect_eval,
    subspace_contains,
    subspace_intersect,
    subspace_perp,
    subspace_sum,
    vector,
)
from possibilistic.space import find_isomorphism

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gauss = st.builds(GaussianRational, fracs, fracs)
vectors3 = st.lists(gauss, min_size=3, max_size=3)


@pytest.mark.parametrize(
    "text,re,im",
    [("1", 1, 0), ("-1/2", Fraction(-1, 2), 0), ("1+2i", 1, 2), ("3-i", 3, -1), ("i", 0, 1),
     ("-i", 0, -1), ("2/3i", 0, Fraction(2, 3)), ("1/2-3/4i", Fraction(1, 2), Fraction(-3, 4))],
)
def test_parse(text, re, im):
    g = GaussianRational.parse(text)
    assert (g.re, g.im) == (re, im)
    assert GaussianRational.parse(str(g)) == g


@pytest.mark.parametrize("text", ["-i+1", "x", "", "1/0"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        GaussianRational.parse(text)


@given(gauss, gauss, gauss)
def test_field_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).norm2() == x.norm2() * y.norm2()
    assert GaussianRational.parse(str(x)) == x
    if y:
        assert (x / y) * y == x


@given(vectors3, vectors3)
def test_inner_product_is_conjugate_symmetric(x, y):
    assert inner(x, y) == inner(y, x).conj()


@given(st.lists(vectors3, min_size=1, max_size=3), st.lists(vectors3, min_size=1, max_size=3))
def test_dimension_formula_and_perp(us, vs):
    g, h = Subspace.span(us, 3), Subspace.span(vs, 3)
    assert subspace_sum(g, h).rank + subspace_intersect(g, h).rank == g.rank + h.rank
    p = subspace_perp(g)
    assert p.rank == 3 - g.rank
    assert subspace_perp(p) == g
    assert all(not inner(a, b) for a in g.rows for b in p.rows)
    assert subspace_contains(subspace_sum(g, h), g)


def test_perp_of_diagonal():
    d = Subspace.span([["1", "1"]])
    assert subspace_perp(d) == Subspace.span([["1", "-1"]])
    c = Subspace.span([["1", "i"]])
    assert subspace_perp(c) == Subspace.span([["1", "-i"]])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        subspace_sum(Subspace.full(2), Subspace.full(3))
    with pytest.raises(DimensionMismatch):
        parse_rays([["1", "0"]], dim=3)


def q4_fragment():
    data = load_rays_fixture()
    return fragment_closure(parse_rays(data["rays"], data["dim"]), names=data["names"], name=data["name"])


def test_q4_fragment_is_s4(fx):
    frag = q4_fragment()
    assert frag.space.labels == ("H", "e1", "e2", "m", "p")
    s4, st4 = fx["s4"]
    assert find_isomorphism(frag.space, s4, frag.star, st4) is not None


def test_fragment_without_perp_closure_has_no_star():
    frag = fragment_closure(parse_rays([["1", "0"], ["0", "1"], ["1", "1"]]))
    assert frag.star is None
    assert frag.space.n == 4


def test_quantum_evaluation_matches_abstract(fx):
    frag = q4_fragment()
    sp, subs = frag.space, frag.subspaces
    s4, st4 = fx["s4"]
    iso = find_isomorphism(sp, s4, frag.star, st4)
    zero = Subspace.zero(2)
    sides = [None] + list(sp)
    checked = 0
    for y in sides:
        for n in sides:
            gy = zero if y is None else subs[y]
            gn = zero if n is None else subs[n]
            if y is not None and n is not None and not all(not inner(a, b) for a in gy.rows for b in gn.rows):
                with pytest.raises(NotOrthogonal):
                    quantum_effect_eval(gy, gn, subs[sp.bottom])
                continue
            if y == sp.bottom and n is not None or n == sp.bottom and y is not None:
                continue
            e = Effect(None if y is None else iso[y], None if n is None else iso[n])
            for s in sp:
                assert quantum_effect_eval(gy, gn, subs[s]) == effect_eval(s4, e, iso[s])
                checked += 1
    assert checked == 15 * 5


def test_exact_arithmetic_only():
    v = vector(["1/3", "2/3"])
    assert all(isinstance(x.re, Fraction) for x in v)
    assert inner(v, v) == GaussianRational(Fraction(5, 9))
    assert quantum_effect_eval(Subspace.span([["1", "0"]]), Subspace.span([["0", "1"]]), Subspace.span([["1", "0"]])) == YES
    assert quantum_effect_eval(Subspace.span([["1", "0"]]), Subspace.span([["0", "1"]]), Subspace.span([["0", "1"]])) == NO
    assert quantum_effect_eval(Subspace.span([["1", "0"]]), Subspace.span([["0", "1"]]), Subspace.full(2)) == BOT
