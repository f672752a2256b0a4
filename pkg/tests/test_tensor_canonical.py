import random
from itertools import combinations, product

import pytest

import oracles
from possibilistic.tensor_basic import BasicTensor, enumerate_tensor
from possibilistic.tensor_canonical import (
    ImplicationViolated,
    alpha_of_filter,
    bifilter_closure,
    compare_with_basic,
    fraser_leq,
    is_bifilter,
)


def gen_sets(A, B, max_size):
    pairs = list(product(range(A.n), range(B.n)))
    for k in range(1, max_size + 1):
        yield from combinations(pairs, k)


@pytest.mark.parametrize("left,right", [("f2", "f3"), ("f3", "f3")])
def test_closure_matches_naive_fixpoint(fx, left, right):
    A, B = fx[left][0], fx[right][0]
    for u in gen_sets(A, B, 2):
        c = bifilter_closure(A, B, u)
        assert c == oracles.naive_bifilter_closure(A, B, u)
        assert is_bifilter(A, B, c)


def test_canonical_order_implies_basic(fx):
    A = fx["f3"][0]
    ctx = BasicTensor(A, A)
    rng = random.Random(7)
    sets = list(gen_sets(A, A, 2)) + [tuple(rng.sample(ctx.pairs, 3)) for _ in range(300)]
    strict = 0
    for u in sets:
        closure = bifilter_closure(A, A, u)
        canon = ctx.canonical(u)
        assert closure <= canon
        strict += closure != canon
    assert strict > 0


@pytest.mark.parametrize("left,right", [("f2", "f2"), ("f2", "f3"), ("f3", "f2"), ("f2", "s4")])
def test_orders_coincide_with_a_two_level_factor(fx, left, right):
    A, B = fx[left][0], fx[right][0]
    ctx = BasicTensor(A, B)
    for u in gen_sets(A, B, 3):
        assert bifilter_closure(A, B, u) == ctx.canonical(u)


def test_f3_diagonal_separates_the_orders(fx):
    f3 = fx["f3"][0]
    diag = [(s, s) for s in f3.atoms]
    cmp = compare_with_basic(f3, f3, diag, (0, 0))
    assert cmp.to_dict() == {"fraser": False, "basic": True}
    assert not fraser_leq(f3, f3, diag, (0, 0))


def test_implication_guard(fx, monkeypatch):
    import possibilistic.tensor_canonical as tc

    f2 = fx["f2"][0]
    monkeypatch.setattr(tc, "fraser_leq", lambda *a: True)
    with pytest.raises(ImplicationViolated):
        compare_with_basic(f2, f2, [(1, 1)], (2, 2))


def test_principal_filters_are_bifilters(fx):
    f3 = fx["f3"][0]
    enum = enumerate_tensor(f3, f3)
    for x in enum.space:
        assert is_bifilter(f3, f3, alpha_of_filter(enum, x))
