from itertools import product

import numpy as np
import pytest

import oracles
from possibilistic.bimorphic import (
    NotDeterminedByPure,
    NotPure,
    StarTensor,
    count_maximal,
    delta_completion,
    enumerate_maximal,
    enumerate_star_tensor,
    gamma_scan,
    is_bimorphism,
    mu_embedding,
    phi_gamma,
    phi_pure_tensor,
    star_orthocomplementation_check,
    star_tensor_atoms,
    star_tensor_star,
)
from possibilistic.determination import BOT, NO, YES
from possibilistic.effects import build_effects
from possibilistic.ortho import validate_star
from possibilistic.quantum import fragment_closure, parse_rays
from possibilistic.space import build_space, check_state_axioms
from possibilistic.tensor_basic import enumerate_tensor


@pytest.fixture(scope="module")
def point():
    return build_space(["bot"], [], name="P")


def brute_is_bimorphism(SA, SB, table):
    for x, x2 in product(range(SA.n), repeat=2):
        m = oracles.glb(SA, (x, x2))
        for y in range(SB.n):
            a, b = table[x, y], table[x2, y]
            if table[m, y] != (a if a == b else BOT):
                return False
    for y, y2 in product(range(SB.n), repeat=2):
        m = oracles.glb(SB, (y, y2))
        for x in range(SA.n):
            a, b = table[x, y], table[x, y2]
            if table[x, m] != (a if a == b else BOT):
                return False
    return True


def test_is_bimorphism_matches_brute_force(fx):
    f2 = fx["f2"][0]
    rng = np.random.default_rng(3)
    seen = {True: 0, False: 0}
    for _ in range(400):
        t = rng.integers(0, 3, size=(3, 3)).astype(np.int8)
        t[0, :] = np.where(t[1] == t[2], t[1], BOT)
        if rng.random() < 0.5:
            t[:, 0] = np.where(t[:, 1] == t[:, 2], t[:, 1], BOT)
        ok, witness = is_bimorphism(f2, f2, t)
        assert ok == brute_is_bimorphism(f2, f2, t)
        assert (witness is None) == ok
        seen[ok] += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("name", ["f2", "f3"])
def test_pure_tensor_tables_are_bimorphisms(fx, name):
    sp = fx[name][0]
    E = build_effects(sp)
    for a, b in product(sp, sp):
        assert is_bimorphism(E, E, phi_pure_tensor(E, E, a, b))[0]


def test_gamma_scan_on_f2(fx):
    E = build_effects(fx["f2"][0])
    scan = gamma_scan(E, E)
    assert (scan.total, scan.invalid, scan.valid) == (65536, 65446, 90)
    bad = phi_gamma(E, E, scan.first_invalid)
    assert not bad.valid and bad.witness is not None
    with pytest.raises(ValueError):
        phi_gamma(E, E, np.zeros((4, 4), dtype=np.int8))


def test_counts_against_brute_force(fx, point):
    EP = build_effects(point)
    E2 = build_effects(fx["f2"][0])
    assert count_maximal(EP, EP) == oracles.bimorphism_count(EP.as_space, EP.as_space) == 81
    expect = oracles.bimorphism_count(EP.as_space, E2.as_space)
    assert count_maximal(EP, E2) == count_maximal(E2, EP) == expect == 2601
    tables = enumerate_maximal(EP, E2)
    assert len(tables) == expect
    assert len({t.tobytes() for t in tables}) == expect
    assert all(is_bimorphism(EP, E2, t)[0] for t in tables[::97])


def test_rows_match_brute_force(fx):
    from possibilistic.bimorphic import _restrictions

    E2 = build_effects(fx["f2"][0])
    assert len(_restrictions(E2, 6)) == len(oracles.valuations(E2.as_space)) == 51


def test_maximal_count_on_f2(fx):
    E = build_effects(fx["f2"][0])
    assert count_maximal(E, E) == 1_712_691


def test_effects_not_determined_by_pure_are_refused(fx):
    E = build_effects(fx["chain2"][0])
    assert not check_state_axioms(E.as_space).passed
    with pytest.raises(NotDeterminedByPure):
        count_maximal(E, E)


@pytest.mark.parametrize("left,right", [("f2", "f2"), ("f2", "f3")])
def test_mu_embedding(fx, left, right):
    rep = mu_embedding(enumerate_tensor(fx[left][0], fx[right][0]))
    assert rep.passed


def test_star_tensor_of_s4(fx):
    s4, st = fx["s4"]
    ctx = StarTensor(s4, st, s4, st)
    enum = enumerate_star_tensor(ctx)
    assert enum.space.n == 113
    assert check_state_axioms(enum.space).passed
    rep = validate_star(enum.space, star_tensor_star(enum))
    assert rep.has_star and not rep.orthocomplemented
    atoms = sorted(enum.space_index(a) for a in star_tensor_atoms(ctx))
    assert atoms == sorted(enum.space.atoms)
    with pytest.raises(NotPure):
        ctx.star_generator(s4.bottom, s4.index("a1"))


def test_double_bracket_symmetry(fx):
    s4, st = fx["s4"]
    f2, st2 = fx["f2"]
    ctx = StarTensor(f2, st2, s4, st)
    gens = [ctx.star_generator(a, b) for a, b in ctx.pure_pairs]
    for g in gens:
        for h in gens:
            v = ctx.double_bracket(g, h)
            assert v == ctx.double_bracket(h, g)
            if v == YES:
                assert g == h
        assert ctx.double_bracket(g, g) == YES


@pytest.mark.parametrize("left,right,expected", [("f2", "s4", True), ("f2", "f2", True), ("s4", "s4", False)])
def test_star_orthocomplementation(fx, left, right, expected):
    A, sa = fx[left]
    B, sb = fx[right]
    cert = star_orthocomplementation_check(A, sa, B, sb)
    assert cert.orthocomplemented == expected
    assert cert.report.has_star and not cert.report.inconsistencies
    if not expected:
        w = cert.witness
        assert w["pure"] == ["a1", "a1"] and w["other"] == ["a2", "a2"]
        assert w["underline_of_meet"] == [["a1", "a1"], ["a2", "a2"]]


def test_delta_completion_is_not_a_bimorphism(fx):
    rays = parse_rays([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["1", "1", "0"], ["1", "-1", "0"]])
    frag = fragment_closure(rays, names=["e1", "e2", "e3", "v", "w"])
    q, qs = frag.space, frag.star
    s4, st = fx["s4"]
    ctx = StarTensor(q, qs, s4, st)
    fail = delta_completion(ctx, q.index("e1"), q.index("v"), s4.index("a1"), s4.index("a2"))
    assert not fail.bimorphism
    assert fail.witness[0] == "A"
    low, alpha, high = fail.triple
    assert q.leq(low, alpha) and q.leq(low, high)
    assert fail.values == (BOT, NO, NO)
