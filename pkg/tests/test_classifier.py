import itertools
from math import gcd

import pytest

from monodromy.classifier import (MARKOV_FIGURE, PAPER, NORMAL_FORM_PAIRS,
                                  REFLECT, SHIFT, THREE_POINT_TARGET,
                                  TWO_POINT_CONJ_ACTION, TWO_POINT_TARGET,
                                  ClassificationMismatch, check_threepoint_solution,
                                  classify_twopoint, corner_monodromy,
                                  cyclic_realization, enumerate_threepoint,
                                  enumerate_twopoint, markov_symmetry_realizations,
                                  orbit_representative, parametric_pairs,
                                  reflection_realization, scan_pairs, scan_triples,
                                  threepoint_factorization, twopoint_factorization,
                                  vieta_realization)
from monodromy.diophantine import HYPERBOLA_ISOMETRY
from monodromy.factorization import product
from monodromy.sl2z import Mat2, ParabolicParams, mat_inv, mat_pow

import oracles


def _box_params(box):
    return [(e, c, d) for e, c, d in itertools.product((1, -1), range(-box, box + 1), range(0, box + 1))
            if gcd(c, d) == 1 and (d > 0 or c > 0)]


def test_corner_examples():
    assert corner_monodromy(7) == Mat2(-7, -1, 1, 0)
    assert corner_monodromy(0) == Mat2(0, -1, 1, 0)
    assert corner_monodromy(-2) == Mat2(2, -1, 1, 0)
    for k in range(-20, 21):
        assert corner_monodromy(k).trace == -k


def test_scan_pairs_matches_naive_oracle():
    box = 5
    target = oracles.rows(TWO_POINT_TARGET)
    ps = _box_params(box)
    naive = sorted((p, q) for p in ps for q in ps
                   if oracles.mul(oracles.parabolic(*q), oracles.parabolic(*p)) == target)
    got = [((a.eps, a.c, a.d), (b.eps, b.c, b.d)) for a, b in scan_pairs(TWO_POINT_TARGET, box)]
    assert got == naive and got


def test_scan_triples_matches_naive_oracle():
    box = 3
    target = oracles.rows(THREE_POINT_TARGET)
    mats = [(p, oracles.parabolic(*p)) for p in _box_params(box)]
    naive = []
    for (p1, m1), (p2, m2) in itertools.product(mats, repeat=2):
        x = oracles.mul(m2, m1)
        for p3, m3 in mats:
            if p1[0] == p2[0] == p3[0] and oracles.mul(m3, x) == target:
                naive.append((p1, p2, p3))
    got = []
    for eps in (1, -1):
        got += [tuple((p.eps, p.c, p.d) for p in t)
                for t in scan_triples(THREE_POINT_TARGET, box, eps, eps, eps, workers=1)]
    assert sorted(got) == sorted(naive) and got


def test_enumerate_twopoint_bound_30():
    res = enumerate_twopoint(30, coprime_bound=1000)
    assert res.ok, res.checks
    assert res.solutions["eps+1"] == parametric_pairs(30)
    assert res.solutions["eps-1"] == [] and res.solutions["mixed"] == []
    pair = (ParabolicParams(1, 2, 1), ParabolicParams(1, 1, 2))
    assert pair in res.solutions["eps+1"]


def test_enumerate_twopoint_bound_1():
    res = enumerate_twopoint(1, coprime_bound=10)
    assert res.ok
    assert res.solutions["eps+1"] == []


def test_enumerate_rejects_bad_bound():
    with pytest.raises(ValueError):
        enumerate_twopoint(0)


def test_normal_form_pairs():
    for d, (m1, m2) in NORMAL_FORM_PAIRS.items():
        assert twopoint_factorization(d).factors == (m1, m2)
        assert product((m1, m2)) == TWO_POINT_TARGET


def test_classify_twopoint_bound_30():
    res = classify_twopoint(30)
    assert res.ok
    assert [r for r, _ in res.representatives] == [(1, 1), (1, 2)]
    assert res.representatives[1][1] == NORMAL_FORM_PAIRS[(1, 2)]


def test_conj_action_identity():
    P, Z = TWO_POINT_CONJ_ACTION, HYPERBOLA_ISOMETRY
    assert P.apply((1, 2)) == (-2, -1)
    assert mat_pow(P, 3) == -(Z @ Z)


def test_orbit_representative_invariant():
    P = TWO_POINT_CONJ_ACTION
    for v in [(1, 1), (1, 2), (2, 1), (-3, -1)]:
        r = orbit_representative(v)
        w = v
        for _ in range(6):
            w = P.apply(w)
            assert orbit_representative(w) == r
            assert orbit_representative((-w[0], -w[1])) == r


def test_orbit_reps_stable_across_bounds():
    small = classify_twopoint(30)
    large = classify_twopoint(100)
    assert [r for r, _ in small.representatives] == [r for r, _ in large.representatives]


def test_classify_mismatch_raises():
    # with Z in place of P the orbits are finer than the claim allows
    with pytest.raises(ClassificationMismatch):
        classify_twopoint(30, action=HYPERBOLA_ISOMETRY)


def test_threepoint_bound_5():
    res = enumerate_threepoint(5, workers=1)
    assert res.ok, res.checks
    factors = {tuple(t) for t in res.solutions["eps+1"]}
    want = tuple(ParabolicParams(1, c, d) for c, d in ((3, 1), (0, 1), (-3, 1)))
    assert want in factors
    f = threepoint_factorization((1, 1, 1))
    assert f.factors == (Mat2(4, 1, -9, -2), Mat2(1, 1, 0, 1), Mat2(-2, 1, -9, 4))
    assert res.solutions["eps-1"] == []
    assert res.solutions["mixed"] == []


def test_threepoint_small_bounds():
    assert enumerate_threepoint(1, workers=1).solutions["eps+1"] == []
    assert enumerate_threepoint(3, workers=1).solutions["eps+1"] != []


def test_threepoint_worker_determinism():
    one = scan_triples(THREE_POINT_TARGET, 8, 1, 1, 1, workers=1)
    three = scan_triples(THREE_POINT_TARGET, 8, 1, 1, 1, workers=3)
    assert one == three


def test_check_threepoint_solution_rejects():
    good = threepoint_factorization((1, 2, 5)).params
    assert check_threepoint_solution(good)
    bad = (good[0], good[1], ParabolicParams(1, good[2].c + 1, good[2].d))
    assert not check_threepoint_solution(bad)


def test_symmetry_examples():
    f = threepoint_factorization((1, 1, 2))
    assert [p.d for p in cyclic_realization(f).params] == [2, 1, 1]
    assert [p.d for p in reflection_realization(f).params] == [2, 1, 1]
    assert [p.d for p in vieta_realization(f).params] == [1, 5, 2]
    g = threepoint_factorization((1, 2, 5))
    assert [p.d for p in vieta_realization(g).params] == [1, 13, 5]
    for h in (cyclic_realization(g), reflection_realization(g), vieta_realization(g)):
        assert product(h.factors) == THREE_POINT_TARGET


def test_reflection_flips_c():
    f = threepoint_factorization((1, 2, 5))
    r = reflection_realization(f)
    assert [(p.eps, p.c, p.d) for p in r.params] == \
        [(p.eps, -p.c, p.d) for p in reversed(f.params)]


def test_symmetry_realizations_depth_3():
    res = markov_symmetry_realizations(3)
    assert res.ok and res.notes["triples"] == len(MARKOV_FIGURE) - 4


def test_shift_and_reflect_constants():
    M = THREE_POINT_TARGET
    assert SHIFT @ M == M @ SHIFT
    assert mat_inv(REFLECT) @ M @ REFLECT == mat_inv(M)
    assert PAPER.M3pt == M and PAPER.M2pt == TWO_POINT_TARGET
