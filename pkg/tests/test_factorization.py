import random

import pytest

from monodromy.factorization import (Factorization, FactorizationError,
                                     apply_moves, canonical_form,
                                     global_conjugate, hurwitz_move,
                                     inverse_hurwitz_move, orbit_explore,
                                     product, same_orbit, shift_step)
from monodromy.sl2z import (IDENTITY, Mat2, ParabolicParams, conjugate,
                            mat_inv)
from monodromy.verify import random_factorization, random_word

import oracles

T = Mat2(1, 1, 0, 1)
A = Mat2(1, 0, 1, 1)
M2PT = Mat2(-7, -1, 1, 0)
M3PT = Mat2(1, 0, 9, 1)
M1_1, M2_1 = Mat2(3, 1, -4, -1), Mat2(3, 4, -1, -1)
M1_2, M2_2 = Mat2(6, 1, -25, -4), Mat2(3, 1, -4, -1)
PAIR1 = Factorization.of((M1_1, M2_1))
PAIR2 = Factorization.of((M1_2, M2_2))


def params(*triples):
    return [ParabolicParams(*t) for t in triples]


def test_product_examples():
    assert product([]) == IDENTITY
    assert product([M1_1, M2_1]) == M2PT
    f = Factorization.from_params(params((1, 3, 1), (1, 0, 1), (1, -3, 1)))
    assert f.target == M3PT
    assert f.factors == (Mat2(4, 1, -9, -2), T, Mat2(-2, 1, -9, 4))


def test_factorization_validates():
    with pytest.raises(FactorizationError):
        Factorization((M1_1, M2_1), IDENTITY)
    with pytest.raises(ValueError):
        Factorization.of((M3PT,))


def test_normal_form_move():
    expected = oracles.mul(oracles.mul(oracles.rows(M2_2), oracles.rows(M1_2)),
                           oracles.adjugate_inverse(oracles.rows(M2_2)))
    assert expected == oracles.rows(M2_1)
    assert hurwitz_move(PAIR2, 0) == PAIR1
    assert inverse_hurwitz_move(PAIR1, 0) == PAIR2


def test_identical_factors_are_fixed():
    f = Factorization.of((T, T))
    assert hurwitz_move(f, 0) == f
    assert inverse_hurwitz_move(f, 0) == f


def test_index_errors():
    with pytest.raises(IndexError):
        hurwitz_move(PAIR1, 1)
    with pytest.raises(IndexError):
        inverse_hurwitz_move(PAIR1, -1)
    with pytest.raises(IndexError):
        apply_moves(PAIR1, [0])


def test_apply_moves_signed():
    assert apply_moves(PAIR2, [1]) == PAIR1
    assert apply_moves(PAIR1, [-1]) == PAIR2
    assert apply_moves(PAIR1, [1, -1, -1, 1]) == PAIR1


def test_global_conjugate_examples():
    assert global_conjugate(PAIR1, IDENTITY) == PAIR1
    # conjugating by the target moves the d-vector by P = [[-8,3],[-3,1]]
    g = global_conjugate(PAIR1, M2PT)
    assert g.target == M2PT
    d = tuple(p.d for p in PAIR1.params)
    nd = Mat2(-8, 3, -3, 1).apply(d)
    assert [p.d for p in g.params] == [abs(x) for x in nd]
    # A commutes with [[1,0],[9,1]] and shifts c by d
    f = Factorization.from_params(params((1, 3, 1), (1, 0, 1), (1, -3, 1)))
    h = global_conjugate(f, A)
    assert h.target == M3PT
    assert [(p.c, p.d) for p in h.params] == [(4, 1), (1, 1), (-2, 1)]


def test_global_conjugate_reports_new_target():
    g = global_conjugate(PAIR1, T)
    assert g.target == conjugate(M2PT, T) != M2PT


def test_move_invariants_random():
    rng = random.Random(7)
    for _ in range(10 ** 4):
        f = random_factorization(rng)
        g = f
        for _ in range(rng.randint(0, 20)):
            i = rng.randrange(len(g) - 1)
            g = hurwitz_move(g, i) if rng.random() < 0.5 else inverse_hurwitz_move(g, i)
        assert product(g.factors) == f.target
        by = random_word(rng, 4)
        h = global_conjugate(g, by)
        assert product(h.factors) == conjugate(f.target, by)
        # each factor stays a primitive parabolic with unchanged eps multiset
        assert sorted(p.eps for p in h.params) == sorted(p.eps for p in f.params)


def test_braid_relation():
    rng = random.Random(8)
    for _ in range(1000):
        f = random_factorization(rng, 3, 3)
        lhs = hurwitz_move(hurwitz_move(hurwitz_move(f, 0), 1), 0)
        rhs = hurwitz_move(hurwitz_move(hurwitz_move(f, 1), 0), 1)
        assert lhs == rhs


def test_cancellation():
    rng = random.Random(9)
    for _ in range(10 ** 4):
        f = random_factorization(rng)
        i = rng.randrange(len(f) - 1)
        assert inverse_hurwitz_move(hurwitz_move(f, i), i) == f
        assert hurwitz_move(inverse_hurwitz_move(f, i), i) == f


def test_orbit_trivial():
    rep = orbit_explore(Factorization.of((T, T)), [], 10)
    assert len(rep.representatives) == 1 and not rep.truncated


def test_orbit_contains_normal_form_partner():
    rep = orbit_explore(PAIR2, [], 100)
    assert PAIR1 in rep
    assert rep.truncated  # the pair orbit is infinite
    assert all(r.target == M2PT for r in rep.representatives)


def test_pair_conjugacy_of_normal_forms():
    # (M1_1, M2_1) and (M2_2, M1_2) are conjugate as pairs, by +-M1_1
    xs, ys = [oracles.rows(M1_1), oracles.rows(M2_1)], [oracles.rows(M2_2), oracles.rows(M1_2)]
    b = oracles.find_pair_conjugator(xs, ys, 4)
    assert b is not None and Mat2.from_rows(b) in (M1_1, -M1_1)
    # no conjugator joins the pairs in their given order
    assert oracles.find_pair_conjugator(xs, [oracles.rows(M1_2), oracles.rows(M2_2)], 4) is None
    swapped = Factorization.of((M2_2, M1_2))
    assert swapped.target != M2PT
    assert same_orbit(PAIR1, swapped, [Mat2.from_rows(b)], 50)
    # M commutes with itself, so conjugating by it never reaches the new target
    assert global_conjugate(PAIR1, M2PT).target == M2PT != swapped.target
    assert same_orbit(PAIR1, swapped, [M2PT], 200) is None


def test_orbit_deterministic():
    f = Factorization.from_params(params((1, 3, 1), (1, 0, 1), (1, -3, 1)))
    r1 = orbit_explore(f, [A], 300)
    r2 = orbit_explore(f, [mat_inv(A), A], 300)
    assert [str(x) for x in r1.representatives] == [str(x) for x in r2.representatives]
    assert r1.shift_step == 1 and not r1.target_changed


def test_shift_reduction_makes_conjugates_equal():
    f = Factorization.from_params(params((1, 3, 1), (1, 0, 1), (1, -3, 1)))
    g = global_conjugate(f, A ** 5)
    assert shift_step([A], M3PT) == 1
    assert shift_step([A ** 2, A ** 3], M3PT) == 1
    assert shift_step([A ** 2], M3PT) == 2
    assert shift_step([A], M2PT) == 0
    assert canonical_form(g, 1) == canonical_form(f, 1) == f


def test_threepoint_orbit_stays_markov():
    from monodromy.diophantine import MarkovTriple
    f = Factorization.from_params(params((1, 3, 1), (1, 0, 1), (1, -3, 1)))
    rep = orbit_explore(f, [A], 200)
    for r in rep.representatives:
        MarkovTriple.from_unsorted([p.d for p in r.params])
        assert r.target == M3PT
