"""Enumeration and classification of two- and three-point monodromy factorizations.

The boundary monodromy of the base is fixed: [[-7,-1],[1,0]] around two
focus-focus values and [[1,0],[9,1]] around three.  This module scans for
all factorizations of these targets into primitive parabolic matrices,
compares the scans with the closed-form solution families, and checks that
the Markov symmetries are realized by moves on the factor tuples.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product as iproduct
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diophantine import (BASE_VECTORS, HYPERBOLA_ISOMETRY, MarkovTriple,
                          c_from_d_twopoint, cross, hyperbola_brute_force,
                          markov_tree, reduce_mod, solve_c_threepoint,
                          threepoint_rhs, vieta_middle)
from .factorization import Factorization, global_conjugate, product
from .sl2z import (Mat2, NotPrimitiveParabolic, ParabolicParams, conjugate,
                   mat_inv, parabolic_matrix, parabolic_params,
                   primitive_params)

SWAP = Mat2(0, 1, 1, 0)
FOCUS = Mat2(1, 1, 0, 1)
TWO_POINT_TARGET = Mat2(-7, -1, 1, 0)
THREE_POINT_TARGET = Mat2(1, 0, 9, 1)
TWO_POINT_CONJ_ACTION = Mat2(-8, 3, -3, 1)
SHIFT = Mat2(1, 0, 1, 1)
REFLECT = Mat2(-1, 0, 0, 1)

NORMAL_FORM_PAIRS = {
    (1, 2): (Mat2(3, 1, -4, -1), Mat2(3, 4, -1, -1)),
    (1, 1): (Mat2(6, 1, -25, -4), Mat2(3, 1, -4, -1)),
}

# first levels of the Markov tree, child -> parent
MARKOV_FIGURE = {
    (1, 1, 1): None,
    (1, 1, 2): (1, 1, 1),
    (1, 2, 5): (1, 1, 2),
    (1, 5, 13): (1, 2, 5), (2, 5, 29): (1, 2, 5),
    (1, 13, 34): (1, 5, 13), (5, 13, 194): (1, 5, 13),
    (5, 29, 433): (2, 5, 29), (2, 29, 169): (2, 5, 29),
}

WORKERS_ENV = "MONODROMY_WORKERS"


class ClassificationMismatch(RuntimeError):
    pass


class RealizationMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class PaperConstants:
    T: Mat2 = FOCUS
    M2pt: Mat2 = TWO_POINT_TARGET
    M3pt: Mat2 = THREE_POINT_TARGET
    Z: Mat2 = HYPERBOLA_ISOMETRY
    P: Mat2 = TWO_POINT_CONJ_ACTION
    S: Mat2 = Mat2(2, -1, -1, 1)
    A: Mat2 = SHIFT
    C: Mat2 = REFLECT
    k_2pt: int = 7
    sphere_self_intersection: int = 9
    torus_self_intersection: int = 9
    base_d_vectors: Tuple[Tuple[int, int], ...] = BASE_VECTORS


PAPER = PaperConstants()


@dataclass
class ClassificationResult:
    """Outcome of one enumeration or classification run.

    ``solutions`` maps a sector name to its list of parameter tuples,
    ``checks`` maps a claim to whether it held.
    """

    kind: str
    target: Mat2
    bounds: Dict[str, int]
    solutions: Dict[str, list] = field(default_factory=dict)
    representatives: list = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def corner_monodromy(k: int) -> Mat2:
    """Boundary monodromy [[0,1],[1,0]] * [[1,0],[-k,-1]] = [[-k,-1],[1,0]]."""
    return SWAP @ Mat2(1, 0, -k, -1)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


# -- exhaustive scans ---------------------------------------------------------

def scan_pairs(target: Mat2, bound: int) -> List[Tuple[ParabolicParams, ParabolicParams]]:
    """All (p1, p2) with |c|, |d| <= bound and M2 M1 = target.

    M2 is determined by M1, so one pass over the first factor is exhaustive.
    """
    out = []
    for p1 in primitive_params(bound):
        m2 = target @ mat_inv(parabolic_matrix(p1))
        try:
            p2 = parabolic_params(m2)
        except NotPrimitiveParabolic:
            continue
        if abs(p2.c) <= bound and p2.d <= bound:
            out.append((p1, p2))
    out.sort()
    return out


def _param_arrays(params, dtype):
    e = np.array([p.eps for p in params], dtype=dtype)
    c = np.array([p.c for p in params], dtype=dtype)
    d = np.array([p.d for p in params], dtype=dtype)
    return (1 + e * c * d, e * d * d, -e * c * c, 1 - e * c * d)


def _scan_triples_chunk(args):
    target, bound, firsts, seconds, eps3 = args
    t = target.flat()
    big = max(map(abs, t)) or 1
    # |entries| of the third factor stay below 4*|target|*(1 + bound^2)^2
    exact = 4 * big * (1 + bound * bound) ** 2 < 2 ** 62
    dtype = np.int64 if exact else object
    a2, b2, c2, d2 = _param_arrays(seconds, dtype)
    found = []
    for p1 in firsts:
        m1 = parabolic_matrix(p1)
        # X = M2 M1, then M3 = target X^-1 with X^-1 = [[xd, -xb], [-xc, xa]]
        xa = a2 * m1.a + b2 * m1.c
        xb = a2 * m1.b + b2 * m1.d
        xc = c2 * m1.a + d2 * m1.c
        xd = c2 * m1.b + d2 * m1.d
        ya = t[0] * xd - t[1] * xc
        yd = -t[2] * xb + t[3] * xa
        hits = np.nonzero(ya + yd == 2)[0]
        for j in hits:
            p2 = seconds[int(j)]
            m3 = target @ mat_inv(parabolic_matrix(p2) @ m1)
            try:
                p3 = parabolic_params(m3)
            except NotPrimitiveParabolic:
                continue
            if abs(p3.c) <= bound and p3.d <= bound and (eps3 is None or p3.eps == eps3):
                found.append((p1, p2, p3))
    return found


def scan_triples(target: Mat2, bound: int, eps1: int, eps2: int,
                 eps3: Optional[int] = None, workers: Optional[int] = None):
    """All (p1, p2, p3) in the box with the given signs and M3 M2 M1 = target.

    M3 is determined by (M1, M2); the scan over pairs is vectorized and the
    outer loop can be split across processes.  The result is sorted, so it
    does not depend on the worker count.
    """
    workers = workers or default_workers()
    firsts = primitive_params(bound, eps1)
    seconds = primitive_params(bound, eps2)
    chunks = [firsts[i::workers] for i in range(workers)]
    jobs = [(target, bound, ch, seconds, eps3) for ch in chunks if ch]
    if workers == 1 or len(jobs) <= 1:
        results = [_scan_triples_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_triples_chunk, jobs))
    return sorted(x for r in results for x in r)


# -- two points ---------------------------------------------------------------

def twopoint_params(eps: int, d: Sequence[int]) -> Tuple[ParabolicParams, ParabolicParams]:
    """Factor parameters from a hyperbola point; raises if a pair is not coprime."""
    c1, c2 = c_from_d_twopoint(eps, *d)
    return ParabolicParams(eps, c1, d[0]), ParabolicParams(eps, c2, d[1])


def twopoint_factorization(d: Sequence[int], eps: int = 1) -> Factorization:
    return Factorization.from_params(twopoint_params(eps, d))


def parametric_pairs(bound: int) -> List[Tuple[ParabolicParams, ParabolicParams]]:
    out = set()
    for sol in hyperbola_brute_force(1, bound):
        pair = twopoint_params(1, sol.vector)
        if all(abs(p.c) <= bound and p.d <= bound for p in pair):
            out.add(pair)
    return sorted(out)


def enumerate_twopoint(bound: int, coprime_bound: int = 10 ** 4,
                       target: Mat2 = TWO_POINT_TARGET) -> ClassificationResult:
    if bound < 1:
        raise ValueError("bound must be positive")
    pairs = scan_pairs(target, bound)
    plus = [p for p in pairs if p[0].eps == p[1].eps == 1]
    minus = [p for p in pairs if p[0].eps == p[1].eps == -1]
    mixed = [p for p in pairs if p[0].eps != p[1].eps]
    parametric = parametric_pairs(bound)

    # eps = -1: every hyperbola point must give a non-coprime (c_i, d_i)
    coprime_hits = []
    minus_points = hyperbola_brute_force(-1, coprime_bound)
    for sol in minus_points:
        c1, c2 = c_from_d_twopoint(-1, sol.d1, sol.d2)
        if gcd(c1, sol.d1) == 1 and gcd(c2, sol.d2) == 1:
            coprime_hits.append(sol.vector)

    res = ClassificationResult("twopoint", target, {"bound": bound, "coprime_bound": coprime_bound})
    res.solutions = {"eps+1": plus, "eps-1": minus, "mixed": mixed, "parametric": parametric}
    res.checks = {
        "eps+1 scan equals parametric family": plus == parametric,
        "eps-1 scan empty": not minus,
        "eps-1 hyperbola points all non-coprime": not coprime_hits,
    }
    res.notes = {"eps-1 hyperbola points checked": len(minus_points),
                 "eps-1 coprime exceptions": coprime_hits}
    return res


def _norm2(v):
    return v[0] * v[0] + v[1] * v[1]


def _orbit_key(v):
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    return (max(abs(v[0]), abs(v[1])), v)


def orbit_representative(v: Tuple[int, int], action: Mat2 = TWO_POINT_CONJ_ACTION) -> Tuple[int, int]:
    """Smallest vector of the orbit of v under a hyperbolic ``action`` and -I.

    Orbit vectors are ordered by max-norm, then lexicographically after
    making the first nonzero entry positive.  The squared Euclidean norm is
    convex along a hyperbolic orbit, so the walk descends to its minimum and
    then scans outward only while a smaller max-norm is still possible.
    """
    inv = mat_inv(action)
    for step in (action, inv):
        while _norm2(step.apply(v)) < _norm2(v):
            v = step.apply(v)
    best = _orbit_key(v)
    for step in (action, inv):
        w = step.apply(v)
        while _norm2(w) <= 2 * best[0] ** 2:
            best = min(best, _orbit_key(w))
            w = step.apply(w)
    return best[1]


def classify_twopoint(bound: int, target: Mat2 = TWO_POINT_TARGET,
                      action: Mat2 = TWO_POINT_CONJ_ACTION) -> ClassificationResult:
    """Split the eps=+1 solutions in the box into orbits of conjugation by the target."""
    if bound < 1:
        raise ValueError("bound must be positive")
    sols = [s.vector for s in hyperbola_brute_force(1, bound)]
    orbits: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for v in sols:
        orbits.setdefault(orbit_representative(v, action), []).append(v)
    reps = sorted(orbits, key=_orbit_key)

    action_mismatch = []
    for v in sols:
        conj = global_conjugate(twopoint_factorization(v), target)
        if conj != twopoint_factorization(action.apply(v)):
            action_mismatch.append(v)

    res = ClassificationResult("twopoint-orbits", target, {"bound": bound})
    res.solutions = {"eps+1": sols}
    res.representatives = [(r, twopoint_factorization(r).factors) for r in reps]
    res.notes = {"orbits": {str(r): sorted(orbits[r]) for r in reps},
                 "action mismatches": action_mismatch}
    res.checks = {
        "two orbits": len(reps) == 2,
        "conjugation by target acts as P on d": not action_mismatch,
    }
    if len(reps) != 2:
        raise ClassificationMismatch(f"expected 2 orbits, found {len(reps)}: {reps}")
    return res


# -- three points -------------------------------------------------------------

def threepoint_factorization(d: Sequence[int]) -> Factorization:
    """Canonical factorization for a positive Markov triple d (any order)."""
    c = solve_c_threepoint(d)
    return Factorization.from_params(ParabolicParams(1, ci, di) for ci, di in zip(c, d))


def _split(triple):
    c = tuple(p.c for p in triple)
    d = tuple(p.d for p in triple)
    return c, d


def check_threepoint_solution(triple: Sequence[ParabolicParams]) -> bool:
    """A scanned eps=+1 triple matches the Markov description.

    Its d-vector must be a positive Markov triple and c must solve the
    cross-product system, agreeing with solve_c_threepoint modulo d.
    """
    c, d = _split(triple)
    try:
        MarkovTriple.from_unsorted(d)
    except ValueError:
        return False
    if min(d) <= 0 or cross(c, d) != threepoint_rhs(d):
        return False
    return reduce_mod(c, d) == solve_c_threepoint(d)


def enumerate_threepoint(bound: int, mixed_bound: Optional[int] = None,
                         target: Mat2 = THREE_POINT_TARGET,
                         workers: Optional[int] = None,
                         sectors: Sequence[int] = (1, -1)) -> ClassificationResult:
    if bound < 1:
        raise ValueError("bound must be positive")
    if mixed_bound is None:
        mixed_bound = min(bound, 6)
    res = ClassificationResult("threepoint", target, {"bound": bound, "mixed_bound": mixed_bound})
    for eps in sectors:
        sols = scan_triples(target, bound, eps, eps, eps, workers)
        res.solutions[f"eps{eps:+d}"] = sols
    if 1 in sectors:
        plus = res.solutions["eps+1"]
        bad = [t for t in plus if not check_threepoint_solution(t)]
        res.checks["eps+1 solutions are Markov with matching c"] = not bad
        res.notes["eps+1 mismatches"] = bad
        res.notes["eps+1 Markov triples"] = sorted(
            {MarkovTriple.from_unsorted(_split(t)[1]).as_tuple() for t in plus} if not bad else [])
    if -1 in sectors:
        res.checks["eps-1 sector empty"] = not res.solutions["eps-1"]
    if mixed_bound:
        mixed = []
        for e1, e2 in iproduct((1, -1), repeat=2):
            for t in scan_triples(target, mixed_bound, e1, e2, None, workers):
                if len({p.eps for p in t}) > 1:
                    mixed.append(t)
        res.solutions["mixed"] = sorted(mixed)
    return res


def _dvec(f: Factorization):
    return tuple(p.d for p in f.params)


def cyclic_realization(f: Factorization) -> Factorization:
    """(M1, M2, M3) -> (M^-1 M3 M, M1, M2)."""
    m1, m2, m3 = f.factors
    return Factorization((conjugate(m3, f.target), m1, m2), f.target)


def reflection_realization(f: Factorization, by: Mat2 = REFLECT) -> Factorization:
    """Reverse and invert the factors, then conjugate by C.

    The inverted tuple multiplies to M^-1; conjugating by C restores M, and
    each factor (eps, c, d) ends up as (eps, -c, d).
    """
    inverted = Factorization.of(mat_inv(m) for m in reversed(f.factors))
    return global_conjugate(inverted, by)


def vieta_realization(f: Factorization) -> Factorization:
    """(M1, M2, M3) -> (M1^-1 M2 M1, M1, M3), then swap the first two d entries.

    The swap is the reflection applied after the cyclic permutation.
    """
    m1, m2, m3 = f.factors
    jumped = Factorization((conjugate(m2, m1), m1, m3), f.target)
    return reflection_realization(cyclic_realization(jumped))


REALIZATIONS = {
    "cyclic": (cyclic_realization, lambda d: (d[2], d[0], d[1])),
    "reflection": (reflection_realization, lambda d: (d[2], d[1], d[0])),
    "vieta": (vieta_realization, vieta_middle),
}


def markov_symmetry_realizations(depth: int, target: Mat2 = THREE_POINT_TARGET,
                                 raise_on_mismatch: bool = True) -> ClassificationResult:
    """Apply the three tuple-level symmetries to every tree triple up to ``depth``.

    For each one checks that the product stays equal to the target, that the
    d-vector moves as the Markov symmetry predicts, and that the new c-vector
    is again an integer solution of the cross-product system.
    """
    tree = markov_tree(depth)
    res = ClassificationResult("markov-symmetries", target, {"depth": depth})
    failures = []
    rows = []
    for t in tree.nodes:
        d = t.as_tuple()
        f = threepoint_factorization(d)
        for name, (move, dmap) in REALIZATIONS.items():
            g = move(f)
            gd = _dvec(g)
            gc = tuple(p.c for p in g.params)
            ok_product = g.target == target and product(g.factors) == target
            ok_d = gd == dmap(d)
            ok_c = cross(gc, gd) == threepoint_rhs(gd)
            rows.append((d, name, gd, gc))
            if not (ok_product and ok_d and ok_c):
                failures.append((d, name, ok_product, ok_d, ok_c))
    res.solutions = {"images": rows}
    res.checks = {"all realizations consistent": not failures}
    res.notes = {"triples": len(tree.nodes), "failures": failures}
    if failures and raise_on_mismatch:
        raise RealizationMismatch(f"realization failed for {failures[0]}")
    return res
