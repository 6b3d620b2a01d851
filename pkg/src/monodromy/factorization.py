"""Ordered factorizations into primitive parabolic matrices and Hurwitz moves.

A tuple (M1, ..., Mn) represents loops g1, ..., gn whose composite g1...gn
has monodromy Mn ... M1, so the product is taken in reversed order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .diophantine import reduce_mod
from .sl2z import (IDENTITY, Mat2, ParabolicParams, conjugate, mat_inv,
                   parabolic_matrix, parabolic_params)


class FactorizationError(ValueError):
    pass


def product(factors: Sequence[Mat2]) -> Mat2:
    """factors[n-1] @ ... @ factors[0]; the empty product is I."""
    result = IDENTITY
    for m in factors:
        result = m @ result
    return result


@dataclass(frozen=True)
class Factorization:
    factors: Tuple[Mat2, ...]
    target: Mat2

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for m in self.factors:
            parabolic_params(m)
        if product(self.factors) != self.target:
            raise FactorizationError(
                f"product {product(self.factors)} != target {self.target}")

    @classmethod
    def of(cls, factors: Iterable[Mat2]) -> "Factorization":
        factors = tuple(factors)
        return cls(factors, product(factors))

    @classmethod
    def from_params(cls, params: Iterable[ParabolicParams]) -> "Factorization":
        return cls.of(parabolic_matrix(p) for p in params)

    @property
    def params(self) -> Tuple[ParabolicParams, ...]:
        return tuple(parabolic_params(m) for m in self.factors)

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        return ";".join(str(p) for p in self.params)


def _check_index(f: Factorization, i: int):
    if not 0 <= i < len(f) - 1:
        raise IndexError(f"move index {i} out of range for {len(f)} factors")


def hurwitz_move(f: Factorization, i: int) -> Factorization:
    """(Mi, Mi+1) -> (Mi+1, Mi+1 Mi Mi+1^-1)."""
    _check_index(f, i)
    x, y = f.factors[i], f.factors[i + 1]
    new = f.factors[:i] + (y, y @ x @ mat_inv(y)) + f.factors[i + 2:]
    return Factorization(new, f.target)


def inverse_hurwitz_move(f: Factorization, i: int) -> Factorization:
    """(Mi, Mi+1) -> (Mi^-1 Mi+1 Mi, Mi)."""
    _check_index(f, i)
    x, y = f.factors[i], f.factors[i + 1]
    new = f.factors[:i] + (mat_inv(x) @ y @ x, x) + f.factors[i + 2:]
    return Factorization(new, f.target)


def apply_moves(f: Factorization, moves: Iterable[int]) -> Factorization:
    """Apply signed 1-based moves: +i is hurwitz_move at i-1, -i its inverse."""
    for mv in moves:
        if mv == 0:
            raise IndexError("move 0 is undefined; moves are 1-based")
        f = hurwitz_move(f, mv - 1) if mv > 0 else inverse_hurwitz_move(f, -mv - 1)
    return f


def global_conjugate(f: Factorization, by: Mat2) -> Factorization:
    """Conjugate every factor by ``by``.

    The target becomes by^-1 * target * by; it is unchanged exactly when
    ``by`` commutes with the target (see :func:`commutes`).
    """
    return Factorization(tuple(conjugate(m, by) for m in f.factors),
                         conjugate(f.target, by))


def commutes(x: Mat2, y: Mat2) -> bool:
    return x @ y == y @ x


def shift_step(conjugators: Sequence[Mat2], target: Mat2) -> int:
    """Shift period for c-vectors coming from conjugators +-[[1,0],[k,1]].

    Conjugating by such a matrix sends every (c, d) to (c + k*d, d); when it
    commutes with the target the orbit is infinite and is quotiented by
    reducing c modulo gcd(k)*d.  Returns 0 when no such conjugator applies.
    """
    ks = []
    for b in conjugators:
        s = 1 if b.a == 1 else -1
        if b.a == s and b.d == s and b.b == 0 and b.c != 0 and commutes(b, target):
            ks.append(abs(b.c))
    return reduce(gcd, ks, 0)


def canonical_params(params: Sequence[ParabolicParams], step: int = 0) -> Tuple[ParabolicParams, ...]:
    """Canonical parameter tuple; with ``step`` > 0, c is reduced mod step*d."""
    if not step:
        return tuple(params)
    c = [p.c for p in params]
    d = [p.d for p in params]
    c = reduce_mod(c, d, step)
    return tuple(ParabolicParams(p.eps, ci, p.d) for p, ci in zip(params, c))


def canonical_form(f: Factorization, step: int = 0) -> Factorization:
    return Factorization.from_params(canonical_params(f.params, step))


def _key(f: Factorization):
    return (f.target.flat(), tuple((p.eps, p.c, p.d) for p in f.params))


@dataclass
class OrbitReport:
    representatives: List[Factorization]
    move_count: int
    truncated: bool
    target: Mat2
    target_changed: bool = False
    shift_step: int = 0

    def __contains__(self, f: Factorization) -> bool:
        g = canonical_form(f, self.shift_step if f.target == self.target else 0)
        return any(_key(g) == _key(r) for r in self.representatives)

    @property
    def targets(self) -> List[Mat2]:
        return sorted({r.target for r in self.representatives})


def orbit_explore(f: Factorization, allow_conjugators: Sequence[Mat2] = (),
                  max_nodes: int = 1000) -> OrbitReport:
    """Breadth-first closure under Hurwitz moves and global conjugations.

    Each conjugator is used together with its inverse.  Conjugators that do
    not commute with the target are allowed; the report then sets
    ``target_changed``.  Exploration stops once ``max_nodes`` distinct nodes
    are known.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be positive")
    conj = []
    for b in allow_conjugators:
        for x in (b, mat_inv(b)):
            if x not in conj:
                conj.append(x)
    step = shift_step(conj, f.target)
    start = canonical_form(f, step)
    seen = {_key(start): start}
    queue = deque([start])
    moves = 0
    truncated = False
    target_changed = False
    while queue and not truncated:
        node = queue.popleft()
        nbrs = []
        for i in range(len(node) - 1):
            nbrs.append(hurwitz_move(node, i))
            nbrs.append(inverse_hurwitz_move(node, i))
        for b in conj:
            g = global_conjugate(node, b)
            if g.target != node.target:
                target_changed = True
            nbrs.append(g)
        for g in nbrs:
            moves += 1
            if g.target == f.target:
                g = canonical_form(g, step)
            k = _key(g)
            if k in seen:
                continue
            if len(seen) >= max_nodes:
                truncated = True
                break
            seen[k] = g
            queue.append(g)
    reps = [seen[k] for k in sorted(seen)]
    return OrbitReport(reps, moves, truncated, f.target, target_changed, step)


def same_orbit(f: Factorization, g: Factorization, allow_conjugators: Sequence[Mat2] = (),
               max_nodes: int = 1000) -> Optional[bool]:
    """True if g is reached from f; None if the search was truncated first."""
    report = orbit_explore(f, allow_conjugators, max_nodes)
    if g in report:
        return True
    return None if report.truncated else False
