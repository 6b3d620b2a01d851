"""Integer solvers for the two-point hyperbola and the three-point Markov system.

Two focus-focus points reduce to integer points on

    -eps * (d1**2 + d2**2) + 3 * d1 * d2 = 1,

three points reduce to Markov's equation d1**2 + d2**2 + d3**2 = 3*d1*d2*d3
together with a linear cross-product system for the c-vector.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .sl2z import Mat2, mat_pow

Vec3 = Tuple[int, int, int]

HYPERBOLA_ISOMETRY = Mat2(21, -8, 8, -3)
SIGN_CHANGE = Mat2(2, -1, -1, 1)
BASE_VECTORS = ((1, 1), (1, 2), (2, 1))


class NoSolution(ValueError):
    """Raised when a linear system has no integer solution."""


def hyperbola_form(eps: int, d1: int, d2: int) -> int:
    return -eps * (d1 * d1 + d2 * d2) + 3 * d1 * d2


@dataclass(frozen=True, order=True)
class HyperbolaSolution:
    eps: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps}")
        if hyperbola_form(self.eps, self.d1, self.d2) != 1:
            raise ValueError(f"({self.d1}, {self.d2}) is not on the eps={self.eps} hyperbola")

    @property
    def vector(self) -> Tuple[int, int]:
        return (self.d1, self.d2)


def markov_form(d1: int, d2: int, d3: int) -> int:
    return d1 * d1 + d2 * d2 + d3 * d3 - 3 * d1 * d2 * d3


@dataclass(frozen=True, order=True)
class MarkovTriple:
    """Positive solution of Markov's equation, entries sorted ascending."""

    d1: int
    d2: int
    d3: int

    def __post_init__(self):
        if not 0 < self.d1 <= self.d2 <= self.d3:
            raise ValueError(f"{self.as_tuple()} is not positive and sorted")
        if markov_form(self.d1, self.d2, self.d3) != 0:
            raise ValueError(f"{self.as_tuple()} does not satisfy Markov's equation")

    @classmethod
    def from_unsorted(cls, d: Sequence[int]) -> "MarkovTriple":
        return cls(*sorted(abs(x) for x in d))

    def as_tuple(self) -> Vec3:
        return (self.d1, self.d2, self.d3)

    def pairwise_coprime(self) -> bool:
        a, b, c = self.as_tuple()
        return gcd(a, b) == gcd(b, c) == gcd(a, c) == 1

    def __str__(self):
        return f"({self.d1},{self.d2},{self.d3})"


# -- two-point hyperbola ------------------------------------------------------

def _roots_d2(eps: int, d1: int) -> List[int]:
    # eps*d2^2 - 3*d1*d2 + (eps*d1^2 + 1) = 0
    disc = 9 * d1 * d1 - 4 * eps * (eps * d1 * d1 + 1)
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    out = set()
    for num in (3 * d1 + r, 3 * d1 - r):
        if num % (2 * eps) == 0:
            out.add(num // (2 * eps))
    return sorted(out)


def hyperbola_brute_force(eps: int, bound: int) -> List[HyperbolaSolution]:
    """Every solution with |d1|, |d2| <= bound, in lexicographic order.

    Each column d1 is solved exactly as a quadratic in d2, which visits the
    same grid as a double loop in O(bound) time.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    out = []
    for d1 in range(-bound, bound + 1):
        for d2 in _roots_d2(eps, d1):
            if abs(d2) <= bound:
                out.append(HyperbolaSolution(eps, d1, d2))
    return out


def hyperbola_generate(n_max: int) -> Set[HyperbolaSolution]:
    """The eps=+1 solutions +-Z^n d for the base vectors d and |n| <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    out = set()
    for n in range(-n_max, n_max + 1):
        zn = mat_pow(HYPERBOLA_ISOMETRY, n)
        for v in BASE_VECTORS:
            x, y = zn.apply(v)
            out.add(HyperbolaSolution(1, x, y))
            out.add(HyperbolaSolution(1, -x, -y))
    return out


def hyperbola_generate_box(bound: int) -> List[HyperbolaSolution]:
    """All generated eps=+1 solutions inside the box, sorted.

    Z is hyperbolic, so each orbit leaves the box for good once it does.
    """
    out = set()
    for v in BASE_VECTORS:
        for step in (HYPERBOLA_ISOMETRY, mat_pow(HYPERBOLA_ISOMETRY, -1)):
            w = v
            while max(abs(w[0]), abs(w[1])) <= bound:
                out.add(HyperbolaSolution(1, *w))
                out.add(HyperbolaSolution(1, -w[0], -w[1]))
                w = step.apply(w)
    return sorted(out)


def s_transform(sol: HyperbolaSolution) -> HyperbolaSolution:
    if sol.eps != 1:
        raise ValueError("s_transform expects an eps=+1 solution")
    return HyperbolaSolution(-1, *SIGN_CHANGE.apply(sol.vector))


def s_transform_inverse(sol: HyperbolaSolution) -> HyperbolaSolution:
    if sol.eps != -1:
        raise ValueError("s_transform_inverse expects an eps=-1 solution")
    return HyperbolaSolution(1, *mat_pow(SIGN_CHANGE, -1).apply(sol.vector))


def c_from_d_twopoint(eps: int, d1: int, d2: int) -> Tuple[int, int]:
    if eps not in (1, -1) or hyperbola_form(eps, d1, d2) != 1:
        raise ValueError(f"({d1}, {d2}) is not on the eps={eps} hyperbola")
    return (8 * d1 - 3 * eps * d2, -d2 + 3 * eps * d1)


def twopoint_system_holds(eps: int, c: Tuple[int, int], d: Tuple[int, int]) -> bool:
    """The four equations relating (c1, c2) and (d1, d2); the third is doubled."""
    (c1, c2), (d1, d2) = c, d
    return (hyperbola_form(eps, c1, c2) == 1
            and hyperbola_form(eps, d1, d2) == 1
            and -2 * eps * (c1 * d1 + c2 * d2) + 3 * (c1 * d2 + c2 * d1) == 7
            and c1 * d2 - c2 * d1 == 3)


# -- Markov triples -----------------------------------------------------------

def markov_brute_force(max_component: int) -> List[MarkovTriple]:
    """Sorted positive Markov triples with largest entry <= max_component.

    For each d1 <= d2 the largest entry is a root of
    d3**2 - 3*d1*d2*d3 + (d1**2 + d2**2) = 0.
    """
    if max_component < 1:
        raise ValueError("max_component must be >= 1")
    out = []
    for d1 in range(1, max_component + 1):
        for d2 in range(d1, max_component + 1):
            s = 3 * d1 * d2
            disc = s * s - 4 * (d1 * d1 + d2 * d2)
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc or (s + r) % 2:
                continue
            for d3 in {(s - r) // 2, (s + r) // 2}:
                if d2 <= d3 <= max_component:
                    out.append(MarkovTriple(d1, d2, d3))
    out.sort()
    return out


def vieta_mutations(t: MarkovTriple) -> List[Vec3]:
    a, b, c = t.as_tuple()
    return [(3 * b * c - a, b, c), (a, 3 * a * c - b, c), (a, b, 3 * a * b - c)]


def vieta_middle(d: Sequence[int]) -> Vec3:
    """v(d1, d2, d3) = (d1, 3*d1*d3 - d2, d3); an involution."""
    d1, d2, d3 = d
    return (d1, 3 * d1 * d3 - d2, d3)


@dataclass
class MarkovTree:
    """Breadth-first Markov tree; ``parent`` maps each triple to its parent."""

    nodes: List[MarkovTriple]
    parent: Dict[MarkovTriple, Optional[MarkovTriple]]
    depth: Dict[MarkovTriple, int]

    def children(self, t: MarkovTriple) -> List[MarkovTriple]:
        return [n for n in self.nodes if self.parent[n] == t]


def markov_children(t: MarkovTriple, parent: Optional[MarkovTriple] = None) -> List[MarkovTriple]:
    out = set()
    for m in vieta_mutations(t):
        child = MarkovTriple.from_unsorted(m)
        if child != parent and child.d3 > t.d3:
            out.add(child)
    return sorted(out)


def markov_tree(depth: int, max_component: Optional[int] = None) -> MarkovTree:
    """Markov tree rooted at (1, 1, 1) down to ``depth`` levels.

    With ``max_component`` set, the tree is instead grown without a depth
    limit and pruned to triples whose largest entry is within it; larger
    entries only have larger descendants.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    root = MarkovTriple(1, 1, 1)
    nodes = [root]
    parent: Dict[MarkovTriple, Optional[MarkovTriple]] = {root: None}
    level = {root: 0}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        if max_component is None and level[t] >= depth:
            continue
        for child in markov_children(t, parent[t]):
            if max_component is not None and child.d3 > max_component:
                continue
            if child in parent:
                continue
            parent[child] = t
            level[child] = level[t] + 1
            nodes.append(child)
            queue.append(child)
    return MarkovTree(nodes, parent, level)


# -- three-point c-vector -----------------------------------------------------

def cross(u: Sequence[int], v: Sequence[int]) -> Vec3:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def threepoint_rhs(d: Sequence[int]) -> Vec3:
    d1, d2, d3 = d
    return (3 * d1, 3 * (d2 - 3 * d1 * d3), 3 * d3)


def reduce_mod(c: Sequence[int], d: Sequence[int], step: int = 1) -> Tuple[int, ...]:
    """Representative of c + k*step*d minimizing the max-norm; ties to smaller k."""
    if not any(d):
        return tuple(c)

    def norm(k):
        return max(abs(ci + k * step * di) for ci, di in zip(c, d))

    # start near the least-squares shift, then walk the convex norm downhill
    dd = sum(x * x for x in d) * step
    k = -round(sum(ci * di for ci, di in zip(c, d)) / dd) if dd else 0
    while norm(k + 1) < norm(k):
        k += 1
    while norm(k - 1) <= norm(k):
        k -= 1
    return tuple(ci + k * step * di for ci, di in zip(c, d))


def solve_c_threepoint(d: Sequence[int]) -> Vec3:
    """Integer c with cross(c, d) = 3*(d1, d2 - 3*d1*d3, d3), reduced mod d.

    Every other solution is c + k*d.  Raises NoSolution unless d is a
    positive Markov triple (in any order).
    """
    d1, d2, d3 = d
    if min(d) <= 0:
        raise ValueError(f"{tuple(d)} must have positive entries")
    if markov_form(d1, d2, d3) != 0:
        raise NoSolution(f"{tuple(d)} does not satisfy Markov's equation")
    r1, r2, r3 = threepoint_rhs(d)
    # fix c3 = t with t*d2 = -r1 (mod d3); the remaining congruence and the
    # third equation then follow from r . d = 0
    if gcd(d2, d3) != 1:
        raise NoSolution(f"{tuple(d)} is not pairwise coprime")
    t = (-r1 * pow(d2, -1, d3)) % d3 if d3 > 1 else 0
    c1, rem1 = divmod(t * d1 - r2, d3)
    c2, rem2 = divmod(r1 + t * d2, d3)
    assert rem1 == rem2 == 0
    c = (c1, c2, t)
    assert cross(c, d) == (r1, r2, r3)
    return reduce_mod(c, d)
