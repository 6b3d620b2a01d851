"""End-to-end verification of the two- and three-point classification.

Each check owns the constants it compares against, so replacing a single
entry of :class:`PaperConstants` breaks exactly one check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import classifier as cl
from .diophantine import (HyperbolaSolution, hyperbola_brute_force,
                          hyperbola_form, hyperbola_generate, markov_brute_force,
                          markov_tree)
from .factorization import Factorization, hurwitz_move, inverse_hurwitz_move
from .sl2z import (IDENTITY, Mat2, ParabolicParams, conj_params, conjugate,
                   mat_inv, parabolic_matrix, parabolic_params)


@dataclass
class VerifyConfig:
    bound_2pt: int = 40
    coprime_bound: int = 10 ** 4
    classify_bound: int = 30
    classify_bound_large: int = 100
    markov_max: int = 1000
    threepoint_max: int = 500
    bound_3pt: int = 50
    depth: int = 5
    isometry_box: int = 1000
    roundtrip_grid: int = 50
    braid_cases: int = 1000
    cancel_cases: int = 10 ** 4
    transpose_cases: int = 500
    seed: int = 0
    workers: Optional[int] = None


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    bounds: Dict[str, int]
    passed: bool
    witness: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return {"check_id": self.check_id, "anchor": self.anchor,
                "bounds": self.bounds, "passed": self.passed,
                "witness": self.witness}


@dataclass
class VerificationReport:
    records: List[CheckRecord]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failed(self) -> List[str]:
        return [r.check_id for r in self.records if not r.passed]


def _m(m: Mat2):
    return list(m.flat())


# -- individual checks --------------------------------------------------------

def check_corner(K: cl.PaperConstants, cfg: VerifyConfig) -> CheckRecord:
    m = cl.corner_monodromy(K.k_2pt)
    ok = m == K.M2pt and K.sphere_self_intersection == 2 + K.k_2pt
    return CheckRecord("01-corner", "boundary monodromy from the corner gluing, k = 7",
                       {}, ok, {"corner": _m(m), "expected": _m(K.M2pt),
                                "k": K.k_2pt, "self_intersection": K.sphere_self_intersection})


def check_twopoint_enumeration(K, cfg) -> CheckRecord:
    res = cl.enumerate_twopoint(cfg.bound_2pt, cfg.coprime_bound)
    base = {HyperbolaSolution(1, *v) for v in K.base_d_vectors}
    base |= {HyperbolaSolution(1, -s.d1, -s.d2) for s in base}
    ok_base = hyperbola_generate(0) == base
    # the sign-change map carries eps=+1 points onto eps=-1 points; its
    # inverse has max-row-sum 3, so the small box is covered by the image
    b = cfg.bound_2pt
    image = {K.S.apply(s.vector) for s in hyperbola_brute_force(1, b)}
    ok_s = all(hyperbola_form(-1, *v) == 1 for v in image)
    ok_s &= {s.vector for s in hyperbola_brute_force(-1, b // 3)} <= image
    ok = res.ok and ok_base and ok_s
    return CheckRecord("02-twopoint-enumeration",
                       "all pairs with product [[-7,-1],[1,0]]; eps=-1 pairs are not coprime",
                       {"bound": b, "coprime_bound": cfg.coprime_bound}, ok,
                       {"checks": res.checks, "base_vectors": ok_base, "sign_change": ok_s,
                        "eps+1_pairs": len(res.solutions["eps+1"]),
                        "mixed_pairs": [[str(p) for p in t] for t in res.solutions["mixed"]],
                        "eps-1_points_checked": res.notes["eps-1 hyperbola points checked"]})


def check_normal_forms(K, cfg) -> CheckRecord:
    ok = True
    witness = {}
    for d, expected in cl.NORMAL_FORM_PAIRS.items():
        f = cl.twopoint_factorization(d)
        good = f.factors == expected and f.target == cl.TWO_POINT_TARGET
        witness[str(d)] = [_m(m) for m in f.factors]
        ok &= good
    return CheckRecord("03-normal-forms", "the two normal forms of the pair",
                       {}, ok, witness)


def check_normal_form_move(K, cfg) -> CheckRecord:
    first = Factorization.of(cl.NORMAL_FORM_PAIRS[(1, 2)])
    second = Factorization.of(cl.NORMAL_FORM_PAIRS[(1, 1)])
    moved = hurwitz_move(second, 0)
    ok = moved == first and inverse_hurwitz_move(first, 0) == second
    return CheckRecord("04-normal-form-move", "one Hurwitz move joins the two normal forms",
                       {}, ok, {"moved": [_m(m) for m in moved.factors]})


def check_identities(K, cfg) -> CheckRecord:
    ok_p = K.P ** 3 == -(K.Z @ K.Z)
    n = cfg.isometry_box
    x, y = np.meshgrid(np.arange(-n, n + 1, dtype=np.int64),
                       np.arange(-n, n + 1, dtype=np.int64))
    zx, zy = K.Z.a * x + K.Z.b * y, K.Z.c * x + K.Z.d * y

    def q(u, v):
        return -(u * u + v * v) + 3 * u * v

    ok_q = bool(np.array_equal(q(zx, zy), q(x, y)))
    ok_a = K.A @ K.M3pt == K.M3pt @ K.A
    ok_c = K.C.det == -1 and conjugate(K.M3pt, K.C) == mat_inv(K.M3pt)
    ok = ok_p and ok_q and ok_a and ok_c
    return CheckRecord("05-identities", "P^3 = -Z^2, Z preserves the form, A and C act on M",
                       {"box": n}, ok,
                       {"P^3=-Z^2": ok_p, "isometry": ok_q, "A commutes": ok_a, "C inverts": ok_c})


def check_classification(K, cfg) -> CheckRecord:
    try:
        small = cl.classify_twopoint(cfg.classify_bound)
        large = cl.classify_twopoint(cfg.classify_bound_large)
    except cl.ClassificationMismatch as exc:
        return CheckRecord("06-classification", "two pairs up to conjugation by M",
                           {"bound": cfg.classify_bound}, False, {"error": str(exc)})
    reps = [r for r, _ in small.representatives]
    ok = small.ok and large.ok and reps == [(1, 1), (1, 2)] and \
        reps == [r for r, _ in large.representatives]
    return CheckRecord("06-classification", "two pairs up to conjugation by M",
                       {"bound": cfg.classify_bound, "bound_large": cfg.classify_bound_large},
                       ok, {"representatives": [list(r) for r in reps], "checks": small.checks})


def check_markov(K, cfg) -> CheckRecord:
    tree = markov_tree(0, max_component=cfg.markov_max)
    brute = markov_brute_force(cfg.markov_max)
    ok_eq = sorted(tree.nodes) == brute
    # the figure shows five levels: the root plus four rounds of mutation
    levels = markov_tree(4)
    fig = {t.as_tuple(): levels.parent[t] and levels.parent[t].as_tuple()
           for t in levels.nodes}
    ok_fig = fig == cl.MARKOV_FIGURE
    ok_cop = all(t.pairwise_coprime() for t in tree.nodes)
    return CheckRecord("07-markov", "Markov tree equals brute force; first levels of the tree",
                       {"max_component": cfg.markov_max}, ok_eq and ok_fig and ok_cop,
                       {"triples": len(brute), "first_levels": [list(t) for t in fig]})


def check_threepoint_products(K, cfg) -> CheckRecord:
    target = Mat2(1, 0, K.torus_self_intersection, 1)
    bad = []
    tree = markov_tree(0, max_component=cfg.threepoint_max)
    for t in tree.nodes:
        f = cl.threepoint_factorization(t.as_tuple())
        if f.target != cl.THREE_POINT_TARGET:
            bad.append(list(t.as_tuple()))
    ok = target == cl.THREE_POINT_TARGET and not bad
    return CheckRecord("08-threepoint-products", "canonical triples multiply to [[1,0],[9,1]]",
                       {"max_component": cfg.threepoint_max}, ok,
                       {"triples": len(tree.nodes), "failures": bad})


def check_threepoint_negative(K, cfg) -> CheckRecord:
    res = cl.enumerate_threepoint(cfg.bound_3pt, mixed_bound=0, sectors=(-1,),
                                  workers=cfg.workers)
    return CheckRecord("09-threepoint-eps-1", "no eps=-1 triples (bounded)",
                       {"bound": cfg.bound_3pt}, res.ok,
                       {"solutions": [[str(p) for p in t] for t in res.solutions["eps-1"]]})


def check_symmetries(K, cfg) -> CheckRecord:
    res = cl.markov_symmetry_realizations(cfg.depth, raise_on_mismatch=False)
    return CheckRecord("10-symmetries", "cyclic, reflection and Vieta moves on triples",
                       {"depth": cfg.depth}, res.ok,
                       {"triples": res.notes["triples"],
                        "failures": [list(map(str, f)) for f in res.notes["failures"]]})


def random_word(rng: random.Random, max_len: int = 10) -> Mat2:
    gens = [Mat2(1, 1, 0, 1), Mat2(1, 0, 1, 1), Mat2(1, -1, 0, 1), Mat2(1, 0, -1, 1)]
    m = IDENTITY
    for _ in range(rng.randint(0, max_len)):
        m = m @ rng.choice(gens)
    return m


def random_params(rng: random.Random, box: int = 10) -> ParabolicParams:
    while True:
        c, d = rng.randint(-box, box), rng.randint(-box, box)
        try:
            return ParabolicParams(rng.choice((1, -1)), c, d)
        except ValueError:
            continue


def random_factorization(rng: random.Random, lo: int = 2, hi: int = 4) -> Factorization:
    return Factorization.from_params(random_params(rng) for _ in range(rng.randint(lo, hi)))


def check_properties(K, cfg) -> CheckRecord:
    rng = random.Random(cfg.seed)
    g = cfg.roundtrip_grid
    ok_t = parabolic_matrix(ParabolicParams(1, 0, 1)) == K.T and \
        parabolic_params(K.T) == ParabolicParams(1, 0, 1)
    ok_rt = True
    for eps in (1, -1):
        for c in range(-g, g + 1):
            for d in range(-g, g + 1):
                try:
                    p = ParabolicParams(eps, c, d)
                except ValueError:
                    continue
                ok_rt &= parabolic_params(parabolic_matrix(p)) == p
    ok_braid = True
    for _ in range(cfg.braid_cases):
        f = random_factorization(rng, 3, 3)
        lhs = hurwitz_move(hurwitz_move(hurwitz_move(f, 0), 1), 0)
        rhs = hurwitz_move(hurwitz_move(hurwitz_move(f, 1), 0), 1)
        ok_braid &= lhs == rhs
    ok_cancel = True
    for _ in range(cfg.cancel_cases):
        f = random_factorization(rng)
        i = rng.randrange(len(f) - 1)
        ok_cancel &= inverse_hurwitz_move(hurwitz_move(f, i), i) == f
        ok_cancel &= hurwitz_move(inverse_hurwitz_move(f, i), i) == f
    ok_transpose = True
    for _ in range(cfg.transpose_cases):
        by = random_word(rng)
        p = random_params(rng)
        q = conj_params(p, by)
        ok_transpose &= q == ParabolicParams(p.eps, *by.transpose().apply(p.vector))
        ok_transpose &= parabolic_matrix(q) == conjugate(parabolic_matrix(p), by)
    ok = ok_t and ok_rt and ok_braid and ok_cancel and ok_transpose
    return CheckRecord("11-properties", "parametrization, braid relation, move inverses, transpose law",
                       {"grid": g, "braid": cfg.braid_cases, "cancel": cfg.cancel_cases,
                        "transpose": cfg.transpose_cases}, ok,
                       {"focus matrix": ok_t, "round trip": ok_rt, "braid": ok_braid,
                        "cancellation": ok_cancel, "transpose": ok_transpose})


CHECKS: List[Tuple[str, Callable[[cl.PaperConstants, VerifyConfig], CheckRecord]]] = [
    ("01-corner", check_corner),
    ("02-twopoint-enumeration", check_twopoint_enumeration),
    ("03-normal-forms", check_normal_forms),
    ("04-normal-form-move", check_normal_form_move),
    ("05-identities", check_identities),
    ("06-classification", check_classification),
    ("07-markov", check_markov),
    ("08-threepoint-products", check_threepoint_products),
    ("09-threepoint-eps-1", check_threepoint_negative),
    ("10-symmetries", check_symmetries),
    ("11-properties", check_properties),
]

# which check compares against which constant
CONSTANT_OWNER = {
    "T": "11-properties", "M2pt": "01-corner", "M3pt": "05-identities",
    "Z": "05-identities", "P": "05-identities", "S": "02-twopoint-enumeration",
    "A": "05-identities", "C": "05-identities", "k_2pt": "01-corner",
    "sphere_self_intersection": "01-corner",
    "torus_self_intersection": "08-threepoint-products",
    "base_d_vectors": "02-twopoint-enumeration",
}


def verify_paper(config: Optional[VerifyConfig] = None,
                 constants: cl.PaperConstants = cl.PAPER,
                 report_path: Optional[str] = None) -> VerificationReport:
    """Run every check in a fixed order; optionally write the JSON report."""
    config = config or VerifyConfig()
    records = []
    for check_id, check in CHECKS:
        try:
            records.append(check(constants, config))
        except Exception as exc:  # a broken constant may make a check raise
            records.append(CheckRecord(check_id, check.__name__, {}, False,
                                       {"error": f"{type(exc).__name__}: {exc}"}))
    report = VerificationReport(records)
    if report_path:
        from .cli import make_record, dumps
        payload = make_record("verify-paper", {"report": report_path},
                              {"passed": report.passed,
                               "checks": [r.to_dict() for r in records]})
        with open(report_path, "w") as fh:
            fh.write(dumps(payload))
    return report
