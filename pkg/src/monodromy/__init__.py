"""Exact classification of SL(2,Z) factorizations into primitive parabolic matrices."""

__version__ = "0.1.0"

from .sl2z import (IDENTITY, Mat2, NotPrimitiveParabolic, NotUnimodularError,
                   ParabolicParams, conj_params, conjugate, mat_inv, mat_mul,
                   parabolic_matrix, parabolic_params)
from .diophantine import (HyperbolaSolution, MarkovTriple, NoSolution,
                          c_from_d_twopoint, hyperbola_brute_force,
                          hyperbola_generate, markov_brute_force, markov_tree,
                          s_transform, solve_c_threepoint)
from .factorization import (Factorization, OrbitReport, global_conjugate,
                            hurwitz_move, inverse_hurwitz_move, orbit_explore,
                            product)
from .classifier import (PAPER, ClassificationResult, PaperConstants,
                         classify_twopoint, corner_monodromy,
                         enumerate_threepoint, enumerate_twopoint,
                         markov_symmetry_realizations)
from .verify import VerifyConfig, verify_paper

__all__ = [
    "IDENTITY", "Mat2", "NotPrimitiveParabolic", "NotUnimodularError", "ParabolicParams",
    "conj_params", "conjugate", "mat_inv", "mat_mul", "parabolic_matrix", "parabolic_params",
    "HyperbolaSolution", "MarkovTriple", "NoSolution", "c_from_d_twopoint",
    "hyperbola_brute_force", "hyperbola_generate", "markov_brute_force", "markov_tree",
    "s_transform", "solve_c_threepoint",
    "Factorization", "OrbitReport", "global_conjugate", "hurwitz_move",
    "inverse_hurwitz_move", "orbit_explore", "product",
    "PAPER", "ClassificationResult", "PaperConstants", "classify_twopoint",
    "corner_monodromy", "enumerate_threepoint", "enumerate_twopoint",
    "markov_symmetry_realizations", "VerifyConfig", "verify_paper",
]
