"""Exact tools for the q-weighted displacement algebra, its fan, and
the Chow ring of finite projective space."""

from .absorption import (LEFTMOST, RIGHTMOST, AbsorptionResult, McResult,
                         SelectionRule, random_rule, reduce_measure, simulate_mc)
from .algebra import (KlyElement, compositions, kly_degree, kly_multiply,
                      monomial_degree, prob_exact, structure_constants,
                      subsets_of_size)
from .chow import (ChowClass, ChowRing, Flat, FlatLattice, enumerate_flats,
                   gaussian_binomial, verify_gamma_L, verify_klyachko_relation,
                   verify_L_relation, verify_theorem1)
from .fan import (ConeId, all_cones, check_ample, check_complete, check_fan,
                  cone_contains, cone_generators, iter_walls, maximal_cones,
                  normalization_probe, sr_presentation, toric_top_integral,
                  wall_relation)
from .kahler import (LefschetzClass, check_hl, check_hr, check_log_concavity,
                     check_poincare, dual_pairing_matrix, pairing_matrix,
                     primitive_basis, probability_polynomial, volume_polynomial)
from .linalg import (InconsistentSystemError, LinAlgError, Matrix,
                     SingularMatrixError, definiteness, det, inverse,
                     lp_feasible, nullspace, rank, solve)
from .qcartan import (QContext, cartan_matrix, cartan_report,
                      principal_submatrix, q_factorial, q_int)

__version__ = "0.1.0"
