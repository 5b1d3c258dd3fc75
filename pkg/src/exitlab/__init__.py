"""Erasure-channel laboratory for highly symmetric binary linear codes.

Construct Reed-Muller and (extended) BCH codes, decode them exactly on
erasure channels, compute recovery-failure (EXIT) functions and coordinate
influences both exactly and by Monte Carlo, and check the structural
identities that make sharp decoding thresholds possible: the exact area
law, the derivative/total-influence identity, and the EXIT symmetries
forced by transitive and doubly transitive automorphism groups.
"""

from .channel import (DecodeReport, ErasurePattern, decode,
                      decode_by_covering, indirect_recovery_fails,
                      sample_pattern)
from .codes import (CodeStats, EnumerationBudgetError, LinearCode, load_code,
                    save_code)
from .exit_exact import (ExitPolynomial, InfluenceProfile, area_exact,
                         average_exit_exact, boundary_g,
                         conditional_entropy_exact, exit_polynomial_exact,
                         exit_vector_exact, influence_profile_exact,
                         margulis_russo_check, omega_table)
from .families import (RateEntry, RateSchedule, bch, bch_rate_sequence, ebch,
                       q_function, q_inverse, reed_muller, repetition,
                       rm_rate_sequence, single_parity_check)
from .gf2 import BitMatrix, BitVector
from .gf2m import (FieldContext, Poly2, bch_generator_poly, cyclotomic_coset,
                   gf_mul, minimal_polynomial)
from .montecarlo import (McCurve, ThresholdReport, delta_m_bound,
                         estimate_p_t, h_tail_bound, isotonic_fit, run_curve,
                         threshold_report, width_bound_lemma13,
                         width_bound_thm7, write_curve_csv, read_curve_csv)
from .symmetry import (Permutation, double_transitivity_witness,
                       is_automorphism, rm_affine_permutation)

__version__ = "0.1.0"
