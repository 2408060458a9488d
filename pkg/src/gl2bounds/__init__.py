"""Finite-level GL2 group theory over Z/l^k and its applications: H1
exponents, group-algebra spans, uniform-bound constants, and
division-polynomial Kummer checks."""

from .residue import (Mat2, ResidueInt, ResidueRing, mat_valuation,
                      scalar_power_stabilize, teichmuller_lift, valuation)
from .matgrp import (CapExceeded, DicksonVerdict, FiniteMatrixGroup,
                     borel_group, cartan_normalizer, cartan_subgroup,
                     close_generators, dickson_classify, enumerate_subgroups,
                     exceptional_s4_group_mod13, format_group_text,
                     galois_candidate_filter, gl2_group, irreducibility_report,
                     parse_group_text, sl2_group)
from .cohom import (CohomologyResult, GModule, combined_exponent_bound, h1,
                    sah_multiplier, torsion_injection_order)
from .scalars import (CriterionReport, KeyLemmaTrace, LieSlice,
                      appendix_counterexample_group, certify_all_scalars,
                      certify_scalars_one_plus_ell, diagonalizing_iteration,
                      full_image_criterion, lie_slices, pro_p_scalar_report)
from .matalg import AlgebraSpan, algebra_span, verify_reducible_bound, verify_two_adic_bound
from .bounds import (BoundProfile, a_valuations, bound_profile, cm_exponent,
                     exp_pgl2, exponent_constant, generated_submodule_index,
                     kummer_bound, kummer_bound_cm, kummer_bound_noncm,
                     submodule_index_bound)
from .ellkummer import (CurveModP, DivisionPolynomialSet, EllipticCurve,
                        KummerReport, RationalPoint, kummer_divisibility,
                        point_add, point_mul, point_neg)
from .intpoly import factor_mod_p, factor_over_z

__all__ = [name for name in dir() if not name.startswith("_")]
