"""Binomial permutation groups over finite fields.

Builds the group generated by all permutations of F_q* of the form
a*x^m + b*x^n, classifies it (trivial, imprimitive with its invariant
coset partitions, alternating, full symmetric, or honestly undetermined),
and carries the surrounding machinery: explicit permutation families,
coefficient counts, a staged primitivity replay for q = r^2, a minimum-gap
scan over prime fields, and a congruence-class prime sieve.
"""

from .backend import USING_NUMBA, kernels
from .binomial import (
    Binomial,
    GenSet,
    count_N,
    count_T,
    enumerate_generators,
    family_additive,
    family_tz,
    is_perm_bruteforce,
    is_perm_reduced,
    keyprop_count,
    make_binomial,
)
from .classify import (
    ALTERNATING,
    ENGINE_VERSION,
    IMPRIMITIVE,
    SYMMETRIC,
    TRIVIAL,
    UNDETERMINED,
    SurveyRecord,
    Verdict,
    analyze,
    decide_group,
    gcd_lcm_identity_check,
    mz_scan,
    quotient_action,
    r_of_q,
    repunit_representations,
    survey,
    verify_prim_pipeline,
    wanlidl_order,
)
from .ffield import ZERO, FieldCtx, FieldSpec, build_field
from .permgroup import (
    bsgs_order,
    compose,
    cycle_type,
    invariant_divisors,
    inverse,
    is_full_cycle,
    parity,
    perm_from_binomial,
    scalar_cycle,
)
from .sieve import density_check, qualifying_primes, repunit_tail_count

__version__ = ENGINE_VERSION

__all__ = [
    "ALTERNATING",
    "Binomial",
    "ENGINE_VERSION",
    "FieldCtx",
    "FieldSpec",
    "GenSet",
    "IMPRIMITIVE",
    "SYMMETRIC",
    "SurveyRecord",
    "TRIVIAL",
    "UNDETERMINED",
    "USING_NUMBA",
    "Verdict",
    "ZERO",
    "analyze",
    "bsgs_order",
    "build_field",
    "compose",
    "count_N",
    "count_T",
    "cycle_type",
    "decide_group",
    "density_check",
    "enumerate_generators",
    "family_additive",
    "family_tz",
    "gcd_lcm_identity_check",
    "invariant_divisors",
    "inverse",
    "is_full_cycle",
    "is_perm_bruteforce",
    "is_perm_reduced",
    "kernels",
    "keyprop_count",
    "make_binomial",
    "mz_scan",
    "parity",
    "perm_from_binomial",
    "qualifying_primes",
    "quotient_action",
    "r_of_q",
    "repunit_representations",
    "repunit_tail_count",
    "scalar_cycle",
    "survey",
    "verify_prim_pipeline",
    "wanlidl_order",
]
