"""Finite abelian p-groups, constrained endomorphism matrices, conjugacy and lifting."""

from .conjugacy import RationalCanonicalForm, are_conjugate, invariant_factors, kernel_profile, rcf
from .groups import (
    FiniteAbelianGroup,
    GroupEndomorphism,
    GroupMismatch,
    apply,
    compose,
    direct_sum_groups,
    hillar_rhea_aut_order,
    is_automorphism,
    parse_matrix,
)
from .lifting import (
    T_MATRIX,
    LiftResult,
    check_lift,
    hensel_roots_of_f,
    lift_to_gamma0_3,
    mixed_group,
    project,
    sl2_conjugacy_check,
    split_root,
)
from .oracle import (
    ConjugacyClass,
    OracleBoundExceeded,
    aut_generators,
    aut_order_by_generation,
    annihilated_by_f,
    conjugacy_classes,
    f_annihilated_array,
    oracle_class_count,
)
