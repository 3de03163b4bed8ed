"""Symbolic dynamics workbench: factor languages, sliding block codes and automorphism groups."""

from .block_codes import (
    Automorphism,
    Endomorphism,
    LocalRule,
    compose,
    enumerate_automorphisms,
    find_inverse,
    identity,
    is_endomorphism,
    shift_power,
)
from .errors import (
    CapExceededError,
    ContractViolation,
    InfeasibleError,
    NotFoundError,
    OutOfRangeError,
    PeriodicShiftError,
    PreconditionError,
    ShiftautError,
    SpecError,
)
from .groups import (
    BoundParams,
    build_marked_word,
    coset_condition_check,
    coset_count_f,
    cylinder_action,
    find_slow_window,
    folner_candidate,
    folner_ratio,
    g_w,
    group_closure,
    max_return_gap,
    nilpotent_step_bound,
    order_divisibility_check,
    stabilizer_generators,
    subgroup_growth,
    torsion_free_injectivity_check,
)
from .language import (
    Alphabet,
    LanguageOracle,
    SubshiftSpec,
    build_oracle,
    complexity,
    complexity_series,
    doubling_time,
    extension_profile,
    factors,
    fibonacci,
    k_n,
    period_doubling,
    reference_doubling_time,
    thue_morse,
    tribonacci,
    unique_extension_count,
)

__version__ = "0.1.0"
