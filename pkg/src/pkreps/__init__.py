"""Representations n = p + m**k: exact counts, singular series, characters and circle-method checks."""
from ._kernels import BACKEND
from .arith import (
    CapacityError,
    DomainError,
    factorize,
    is_in_Ik,
    prime_root_count,
    prime_table,
    root_count,
)
from .characters import CharacterGroup, DirichletCharacter, gauss_sum, h_sum, sigma_sum, v_sum
from .circle import (
    coefficients,
    dissect,
    f_sum,
    hua_moment,
    integrate_major,
    main_term_compare,
    minor_l2,
    r_split,
    s_sum,
)
from .reps import count_reps, exceptional_set, hl_ratio, scan, windowed_count
from .series import a_coeff, product_form, singular_series, tail_bound, truncated_sum

__version__ = "0.1.0"
