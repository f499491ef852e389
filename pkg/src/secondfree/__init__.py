"""Exact combinatorics of second-order free probability.

Core layers:

* :mod:`secondfree.perm` -- permutations, set partitions, partitioned
  permutations, annulus shapes, text notation.
* :mod:`secondfree.annular` -- enumeration and classification of
  non-crossing discs and annuli, parity classes, doubling maps.
* :mod:`secondfree.cumulants` -- the moment-cumulant calculus over free
  families, in exact rational arithmetic.
* :mod:`secondfree.dist` -- stock distributions and the JSON model
  format.
* :mod:`secondfree.special` -- determining sequences, square/product
  transforms, the multiplication and conjugation checkers.
* :mod:`secondfree.series` -- truncated formal power series and the
  generating-function identities.
"""

__version__ = "0.1.0"

from .perm import (
    AnnulusShape,
    PartitionedPermutation,
    Permutation,
    SetPartition,
    compose,
    gamma_annulus,
    induced_permutation,
    is_exact_factorization,
    length_metric,
    partition_join,
    pp_length,
    pp_product,
    separates_points,
)
from .annular import (
    AnnularConfig,
    CapExceededError,
    classify_parity,
    double_nc,
    double_partitioned,
    double_reversing,
    enumerate_annular_pairings,
    enumerate_nc,
    enumerate_ps_nc,
    enumerate_ps_nc_prime,
    enumerate_snc,
    enumerate_snc_k_alternating,
    enumerate_snc_k_alternating_equal,
    enumerate_snc_all_through,
    enumerate_snc_preserving,
    enumerate_snc_preserving_all_through,
    enumerate_snc_reversing,
    is_annular_nc,
    is_even_cycles,
    is_noncrossing_disc,
    k_structure,
    kreweras,
    snc_grouped,
    undouble_nc,
    undouble_partitioned,
    undouble_reversing,
    unfold,
)
from .cumulants import (
    CumulantModel,
    FamilyContext,
    Letter,
    ModelError,
    TruncationError,
    Word,
    free_families_kappa,
    kappa2_grouped,
    kappa2_table_from_moments,
    kappa2_word,
    kappa_grouped,
    kappa_multiplicative,
    kappa_table_from_moments,
    moments_from_kappa_table,
    phi2_by_sum,
    phi2_cell_from_tables,
    phi_by_nc_sum,
    products_as_arguments_first,
    products_as_arguments_second,
    word_phi,
    word_phi2,
)
from .dist import (
    CircularModel,
    FreePoissonModel,
    HaarUnitaryModel,
    RDiagonalTableModel,
    SelfAdjointTableModel,
    SemicircularModel,
    build,
    emit_model,
    load_model,
    r_diagonal_model_from_word,
    self_adjoint_model_from_word,
)
from .special import (
    DeterminingSequence,
    check_product_r_diagonal,
    conjugation_by_circular,
    determining_from_square,
    determining_of_even,
    determining_of_r_diagonal,
    haar_power_cumulants,
    hermitization,
    product_free_cumulants,
    product_free_moments,
    square_cumulants,
    verify_even,
    verify_r_diagonal,
)
from .series import (
    Series1,
    Series2,
    check_first_order_relation,
    check_second_order_relation,
)
