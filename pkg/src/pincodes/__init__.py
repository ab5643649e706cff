"""Quantum pin codes: build CSS and gauge codes from pinned-set relations,
check multi-orthogonality and transversal phase gates, and search punctured
triorthogonal codes for magic-state distillation."""

__version__ = "0.1.0"

from .f2la import (
    BitMatrix,
    BitVector,
    StandardFormDecomposition,
    nullspace_basis,
    rank,
    rref,
    standard_form,
    wedge_weight,
)
from .relation import (
    Flag,
    Pin,
    PinCodeRelation,
    PinnedSet,
    ValidationReport,
    complement,
    load_relation,
    save_relation,
)
from .builders import (
    ChainComplex,
    c422_relation,
    capped_ladder_complex,
    complete_relation,
    from_chain_complex,
    ladder_variants,
    load_chain_complex,
    reed_muller_relation,
    rm_generator_matrix,
    save_chain_complex,
    steane_relation,
    tensor_product,
    torus_tiling,
    triangular_color_relation,
)
from .coxeter import (
    CosetTable,
    EnumerationBudgetError,
    GroupPresentation,
    coxeter_relation,
    load_presentation,
    save_presentation,
    todd_coxeter,
)
from .csscode import (
    CssCode,
    GaugeCode,
    LogicalBasis,
    build_pin_code,
    code_stats,
    compute_k,
    css_from_imposed_logicals,
    gauge_code,
    logical_basis,
    syndrome_redundancy,
)
from .distance import (
    DistanceBudget,
    DistanceResult,
    ExactDistanceInfeasible,
    distance,
)
from .transversal import (
    TransversalityReport,
    WeightedPolynomial,
    check_exact_transversality,
    check_quasi_transversality,
    check_two_logical_condition,
    correction_polynomial,
    extract_logical_polynomial,
    is_multi_even,
    is_multi_orthogonal,
    transversality_report,
)
from .distill import (
    CczCode,
    LevelMismatch,
    PunctureResult,
    ccz_code,
    gamma,
    puncture_search,
    triortho_split,
    x_for_level,
)
from .shrunk import ShrunkComplex, homology_basis, lift_homology, shrunk_complex
