"""Finite-dimensional weak C* Hopf algebras: construction, verification,
duality, actions and crossed products, Jones towers with depth-2 extraction,
and fusion-ring sector calculus."""

from .algebra import (
    DEFAULT_TOL,
    AlgebraError,
    AlgebraElement,
    InvalidAlgebraError,
    LinearMap,
    MultiMatrixAlgebra,
    Subalgebra,
    TraceState,
    conditional_expectation,
    decompose_subalgebra,
    generate_star_subalgebra,
    nullspace,
    relative_commutant,
    tensor,
    wedderburn_decompose,
)
from .hopf import (
    CheckResult,
    ClassificationReport,
    Groupoid,
    WeakHopfAlgebra,
    classify,
    cyclic_group_table,
    full_verify,
    function_algebra,
    group_algebra,
    groupoid_algebra,
    symmetric_group_table,
)
from .duality import (
    DualPair,
    adjoint_action_matrices,
    double_dual_check,
    dualize,
    verify_adjoint_action,
    verify_dual,
)
from .actions import (
    Action,
    CrossedProduct,
    averaging_expectation,
    crossed_product,
    invariants,
    isotypic_decomposition,
    solve_symmetry_embedding,
    trivial_action,
    verify_action,
    verify_reconstruction,
)
from .towers import (
    BasicConstruction,
    ExtractionResult,
    Inclusion,
    QSystem,
    TowerContext,
    basic_construction,
    canonical_triple,
    depth,
    extract_weak_hopf,
    index,
    inner_part,
    jones_tower,
    make_inclusion,
    minimal_expectation,
    sector_table,
    verify_qsystem,
)
from .sectors import (
    FusionRing,
    SectorData,
    cyclic_ring,
    depth_two_test,
    fibonacci_ring,
    frobenius_identity_check,
    ising_ring,
    quantum_dimensions,
    sigma_oplus,
    sigma_reg,
    symmetry_dimension,
    trivial_ring,
    verify_fusion,
)

__version__ = "0.1.0"
