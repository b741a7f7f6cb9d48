"""Mod-2 cohomology of real Bott manifolds and related integer machinery.

The package splits into a polynomial layer (:mod:`bottforge.gf2ring`),
characteristic classes (:mod:`bottforge.charclass`), a candidate search
(:mod:`bottforge.search`), finitely generated abelian groups with Smith
normal form (:mod:`bottforge.abelian`), odometer towers over expanding
integer matrices (:mod:`bottforge.odometer`), and a command line front end
(:mod:`bottforge.cli`).
"""

from .abelian import (
    FgAbGroup,
    HypothesisViolation,
    IntMatrix,
    SmithDecomposition,
    StationarySystem,
    check_beta_torsion_iso,
    direct_limit_torsion,
    exponent_plus_one_identity,
    limit_torsion_bound,
    smith_normal_form,
    torsion_subgroup,
)
from .charclass import (
    SwReport,
    counterexample_criterion,
    orientable_by_rowsums,
    stiefel_whitney,
    total_steenrod_square,
    total_stiefel_whitney,
)
from .gf2ring import (
    BottMatrix,
    Gf2Poly,
    InvalidMatrixError,
    RingContext,
    add,
    basis_masks,
    format_monomial,
    make_context,
    multiply,
    pairing_matrix,
    parse_monomial,
    reduce_exponents,
    relation_strings,
    square,
)
from .odometer import (
    BudgetExceeded,
    LevelPoint,
    OdometerTower,
    SingularMatrixError,
    act,
    escape_level,
    expanding_check,
    is_transitive,
    level_order,
    project,
)
from .search import (
    SearchHit,
    SearchSpec,
    SearchStats,
    SpecTooLargeError,
    collect_hits,
    enumerate_space,
    hit_record,
    minimal_dimension_survey,
    reproduce_reference,
    run_partitioned,
)

__version__ = "0.1.0"

__all__ = [
    "BottMatrix",
    "BudgetExceeded",
    "FgAbGroup",
    "Gf2Poly",
    "HypothesisViolation",
    "IntMatrix",
    "InvalidMatrixError",
    "LevelPoint",
    "OdometerTower",
    "RingContext",
    "SearchHit",
    "SearchSpec",
    "SearchStats",
    "SingularMatrixError",
    "SmithDecomposition",
    "SpecTooLargeError",
    "StationarySystem",
    "SwReport",
    "act",
    "add",
    "basis_masks",
    "check_beta_torsion_iso",
    "collect_hits",
    "counterexample_criterion",
    "direct_limit_torsion",
    "enumerate_space",
    "escape_level",
    "expanding_check",
    "exponent_plus_one_identity",
    "format_monomial",
    "hit_record",
    "is_transitive",
    "level_order",
    "limit_torsion_bound",
    "make_context",
    "minimal_dimension_survey",
    "multiply",
    "orientable_by_rowsums",
    "pairing_matrix",
    "parse_monomial",
    "project",
    "reduce_exponents",
    "relation_strings",
    "reproduce_reference",
    "run_partitioned",
    "smith_normal_form",
    "square",
    "stiefel_whitney",
    "torsion_subgroup",
    "total_steenrod_square",
    "total_stiefel_whitney",
    "__version__",
]
