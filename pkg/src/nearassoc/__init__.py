"""Exact computations with nearly associative algebras and their Hom-analogues."""

from .algebra import (
    AlgebraSC,
    CheckReport,
    HomAlgebra,
    IdentityId,
    LinearMap,
    Witness,
    check_hom_lie,
    check_identity,
    commutator_algebra,
    evaluate_identity,
    hom_associator,
    is_hom_lie_admissible,
    left_op,
    multiply,
    operator_identity_report,
    right_op,
)
from .bialgebra import (
    Coproduct,
    EquivalenceReport,
    check_bialgebra,
    check_coalgebra_conditions,
    check_manin_triple_equivalence,
    dual_algebra,
    manin_double,
    standard_form,
)
from .bimodules import (
    BilinearForm,
    Bimodule,
    check_bimodule,
    check_left_invariant,
    check_lie_representation,
    dual_bimodule,
    form_intertwiner,
    induced_lie_bracket,
    minus_representation,
    regular_bimodule,
    semidirect,
)
from .classify2d import (
    FamilyParams,
    IsoClass,
    classify_fp,
    classify_report_fp,
    enumerate_fp,
    family,
    isomorphism_search_fp,
    theorem31_residuals,
    verify_isomorphism,
)
from .errors import *  # noqa: F401,F403
from .matched_pairs import (
    LieMatchedPair,
    MatchedPair,
    check_dual_matched_pair,
    check_lie_matched_pair,
    check_matched_pair,
    double,
    dual_matched_pair,
    induced_lie_matched_pair,
)
from .scalars import PrimeField, QuadraticField, Rationals, context_of, scalar_arith, sqrt_in_field

__version__ = "0.1.0"
