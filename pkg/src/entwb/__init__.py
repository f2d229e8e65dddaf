"""Maximally entangled three-qubit states via the geometric measure.

The package computes the closest product state of a three-qubit pure state,
its generalized Schmidt form, the degeneracy condition that singles out the
maximally entangled states at each gauge phase, and the usual entanglement
measures along that family.
"""
from .errors import (
    CanonicalizationFailure,
    ComplexRoot,
    ConstraintViolation,
    DegenerateClosest,
    EntanglementError,
    IndefiniteAtW,
    InvalidAngle,
    NoConvergence,
    NonPositive,
    NonUnitary,
    NotUnit,
    NoValidRoot,
    ZeroState,
)
from .family import (
    FamilyPoint,
    RootBranches,
    asymptotic_g_near_w,
    degeneracy_roots,
    exact_g_near_w,
    family_scan,
    max_entangled_state,
    separation_check,
    special_case_check,
)
from .geometric import canonicalize, closest_product_state, stationarity_residual
from .measures import (
    MeasureReport,
    classify_slocc,
    concurrence,
    er_lower_bound,
    measure_report,
    negativity,
    survey,
    three_tangle_amplitudes,
    three_tangle_gsd,
)
from .sampler import haar_random_state, verify_family_envelope
from .states import CanonicalForm, SymmetricGSD, ghz_state, w_state

__version__ = "0.1.0"
