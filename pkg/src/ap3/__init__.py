"""Exact 3-term arithmetic progression counting over Z and Z/NZ, exhaustive
extremal search with isomorph rejection, generators for the extremal set
families, structural checkers, and a rational bounds ledger for the limit
densities of extremal counts."""

from .sets import (
    AffineMap,
    CanonicalForm,
    IntegerSet,
    ResidueSet,
    affine_orbit_transversal,
    canonicalize,
    difference_set,
    dilate,
    is_prime,
    iterated_sumset,
    load_set,
    orbit_size,
    set_from_document,
    set_to_document,
    sumset,
    translate,
)
from .counting import (
    ComplementCheck,
    CountReport,
    WeightVector,
    additive_energy,
    complement_identity_check,
    count_report,
    doubling_delta,
    midpoint_upper_bound,
    t3_fast,
    t3_integers,
    t3_naive,
    t3_trilinear,
)
from .constructions import (
    FamilyTag,
    behrend_best_radius,
    behrend_set,
    embed_mod,
    family_tags,
    generate_family,
    intersect_search,
    optimize_wraparound,
    random_set,
    wrap_parameter_estimate,
    wraparound_complement,
)
from .search import (
    BudgetExceededError,
    ClassificationResult,
    ExtremalResult,
    classify_extremal,
    extremal_mod,
    extremal_mod_via_complement,
    max3ap_integers,
    threshold_scan,
)
from .bounds import (
    BoundRecord,
    Ledger,
    build_default_ledger,
    complement_transfer,
    construction_bound,
    curve_m3_upper,
    ef_sharpness_cutoff,
    exact_small_alpha,
    identity_value,
    submultiplicative_closure,
)
from .structure import (
    ConditionReport,
    Decomposition,
    RectificationResult,
    check_final_lemma,
    check_t3_energy_inequality,
    check_union_doubling,
    decompose_heuristic,
    rectify,
    verify_decomposition,
)

__version__ = "0.1.0"
