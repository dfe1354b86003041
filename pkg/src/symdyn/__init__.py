"""Finite-horizon symbolic dynamics toolkit."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .words import (
    Alphabet,
    BudgetExceededError,
    ConstructionError,
    InputError,
    InsufficientDepthError,
    Membership,
    SymdynError,
    WordCollection,
    hamming,
)
from .mistake import MistakeFunction
from .zoo import (
    ShiftSpec,
    at_most_one_one,
    beta_shift,
    bounded_density,
    coded_shift,
    factor_shift,
    full_shift,
    golden_mean,
    make_shift,
    product_shift,
    reflect,
    sft,
    sgap_shift,
    spec_from_doc,
    sum_map,
)
from .language import (
    contains,
    core_chain,
    core_entropy,
    enumerate_language,
    extendable_core,
    language_collection,
    language_counts,
)
from .properties import (
    Verdict,
    build_spanning_set,
    check_almost_spec,
    check_as,
    check_irreducible,
    check_las,
    check_ras,
    check_specification,
    estimate_i,
    hamming_ball,
    min_mistakes_left,
)
from .entropy import (
    bound_audit,
    empirical_measure,
    entropy_report,
    exact_entropy,
    periodic_orbit_measure,
    periodic_points,
    sft_mme,
    transfer_matrix,
    tv_distance,
)
from .structure import (
    build_gluing,
    check_closure_conditions,
    check_gluing_identity,
    classify_word,
    measure_center_approx,
    obstruction_entropies,
)
from .counterexample import audit_counterexample, build_counterexample, check_ras_loglog
from .docio import DocumentError, dump_shift_spec, load_shift_spec, parse_shift_spec
