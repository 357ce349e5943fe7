"""Symbolic branching laws for Arthur-type representations of p-adic general linear groups."""

from .branching import (
    RelevanceWitness,
    SymbolMint,
    TraceStep,
    WeaklyRelevantWitness,
    candidate_derivative_indices,
    decide_recursive,
    ext_index_formula_check,
    generic_ext_index,
    relevant,
    relevant_by_chains,
    validate_witness,
    weakly_relevant,
)
from .core_symbols import (
    TRIVIAL,
    CuspidalSymbol,
    Multisegment,
    Segment,
    ShiftedCuspidal,
    SupportMultiset,
    generic_from_support,
    linked,
    precedes,
    zelevinsky_dual,
    zelevinsky_sort,
)
from .dsl import parse, to_text
from .errors import DimensionError, InconsistentWitness, ModelError, ParseError
from .models import BranchingProblem, ModelSpec, model_answer, multiplicity_and_ext_facts, reduce_to_basic, validate
from .speh import (
    ArthurParameter,
    ArthurTypeRep,
    Positivity,
    SpehRep,
    cuspidal_support,
    dualize,
    highest_derivative,
    hook_multisegments,
    langlands_data,
    level,
    speh_left_derivative,
    speh_right_derivative,
    support_positivity,
    zelevinsky_data,
)

__version__ = "0.1.0"
