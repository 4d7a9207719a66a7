"""Workbench for universal sentences over ordered finite structures.

Submodules: syntax (AST, signatures, metrics, combinators), parser
(text form), structures (finite models and evaluation), spectrum
(model finding), locality (closure depth certification), schmerl
(partition properties), stretching (indiscernibles and prefixes),
ordinals (Cantor normal form below omega^omega), catalog (shipped
sentences and models), cli (the `locus` command).
"""

from .locality import LocalityReport, certify, check_condition_a, max_closure_depth
from .ordinals import OrdinalCNF, ord_add, ord_compare, parse_ordinal, render_ordinal
from .parser import parse_sentence
from .schmerl import (
    InfeasibleParameters,
    PartitionFamily,
    PartitionPropertyResult,
    WitnessSet,
    check_witness,
    extract_partitions,
    holds_P,
    is_homogeneous,
    psi3_oracle,
    ramsey_sanity,
)
from .spectrum import (
    BlindSearchDisallowed,
    SearchBudgetExceeded,
    SpectrumResult,
    find_model,
    finite_spectrum,
    iter_models,
    iter_models_naive,
)
from .stretching import (
    IndiscernibleFlags,
    IndiscernibleWitness,
    PatternCapacityError,
    StretchPrefix,
    StretchReport,
    classify,
    find_indiscernibles,
    prefix_embedding,
    stretch_prefix,
    verify_stretch,
)
from .structures import (
    FiniteStructure,
    closure,
    generated_substructure,
    satisfies,
    structure_from_json,
    structure_to_json,
)
from .syntax import (
    Signature,
    UniversalSentence,
    compute_N,
    conjoin,
    sentence_text,
    term_metrics,
    union_sentence,
)

__version__ = "0.1.0"

__all__ = [
    "BlindSearchDisallowed",
    "FiniteStructure",
    "IndiscernibleFlags",
    "IndiscernibleWitness",
    "InfeasibleParameters",
    "LocalityReport",
    "OrdinalCNF",
    "PartitionFamily",
    "PartitionPropertyResult",
    "PatternCapacityError",
    "SearchBudgetExceeded",
    "Signature",
    "SpectrumResult",
    "StretchPrefix",
    "StretchReport",
    "UniversalSentence",
    "WitnessSet",
    "certify",
    "check_condition_a",
    "check_witness",
    "classify",
    "closure",
    "compute_N",
    "conjoin",
    "extract_partitions",
    "find_indiscernibles",
    "find_model",
    "finite_spectrum",
    "generated_substructure",
    "holds_P",
    "is_homogeneous",
    "iter_models",
    "iter_models_naive",
    "max_closure_depth",
    "ord_add",
    "ord_compare",
    "parse_ordinal",
    "parse_sentence",
    "prefix_embedding",
    "psi3_oracle",
    "ramsey_sanity",
    "render_ordinal",
    "satisfies",
    "sentence_text",
    "stretch_prefix",
    "structure_from_json",
    "structure_to_json",
    "term_metrics",
    "union_sentence",
    "verify_stretch",
]
