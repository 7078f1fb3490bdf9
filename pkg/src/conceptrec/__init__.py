"""Concept-based term recommendations from firm x term purchase contexts."""

from .concepts import BandConstraints, FormalConcept, count_band, mine_concepts
from .context import (
    FormalContext,
    closure_items,
    derive_extent,
    derive_intent,
    subcontext,
    support,
)
from .errors import (
    ConceptRecError,
    ConfigurationError,
    InvalidInputError,
    OntologyError,
    ParameterError,
    ParseError,
)
from .evaluation import FoldReport, SplitSpec, cross_validate, split_folds, test_confidence
from .morpho import Metarule, StemmerSpec, build_stem_context, gen_metarules, metarule_stats
from .onto import Ontology, generalize, neighbors, onto_metarules
from .recommend import Recommendation, recommend, recommend_all
from .rules import (
    AssociationRule,
    MiningParams,
    SupportedItemSet,
    evaluate_rule,
    exact_rules,
    informative_basis,
    mine_fci,
    mine_generators,
)
from .synthetic import gen_synthetic_context, generate_planted

__version__ = "0.1.0"
