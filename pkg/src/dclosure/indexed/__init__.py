"""Indexed grammars: derivations, normal form and the transformation pipeline."""
from .derive import bounded_language, derive_step, derive_words, downward_member, index_word_member
from .grammar import (
    IndexedGrammar,
    IntervalGrammar,
    PartitionedGrammar,
    Production,
    example_grammar,
    indexed_grammar,
    pop,
    push,
    rule,
)
from .interval import partitioned_family, to_interval, to_productive
from .iw import IndexAnalysis, iw_automaton
from .normal import is_normal, normalize
from .pcp import nu, pcp_grammar
from .triple import triple_construct

__all__ = [
    "IndexAnalysis",
    "IndexedGrammar",
    "IntervalGrammar",
    "PartitionedGrammar",
    "Production",
    "bounded_language",
    "derive_step",
    "derive_words",
    "downward_member",
    "example_grammar",
    "index_word_member",
    "indexed_grammar",
    "is_normal",
    "iw_automaton",
    "normalize",
    "nu",
    "partitioned_family",
    "pcp_grammar",
    "pop",
    "push",
    "rule",
    "to_interval",
    "to_productive",
    "triple_construct",
]
