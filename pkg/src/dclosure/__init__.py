"""Downward closures of languages as simple regular expressions."""
from .automata import Nfa, nfa, nfa_downward_saturate, nfa_equivalent
from .cfg import Cfg, cfg, cfg_parikh
from .engine import (
    CfgAdapter,
    RegularAdapter,
    decide_sup_cfg,
    decide_sup_regular,
    downward_closure,
)
from .errors import (
    AlphabetMismatch,
    BudgetExhausted,
    DClosureError,
    NotBoundedForm,
    ParseError,
)
from .sre import Sre, parse_sre, sre_to_nfa
from .transducers import Transducer, transducer

__all__ = [
    "AlphabetMismatch",
    "BudgetExhausted",
    "Cfg",
    "CfgAdapter",
    "DClosureError",
    "Nfa",
    "NotBoundedForm",
    "ParseError",
    "RegularAdapter",
    "Sre",
    "Transducer",
    "cfg",
    "cfg_parikh",
    "decide_sup_cfg",
    "decide_sup_regular",
    "downward_closure",
    "nfa",
    "nfa_downward_saturate",
    "nfa_equivalent",
    "parse_sre",
    "sre_to_nfa",
    "transducer",
]
