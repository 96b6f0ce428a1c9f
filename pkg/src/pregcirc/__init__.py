"""Pregroup sentences to tensor meanings and parametrised quantum circuits."""

from .pregroup import (Grammar, GrammarError, PregroupType, ReductionLinkage,
                       SimpleType, is_grammatical, parse_type, reduce)
from .diagram import (Diagram, DiagramError, Node, bigraph_rewrite,
                      distance_from_root, from_reduction, snake_removal,
                      substitute_cap_words)
from .fvect import DimConfig, evaluate
from .circuit import Angle, Circuit, Gate, ParameterStore, export, to_qasm
from .compiler import (QubitConfig, choi_form, compile_bigraph,
                       compile_grammar_meaning, qubit_count,
                       transpose_to_effect, word_state_ansatz)
from .simulator import MeaningState, amplitude, circuit_unitary, fidelity, simulate
from .training import PairTask, optimize, pair_loss
from .lexicon import Lexicon

__version__ = "0.1.0"

__all__ = [
    "Grammar", "GrammarError", "PregroupType", "ReductionLinkage", "SimpleType",
    "is_grammatical", "parse_type", "reduce",
    "Diagram", "DiagramError", "Node", "bigraph_rewrite", "distance_from_root",
    "from_reduction", "snake_removal", "substitute_cap_words",
    "DimConfig", "evaluate",
    "Angle", "Circuit", "Gate", "ParameterStore", "export", "to_qasm",
    "QubitConfig", "choi_form", "compile_bigraph", "compile_grammar_meaning",
    "qubit_count", "transpose_to_effect", "word_state_ansatz",
    "MeaningState", "amplitude", "circuit_unitary", "fidelity", "simulate",
    "PairTask", "optimize", "pair_loss",
    "Lexicon",
]
