"""Minimal template programs: relation trees compressed by structural repeats."""
from .analysis import (CheckResult, CountDivergence, MinimalHypergraph, SizeDistribution,
                       check_template, enumerate_minimal, extract_minimal, size_distribution)
from .core import (FREE, HOLE, STAR, Id, Node, Pure, Ref, Rep, TemplateError, comb,
                   embed_derivation, evaluate, format_comb, parse_comb, size)
from .engine import (Chart, EngineConfig, NoParse, SearchBoundError, best_first,
                     best_first_chart, forward_chain)
from .grammar import Grammar, GrammarError, Relation, builtin_grammar, builtin_sequence

__all__ = [
    "FREE", "HOLE", "STAR", "Id", "Node", "Pure", "Ref", "Rep", "TemplateError", "comb",
    "embed_derivation", "evaluate", "format_comb", "parse_comb", "size",
    "Grammar", "GrammarError", "Relation", "builtin_grammar", "builtin_sequence",
    "Chart", "EngineConfig", "NoParse", "SearchBoundError", "best_first",
    "best_first_chart", "forward_chain",
    "CheckResult", "CountDivergence", "MinimalHypergraph", "SizeDistribution",
    "check_template", "enumerate_minimal", "extract_minimal", "size_distribution",
]
