"""Expression-tree toolkit for math word problem data.

Core pieces: exact expression trees (parse, serialize, evaluate), commutative
equivalence enumeration, longest-prefix dynamic target selection for training
loops, number mapping of problem text, expression variation generators, and
line-delimited dataset plumbing. See the CLI (``python -m mwpx``) for the
stream interfaces.
"""

__version__ = "0.1.0"

from .dataset import (
    MwpSample,
    ReadResult,
    StatsReport,
    make_delq,
    read_dataset,
    split_by_source,
    stats,
    write_dataset,
)
from .dts import DtsQuery, DtsResult, common_prefix_len, dts_select, dts_select_batch
from .equivalence import (
    EquivalenceList,
    enumerate_algo1,
    enumerate_closure,
    symmetric_node_count,
)
from .expressions import (
    Constant,
    ExprTree,
    Internal,
    Leaf,
    OpKind,
    Operator,
    Token,
    Variable,
    evaluate,
    parse_infix,
    parse_prefix,
    parse_str,
    serialize_infix,
    serialize_prefix,
    to_str,
    tokenize,
    tokens_to_str,
)
from .number_mapping import MappedProblem, map_expression, map_numbers, split_context_question
from .variations import (
    FilterPolicy,
    VariationCandidate,
    filter_candidates,
    gen_sub,
    gen_va,
    gen_whole,
)

__all__ = [
    "__version__",
    "MwpSample", "ReadResult", "StatsReport", "make_delq", "read_dataset",
    "split_by_source", "stats", "write_dataset",
    "DtsQuery", "DtsResult", "common_prefix_len", "dts_select", "dts_select_batch",
    "EquivalenceList", "enumerate_algo1", "enumerate_closure", "symmetric_node_count",
    "Constant", "ExprTree", "Internal", "Leaf", "OpKind", "Operator", "Token",
    "Variable", "evaluate", "parse_infix", "parse_prefix", "parse_str",
    "serialize_infix", "serialize_prefix", "to_str", "tokenize", "tokens_to_str",
    "MappedProblem", "map_expression", "map_numbers", "split_context_question",
    "FilterPolicy", "VariationCandidate", "filter_candidates",
    "gen_sub", "gen_va", "gen_whole",
]
