"""Dynamic target selection: pick, among the equivalents of a gold expression,
the serialization sharing the longest token prefix with a partial model output.

The model output is an in-flight decode: it may be empty, truncated, or not a
well-formed expression at all. Selection only ever compares tokens, so nothing
here can fail on malformed input. How the caller obtains the partial output
(greedy decode, sampling, teacher forcing) is the training loop's concern.

Ties go to the original gold expression when it attains the maximum, then to
the lowest candidate index, so a run with no usable prefix degrades to
ordinary single-target training.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .equivalence import enumerate_equivalents
from .expressions import (
    ExpressionError,
    ExprTree,
    Token,
    serialize,
    tokenize,
)

# A model-output element: a proper token, or a raw string for anything that
# does not lex (raw strings compare unequal to every token).
OutputItem = Union[Token, str]


@dataclass(frozen=True)
class DtsQuery:
    gold: ExprTree
    model_output: tuple[OutputItem, ...]
    notation: str = "prefix"
    mode: str = "closure"


@dataclass(frozen=True)
class DtsResult:
    target: tuple[Token, ...]
    match_len: int
    candidate_index: int
    improved: bool


def common_prefix_len(a: Sequence, b: Sequence) -> int:
    """Largest n with a[:n] == b[:n], element-wise."""
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def lex_model_output(text: str) -> tuple[OutputItem, ...]:
    """Lenient lexing of a partial decode.

    The whole string is tokenized when possible; otherwise it is split on
    whitespace and lexed piecewise, keeping unlexable pieces as raw strings.
    """
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(tokenize(text))
    except ExpressionError:
        items: list[OutputItem] = []
        for piece in text.split():
            try:
                items.extend(tokenize(piece))
            except ExpressionError:
                items.append(piece)
        return tuple(items)


def dts_select(query: DtsQuery) -> DtsResult:
    """Return the equivalent of ``gold`` maximizing the common prefix.

    Candidates come from ``enumerate_equivalents(gold, mode)`` with the origin
    at index 0; scanning for a strictly larger match therefore implements both
    tie-break rules at once.
    """
    candidates = enumerate_equivalents(query.gold, query.mode)
    serialized = [tuple(serialize(t, query.notation)) for t in candidates.items]
    best_index = 0
    best_len = common_prefix_len(serialized[0], query.model_output)
    gold_len = best_len
    for index in range(1, len(serialized)):
        length = common_prefix_len(serialized[index], query.model_output)
        if length > best_len:
            best_index, best_len = index, length
    return DtsResult(
        target=serialized[best_index],
        match_len=best_len,
        candidate_index=best_index,
        improved=best_len > gold_len,
    )


def dts_select_batch(queries: Sequence[DtsQuery]) -> list[DtsResult]:
    return [dts_select(q) for q in queries]
