"""In-process binding of the three stream operations for training loops.

Everything crosses this boundary as plain strings and integers -- no tree
objects -- so a training loop never depends on the core's internal types and
the surface cannot skew from the CLI: each function produces exactly the
fields the matching CLI line would carry, byte for byte.

Errors surface as the core's exceptions (subclasses of ValueError carrying
the core error name). The binding holds no state; every call is independent
and safe under the host's threading model.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import mwpx
from mwpx.dts import DtsQuery, lex_model_output
from mwpx.dts import dts_select as _core_select
from mwpx.equivalence import enumerate_algo1 as _algo1
from mwpx.equivalence import enumerate_closure as _closure
from mwpx.expressions import parse_str, to_str, tokens_to_str

__version__ = mwpx.__version__

__all__ = [
    "__version__",
    "enumerate_algorithm1",
    "enumerate_closure",
    "dts_select",
    "dts_select_batch",
]

DtsSelection = tuple[list[str], int, int]


def enumerate_algorithm1(
    expression: str, notation: str = "infix", dedup: bool = True
) -> list[str]:
    """Equivalents from the bottom-up swap pass, original first.

    Mirrors ``mwpx equiv --mode algo1``: one serialized expression per member,
    in the input's notation.
    """
    tree = parse_str(expression, notation)
    return [to_str(t, notation) for t in _algo1(tree, dedup=dedup).items]


def enumerate_closure(expression: str, notation: str = "infix") -> list[str]:
    """The full commutative closure, original first.

    Mirrors ``mwpx equiv --mode closure``.
    """
    tree = parse_str(expression, notation)
    return [to_str(t, notation) for t in _closure(tree).items]


def dts_select(
    gold_infix: str,
    model_output_tokens: Sequence[str],
    mode: str = "closure",
    notation: str = "prefix",
) -> DtsSelection:
    """(target tokens, common prefix length, candidate index) for one query.

    Mirrors one ``mwpx dts`` line: the gold expression is infix, the model
    output is the decode-so-far as token strings (malformed pieces simply
    never match), and the target comes back serialized in ``notation``.
    """
    gold = parse_str(gold_infix, "infix")
    output = lex_model_output(" ".join(model_output_tokens))
    result = _core_select(DtsQuery(gold, output, notation=notation, mode=mode))
    return [tokens_to_str([t]) for t in result.target], result.match_len, result.candidate_index


def dts_select_batch(
    queries: Iterable[tuple[str, Sequence[str]]],
    mode: str = "closure",
    notation: str = "prefix",
) -> list[DtsSelection]:
    """Element-wise dts_select over (gold_infix, model_output_tokens) pairs,
    results in query order."""
    return [dts_select(gold, output, mode=mode, notation=notation) for gold, output in queries]
