"""Replace number lexemes in problem text with symbolic variables N0, N1, ...

Number lexemes, in longest-match order: decimal percents ("2.5%"), integer
percents ("20%"), integer fractions written without spaces ("3/4"), decimals
("3.14"), integers ("12"). A percent p% binds p/100 and a fraction a/b binds
the rational a/b. Every occurrence gets its own symbol, numbered by first
character offset, even when values repeat.

Fullwidth forms are normalized before lexing (the table below); the
normalization is one-to-one per character, so spans always index the original
text and the recorded lexical form is the original spelling.

In expression strings "/" is the division operator, never a fraction: fraction
constants can only enter through this module, where the source text is there
to disambiguate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .expressions import Constant, Token, Variable

# Fullwidth character -> ASCII, applied before number lexing.
FULLWIDTH_NORMALIZATION = {
    "０": "0", "１": "1", "２": "2", "３": "3", "４": "4",
    "５": "5", "６": "6", "７": "7", "８": "8", "９": "9",
    "％": "%", "．": ".", "／": "/",
}

_NORMALIZE = str.maketrans(FULLWIDTH_NORMALIZATION)

# Leading guard keeps the lexer out of symbols like "N0" and off number tails.
_LEXEME_RE = re.compile(r"(?<![A-Za-z0-9])(?:\d+\.\d+%|\d+%|\d+/\d+|\d+\.\d+|\d+)")

# Sentence-ending punctuation for the last-sentence question splitter.
_BOUNDARY_CHARS = "。．.！!？?；;，,"


@dataclass
class NumberBinding:
    symbol: int
    value: Fraction
    span: tuple[int, int]
    lexical: str


@dataclass
class MappedProblem:
    original_text: str
    mapped_text: str
    bindings: list[NumberBinding]
    # Constants seen in this problem's expression with no matching text number
    # (world-knowledge values like 1 or 3.14); filled by map_expression.
    unmapped_constants: list[Fraction] = field(default_factory=list)


def lexeme_value(lexeme: str) -> Fraction:
    norm = lexeme.translate(_NORMALIZE)
    if norm.endswith("%"):
        return Fraction(norm[:-1]) / 100
    if "/" in norm:
        a, b = norm.split("/")
        return Fraction(int(a), int(b))
    return Fraction(norm)


def map_numbers(text: str) -> MappedProblem:
    """Replace each number lexeme with N0, N1, ... in first-offset order."""
    norm = text.translate(_NORMALIZE)
    bindings: list[NumberBinding] = []
    pieces: list[str] = []
    last = 0
    for i, m in enumerate(_LEXEME_RE.finditer(norm)):
        start, end = m.span()
        bindings.append(NumberBinding(i, lexeme_value(m.group()), (start, end), text[start:end]))
        pieces.append(text[last:start])
        pieces.append(f"N{i}")
        last = end
    pieces.append(text[last:])
    return MappedProblem(text, "".join(pieces), bindings)


def map_expression(expr: list[Token], problem: MappedProblem) -> list[Token]:
    """Replace constants with the problem's variables, greedily left to right.

    Each binding is consumed at most once per expression; a constant with no
    unconsumed binding of equal value stays a constant and its value is
    appended to ``problem.unmapped_constants``.
    """
    consumed: set[int] = set()
    out: list[Token] = []
    for token in expr:
        if isinstance(token, Constant):
            match = next(
                (b for b in problem.bindings if b.symbol not in consumed and b.value == token.value),
                None,
            )
            if match is not None:
                consumed.add(match.symbol)
                out.append(Variable(match.symbol))
            else:
                problem.unmapped_constants.append(token.value)
                out.append(token)
        else:
            out.append(token)
    return out


def _is_boundary(text: str, i: int) -> bool:
    ch = text[i]
    if ch not in _BOUNDARY_CHARS:
        return False
    if ch in ".．,，":
        # A dot or comma between digits is part of a number, not a sentence end.
        before = i > 0 and text[i - 1].isdigit()
        after = i + 1 < len(text) and text[i + 1].isdigit()
        if before and after:
            return False
    return True


def split_context_question(text: str) -> tuple[str, str]:
    """Heuristic last-sentence split: context, question; concatenation
    reproduces the input exactly.

    The question is everything after the last sentence-ending punctuation mark
    (ignoring a terminal one). Real data splits are human work; this is only a
    mechanical stand-in for question-removal experiments.
    """
    stripped = text.rstrip()
    if not stripped:
        return text, ""
    i = len(stripped) - 1
    if _is_boundary(stripped, i):
        i -= 1
    while i >= 0 and not _is_boundary(stripped, i):
        i -= 1
    if i < 0:
        return "", text
    return text[: i + 1], text[i + 1 :]


def map_problem(context: str, question: str) -> tuple[str, str, MappedProblem]:
    """Map numbers across context and question with one shared numbering.

    Returns (mapped_context, mapped_question, problem) where the problem holds
    the bindings for the concatenated text.
    """
    boundary = len(context)
    problem = map_numbers(context + question)
    mapped_boundary = boundary
    for b in problem.bindings:
        start, end = b.span
        if end <= boundary:
            mapped_boundary += len(f"N{b.symbol}") - (end - start)
        elif start < boundary:
            # A lexeme straddling the join is treated as context-side.
            mapped_boundary += len(f"N{b.symbol}") - (boundary - start)
    return problem.mapped_text[:mapped_boundary], problem.mapped_text[mapped_boundary:], problem
