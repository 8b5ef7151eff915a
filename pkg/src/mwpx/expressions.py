"""Expression trees over symbolic variables: tokens, parsing, serialization, exact evaluation.

Expressions are built from variables (N0, N1, ...), rational constants, and the
four binary operators + - * /. All arithmetic is exact (fractions.Fraction);
there is no floating-point evaluation mode. The operator set is fixed; adding
an operator means extending OpKind plus the precedence table and the tokenizer,
nothing else.

Wire format: tokens separated by single spaces, variables rendered "N<k>",
operators "+ - * /", infix may contain "(" and ")". A constant keeps the
lexical form it was tokenized from ("25%", "2.50"); constants compare by
rational value, not by lexical form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union


class ExpressionError(ValueError):
    """Base class for tokenizing, parsing, rendering and evaluation errors."""


class UnknownCharacterError(ExpressionError):
    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"unknown character {char!r} at position {position}")


class MalformedNumberError(ExpressionError):
    def __init__(self, lexeme: str, position: int):
        self.lexeme = lexeme
        self.position = position
        super().__init__(f"malformed number {lexeme!r} at position {position}")


class ExprSyntaxError(ExpressionError):
    """Unexpected token while parsing; `position` is an index into the token list."""

    def __init__(self, position: int, expected: str, found: object = None):
        self.position = position
        self.expected = expected
        self.found = found
        what = render_token(found) if found is not None else "end of input"
        super().__init__(f"expected {expected} at token {position}, found {what!r}")


class UnbalancedParensError(ExpressionError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unbalanced parentheses at token {position}")


class TruncatedExpressionError(ExpressionError):
    def __init__(self) -> None:
        super().__init__("token stream ended inside an expression")


class TrailingTokensError(ExpressionError):
    def __init__(self, count: int):
        self.count = count
        super().__init__(f"{count} token(s) left over after a complete expression")


class DivisionByZeroError(ExpressionError, ZeroDivisionError):
    """Division node whose right operand evaluates to zero.

    `path` locates the node from the root: a string of 'L'/'R' steps.
    """

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"division by zero at node path {path or '<root>'}")


class UnboundVariableError(ExpressionError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"no binding for variable N{index}")


class ConstantRenderError(ExpressionError):
    def __init__(self, value: Fraction):
        self.value = value
        super().__init__(
            f"constant {value} has no single-token text form "
            "(only integers, terminating decimals and percents do)"
        )


class OpKind(Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"

    @property
    def symmetric(self) -> bool:
        """Operand order is irrelevant for + and *, relevant for - and /."""
        return self in (OpKind.ADD, OpKind.MUL)

    @property
    def precedence(self) -> int:
        return 1 if self in (OpKind.ADD, OpKind.SUB) else 2

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Variable:
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"variable index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class Constant:
    value: Fraction
    # Source spelling, kept so dataset text round-trips; never part of equality.
    lexical: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Operator:
    kind: OpKind


@dataclass(frozen=True)
class OpenParen:
    pass


@dataclass(frozen=True)
class CloseParen:
    pass


Token = Union[Variable, Constant, Operator, OpenParen, CloseParen]

OPEN = OpenParen()
CLOSE = CloseParen()

_OPERATORS = {k.value: Operator(k) for k in OpKind}


@dataclass(frozen=True)
class Leaf:
    operand: Variable | Constant

    def __post_init__(self) -> None:
        if not isinstance(self.operand, (Variable, Constant)):
            raise TypeError(f"leaf operand must be a variable or constant, got {self.operand!r}")


@dataclass(frozen=True)
class Internal:
    op: OpKind
    left: "ExprTree"
    right: "ExprTree"

    def __post_init__(self) -> None:
        if not isinstance(self.op, OpKind):
            raise TypeError(f"internal node needs an OpKind, got {self.op!r}")


ExprTree = Union[Leaf, Internal]


def var(index: int) -> Variable:
    return Variable(index)


def const(value, lexical: str | None = None) -> Constant:
    return Constant(Fraction(value), lexical)


def internal_count(tree: ExprTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + internal_count(tree.left) + internal_count(tree.right)


def tree_variables(tree: ExprTree) -> set[int]:
    """Indices of all variables occurring in the tree."""
    if isinstance(tree, Leaf):
        return {tree.operand.index} if isinstance(tree.operand, Variable) else set()
    return tree_variables(tree.left) | tree_variables(tree.right)


def format_fraction(value: Fraction) -> str:
    """Render a rational as an integer or terminating decimal, raising otherwise."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ConstantRenderError(value)
    places = max(twos, fives)
    scaled = abs(value.numerator) * 10**places // value.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if value < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def render_token(token: Token) -> str:
    if isinstance(token, Variable):
        return f"N{token.index}"
    if isinstance(token, Constant):
        return token.lexical if token.lexical is not None else format_fraction(token.value)
    if isinstance(token, Operator):
        return token.kind.value
    if isinstance(token, OpenParen):
        return "("
    if isinstance(token, CloseParen):
        return ")"
    raise TypeError(f"not a token: {token!r}")


def tokens_to_str(tokens: Iterable[Token]) -> str:
    """Canonical textual form: tokens joined by single spaces."""
    return " ".join(render_token(t) for t in tokens)


_NUMBER_RE = re.compile(r"\d+\.\d+%|\d+%|\d+\.\d+|\d+")
_VARIABLE_RE = re.compile(r"N(\d+)")


def constant_from_lexeme(lexeme: str) -> Constant:
    """Constant for a numeric lexeme: integer, terminating decimal or percent."""
    body = lexeme
    scale = Fraction(1)
    if body.endswith("%"):
        body = body[:-1]
        scale = Fraction(1, 100)
    return Constant(Fraction(body) * scale, lexeme)


def tokenize(text: str) -> list[Token]:
    """Lex an expression string into tokens.

    "/" is always the division operator here; fraction literals like "1/2"
    exist only in problem text, which the number-mapping lexer handles.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(OPEN)
            i += 1
            continue
        if ch == ")":
            tokens.append(CLOSE)
            i += 1
            continue
        if ch in _OPERATORS:
            tokens.append(_OPERATORS[ch])
            i += 1
            continue
        if ch == "N":
            m = _VARIABLE_RE.match(text, i)
            if not m:
                raise MalformedNumberError(text[i : i + 2], i)
            tokens.append(Variable(int(m.group(1))))
            i = m.end()
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            if not m:
                raise MalformedNumberError(ch, i)
            tokens.append(constant_from_lexeme(m.group()))
            i = m.end()
            continue
        raise UnknownCharacterError(ch, i)
    return tokens


def parse_infix(tokens: Iterable[Token]) -> ExprTree:
    """Parse an infix token stream: usual precedence, left associativity, parens.

    Unary minus is rejected; number-mapped dataset expressions never need it.
    """
    toks = list(tokens)
    pos = 0

    def peek() -> Token | None:
        return toks[pos] if pos < len(toks) else None

    def parse_binary(level: int) -> ExprTree:
        nonlocal pos
        node = parse_factor() if level == 2 else parse_binary(level + 1)
        while True:
            t = peek()
            if not isinstance(t, Operator) or t.kind.precedence != level:
                return node
            pos += 1
            rhs = parse_factor() if level == 2 else parse_binary(level + 1)
            node = Internal(t.kind, node, rhs)

    def parse_factor() -> ExprTree:
        nonlocal pos
        t = peek()
        if t is None:
            raise ExprSyntaxError(pos, "operand")
        if isinstance(t, (Variable, Constant)):
            pos += 1
            return Leaf(t)
        if isinstance(t, OpenParen):
            pos += 1
            node = parse_binary(1)
            if not isinstance(peek(), CloseParen):
                raise UnbalancedParensError(pos)
            pos += 1
            return node
        raise ExprSyntaxError(pos, "operand", t)

    tree = parse_binary(1)
    rest = peek()
    if rest is not None:
        if isinstance(rest, CloseParen):
            raise UnbalancedParensError(pos)
        raise ExprSyntaxError(pos, "operator or end of input", rest)
    return tree


def parse_prefix(tokens: Iterable[Token]) -> ExprTree:
    """Parse a pre-order token stream; consumes all tokens exactly."""
    toks = list(tokens)
    pos = 0

    def parse_node() -> ExprTree:
        nonlocal pos
        if pos >= len(toks):
            raise TruncatedExpressionError()
        t = toks[pos]
        pos += 1
        if isinstance(t, Operator):
            left = parse_node()
            right = parse_node()
            return Internal(t.kind, left, right)
        if isinstance(t, (Variable, Constant)):
            return Leaf(t)
        raise ExprSyntaxError(pos - 1, "operator or operand", t)

    tree = parse_node()
    if pos != len(toks):
        raise TrailingTokensError(len(toks) - pos)
    return tree


def serialize_infix(tree: ExprTree) -> list[Token]:
    """Infix tokens with minimal parentheses.

    A child is parenthesized exactly when its precedence is lower than its
    parent's, or equal while it is the right operand; that is what a
    left-associative re-parse needs to rebuild the identical tree.
    """
    out: list[Token] = []

    def emit(node: ExprTree, parent_prec: int, is_right: bool) -> None:
        if isinstance(node, Leaf):
            out.append(node.operand)
            return
        prec = node.op.precedence
        wrap = prec < parent_prec or (prec == parent_prec and is_right)
        if wrap:
            out.append(OPEN)
        emit(node.left, prec, False)
        out.append(Operator(node.op))
        emit(node.right, prec, True)
        if wrap:
            out.append(CLOSE)

    emit(tree, 0, False)
    return out


def serialize_prefix(tree: ExprTree) -> list[Token]:
    out: list[Token] = []

    def emit(node: ExprTree) -> None:
        if isinstance(node, Leaf):
            out.append(node.operand)
            return
        out.append(Operator(node.op))
        emit(node.left)
        emit(node.right)

    emit(tree)
    return out


def serialize(tree: ExprTree, notation: str) -> list[Token]:
    if notation == "prefix":
        return serialize_prefix(tree)
    if notation == "infix":
        return serialize_infix(tree)
    raise ValueError(f"unknown notation {notation!r}")


def parse(tokens: Iterable[Token], notation: str) -> ExprTree:
    if notation == "prefix":
        return parse_prefix(tokens)
    if notation == "infix":
        return parse_infix(tokens)
    raise ValueError(f"unknown notation {notation!r}")


def parse_str(text: str, notation: str = "infix") -> ExprTree:
    return parse(tokenize(text), notation)


def to_str(tree: ExprTree, notation: str = "infix") -> str:
    return tokens_to_str(serialize(tree, notation))


def evaluate(tree: ExprTree, bindings: Mapping[int, Fraction]) -> Fraction:
    """Exact rational value of the tree under the given variable bindings."""

    def walk(node: ExprTree, path: str) -> Fraction:
        if isinstance(node, Leaf):
            operand = node.operand
            if isinstance(operand, Variable):
                try:
                    return Fraction(bindings[operand.index])
                except KeyError:
                    raise UnboundVariableError(operand.index) from None
            return operand.value
        left = walk(node.left, path + "L")
        right = walk(node.right, path + "R")
        op = node.op
        if op is OpKind.ADD:
            return left + right
        if op is OpKind.SUB:
            return left - right
        if op is OpKind.MUL:
            return left * right
        if right == 0:
            raise DivisionByZeroError(path)
        return left / right

    return walk(tree, "")


def iter_preorder(tree: ExprTree) -> Iterator[ExprTree]:
    """All subtrees in pre-order (node before children)."""
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Internal):
            stack.append(node.right)
            stack.append(node.left)
