"""Candidate expression variations for a mapped problem.

Three generators, kept disjoint by construction:

* ``gen_va``    -- pairwise variable combinations over each operator,
* ``gen_sub``   -- single-operator edits inside proper sub-expressions,
* ``gen_whole`` -- single-operator edits applied to the full expression.

"Changing the operators" means one edit at a time; the cross-product of all
reassignments explodes combinatorially and adds nothing a human annotator
could use. ``filter_candidates`` is the mechanical pre-filter applied before
candidates go out for question annotation; whether a surviving expression is
meaningful stays a human call.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .expressions import (
    DivisionByZeroError,
    ExprTree,
    Internal,
    Leaf,
    OpKind,
    Variable,
    evaluate,
    to_str,
)

KIND_VA = "va"
KIND_SUB = "sub"
KIND_WHOLE = "whole"
KIND_MANUAL = "manual"

_OP_ORDER = (OpKind.ADD, OpKind.SUB, OpKind.MUL, OpKind.DIV)

REASON_DIVISION_BY_ZERO = "DivisionByZero"
REASON_NEGATIVE = "Negative"
REASON_DUPLICATE_VALUE = "DuplicateValue"
REASON_EQUALS_ORIGINAL = "EqualsOriginal"


class TooFewVariablesError(ValueError):
    def __init__(self, count: int):
        self.count = count
        super().__init__(f"need at least 2 distinct variables, got {count}")


class NoOperatorNodesError(ValueError):
    def __init__(self) -> None:
        super().__init__("expression has no operator node to edit")


@dataclass(frozen=True)
class VariationCandidate:
    expr: ExprTree
    kind: str
    provenance: str
    parent_id: str | None = None


@dataclass(frozen=True)
class FilterPolicy:
    """Which mechanical removals to apply; an all-default policy removes nothing."""

    nonzero: bool = False
    nonnegative: bool = False
    dedup_value: bool = False
    original_value: Fraction | None = None

    @property
    def empty(self) -> bool:
        return not (self.nonzero or self.nonnegative or self.dedup_value) and (
            self.original_value is None
        )


@dataclass
class RemovedCandidate:
    candidate: VariationCandidate
    reason: str


@dataclass
class FilterResult:
    kept: list[VariationCandidate]
    removed: list[RemovedCandidate]


def gen_va(variables: list[int], parent_id: str | None = None) -> list[VariationCandidate]:
    """All two-variable combinations: per pair i<j, the symmetric ops once
    (Ni+Nj, Ni*Nj) and the non-symmetric ops both ways, six candidates total.
    """
    distinct = sorted(set(variables))
    if len(distinct) < 2:
        raise TooFewVariablesError(len(distinct))
    out: list[VariationCandidate] = []
    for i, j in combinations(distinct, 2):
        ni, nj = Leaf(Variable(i)), Leaf(Variable(j))
        forms = [
            Internal(OpKind.ADD, ni, nj),
            Internal(OpKind.MUL, ni, nj),
            Internal(OpKind.SUB, ni, nj),
            Internal(OpKind.SUB, nj, ni),
            Internal(OpKind.DIV, ni, nj),
            Internal(OpKind.DIV, nj, ni),
        ]
        for expr in forms:
            out.append(
                VariationCandidate(
                    expr, KIND_VA, f"pair=(N{i},N{j}) expr={to_str(expr)}", parent_id
                )
            )
    return out


def _internal_positions(tree: ExprTree) -> list[tuple[int, ExprTree, tuple[str, ...]]]:
    """Internal nodes as (pre-order position over all nodes, node, path)."""
    found: list[tuple[int, ExprTree, tuple[str, ...]]] = []
    counter = [0]

    def walk(node: ExprTree, path: tuple[str, ...]) -> None:
        pos = counter[0]
        counter[0] += 1
        if isinstance(node, Leaf):
            return
        found.append((pos, node, path))
        walk(node.left, path + ("L",))
        walk(node.right, path + ("R",))

    walk(tree, ())
    return found


def _replace_op(tree: ExprTree, path: tuple[str, ...], new_op: OpKind) -> ExprTree:
    if not path:
        assert isinstance(tree, Internal)
        return Internal(new_op, tree.left, tree.right)
    assert isinstance(tree, Internal)
    if path[0] == "L":
        return Internal(tree.op, _replace_op(tree.left, path[1:], new_op), tree.right)
    return Internal(tree.op, tree.left, _replace_op(tree.right, path[1:], new_op))


def _one_edit_candidates(
    tree: ExprTree, kind: str, parent_id: str | None, tag: str
) -> list[VariationCandidate]:
    out: list[VariationCandidate] = []
    for pos, node, path in _internal_positions(tree):
        assert isinstance(node, Internal)
        for op in _OP_ORDER:
            if op is node.op:
                continue
            edited = _replace_op(tree, path, op)
            out.append(
                VariationCandidate(
                    edited,
                    kind,
                    f"{tag}node={pos} op={node.op}->{op}",
                    parent_id,
                )
            )
    return out


def _dedup(cands: list[VariationCandidate]) -> list[VariationCandidate]:
    seen: set[str] = set()
    out = []
    for c in cands:
        key = to_str(c.expr, "prefix")
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
    return out


def gen_sub(original: ExprTree, parent_id: str | None = None) -> list[VariationCandidate]:
    """One-operator edits of every proper sub-expression, emitted as the edited
    sub-expression itself. The whole tree is gen_whole's job, so a leaf-only or
    single-operator expression yields nothing here.
    """
    out: list[VariationCandidate] = []
    for pos, node, _path in _internal_positions(original):
        if pos == 0:
            continue
        out.extend(_one_edit_candidates(node, KIND_SUB, parent_id, f"sub={pos} "))
    return _dedup(out)


def gen_whole(original: ExprTree, parent_id: str | None = None) -> list[VariationCandidate]:
    """One-operator edits applied to the full expression."""
    if isinstance(original, Leaf):
        raise NoOperatorNodesError()
    return _dedup(_one_edit_candidates(original, KIND_WHOLE, parent_id, ""))


def filter_candidates(
    cands: list[VariationCandidate],
    bindings: Mapping[int, Fraction],
    policy: FilterPolicy,
) -> FilterResult:
    """Apply the policy's removals in a fixed order: division by zero, negative
    value, equal to the original's value, duplicate of an earlier survivor.
    """
    if policy.empty:
        return FilterResult(list(cands), [])
    kept: list[VariationCandidate] = []
    removed: list[RemovedCandidate] = []
    seen: set[Fraction] = set()
    for cand in cands:
        try:
            value = evaluate(cand.expr, bindings)
        except DivisionByZeroError:
            if policy.nonzero:
                removed.append(RemovedCandidate(cand, REASON_DIVISION_BY_ZERO))
            else:
                kept.append(cand)
            continue
        if policy.nonnegative and value < 0:
            removed.append(RemovedCandidate(cand, REASON_NEGATIVE))
            continue
        if policy.original_value is not None and value == policy.original_value:
            removed.append(RemovedCandidate(cand, REASON_EQUALS_ORIGINAL))
            continue
        if policy.dedup_value:
            if value in seen:
                removed.append(RemovedCandidate(cand, REASON_DUPLICATE_VALUE))
                continue
            seen.add(value)
        kept.append(cand)
    return FilterResult(kept, removed)
