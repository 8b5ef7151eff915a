"""Equivalent expressions by swapping operands of symmetric operators.

Two enumerations are provided:

* ``enumerate_algo1`` -- a single bottom-up pass that, at every symmetric
  node, swaps the children, snapshots the whole tree, recurses into the
  swapped children, then swaps back. This is mode ``algo1`` on the CLI.
  It does not produce every commutative variant (it never combines a
  sibling's swap with a later ancestor state it already left behind).
* ``enumerate_closure`` -- all 2^k child-order assignments over the k
  symmetric nodes: the full commutative closure, a superset of the above.

Both return the original tree first and never modify their input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expressions import ExprTree, Internal, Leaf


class ClosureTooLargeError(ValueError):
    def __init__(self, symmetric_nodes: int, cap: int):
        self.symmetric_nodes = symmetric_nodes
        self.cap = cap
        super().__init__(
            f"{symmetric_nodes} symmetric nodes would give 2^{symmetric_nodes} "
            f"variants; cap is {cap}"
        )


@dataclass
class EquivalenceList:
    """Ordered equivalents of ``origin``; ``items[0]`` is the origin itself."""

    items: list[ExprTree]
    origin: ExprTree
    dedup_applied: bool

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class _MutNode:
    """Mutable tree used internally so child swaps can happen in place."""

    __slots__ = ("op", "operand", "left", "right")

    def __init__(self, op=None, operand=None, left=None, right=None):
        self.op = op
        self.operand = operand
        self.left = left
        self.right = right


def _thaw(tree: ExprTree) -> _MutNode:
    if isinstance(tree, Leaf):
        return _MutNode(operand=tree.operand)
    return _MutNode(op=tree.op, left=_thaw(tree.left), right=_thaw(tree.right))


def _freeze(node: _MutNode) -> ExprTree:
    if node.op is None:
        return Leaf(node.operand)
    return Internal(node.op, _freeze(node.left), _freeze(node.right))


def _swap_pass(tree: _MutNode, root: _MutNode | None, out: list[ExprTree]) -> None:
    if root is None:
        return
    _swap_pass(tree, root.left, out)
    _swap_pass(tree, root.right, out)
    if root.op is not None and root.op.symmetric:
        root.left, root.right = root.right, root.left
        out.append(_freeze(tree))
        _swap_pass(tree, root.left, out)
        _swap_pass(tree, root.right, out)
        root.left, root.right = root.right, root.left


def enumerate_algo1(tree: ExprTree, dedup: bool = True) -> EquivalenceList:
    """Bottom-up swap enumeration; origin first, snapshots in append order.

    ``dedup=False`` keeps structural duplicates (a symmetric node with equal
    children snapshots an unchanged tree) and exists so the append-count law
    can be checked; consumers want the default.
    """
    mutable = _thaw(tree)
    snapshots: list[ExprTree] = []
    _swap_pass(mutable, mutable, snapshots)
    items = [tree, *snapshots]
    if dedup:
        items = list(dict.fromkeys(items))
    return EquivalenceList(items, tree, dedup)


def symmetric_node_count(tree: ExprTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    own = 1 if tree.op.symmetric else 0
    return own + symmetric_node_count(tree.left) + symmetric_node_count(tree.right)


def enumerate_closure(tree: ExprTree, cap: int = 20) -> EquivalenceList:
    """Every child-order assignment over the symmetric nodes, deduplicated.

    Symmetric nodes are indexed in pre-order; assignment ``mask`` flips node
    ``i`` iff bit ``i`` is set, so mask 0 is the origin and comes first.
    """
    k = symmetric_node_count(tree)
    if k > cap:
        raise ClosureTooLargeError(k, cap)

    def apply_mask(node: ExprTree, mask: int, next_index: list[int]) -> ExprTree:
        if isinstance(node, Leaf):
            return node
        flip = False
        if node.op.symmetric:
            flip = bool(mask >> next_index[0] & 1)
            next_index[0] += 1
        left = apply_mask(node.left, mask, next_index)
        right = apply_mask(node.right, mask, next_index)
        return Internal(node.op, right, left) if flip else Internal(node.op, left, right)

    variants = [apply_mask(tree, mask, [0]) for mask in range(1 << k)]
    items = list(dict.fromkeys(variants))
    return EquivalenceList(items, tree, True)


def enumerate_equivalents(tree: ExprTree, mode: str, dedup: bool = True) -> EquivalenceList:
    if mode == "algo1":
        return enumerate_algo1(tree, dedup=dedup)
    if mode == "closure":
        return enumerate_closure(tree)
    raise ValueError(f"unknown enumeration mode {mode!r}")
