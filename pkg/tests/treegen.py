"""Random and exhaustive expression-tree generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from mwpx.expressions import Constant, ExprTree, Internal, Leaf, OpKind, Variable

OPS = (OpKind.ADD, OpKind.SUB, OpKind.MUL, OpKind.DIV)


def random_leaf(rng: random.Random) -> Leaf:
    if rng.random() < 0.25:
        # Keep constants renderable so text round-trips hold.
        return Leaf(Constant(Fraction(rng.randint(0, 99), rng.choice((1, 1, 10, 100)))))
    return Leaf(Variable(rng.randint(0, 5)))


def random_tree(rng: random.Random, internal: int, leaf=random_leaf) -> ExprTree:
    if internal == 0:
        return leaf(rng)
    left_internal = rng.randint(0, internal - 1)
    return Internal(
        rng.choice(OPS),
        random_tree(rng, left_internal, leaf),
        random_tree(rng, internal - 1 - left_internal, leaf),
    )


def distinct_leaf_tree(rng: random.Random, internal: int) -> ExprTree:
    """Random shape and ops with leaves N0, N1, ... each used exactly once."""
    counter = [0]

    def next_leaf(_rng) -> Leaf:
        leaf = Leaf(Variable(counter[0]))
        counter[0] += 1
        return leaf

    return random_tree(rng, internal, next_leaf)


def _shapes(internal: int):
    """All binary tree shapes with the given internal node count."""
    if internal == 0:
        yield None
        return
    for left_internal in range(internal):
        for left in _shapes(left_internal):
            for right in _shapes(internal - 1 - left_internal):
                yield (left, right)


def all_trees_up_to(max_internal: int):
    """Every shape with <= max_internal nodes under every operator assignment,
    leaves numbered N0, N1, ... left to right.
    """
    for internal in range(max_internal + 1):
        for shape in _shapes(internal):
            for ops in product(OPS, repeat=internal):
                remaining = list(ops)
                counter = [0]

                def build(node) -> ExprTree:
                    if node is None:
                        leaf = Leaf(Variable(counter[0]))
                        counter[0] += 1
                        return leaf
                    op = remaining.pop(0)
                    left = build(node[0])
                    right = build(node[1])
                    return Internal(op, left, right)

                yield build(shape)
