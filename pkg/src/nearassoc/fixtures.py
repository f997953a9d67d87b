"""Small worked algebras used across the test-suite and CLI examples.

Indices are 0-based, so ``e_1`` of the usual notation is basis index 0.
"""

from __future__ import annotations

from .algebra import AlgebraSC
from .scalars import FieldContext, Rationals

_Q = Rationals()


def e2a(ctx: FieldContext = _Q) -> AlgebraSC:
    """e1 e1 = e1 + e2, every other product zero."""
    return AlgebraSC.from_table(ctx, 2, {(0, 0): [1, 1]})


def e2b(ctx: FieldContext = _Q) -> AlgebraSC:
    """e1 e1 = e2, e1 e2 = e2 e1 = e1, e2 e2 = e2."""
    return AlgebraSC.from_table(
        ctx, 2, {(0, 0): [0, 1], (0, 1): [1, 0], (1, 0): [1, 0], (1, 1): [0, 1]}
    )


def e3a(ctx: FieldContext = _Q) -> AlgebraSC:
    return AlgebraSC.from_table(
        ctx, 3, {(0, 0): [0, 1, 1], (1, 1): [1, 1, -1], (2, 2): [-1, 1, 0]}
    )


def e3b(ctx: FieldContext = _Q) -> AlgebraSC:
    return AlgebraSC.from_table(
        ctx, 3, {(0, 0): [0, 1, -1], (1, 1): [0, 1, 1], (2, 2): [1, -1, 1]}
    )


def e3c(ctx: FieldContext = _Q) -> AlgebraSC:
    return AlgebraSC.from_table(
        ctx, 3, {(0, 0): [1, 1, 1], (1, 1): [1, 0, 1], (2, 2): [1, 1, 0]}
    )


def zero(n: int, ctx: FieldContext = _Q) -> AlgebraSC:
    return AlgebraSC.zero(ctx, n)


WORKED_EXAMPLES = {"E2A": e2a, "E2B": e2b, "E3A": e3a, "E3B": e3b, "E3C": e3c}
