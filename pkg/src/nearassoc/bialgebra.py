"""Coproducts, coalgebra compatibility, and standard Manin triples on ``A + A*``.

Elements of ``A (x) A`` are ``n x n`` coefficient matrices, ``M[i, j]`` being
the coefficient of ``e_i (x) e_j``.  Then ``(f (x) id)M = F M``,
``(id (x) g)M = M G^T`` and the flip is the transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraSC,
    CheckReport,
    HomAlgebra,
    Witness,
    as_plain,
    check_identity,
    contract,
    left_ops,
    right_ops,
)
from .bimodules import BilinearForm, _run_equations, check_left_invariant
from .errors import ConditionsFail, DimensionMismatch, LRNotCommuting
from .matched_pairs import check_dual_matched_pair, double_tensor, dual_matched_pair
from .scalars import FieldContext


@dataclass(frozen=True, eq=False)
class Coproduct:
    """``Delta(e_k) = sum d[k, i, j] e_i (x) e_j``."""

    ctx: FieldContext
    d: np.ndarray

    def __post_init__(self):
        d = self.ctx.array(self.d)
        if d.ndim != 3 or not (d.shape[0] == d.shape[1] == d.shape[2]):
            raise DimensionMismatch(f"coproduct tensor must be n x n x n, got {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @classmethod
    def zero(cls, ctx: FieldContext, n: int) -> Coproduct:
        return cls(ctx, ctx.zeros((n, n, n)))

    def __call__(self, x) -> np.ndarray:
        """``Delta(x)`` as a coefficient matrix."""
        return contract(self.ctx, "k,kij->ij", self.ctx.array(x), self.d)

    def __eq__(self, other):
        if not isinstance(other, Coproduct):
            return NotImplemented
        return self.ctx == other.ctx and self.d.shape == other.d.shape and bool(np.all(self.d == other.d))

    __hash__ = None


def dual_algebra(cp: Coproduct) -> AlgebraSC:
    """Product on ``A*`` with ``<a o b, x> = <a (x) b, Delta(x)>``."""
    return AlgebraSC(cp.ctx, cp.d.transpose(1, 2, 0))


def coproduct_of(alg) -> Coproduct:
    """The coproduct whose dual product is ``alg`` (inverse of ``dual_algebra``)."""
    alg = as_plain(alg)
    return Coproduct(alg.ctx, alg.c.transpose(2, 0, 1))


def _require_lr_commute(A):
    if not check_identity(A, "lr-commute"):
        raise LRNotCommuting("left and right multiplications of A do not commute")


def coalgebra_equations(A: AlgebraSC, cp: Coproduct):
    """Both coalgebra conditions as ``(name, lhs, rhs)`` stacks over basis pairs ``(x, y)``."""
    ctx, D = A.ctx, cp.d
    L, R = left_ops(A), right_ops(A)
    rd = contract(ctx, "iab,jbc->ijac", R, D)
    dl = contract(ctx, "iab,jcb->ijac", D, L)
    first = ctx.reduce(rd - rd.transpose(0, 1, 3, 2) + dl - dl.transpose(0, 1, 3, 2))
    ld = contract(ctx, "iab,jbc->ijac", L, D)
    delta_xy = contract(ctx, "ijk,kab->ijab", A.c, D)
    left = ctx.reduce(ld + ld.transpose(1, 0, 3, 2))
    right = ctx.reduce(
        contract(ctx, "iab,jcb->ijac", R, D) + contract(ctx, "iab,jcb->ijac", D, R)
    )
    return [
        ("(R(x)(x)id - s(R(x)(x)id))D(y) + (id(x)L(y) - s(id(x)L(y)))D(x) = 0", first, ctx.zeros(first.shape)),
        ("(L(x)(x)id)D(y) + s(L(y)(x)id)D(x) = D(xy)", left, delta_xy),
        ("s(id(x)R(x))D(y) + (id(x)R(y))D(x) = D(xy)", right, delta_xy),
    ]


def check_coalgebra_conditions(A, cp: Coproduct) -> CheckReport:
    A = as_plain(A)
    if cp.n != A.n or cp.ctx != A.ctx:
        raise DimensionMismatch("coproduct does not match the algebra")
    _require_lr_commute(A)
    return _run_equations("coalgebra", A.ctx, coalgebra_equations(A, cp))


def check_bialgebra(A, cp: Coproduct) -> CheckReport:
    """Dual product nearly associative, then both coalgebra conditions."""
    A = as_plain(A)
    _require_lr_commute(A)
    rep = check_identity(dual_algebra(cp), "nearly-associative")
    if not rep:
        return CheckReport("bialgebra", False, rep.witness, {"stage": "dual-algebra"})
    rep = check_coalgebra_conditions(A, cp)
    return CheckReport("bialgebra", rep.holds, rep.witness, {} if rep else {"stage": "coalgebra"})


def standard_form(ctx: FieldContext, n: int) -> BilinearForm:
    """``B_d(x + a, y + b) = <a, y> + <x, b>`` on ``A + A*``."""
    B = ctx.zeros((2 * n, 2 * n))
    B[:n, n:] = ctx.eye(n)
    B[n:, :n] = ctx.eye(n)
    return BilinearForm(ctx, B)


def _isotropy(form: BilinearForm, n: int) -> CheckReport:
    ctx, B = form.ctx, form.matrix
    for label, block in (("A", B[:n, :n]), ("A*", B[n:, n:])):
        hits = np.argwhere(ctx.nonzero(block))
        if len(hits):
            i, j = (int(v) for v in hits[0])
            return CheckReport("isotropic", False, Witness((i, j), block[i, j], ctx.zero, equation=label))
    return CheckReport("isotropic", True)


def manin_stages(A: AlgebraSC, B: AlgebraSC):
    """Evaluate every standard-Manin-triple requirement on the forced product of ``A + A*``.

    Invariance of ``B_d`` together with ``A`` and ``A*`` being subalgebras
    forces the mixed products to be the dual-pair actions, so the candidate
    product is the dual double built without any guard.
    """
    ctx, n = A.ctx, A.n
    mp = dual_matched_pair(A, B)
    alg = AlgebraSC(ctx, double_tensor(ctx, A.c, B.c, mp.lA, mp.rA, mp.lB, mp.rB))
    form = standard_form(ctx, n)
    stages = [
        ("algebra-A", check_identity(A, "nearly-associative")),
        ("algebra-A*", check_identity(B, "nearly-associative")),
        ("double", check_identity(alg, "nearly-associative")),
        ("invariant", check_left_invariant(alg, form)),
        ("isotropic", _isotropy(form, n)),
        ("nondegenerate", CheckReport("nondegenerate", bool(ctx.det(form.matrix)))),
    ]
    return HomAlgebra(alg), form, stages


def manin_double(A, cp: Coproduct):
    """Standard Manin triple on ``A + A*``: the double and the form ``B_d``."""
    A = as_plain(A)
    rep = check_coalgebra_conditions(A, cp)
    if not rep:
        raise ConditionsFail("coalgebra", f"coalgebra condition fails: {rep.witness.equation}")
    h, form, stages = manin_stages(A, dual_algebra(cp))
    for stage, r in stages:
        if not r:
            raise ConditionsFail(stage)
    return h, form


@dataclass(frozen=True)
class EquivalenceReport:
    manin_triple: bool
    matched_pair: bool
    bialgebra: bool
    manin_stage: str | None = None

    @property
    def coincide(self) -> bool:
        return self.manin_triple == self.matched_pair == self.bialgebra

    def as_tuple(self):
        return (self.manin_triple, self.matched_pair, self.bialgebra)


def check_manin_triple_equivalence(A, cp: Coproduct) -> EquivalenceReport:
    """Standard Manin triple, dual matched pair and bialgebra verdicts, computed separately."""
    A = as_plain(A)
    _require_lr_commute(A)
    B = dual_algebra(cp)
    _, _, stages = manin_stages(A, B)
    failed = next((name for name, r in stages if not r), None)
    return EquivalenceReport(
        manin_triple=failed is None,
        matched_pair=check_dual_matched_pair(A, B).holds,
        bialgebra=check_bialgebra(A, cp).holds,
        manin_stage=failed,
    )
