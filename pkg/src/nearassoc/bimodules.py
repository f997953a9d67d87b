"""Bimodules, semidirect products, induced Lie structure and invariant forms.

Action stacks have shape ``(n, m, m)``: ``l[i]`` is the matrix of ``l(e_i)``
on the ``m``-dimensional module.  The Hom equations are always evaluated; with
identity twists they collapse to the plain bimodule axioms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraSC,
    CheckReport,
    HomAlgebra,
    IdentityId,
    LinearMap,
    Witness,
    as_hom,
    as_plain,
    check_identity,
    commutator_algebra,
    contract,
    left_ops,
    right_ops,
)
from .errors import (
    BaseIdentityWarning,
    DegenerateForm,
    DimensionMismatch,
    IntertwinerFails,
    NotABimodule,
    NotInvariant,
    PostconditionFailed,
    UnsupportedHomCase,
)
from .scalars import FieldContext


@dataclass(frozen=True, eq=False)
class Bimodule:
    base: HomAlgebra
    l: np.ndarray
    r: np.ndarray
    phi: np.ndarray = None

    def __post_init__(self):
        base = as_hom(self.base)
        ctx, n = base.ctx, base.n
        l, r = ctx.array(self.l), ctx.array(self.r)
        if l.ndim != 3 or l.shape[0] != n or l.shape[1] != l.shape[2]:
            raise DimensionMismatch(f"l must have shape ({n}, m, m), got {l.shape}")
        if r.shape != l.shape:
            raise DimensionMismatch(f"r must have shape {l.shape}, got {r.shape}")
        m = l.shape[1]
        phi = ctx.eye(m) if self.phi is None else ctx.array(self.phi)
        if phi.shape != (m, m):
            raise DimensionMismatch(f"phi must be {m} x {m}, got {phi.shape}")
        for arr in (l, r, phi):
            arr.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    @property
    def ctx(self) -> FieldContext:
        return self.base.ctx

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def vdim(self) -> int:
        return self.l.shape[1]

    def is_plain(self) -> bool:
        return self.base.is_plain() and self.ctx.equal(self.phi, self.ctx.eye(self.vdim))

    @classmethod
    def zero(cls, base, m: int, phi=None) -> Bimodule:
        base = as_hom(base)
        z = base.ctx.zeros((base.n, m, m))
        return cls(base, z, z.copy(), phi)


@dataclass(frozen=True, eq=False)
class BilinearForm:
    ctx: FieldContext
    matrix: np.ndarray

    def __post_init__(self):
        B = self.ctx.array(self.matrix)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionMismatch(f"a bilinear form needs a square matrix, got {B.shape}")
        if not self.ctx.equal(B, B.T):
            raise ValueError("bilinear form must be symmetric")
        B.setflags(write=False)
        object.__setattr__(self, "matrix", B)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x, y):
        return self.ctx.reduce(np.einsum("i,ij,j->", self.ctx.array(x), self.matrix, self.ctx.array(y)))


def _twisted(ctx, alpha, stack):
    """``out[i] = stack(alpha(e_i))``."""
    return contract(ctx, "pi,pab->iab", alpha, stack)


def _first_bad(ctx, lhs, rhs):
    diff = ctx.nonzero(ctx.reduce(lhs - rhs))
    bad = diff.reshape(diff.shape[: lhs.ndim - 2] + (-1,)).any(axis=-1)
    hits = np.argwhere(bad)
    return None if len(hits) == 0 else tuple(int(v) for v in hits[0])


def _run_equations(name, ctx, equations):
    """Return a failing report for the first equation with a nonzero residual."""
    for eq, lhs, rhs in equations:
        idx = _first_bad(ctx, lhs, rhs)
        if idx is not None:
            return CheckReport(name, False, Witness(idx, lhs[idx], rhs[idx], equation=eq))
    return CheckReport(name, True)


def bimodule_equations(b: Bimodule):
    """``(name, lhs, rhs)`` stacks over basis pairs ``(i, j)`` for the Hom-bimodule axioms."""
    ctx, c, A = b.ctx, b.base.c, b.base.alpha.matrix
    l, r, phi = b.l, b.r, b.phi
    la, ra = _twisted(ctx, A, l), _twisted(ctx, A, r)
    return [
        ("phi l(x) = l(alpha x) phi", contract(ctx, "ab,ibc->iac", phi, l),
         contract(ctx, "iab,bc->iac", la, phi)),
        ("phi r(x) = r(alpha x) phi", contract(ctx, "ab,ibc->iac", phi, r),
         contract(ctx, "iab,bc->iac", ra, phi)),
        ("l(alpha x) l(y) = r(alpha y) r(x)", contract(ctx, "iab,jbc->ijac", la, l),
         contract(ctx, "jab,ibc->ijac", ra, r)),
        ("l(alpha x) r(y) = l(y x) phi", contract(ctx, "iab,jbc->ijac", la, r),
         contract(ctx, "jik,kab,bc->ijac", c, l, phi)),
        ("r(alpha x) l(y) = r(x y) phi", contract(ctx, "iab,jbc->ijac", ra, l),
         contract(ctx, "ijk,kab,bc->ijac", c, r, phi)),
    ]


def _base_identity(h: HomAlgebra) -> IdentityId:
    return IdentityId.NEARLY_ASSOCIATIVE if h.is_plain() else IdentityId.HOM_NEARLY_ASSOCIATIVE


def check_bimodule(b: Bimodule) -> CheckReport:
    """Verify the (Hom-)bimodule axioms on all basis pairs."""
    if not check_identity(b.base, _base_identity(b.base)):
        warnings.warn("base algebra is not nearly (Hom-)associative", BaseIdentityWarning, stacklevel=2)
    return _run_equations("bimodule", b.ctx, bimodule_equations(b))


def _require_bimodule(b: Bimodule):
    rep = check_bimodule(b)
    if not rep:
        raise NotABimodule(f"bimodule axiom fails: {rep.witness.equation} at {rep.witness.indices}", rep)


def regular_bimodule(h) -> Bimodule:
    """``(L, R, A)`` with twist ``alpha``."""
    h = as_hom(h)
    return Bimodule(h, left_ops(h), right_ops(h), h.alpha.matrix)


def semidirect_tensor(ctx, c, l, r):
    n, m = c.shape[0], l.shape[1]
    N = n + m
    out = ctx.zeros((N, N, N))
    out[:n, :n, :n] = c
    # e_i * v_b = l(e_i) v_b,  v_a * e_j = r(e_j) v_a
    out[:n, n:, n:] = l.transpose(0, 2, 1)
    out[n:, :n, n:] = r.transpose(2, 0, 1)
    return out


def direct_sum(ctx, a, b):
    n, m = a.shape[0], b.shape[0]
    out = ctx.zeros((n + m, n + m))
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def semidirect(b: Bimodule) -> HomAlgebra:
    """Algebra on ``A + V`` with ``(x+u)(y+v) = xy + l(x)v + r(y)u`` and twist ``alpha + phi``."""
    _require_bimodule(b)
    ctx = b.ctx
    alg = AlgebraSC(ctx, semidirect_tensor(ctx, b.base.c, b.l, b.r))
    out = HomAlgebra(alg, LinearMap(ctx, direct_sum(ctx, b.base.alpha.matrix, b.phi)))
    ident = _base_identity(out)
    if not check_identity(out, ident):
        raise PostconditionFailed(f"semidirect product fails {ident.value}")
    return out


def induced_lie_bracket(b: Bimodule) -> AlgebraSC:
    """Bracket ``[x+u, y+v] = [x,y] + (l-r)(x)v - (l-r)(y)u`` built directly from the actions."""
    if not b.is_plain():
        raise UnsupportedHomCase("induced bracket is defined for untwisted bimodules")
    _require_bimodule(b)
    ctx, n, m = b.ctx, b.n, b.vdim
    c = b.base.c
    rho = ctx.reduce(b.l - b.r)
    N = n + m
    out = ctx.zeros((N, N, N))
    out[:n, :n, :n] = ctx.reduce(c - c.transpose(1, 0, 2))
    out[:n, n:, n:] = rho.transpose(0, 2, 1)
    out[n:, :n, n:] = ctx.reduce(-rho.transpose(2, 0, 1))
    return AlgebraSC(ctx, out)


def minus_representation(b: Bimodule):
    """``(l - r, phi)``; asserted to represent the commutator (Hom-)Lie algebra."""
    _require_bimodule(b)
    ctx = b.ctx
    rho = ctx.reduce(b.l - b.r)
    rep = check_lie_representation(commutator_algebra(b.base.alg), b.base.alpha, rho, b.phi)
    if not rep:
        raise PostconditionFailed(f"l - r is not a representation: {rep.witness}")
    return rho, b.phi


def check_lie_representation(bracket, alpha, rho, psi) -> CheckReport:
    """Check rho(alpha x) psi = psi rho(x) and rho([x,y]) psi = rho(alpha x)rho(y) - rho(alpha y)rho(x)."""
    bracket = as_plain(bracket)
    ctx, n = bracket.ctx, bracket.n
    A = ctx.eye(n) if alpha is None else (alpha.matrix if isinstance(alpha, LinearMap) else ctx.array(alpha))
    rho = ctx.array(rho)
    if rho.ndim != 3 or rho.shape[0] != n or rho.shape[1] != rho.shape[2]:
        raise DimensionMismatch(f"rho must have shape ({n}, m, m), got {rho.shape}")
    m = rho.shape[1]
    psi = ctx.eye(m) if psi is None else ctx.array(psi)
    if A.shape != (n, n) or psi.shape != (m, m):
        raise DimensionMismatch("twist shapes do not match")
    ra = _twisted(ctx, A, rho)
    prod = contract(ctx, "iab,jbc->ijac", ra, rho)
    equations = [
        ("rho(alpha x) psi = psi rho(x)", contract(ctx, "iab,bc->iac", ra, psi),
         contract(ctx, "ab,ibc->iac", psi, rho)),
        ("rho([x,y]) psi = rho(alpha x) rho(y) - rho(alpha y) rho(x)",
         contract(ctx, "ijk,kab,bc->ijac", bracket.c, rho, psi),
         ctx.reduce(prod - prod.transpose(1, 0, 2, 3))),
    ]
    return _run_equations("lie-representation", ctx, equations)


def dual_bimodule(b: Bimodule, order: str = "LR") -> Bimodule:
    """Transpose the actions onto ``V*``; ``LR`` gives ``(l*, r*)``, ``RL`` gives ``(r*, l*)``."""
    if not b.is_plain():
        raise UnsupportedHomCase("dual bimodules are defined for untwisted bimodules")
    lt, rt = b.l.transpose(0, 2, 1), b.r.transpose(0, 2, 1)
    order = order.upper()
    if order == "LR":
        return Bimodule(b.base, lt, rt)
    if order == "RL":
        return Bimodule(b.base, rt, lt)
    raise ValueError(f"order must be 'LR' or 'RL', got {order!r}")


def check_left_invariant(alg, form: BilinearForm) -> CheckReport:
    """``B(x y, z) = B(x, y z)`` on all basis triples."""
    alg = as_plain(alg)
    ctx = alg.ctx
    if form.n != alg.n:
        raise DimensionMismatch(f"form has size {form.n}, algebra dimension {alg.n}")
    B = form.matrix
    lhs = contract(ctx, "ijm,mk->ijk", alg.c, B)
    rhs = contract(ctx, "im,jkm->ijk", B, alg.c)
    bad = np.argwhere(ctx.nonzero(ctx.reduce(lhs - rhs)))
    if len(bad) == 0:
        return CheckReport("left-invariant", True)
    idx = tuple(int(v) for v in bad[0])
    return CheckReport("left-invariant", False, Witness(idx, lhs[idx], rhs[idx]))


def form_intertwiner(alg, form: BilinearForm) -> LinearMap:
    """``T = B`` as a map ``A -> A*``, verified to carry ``(L, R)`` onto ``(R*, L*)``."""
    alg = as_plain(alg)
    ctx = alg.ctx
    if form.n != alg.n:
        raise DimensionMismatch(f"form has size {form.n}, algebra dimension {alg.n}")
    if not ctx.det(form.matrix):
        raise DegenerateForm("form has zero determinant")
    inv = check_left_invariant(alg, form)
    if not inv:
        raise NotInvariant(f"form is not left-invariant at {inv.witness.indices}")
    T = form.matrix
    L, R = left_ops(alg), right_ops(alg)
    checks = [
        ("T L(x) = R*(x) T", contract(ctx, "ab,ibc->iac", T, L), contract(ctx, "iba,bc->iac", R, T)),
        ("T R(x) = L*(x) T", contract(ctx, "ab,ibc->iac", T, R), contract(ctx, "iba,bc->iac", L, T)),
    ]
    rep = _run_equations("intertwiner", ctx, checks)
    if not rep:
        raise IntertwinerFails(f"{rep.witness.equation} fails at e_{rep.witness.indices[0]}")
    return LinearMap(ctx, T)
