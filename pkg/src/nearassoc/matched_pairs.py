"""Matched pairs of (Hom-)nearly associative algebras and of (Hom-)Lie algebras.

Actions are stacks: ``lA[i]`` is the ``m x m`` matrix of ``l_A(e_i)`` acting on
B, and ``lB[s]`` the ``n x n`` matrix of ``l_B(f_s)`` acting on A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraSC,
    CheckReport,
    HomAlgebra,
    LinearMap,
    as_hom,
    as_plain,
    check_identity,
    commutator_algebra,
    contract,
    left_ops,
    right_ops,
)
from .bimodules import (
    Bimodule,
    _base_identity,
    _first_bad,
    _run_equations,
    bimodule_equations,
    check_lie_representation,
    direct_sum,
)
from .errors import (
    ContextMismatch,
    DimensionMismatch,
    LRNotCommuting,
    NotABimodule,
    NotAMatchedPair,
    NotARepresentation,
    PostconditionFailed,
)


@dataclass(frozen=True, eq=False)
class MatchedPair:
    A: HomAlgebra
    B: HomAlgebra
    lA: np.ndarray
    rA: np.ndarray
    lB: np.ndarray
    rB: np.ndarray

    def __post_init__(self):
        A, B = as_hom(self.A), as_hom(self.B)
        if A.ctx != B.ctx:
            raise ContextMismatch(f"{A.ctx} vs {B.ctx}")
        ctx, n, m = A.ctx, A.n, B.n
        arrays = {}
        for name, shape in (("lA", (n, m, m)), ("rA", (n, m, m)), ("lB", (m, n, n)), ("rB", (m, n, n))):
            arr = ctx.array(getattr(self, name))
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} must have shape {shape}, got {arr.shape}")
            arr.setflags(write=False)
            arrays[name] = arr
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    @property
    def ctx(self):
        return self.A.ctx

    @classmethod
    def zero_actions(cls, A, B) -> MatchedPair:
        A, B = as_hom(A), as_hom(B)
        n, m = A.n, B.n
        za, zb = A.ctx.zeros((n, m, m)), A.ctx.zeros((m, n, n))
        return cls(A, B, za, za.copy(), zb, zb.copy())

    def bimodule_of_A(self) -> Bimodule:
        """``(l_A, r_A, B, alpha_B)`` as a bimodule of A."""
        return Bimodule(self.A, self.lA, self.rA, self.B.alpha.matrix)

    def bimodule_of_B(self) -> Bimodule:
        return Bimodule(self.B, self.lB, self.rB, self.A.alpha.matrix)

    def swapped(self) -> MatchedPair:
        return MatchedPair(self.B, self.A, self.lB, self.rB, self.lA, self.rA)


def _compatibility(ctx, cA, aA, aB, lA, rA, lB, rB, first=1):
    """The three A-valued compatibility equations, indexed ``[x, y, a, out]``.

    Obtained by projecting the nearly Hom-associative identity of the double
    onto A for the argument patterns (x, y, a), (x, a, y) and (a, x, y).
    """
    e1 = ctx.reduce(
        np.einsum("pi,sqj,pqr->ijsr", aA, rB, cA)
        + np.einsum("jts,trp,pi->ijsr", lA, rB, aA)
        - np.einsum("spi,qj,pqr->ijsr", lB, aA, cA)
        - np.einsum("its,trp,pj->ijsr", rA, lB, aA)
    )
    e2 = ctx.reduce(
        np.einsum("pi,sqj,pqr->ijsr", aA, lB, cA)
        + np.einsum("jts,trp,pi->ijsr", rA, rB, aA)
        - np.einsum("ts,trp,jip->ijsr", aB, rB, cA)
    )
    e3 = ctx.reduce(
        np.einsum("ts,trp,ijp->ijsr", aB, lB, cA)
        - np.einsum("spj,qi,pqr->ijsr", rB, aA, cA)
        - np.einsum("jts,trp,pi->ijsr", lA, lB, aA)
    )
    zero = ctx.zeros(e1.shape)
    return [
        (f"{first}: alpha(x)(r_B(a)y) + r_B(l_A(y)a)alpha(x) - (l_B(a)x)alpha(y) - l_B(r_A(x)a)alpha(y)", e1, zero),
        (f"{first + 1}: alpha(x)(l_B(a)y) + r_B(r_A(y)a)alpha(x) - r_B(alpha a)(y x)", e2, zero),
        (f"{first + 2}: l_B(alpha a)(x y) - (r_B(a)y)alpha(x) - l_B(l_A(y)a)alpha(x)", e3, zero),
    ]


def matched_pair_equations(mp: MatchedPair):
    """All six equations; the last three are the first three with A and B swapped."""
    ctx = mp.ctx
    aA, aB = mp.A.alpha.matrix, mp.B.alpha.matrix
    return _compatibility(ctx, mp.A.c, aA, aB, mp.lA, mp.rA, mp.lB, mp.rB, 1) + _compatibility(
        ctx, mp.B.c, aB, aA, mp.lB, mp.rB, mp.lA, mp.rA, 4
    )


def check_matched_pair(mp: MatchedPair, strict: bool = True) -> CheckReport:
    """Bases, then both bimodules, then the six compatibility equations.

    With ``strict`` a failing bimodule raises ``NotABimodule``; otherwise it is
    reported with ``details['stage']``.
    """
    for label, h in (("A", mp.A), ("B", mp.B)):
        ident = _base_identity(h)
        rep = check_identity(h, ident)
        if not rep:
            return CheckReport("matched-pair", False, rep.witness, {"stage": f"base-{label}"})
    for label, b in (("A", mp.bimodule_of_A()), ("B", mp.bimodule_of_B())):
        rep = _run_equations("bimodule", mp.ctx, bimodule_equations(b))
        if not rep:
            if strict:
                raise NotABimodule(
                    f"actions of {label} do not form a bimodule: {rep.witness.equation}", rep
                )
            return CheckReport("matched-pair", False, rep.witness, {"stage": f"bimodule-{label}"})
    rep = _run_equations("matched-pair", mp.ctx, matched_pair_equations(mp))
    return CheckReport("matched-pair", rep.holds, rep.witness, {"stage": "compatibility"} if not rep else {})


def double_tensor(ctx, cA, cB, lA, rA, lB, rB):
    n, m = cA.shape[0], cB.shape[0]
    N = n + m
    c = ctx.zeros((N, N, N))
    c[:n, :n, :n] = cA
    c[n:, n:, n:] = cB
    # x * b = r_B(b)x + l_A(x)b ;  a * y = l_B(a)y + r_A(y)a
    c[:n, n:, :n] = rB.transpose(2, 0, 1)
    c[:n, n:, n:] = lA.transpose(0, 2, 1)
    c[n:, :n, :n] = lB.transpose(0, 2, 1)
    c[n:, :n, n:] = rA.transpose(2, 0, 1)
    return c


def double(mp: MatchedPair) -> HomAlgebra:
    """The algebra on ``A + B`` with twist ``alpha_A + alpha_B``."""
    rep = check_matched_pair(mp, strict=False)
    if not rep:
        raise NotAMatchedPair(f"not a matched pair (stage {rep.details.get('stage')})", rep)
    ctx = mp.ctx
    alg = AlgebraSC(ctx, double_tensor(ctx, mp.A.c, mp.B.c, mp.lA, mp.rA, mp.lB, mp.rB))
    out = HomAlgebra(alg, LinearMap(ctx, direct_sum(ctx, mp.A.alpha.matrix, mp.B.alpha.matrix)))
    ident = _base_identity(out)
    if not check_identity(out, ident):
        raise PostconditionFailed(f"double fails {ident.value}")
    return out


# --- Lie side -------------------------------------------------------------------


def _lie_compatibility(ctx, bH, aG, aH, rho, mu):
    """``rho(aG x)[a,b] - [rho(x)a, aH b] - [aH a, rho(x)b] + rho(mu(a)x)(aH b) - rho(mu(b)x)(aH a)``.

    ``rho`` acts from G on H, ``mu`` from H on G; indexed ``[x, a, b, out]``.
    """
    rho_a = contract(ctx, "pi,pab->iab", aG, rho)
    return ctx.reduce(
        np.einsum("stv,iuv->istu", bH, rho_a)
        - np.einsum("ivs,wt,vwu->istu", rho, aH, bH)
        - np.einsum("vs,iwt,vwu->istu", aH, rho, bH)
        + np.einsum("spi,puw,wt->istu", mu, rho, aH)
        - np.einsum("tpi,puw,ws->istu", mu, rho, aH)
    )


def _matrix(ctx, alpha, n):
    if alpha is None:
        return ctx.eye(n)
    return alpha.matrix if isinstance(alpha, LinearMap) else ctx.array(alpha)


def check_lie_matched_pair(G, H, rho, mu, alphaG=None, alphaH=None) -> CheckReport:
    """Compatibility of ``rho: G -> End(H)`` and ``mu: H -> End(G)`` on basis tuples."""
    G, H = as_plain(G), as_plain(H)
    ctx, n, m = G.ctx, G.n, H.n
    aG, aH = _matrix(ctx, alphaG, n), _matrix(ctx, alphaH, m)
    rho, mu = ctx.array(rho), ctx.array(mu)
    if rho.shape != (n, m, m) or mu.shape != (m, n, n):
        raise DimensionMismatch("rho must be (n, m, m) and mu must be (m, n, n)")
    for name, rep in (
        ("rho", check_lie_representation(G, aG, rho, aH)),
        ("mu", check_lie_representation(H, aH, mu, aG)),
    ):
        if not rep:
            raise NotARepresentation(f"{name} is not a representation: {rep.witness.equation}")
    eqs = []
    for name, res in (
        ("rho(alpha x)[a,b] compatibility", _lie_compatibility(ctx, H.c, aG, aH, rho, mu)),
        ("mu(alpha a)[x,y] compatibility", _lie_compatibility(ctx, G.c, aH, aG, mu, rho)),
    ):
        eqs.append((name, res, ctx.zeros(res.shape)))
    return _run_equations("lie-matched-pair", ctx, eqs)


@dataclass(frozen=True)
class LieMatchedPair:
    G: AlgebraSC
    H: AlgebraSC
    rho: np.ndarray
    mu: np.ndarray
    alphaG: LinearMap
    alphaH: LinearMap


def induced_lie_matched_pair(mp: MatchedPair) -> LieMatchedPair:
    """Commutator algebras with the difference actions ``l - r``."""
    rep = check_matched_pair(mp, strict=False)
    if not rep:
        raise NotAMatchedPair("not a matched pair", rep)
    ctx = mp.ctx
    out = LieMatchedPair(
        commutator_algebra(mp.A.alg),
        commutator_algebra(mp.B.alg),
        ctx.reduce(mp.lA - mp.rA),
        ctx.reduce(mp.lB - mp.rB),
        mp.A.alpha,
        mp.B.alpha,
    )
    if not check_lie_matched_pair(out.G, out.H, out.rho, out.mu, out.alphaG, out.alphaH):
        raise PostconditionFailed("induced Lie matched pair fails its compatibility equations")
    return out


# --- dual pair ------------------------------------------------------------------


def dual_matched_pair(A, dual_product) -> MatchedPair:
    """``(A, A*, R*, L*, R_o*, L_o*)`` with every starred map a transpose."""
    A, B = as_plain(A), as_plain(dual_product)
    if A.n != B.n:
        raise DimensionMismatch(f"dual product has dimension {B.n}, expected {A.n}")
    t = lambda s: s.transpose(0, 2, 1)  # noqa: E731
    return MatchedPair(
        HomAlgebra(A), HomAlgebra(B), t(right_ops(A)), t(left_ops(A)), t(right_ops(B)), t(left_ops(B))
    )


def check_dual_matched_pair(A, dual_product) -> CheckReport:
    """The three reduced equations for the dual pair on ``A + A*``.

    The remaining three equations of the general theorem are equivalent to
    these by transposition, and the two bimodule conditions follow from L and
    R commuting on each side.
    """
    A, B = as_plain(A), as_plain(dual_product)
    if A.n != B.n:
        raise DimensionMismatch(f"dual product has dimension {B.n}, expected {A.n}")
    if not check_identity(A, "lr-commute"):
        raise LRNotCommuting("left and right multiplications of A do not commute")
    mp = dual_matched_pair(A, B)
    ctx = A.ctx
    eye = ctx.eye(A.n)
    rep = check_identity(B, "nearly-associative")
    if not rep:
        return CheckReport("dual-matched-pair", False, rep.witness, {"stage": "base-B"})
    eqs = _compatibility(ctx, A.c, eye, eye, mp.lA, mp.rA, mp.lB, mp.rB, 1)
    rep = _run_equations("dual-matched-pair", ctx, eqs)
    return CheckReport("dual-matched-pair", rep.holds, rep.witness, {} if rep else {"stage": "compatibility"})
