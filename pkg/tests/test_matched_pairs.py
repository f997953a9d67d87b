import numpy as np
import pytest

from nearassoc import (
    AlgebraSC,
    Bimodule,
    HomAlgebra,
    IdentityId,
    LinearMap,
    MatchedPair,
    PrimeField,
    Rationals,
    check_dual_matched_pair,
    check_identity,
    check_lie_matched_pair,
    check_matched_pair,
    double,
    dual_matched_pair,
    induced_lie_matched_pair,
    regular_bimodule,
    semidirect,
)
from nearassoc import fixtures as fx
from nearassoc.algebra import left_ops
from nearassoc.errors import LRNotCommuting, NotABimodule, NotAMatchedPair, NotARepresentation

import oracles
from strategies import endomorphisms_fp, yau_twist

Q = Rationals()
F2, F3 = PrimeField(2), PrimeField(3)


def zero_pair(A, B):
    return MatchedPair.zero_actions(A, B)


def semidirect_pair(b: Bimodule):
    """``(A, V)`` with V a zero-product algebra, actions of A from ``b`` and none back."""
    ctx, n, m = b.ctx, b.n, b.vdim
    V = HomAlgebra(AlgebraSC.zero(ctx, m), LinearMap(ctx, b.phi))
    return MatchedPair(b.base, V, b.l, b.r, ctx.zeros((m, n, n)), ctx.zeros((m, n, n)))


def test_zero_actions_examples():
    assert check_matched_pair(zero_pair(fx.e2b(), fx.zero(2)))
    mp = zero_pair(fx.e2b(), fx.e2b())
    assert check_matched_pair(mp)
    d = double(mp)
    assert d.n == 4 and check_identity(d, IdentityId.NEARLY_ASSOCIATIVE)
    c = Q.zeros((4, 4, 4))
    c[:2, :2, :2] = fx.e2b().c
    c[2:, 2:, 2:] = fx.e2b().c
    assert Q.equal(d.c, c)
    d0 = double(zero_pair(fx.e2b(), fx.zero(2)))
    c[2:, 2:, 2:] = 0
    assert Q.equal(d0.c, c)


def test_non_bimodule_action_is_reported():
    A, B = HomAlgebra(fx.e2b()), HomAlgebra(fx.zero(2))
    lB = left_ops(fx.e2a())
    mp = MatchedPair(A, B, Q.zeros((2, 2, 2)), Q.zeros((2, 2, 2)), lB, Q.zeros((2, 2, 2)))
    with pytest.raises(NotABimodule, match="actions of B"):
        check_matched_pair(mp)
    rep = check_matched_pair(mp, strict=False)
    assert not rep and rep.details["stage"] == "bimodule-B"
    with pytest.raises(NotAMatchedPair):
        double(mp)


def test_compatibility_failure_by_hand():
    # l_B(f1) sends e1 to e2 and squares to zero, so both action pairs are bimodules.
    # The first equation at x = y = e1, a = f1 keeps only -(l_B(f1)e1)e1 = -(e2 e1) = -e1.
    A, B = HomAlgebra(fx.e2b()), HomAlgebra(fx.zero(2))
    lB = Q.zeros((2, 2, 2))
    lB[0] = Q.array([[0, 0], [1, 0]])
    z = Q.zeros((2, 2, 2))
    mp = MatchedPair(A, B, z, z, lB, z)
    rep = check_matched_pair(mp)
    assert not rep and rep.details["stage"] == "compatibility"
    assert rep.witness.equation.startswith("1:")
    assert rep.witness.indices == (0, 0)
    # Rows of the witness are indexed by a, columns by the output coordinate.
    assert Q.equal(rep.witness.lhs[0], Q.array([-1, 0]))
    assert not oracles.matched_pair_holds(Q, A.c, Q.eye(2), B.c, Q.eye(2), z, z, lB, z)


def test_zero_action_pairs_over_f2(f2_na):
    for A in f2_na:
        for B in f2_na:
            mp = zero_pair(A, B)
            assert check_matched_pair(mp)
            assert check_identity(double(mp), IdentityId.NEARLY_ASSOCIATIVE)


def test_double_matches_loop_construction(f2_na):
    for A in f2_na[::3]:
        b = regular_bimodule(A)
        mp = semidirect_pair(b)
        d = double(mp)
        expected = oracles.double_tensor(F2, A.c, mp.B.c, mp.lA, mp.rA, mp.lB, mp.rB)
        assert F2.equal(d.c, F2.array(expected))
        assert F2.equal(d.c, semidirect(b).c)


def test_semidirect_is_degenerate_double(f3_na):
    for A in f3_na:
        b = regular_bimodule(A)
        assert F3.equal(double(semidirect_pair(b)).c, semidirect(b).c)


def test_matched_pair_agrees_with_oracle_on_random_actions():
    rng = np.random.default_rng(19)
    algs1 = [AlgebraSC(F2, [[[0]]]), AlgebraSC(F2, [[[1]]])]
    from nearassoc.classify2d import enumerate_fp

    algs2 = enumerate_fp(2, 2, "nearly-associative")
    passed = 0
    for trial in range(400):
        A = algs1[trial % 2]
        B = algs2[rng.integers(len(algs2))]
        if trial % 4 == 3:
            A, B = B, A
        n, m = A.n, B.n
        sparse = lambda shape: (rng.random(shape) < 0.2).astype(np.int64)  # noqa: E731
        mp = MatchedPair(A, B, sparse((n, m, m)), sparse((n, m, m)), sparse((m, n, n)), sparse((m, n, n)))
        got = check_matched_pair(mp, strict=False).holds
        want = oracles.matched_pair_holds(F2, A.c, F2.eye(n), B.c, F2.eye(m), mp.lA, mp.rA, mp.lB, mp.rB)
        assert got == want
        passed += got
        if got:
            assert check_identity(double(mp), IdentityId.NEARLY_ASSOCIATIVE)
    assert passed > 10


def test_swapped_pair_has_same_verdict(f2_na):
    b = regular_bimodule(f2_na[5])
    mp = semidirect_pair(b)
    assert check_matched_pair(mp).holds == check_matched_pair(mp.swapped()).holds


# --- Hom matched pairs ------------------------------------------------------------------


def _yau(algs, limit):
    return [yau_twist(a, T) for a in algs for T in endomorphisms_fp(a)[:limit]]


def test_hom_zero_action_doubles(f3_na):
    hs = _yau(f3_na[::15], 4)
    for A in hs:
        for B in hs[::3]:
            d = double(zero_pair(A, B))
            assert check_identity(d, IdentityId.HOM_NEARLY_ASSOCIATIVE)
            lie = induced_lie_matched_pair(zero_pair(A, B))
            assert F3.is_zero(lie.rho) and F3.is_zero(lie.mu)


def test_hom_semidirect_shaped_pairs(f3_na):
    for h in _yau(f3_na[::5], 5):
        mp = semidirect_pair(regular_bimodule(h))
        assert check_matched_pair(mp)
        d = double(mp)
        assert check_identity(d, IdentityId.HOM_NEARLY_ASSOCIATIVE)
        assert oracles.matched_pair_holds(F3, h.c, h.alpha.matrix, mp.B.c, mp.B.alpha.matrix, mp.lA, mp.rA, mp.lB, mp.rB)
        lie = induced_lie_matched_pair(mp)
        assert oracles.lie_matched_pair_holds(F3, lie.G.c, lie.H.c, lie.rho, lie.mu, lie.alphaG.matrix, lie.alphaH.matrix)


def test_hom_matched_pair_agrees_with_oracle_on_random_instances(f2_na):
    rng = np.random.default_rng(23)
    hs = _yau(f2_na, 3)
    ones = [HomAlgebra(AlgebraSC(F2, [[[v]]]), LinearMap(F2, [[a]])) for v in (0, 1) for a in (0, 1)]
    passed = 0
    for trial in range(300):
        A, B = ones[rng.integers(4)], hs[rng.integers(len(hs))]
        if trial % 2:
            A, B = B, A
        n, m = A.n, B.n
        sparse = lambda shape: (rng.random(shape) < 0.2).astype(np.int64)  # noqa: E731
        mp = MatchedPair(A, B, sparse((n, m, m)), sparse((n, m, m)), sparse((m, n, n)), sparse((m, n, n)))
        got = check_matched_pair(mp, strict=False).holds
        want = oracles.matched_pair_holds(
            F2, A.c, A.alpha.matrix, B.c, B.alpha.matrix, mp.lA, mp.rA, mp.lB, mp.rB
        )
        assert got == want
        if got:
            passed += 1
            assert check_identity(double(mp), IdentityId.HOM_NEARLY_ASSOCIATIVE)
            lie = induced_lie_matched_pair(mp)
            assert check_lie_matched_pair(lie.G, lie.H, lie.rho, lie.mu, lie.alphaG, lie.alphaH)
    assert passed > 10


# --- Lie matched pairs ------------------------------------------------------------------


def _affine_lie(ctx):
    return AlgebraSC.from_table(ctx, 2, {(0, 1): [1, 0], (1, 0): [-1, 0]})


def test_lie_zero_actions():
    G = _affine_lie(F3)
    z = F3.zeros((2, 2, 2))
    assert check_lie_matched_pair(G, G, z, z)


def test_lie_compatibility_violation():
    G = _affine_lie(F3)
    rho = F3.array([F3.zeros((2, 2)), F3.eye(2)])
    z = F3.zeros((2, 2, 2))
    rep = check_lie_matched_pair(G, G, rho, z)
    assert not rep
    assert not oracles.lie_matched_pair_holds(F3, G.c, G.c, rho, z, F3.eye(2), F3.eye(2))


def test_lie_non_representation():
    G = _affine_lie(F3)
    rho = F3.array([F3.eye(2), F3.zeros((2, 2))])
    with pytest.raises(NotARepresentation, match="rho"):
        check_lie_matched_pair(G, G, rho, F3.zeros((2, 2, 2)))


def test_lie_adjoint_pair_agrees_with_oracle():
    G = _affine_lie(F3)
    ad = G.c.transpose(0, 2, 1)
    z = F3.zeros((2, 2, 2))
    assert check_lie_matched_pair(G, G, ad, z).holds == oracles.lie_matched_pair_holds(
        F3, G.c, G.c, ad, z, F3.eye(2), F3.eye(2)
    )


def test_induced_lie_pair_of_commutative_factors():
    lie = induced_lie_matched_pair(zero_pair(fx.e2b(), fx.e2b()))
    assert Q.is_zero(lie.G.c) and Q.is_zero(lie.H.c)


# --- dual pairs -------------------------------------------------------------------------


def test_dual_pair_examples():
    assert check_dual_matched_pair(fx.e2b(), fx.zero(2))
    full = check_matched_pair(dual_matched_pair(fx.e2b(), fx.e2b()), strict=False).holds
    assert check_dual_matched_pair(fx.e2b(), fx.e2b()).holds == full
    with pytest.raises(LRNotCommuting):
        check_dual_matched_pair(fx.e3a(), fx.zero(3))


def test_dual_pair_agrees_with_full_check(f3_na):
    for A in f3_na:
        for B in f3_na[::4]:
            dual = check_dual_matched_pair(A, B).holds
            full = check_matched_pair(dual_matched_pair(A, B), strict=False).holds
            assert dual == full


def test_dual_pair_agrees_with_oracle(f3_na):
    for A in f3_na[::5]:
        for B in f3_na[::9]:
            mp = dual_matched_pair(A, B)
            e = F3.eye(2)
            assert check_dual_matched_pair(A, B).holds == oracles.matched_pair_holds(
                F3, A.c, e, B.c, e, mp.lA, mp.rA, mp.lB, mp.rB
            )
