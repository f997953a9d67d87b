"""Structure-constant algebras, Hom-twists and the identity catalog.

An algebra of dimension ``n`` is a dense tensor ``c`` with
``e_i . e_j = sum_k c[i, j, k] e_k``.  Matrices act on column coordinate
vectors: ``M[i, j]`` is the coefficient of ``e_i`` in the image of ``e_j``.

Identities are checked on basis tuples only; multilinearity makes that
equivalent to checking all vectors (the flexible law, which is quadratic in
one argument, is checked through its polarisation).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ContextMismatch, DimensionMismatch
from .scalars import FieldContext

MAX_DIM = 16


def contract(ctx: FieldContext, spec: str, *operands) -> np.ndarray:
    """``einsum`` followed by reduction into the field."""
    return ctx.reduce(np.einsum(spec, *operands))


@dataclass(frozen=True, eq=False)
class AlgebraSC:
    """Finite-dimensional algebra given by structure constants."""

    ctx: FieldContext
    c: np.ndarray

    def __post_init__(self):
        c = self.ctx.array(self.c)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise DimensionMismatch(f"structure constants must be n x n x n, got shape {c.shape}")
        if not 1 <= c.shape[0] <= MAX_DIM:
            raise DimensionMismatch(f"dimension must be between 1 and {MAX_DIM}, got {c.shape[0]}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @classmethod
    def zero(cls, ctx: FieldContext, n: int) -> AlgebraSC:
        return cls(ctx, ctx.zeros((n, n, n)))

    @classmethod
    def from_table(cls, ctx: FieldContext, n: int, table: dict) -> AlgebraSC:
        """Build from ``{(i, j): coordinate vector}``; missing products are zero."""
        c = ctx.zeros((n, n, n))
        for (i, j), vec in table.items():
            c[i, j, :] = ctx.array(vec)
        return cls(ctx, c)

    def basis(self, i: int) -> np.ndarray:
        v = self.ctx.zeros(self.n)
        v[i] = self.ctx.one if self.ctx.dtype is object else 1
        return v

    def vector(self, data) -> np.ndarray:
        v = self.ctx.array(data)
        if v.shape != (self.n,):
            raise DimensionMismatch(f"expected a vector of length {self.n}, got shape {v.shape}")
        return v

    def is_commutative(self) -> bool:
        return self.ctx.equal(self.c, self.c.transpose(1, 0, 2))

    def __eq__(self, other):
        if not isinstance(other, AlgebraSC):
            return NotImplemented
        return self.ctx == other.ctx and self.c.shape == other.c.shape and bool(
            np.all(self.c == other.c)
        )

    __hash__ = None

    def __repr__(self):
        return f"AlgebraSC({self.ctx}, n={self.n})"


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Matrix of a linear map between coordinate spaces."""

    ctx: FieldContext
    matrix: np.ndarray

    def __post_init__(self):
        m = self.ctx.array(self.matrix)
        if m.ndim != 2:
            raise DimensionMismatch(f"a linear map needs a 2-d matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @classmethod
    def identity(cls, ctx: FieldContext, n: int) -> LinearMap:
        return cls(ctx, ctx.eye(n))

    @classmethod
    def zero(cls, ctx: FieldContext, rows: int, cols: int | None = None) -> LinearMap:
        return cls(ctx, ctx.zeros((rows, rows if cols is None else cols)))

    def is_identity(self) -> bool:
        return self.rows == self.cols and self.ctx.equal(self.matrix, self.ctx.eye(self.rows))

    def __call__(self, v) -> np.ndarray:
        v = self.ctx.array(v)
        if v.shape != (self.cols,):
            raise DimensionMismatch(f"map expects length {self.cols}, got {v.shape}")
        return contract(self.ctx, "ij,j->i", self.matrix, v)

    def __matmul__(self, other: LinearMap) -> LinearMap:
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        if self.cols != other.rows:
            raise DimensionMismatch("incompatible shapes for composition")
        return LinearMap(self.ctx, contract(self.ctx, "ij,jk->ik", self.matrix, other.matrix))

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.matrix.shape == other.matrix.shape
            and bool(np.all(self.matrix == other.matrix))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class HomAlgebra:
    """Algebra together with a twisting map ``alpha``; identity alpha is the plain case."""

    alg: AlgebraSC
    alpha: LinearMap = None

    def __post_init__(self):
        alpha = self.alpha
        if alpha is None:
            alpha = LinearMap.identity(self.alg.ctx, self.alg.n)
        elif not isinstance(alpha, LinearMap):
            alpha = LinearMap(self.alg.ctx, alpha)
        if alpha.ctx != self.alg.ctx:
            raise ContextMismatch("twisting map lives over a different field")
        if alpha.rows != self.alg.n or alpha.cols != self.alg.n:
            raise DimensionMismatch(f"alpha must be {self.alg.n} x {self.alg.n}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def ctx(self) -> FieldContext:
        return self.alg.ctx

    @property
    def n(self) -> int:
        return self.alg.n

    @property
    def c(self) -> np.ndarray:
        return self.alg.c

    def is_plain(self) -> bool:
        return self.alpha.is_identity()

    def __eq__(self, other):
        if not isinstance(other, HomAlgebra):
            return NotImplemented
        return self.alg == other.alg and self.alpha == other.alpha

    __hash__ = None


def as_hom(a) -> HomAlgebra:
    if isinstance(a, HomAlgebra):
        return a
    if isinstance(a, AlgebraSC):
        return HomAlgebra(a)
    raise TypeError(f"expected an algebra, got {type(a).__name__}")


def as_plain(a) -> AlgebraSC:
    return a.alg if isinstance(a, HomAlgebra) else a


class IdentityId(enum.Enum):
    NEARLY_ASSOCIATIVE = "nearly-associative"
    ASSOCIATIVE = "associative"
    ANTI_FLEXIBLE = "anti-flexible"
    FLEXIBLE = "flexible"
    HOM_NEARLY_ASSOCIATIVE = "hom-nearly-associative"
    HOM_ASSOCIATIVE = "hom-associative"
    G1_HOM_ASSOCIATIVE = "g1-hom-associative"
    G2_HOM_ASSOCIATIVE = "g2-hom-associative"
    G3_HOM_ASSOCIATIVE = "g3-hom-associative"
    G4_HOM_ASSOCIATIVE = "g4-hom-associative"
    G5_HOM_ASSOCIATIVE = "g5-hom-associative"
    G6_HOM_ASSOCIATIVE = "g6-hom-associative"
    LR_COMMUTE = "lr-commute"
    HOM_FLEXIBLE = "hom-flexible"
    # The same law is also called Hom-center-symmetric.
    HOM_ANTI_FLEXIBLE = "hom-anti-flexible"

    @classmethod
    def g_hom(cls, k: int) -> IdentityId:
        return cls(f"g{k}-hom-associative")

    @classmethod
    def parse(cls, name: str) -> IdentityId:
        key = name.strip().lower().replace("_", "-")
        key = _SYNONYMS.get(key, key)
        return cls(key)

    @property
    def is_hom(self) -> bool:
        return self in _HOM_IDS

    @property
    def plain_counterpart(self) -> IdentityId | None:
        return _PLAIN_OF.get(self)

    @property
    def subgroup(self) -> str | None:
        if self.value.startswith("g") and self.value[1].isdigit():
            return f"G{self.value[1]}"
        return None


_SYNONYMS = {
    "hom-center-symmetric": "hom-anti-flexible",
    "center-symmetric": "anti-flexible",
    "hom-lie-admissible": "g6-hom-associative",
}

_HOM_IDS = frozenset(
    [
        IdentityId.HOM_NEARLY_ASSOCIATIVE,
        IdentityId.HOM_ASSOCIATIVE,
        IdentityId.HOM_FLEXIBLE,
        IdentityId.HOM_ANTI_FLEXIBLE,
    ]
    + [IdentityId.g_hom(k) for k in range(1, 7)]
)

_PLAIN_OF = {
    IdentityId.HOM_NEARLY_ASSOCIATIVE: IdentityId.NEARLY_ASSOCIATIVE,
    IdentityId.HOM_ASSOCIATIVE: IdentityId.ASSOCIATIVE,
    IdentityId.HOM_FLEXIBLE: IdentityId.FLEXIBLE,
    IdentityId.HOM_ANTI_FLEXIBLE: IdentityId.ANTI_FLEXIBLE,
}

# Elements of each subgroup of S_3 as (images of 0, 1, 2), with signatures.
SUBGROUPS = {
    "G1": [((0, 1, 2), 1)],
    "G2": [((0, 1, 2), 1), ((1, 0, 2), -1)],
    "G3": [((0, 1, 2), 1), ((0, 2, 1), -1)],
    "G4": [((0, 1, 2), 1), ((2, 1, 0), -1)],
    "G5": [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1)],
    "G6": [
        ((0, 1, 2), 1),
        ((1, 2, 0), 1),
        ((2, 0, 1), 1),
        ((1, 0, 2), -1),
        ((0, 2, 1), -1),
        ((2, 1, 0), -1),
    ],
}


@dataclass(frozen=True)
class Witness:
    """A failing instance: basis indices, the evaluated sides, and the arguments used."""

    indices: tuple
    lhs: Any
    rhs: Any
    args: tuple = ()
    equation: str | None = None


@dataclass(frozen=True)
class CheckReport:
    identity: Any
    holds: bool
    witness: Witness | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    @property
    def name(self) -> str:
        return self.identity.value if isinstance(self.identity, IdentityId) else str(self.identity)


# --- evaluation helpers -------------------------------------------------------


def multiply(alg, x, y) -> np.ndarray:
    """Product of two coordinate vectors."""
    alg = as_plain(alg)
    x, y = alg.vector(x), alg.vector(y)
    return contract(alg.ctx, "i,j,ijk->k", x, y, alg.c)


def _apply(ctx, matrix, v):
    return contract(ctx, "ij,j->i", matrix, v)


def hom_associator(h, x, y, z) -> np.ndarray:
    """``(x y) alpha(z) - alpha(x) (y z)``."""
    h = as_hom(h)
    ctx, A = h.ctx, h.alpha.matrix
    x, y, z = (h.alg.vector(v) for v in (x, y, z))
    left = multiply(h.alg, multiply(h.alg, x, y), _apply(ctx, A, z))
    right = multiply(h.alg, _apply(ctx, A, x), multiply(h.alg, y, z))
    return ctx.reduce(left - right)


def _assoc_pieces(ctx, c, A):
    """``left[..., i,j,k,:] = (e_i e_j) A(e_k)``, ``right[..., i,j,k,:] = A(e_i)(e_j e_k)``."""
    left = contract(ctx, "...ijm,...qk,...mql->...ijkl", c, A, c)
    right = contract(ctx, "...pi,...jkm,...pml->...ijkl", A, c, c)
    return left, right


def _perm(t, images):
    """Permute the three basis axes: out[x0,x1,x2] = t[x_{images[0]}, x_{images[1]}, x_{images[2]}]."""
    letters = "ijk"
    src = "".join(letters[s] for s in images)
    return np.einsum(f"...{src}l->...ijkl", t)


def identity_sides(ctx, c, A, identity: IdentityId):
    """Both sides of an identity on all basis tuples.

    ``c`` may carry leading batch axes.  Returns ``(lhs, rhs)`` of shape
    ``(..., n, n, n, n)``; the identity holds iff they agree everywhere.
    """
    if not identity.is_hom or identity is IdentityId.LR_COMMUTE:
        A = ctx.eye(c.shape[-1])
    left, right = _assoc_pieces(ctx, c, A)
    assoc = ctx.reduce(left - right)

    if identity in (IdentityId.NEARLY_ASSOCIATIVE, IdentityId.HOM_NEARLY_ASSOCIATIVE):
        # A(x)(y z) = (z x) A(y)
        return right, _perm(left, (2, 0, 1))
    if identity in (IdentityId.ASSOCIATIVE, IdentityId.HOM_ASSOCIATIVE):
        return left, right
    if identity in (IdentityId.ANTI_FLEXIBLE, IdentityId.HOM_ANTI_FLEXIBLE):
        return assoc, _perm(assoc, (2, 1, 0))
    if identity in (IdentityId.FLEXIBLE, IdentityId.HOM_FLEXIBLE):
        # Polarised form of a(x, y, x) = 0: a(e_i,e_j,e_i) = 0 and, for i != k,
        # a(e_i,e_j,e_k) + a(e_k,e_j,e_i) = 0.
        sym = ctx.reduce(assoc + _perm(assoc, (2, 1, 0)))
        n = c.shape[-1]
        diag = np.arange(n)
        sym[..., diag, :, diag, :] = assoc[..., diag, :, diag, :]
        return sym, ctx.zeros(sym.shape)
    if identity is IdentityId.LR_COMMUTE:
        # L(e_i) R(e_j) e_k = e_i (e_k e_j)  vs  R(e_j) L(e_i) e_k = (e_i e_k) e_j
        return _perm(right, (0, 2, 1)), _perm(left, (0, 2, 1))
    group = identity.subgroup
    if group is not None:
        total = ctx.zeros(assoc.shape)
        for images, sign in SUBGROUPS[group]:
            total = total + sign * _perm(assoc, images)
        return ctx.reduce(total), ctx.zeros(assoc.shape)
    raise ValueError(f"unhandled identity {identity}")


def _first_failure(ctx, lhs, rhs, order=None):
    """Index of the first basis tuple whose residual vector is nonzero, or None."""
    bad = ctx.nonzero(ctx.reduce(lhs - rhs)).any(axis=-1)
    if order is not None:
        for idx in order:
            if bad[idx]:
                return idx
        return None
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return None
    return tuple(int(v) for v in hits[0])


def _flexible_order(n):
    # Diagonal tuples first so an off-diagonal witness e_i + e_k isolates the cross term.
    diag = [(i, j, i) for i in range(n) for j in range(n)]
    cross = [(i, j, k) for i in range(n) for j in range(n) for k in range(i + 1, n)]
    return diag + cross


def _witness_args(alg, identity, idx):
    e = alg.basis
    i, j, k = idx
    if identity in (IdentityId.FLEXIBLE, IdentityId.HOM_FLEXIBLE):
        x = e(i) if i == k else alg.ctx.reduce(e(i) + e(k))
        return (x, e(j))
    return (e(i), e(j), e(k))


def evaluate_identity(h, identity: IdentityId, *args):
    """Both sides of ``identity`` evaluated directly on the given vectors.

    Ternary identities take ``(x, y, z)``; the flexible laws take ``(x, y)`` and
    evaluate ``a(x, y, x)``; LRCommute takes ``(x, y, z)`` meaning
    ``L(x) R(y) z`` against ``R(y) L(x) z``.
    """
    h = as_hom(h)
    ctx = h.ctx
    plain = HomAlgebra(h.alg)
    hh = h if identity.is_hom else plain
    mul = lambda u, v: multiply(h.alg, u, v)  # noqa: E731
    a = lambda u, v, w: hom_associator(hh, u, v, w)  # noqa: E731
    zero = ctx.zeros(h.n)
    if identity in (IdentityId.FLEXIBLE, IdentityId.HOM_FLEXIBLE):
        x, y = args
        return a(x, y, x), zero
    x, y, z = args
    al = hh.alpha
    if identity in (IdentityId.NEARLY_ASSOCIATIVE, IdentityId.HOM_NEARLY_ASSOCIATIVE):
        return mul(al(x), mul(y, z)), mul(mul(z, x), al(y))
    if identity in (IdentityId.ASSOCIATIVE, IdentityId.HOM_ASSOCIATIVE):
        return mul(mul(x, y), al(z)), mul(al(x), mul(y, z))
    if identity in (IdentityId.ANTI_FLEXIBLE, IdentityId.HOM_ANTI_FLEXIBLE):
        return a(x, y, z), a(z, y, x)
    if identity is IdentityId.LR_COMMUTE:
        return mul(x, mul(z, y)), mul(mul(x, z), y)
    group = identity.subgroup
    vs = (x, y, z)
    total = zero
    for images, sign in SUBGROUPS[group]:
        total = ctx.reduce(total + sign * a(*(vs[s] for s in images)))
    return total, zero


def check_identity(h, identity: IdentityId) -> CheckReport:
    """Verify ``identity`` on all basis tuples; plain identities ignore alpha."""
    if isinstance(identity, str):
        identity = IdentityId.parse(identity)
    h = as_hom(h)
    ctx = h.ctx
    lhs, rhs = identity_sides(ctx, h.c, h.alpha.matrix, identity)
    flexible = identity in (IdentityId.FLEXIBLE, IdentityId.HOM_FLEXIBLE)
    order = _flexible_order(h.n) if flexible else None
    idx = _first_failure(ctx, lhs, rhs, order)
    details = {}
    if flexible:
        assoc_id = IdentityId.HOM_ASSOCIATIVE if identity.is_hom else IdentityId.ASSOCIATIVE
        left, right = identity_sides(ctx, h.c, h.alpha.matrix, assoc_id)
        assoc = ctx.reduce(left - right)
        details["trilinear"] = ctx.is_zero(assoc + _perm(assoc, (2, 1, 0)))
    if idx is None:
        return CheckReport(identity, True, details=details)
    args = _witness_args(h.alg, identity, idx)
    wl, wr = evaluate_identity(h, identity, *args)
    return CheckReport(identity, False, Witness(idx, wl, wr, args), details)


# --- multiplication operators ---------------------------------------------------


def left_op(alg, x) -> LinearMap:
    """Matrix of ``y -> x . y``."""
    alg = as_plain(alg)
    return LinearMap(alg.ctx, contract(alg.ctx, "i,ijk->kj", alg.vector(x), alg.c))


def right_op(alg, x) -> LinearMap:
    """Matrix of ``y -> y . x``."""
    alg = as_plain(alg)
    return LinearMap(alg.ctx, contract(alg.ctx, "i,jik->kj", alg.vector(x), alg.c))


def left_ops(alg) -> np.ndarray:
    """Stack of ``L(e_i)`` matrices, shape ``(n, n, n)``."""
    return np.ascontiguousarray(as_plain(alg).c.transpose(0, 2, 1))


def right_ops(alg) -> np.ndarray:
    """Stack of ``R(e_i)`` matrices, shape ``(n, n, n)``."""
    return np.ascontiguousarray(as_plain(alg).c.transpose(1, 2, 0))


def operator_identity_report(alg) -> CheckReport:
    """Check L(x)L(y)=R(y)R(x), L(x)R(y)=L(y.x), R(x)L(y)=R(x.y) on basis pairs."""
    alg = as_plain(alg)
    ctx, n = alg.ctx, alg.n
    L, R = left_ops(alg), right_ops(alg)
    for i in range(n):
        for j in range(n):
            Li, Lj, Ri, Rj = (left_op(alg, alg.basis(i)), left_op(alg, alg.basis(j)),
                              right_op(alg, alg.basis(i)), right_op(alg, alg.basis(j)))
            ji = alg.c[j, i]
            ij = alg.c[i, j]
            checks = (
                ("L(x)L(y)=R(y)R(x)", (Li @ Lj).matrix, (Rj @ Ri).matrix),
                ("L(x)R(y)=L(y.x)", (Li @ Rj).matrix, contract(ctx, "k,kab->ab", ji, L)),
                ("R(x)L(y)=R(x.y)", (Ri @ Lj).matrix, contract(ctx, "k,kab->ab", ij, R)),
            )
            for name, lhs, rhs in checks:
                if not ctx.equal(lhs, rhs):
                    return CheckReport(
                        "operator-identities", False, Witness((i, j), lhs, rhs, equation=name)
                    )
    return CheckReport("operator-identities", True)


# --- commutators and Hom-Lie structure ------------------------------------------


def commutator_algebra(alg) -> AlgebraSC:
    alg = as_plain(alg)
    return AlgebraSC(alg.ctx, alg.ctx.reduce(alg.c - alg.c.transpose(1, 0, 2)))


def check_hom_lie(bracket: AlgebraSC, alpha: LinearMap | None = None) -> CheckReport:
    """Skew-symmetry on basis pairs and the Hom-Jacobi identity on basis triples."""
    bracket = as_plain(bracket)
    ctx, b, n = bracket.ctx, bracket.c, bracket.n
    if alpha is None:
        alpha = LinearMap.identity(ctx, n)
    if alpha.rows != n or alpha.cols != n:
        raise DimensionMismatch(f"alpha must be {n} x {n}")
    skew = ctx.nonzero(ctx.reduce(b + b.transpose(1, 0, 2))).any(axis=-1)
    hits = np.argwhere(skew)
    if len(hits):
        i, j = (int(v) for v in hits[0])
        return CheckReport(
            "hom-lie", False,
            Witness((i, j), b[i, j], ctx.reduce(-b[j, i]), equation="skew-symmetry"),
        )
    # q[i,j,k] = [alpha(e_i), [e_j, e_k]]
    q = contract(ctx, "pi,jkm,pml->ijkl", alpha.matrix, b, b)
    jac = ctx.reduce(q + _perm(q, (1, 2, 0)) + _perm(q, (2, 0, 1)))
    idx = _first_failure(ctx, jac, ctx.zeros(jac.shape))
    if idx is None:
        return CheckReport("hom-lie", True)
    return CheckReport(
        "hom-lie", False,
        Witness(idx, jac[idx], ctx.zeros(n), tuple(bracket.basis(t) for t in idx), "hom-jacobi"),
    )


def is_hom_lie_admissible(h) -> CheckReport:
    h = as_hom(h)
    rep = check_hom_lie(commutator_algebra(h.alg), h.alpha)
    return CheckReport("hom-lie-admissible", rep.holds, rep.witness)
