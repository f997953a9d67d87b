"""Two-dimensional classification: defining equations, the three families,
and exhaustive finite-field enumeration with isomorphism classes.

Enumeration order: a table index ``t`` in ``[0, p**(n**3))`` spells the
flattened tensor ``c`` in base ``p`` with the most significant digit first,
so increasing indices are lexicographically increasing tensors.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraSC,
    CheckReport,
    IdentityId,
    LinearMap,
    Witness,
    as_plain,
    check_identity,
    contract,
    identity_sides,
    multiply,
)
from .errors import (
    CharTwoFamilyIII,
    DimensionMismatch,
    InvalidParams,
    NoSquareRoot,
    PostconditionFailed,
    SearchSpaceTooLarge,
    WrongDimension,
)
from .scalars import FieldContext, PrimeField

MAX_TABLES = 10**9
MAX_ENUM_DIM = 3
MAX_ENUM_PRIME = 7
MAX_CLASSIFY_PRIME = 5
MAX_MATRICES = 2 * 10**7

# Basis triples (x, y, z) of x(yz) = (zx)y, in the order the eight equations are usually listed.
THEOREM31_TRIPLES = (
    (0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0),
    (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1),
)


def theorem31_residuals(alg) -> list:
    """``x(yz) - (zx)y`` for the eight basis triples of a 2-dimensional algebra."""
    alg = as_plain(alg)
    if alg.n != 2:
        raise WrongDimension(f"the eight defining equations need dimension 2, got {alg.n}")
    e = alg.basis
    out = []
    for i, j, k in THEOREM31_TRIPLES:
        x, y, z = e(i), e(j), e(k)
        lhs = multiply(alg, x, multiply(alg, y, z))
        rhs = multiply(alg, multiply(alg, z, x), y)
        out.append(alg.ctx.reduce(lhs - rhs))
    return out


# --- families ---------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyParams:
    """``family`` in {"I", "II", "III"}; params ``(alpha, beta)`` or ``(alpha, beta, gamma, delta)``."""

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in ("I", "II", "III"):
            raise InvalidParams(f"unknown family {self.family!r}")
        want = 4 if self.family == "III" else 2
        if len(self.params) != want:
            raise InvalidParams(f"family {self.family} takes {want} parameters")
        object.__setattr__(self, "params", tuple(self.params))

    @classmethod
    def family_iii(cls, ctx: FieldContext, alpha, beta, gamma, root_index: int = 0) -> FamilyParams:
        """Family III with ``delta`` the chosen square root of ``gamma^2 + 4 alpha beta``."""
        roots = family_iii_roots(ctx, alpha, beta, gamma)
        if not roots:
            raise NoSquareRoot(f"gamma^2 + 4 alpha beta has no square root in {ctx}")
        return cls("III", (alpha, beta, gamma, roots[min(root_index, len(roots) - 1)]))


def family_iii_roots(ctx: FieldContext, alpha, beta, gamma) -> list:
    a, b, g = (ctx.scalar(v) for v in (alpha, beta, gamma))
    s = ctx.sqrt(g * g + 4 * a * b)
    if s is None:
        return []
    return [s] if not s else [s, -s]


def family(fp: FamilyParams, ctx: FieldContext) -> AlgebraSC:
    """Multiplication table of the chosen family, checked to be nearly associative."""
    vals = [ctx.scalar(v) for v in fp.params]
    z = ctx.zero
    if fp.family in ("I", "II"):
        a, b = vals
        if not a and not b:
            raise InvalidParams("(alpha, beta) must not be (0, 0)")
        if fp.family == "I":
            table = {(0, 0): [z, a], (0, 1): [b, z], (1, 0): [b, z], (1, 1): [z, b]}
        else:
            table = {(0, 0): [a, b], (0, 1): [b, a], (1, 0): [b, a], (1, 1): [a, b]}
    else:
        if ctx.characteristic == 2:
            raise CharTwoFamilyIII("family III divides by 2")
        a, b, g, d = vals
        if d * d != g * g + 4 * a * b:
            raise InvalidParams("delta^2 must equal gamma^2 + 4 alpha beta")
        half = (g + d) / ctx.scalar(2)
        table = {(0, 0): [a, z], (1, 1): [b, g], (0, 1): [half, z], (1, 0): [half, z]}
    alg = AlgebraSC.from_table(ctx, 2, table)
    if not check_identity(alg, IdentityId.NEARLY_ASSOCIATIVE):
        raise PostconditionFailed(f"family {fp.family} with {fp.params} is not nearly associative")
    return alg


def family_instances_fp(p: int):
    """Every family instantiation over F_p as ``(FamilyParams, table index)``."""
    ctx = PrimeField(p)
    out = []
    for name in ("I", "II"):
        for a, b in itertools.product(range(p), repeat=2):
            if a or b:
                fp = FamilyParams(name, (a, b))
                out.append((fp, table_index(family(fp, ctx), p)))
    if p != 2:
        for a, b, g in itertools.product(range(p), repeat=3):
            for d in family_iii_roots(ctx, a, b, g):
                fp = FamilyParams("III", (a, b, g, int(d)))
                out.append((fp, table_index(family(fp, ctx), p)))
    return out


# --- enumeration --------------------------------------------------------------------


def _guard(n: int, p: int):
    if not 1 <= n <= MAX_ENUM_DIM:
        raise SearchSpaceTooLarge(f"enumeration supports dimension 1..{MAX_ENUM_DIM}, got {n}")
    if p > MAX_ENUM_PRIME:
        raise SearchSpaceTooLarge(f"enumeration supports primes up to {MAX_ENUM_PRIME}, got {p}")
    PrimeField(p)
    if p ** (n**3) > MAX_TABLES:
        raise SearchSpaceTooLarge(f"{p}^{n**3} tables exceed the limit of {MAX_TABLES}")


def tables_from_indices(idx: np.ndarray, n: int, p: int) -> np.ndarray:
    N = n**3
    powers = p ** np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(idx, dtype=np.int64)[:, None] // powers) % p).reshape(-1, n, n, n)


def table_index(alg, p: int) -> int:
    flat = [int(v) for v in np.asarray(as_plain(alg).c).ravel()]
    t = 0
    for v in flat:
        t = t * p + v
    return t


def satisfies_batch(tables: np.ndarray, p: int, identity: IdentityId) -> np.ndarray:
    """Mask of tables (shape ``(B, n, n, n)``) satisfying a plain identity."""
    ctx = PrimeField(p)
    lhs, rhs = identity_sides(ctx, tables, ctx.eye(tables.shape[-1]), identity)
    bad = ctx.nonzero(lhs - rhs)
    return ~bad.reshape(bad.shape[0], -1).any(axis=1)


def _env_threads() -> int | None:
    env = os.environ.get("NEARASSOC_THREADS")
    try:
        return max(1, int(env)) if env else None
    except ValueError:
        return None


def thread_count(requested: int | None = None) -> int:
    """Worker count: the request (default min(4, cpus)), capped by NEARASSOC_THREADS."""
    cap = _env_threads()
    n = requested or (cap if cap else min(4, os.cpu_count() or 1))
    return max(1, min(n, cap) if cap else n)


def enumerate_indices_fp(n: int, p: int, identity, threads: int | None = None, chunk: int | None = None):
    """Sorted table indices of all F_p algebras satisfying ``identity`` (alpha taken as identity)."""
    if isinstance(identity, str):
        identity = IdentityId.parse(identity)
    _guard(n, p)
    total = p ** (n**3)
    chunk = chunk or (1 << 15 if n < 3 else 1 << 13)
    starts = range(0, total, chunk)

    def work(start):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        return idx[satisfies_batch(tables_from_indices(idx, n, p), p, identity)]

    workers = thread_count(threads)
    if workers == 1 or len(starts) == 1:
        parts = [work(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, starts))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def enumerate_fp(n: int, p: int, identity, threads: int | None = None) -> list:
    """All algebras over F_p of dimension ``n`` satisfying ``identity``, in lexicographic order."""
    ctx = PrimeField(p)
    idx = enumerate_indices_fp(n, p, identity, threads)
    return [AlgebraSC(ctx, t) for t in tables_from_indices(idx, n, p)]


# --- isomorphisms -------------------------------------------------------------------


def _det_batch(T: np.ndarray) -> np.ndarray:
    n = T.shape[-1]
    if n == 1:
        return T[:, 0, 0]
    if n == 2:
        return T[:, 0, 0] * T[:, 1, 1] - T[:, 0, 1] * T[:, 1, 0]
    return (
        T[:, 0, 0] * (T[:, 1, 1] * T[:, 2, 2] - T[:, 1, 2] * T[:, 2, 1])
        - T[:, 0, 1] * (T[:, 1, 0] * T[:, 2, 2] - T[:, 1, 2] * T[:, 2, 0])
        + T[:, 0, 2] * (T[:, 1, 0] * T[:, 2, 1] - T[:, 1, 1] * T[:, 2, 0])
    )


_GL_CACHE: dict = {}


def general_linear_fp(n: int, p: int) -> np.ndarray:
    """All invertible ``n x n`` matrices over F_p, entries in row-major lexicographic order."""
    key = (n, p)
    if key not in _GL_CACHE:
        if n > MAX_ENUM_DIM or p > MAX_ENUM_PRIME or p ** (n * n) > MAX_MATRICES:
            raise SearchSpaceTooLarge(f"{p}^{n * n} candidate matrices exceed the search limit")
        idx = np.arange(p ** (n * n), dtype=np.int64)
        powers = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
        T = ((idx[:, None] // powers) % p).reshape(-1, n, n)
        T = T[_det_batch(T) % p != 0]
        T.setflags(write=False)
        _GL_CACHE[key] = T
    return _GL_CACHE[key]


def _iso_mask(cA, cB, T, p):
    lhs = np.einsum("ijk,tlk->tijl", cA, T) % p
    rhs = np.einsum("tpi,tqj,pql->tijl", T, T, cB) % p
    return ~((lhs != rhs).reshape(T.shape[0], -1).any(axis=1))


def isomorphism_search_fp(A, B):
    """First invertible ``T`` (lexicographic) with ``T(xy) = T(x)T(y)``, or ``None``."""
    A, B = as_plain(A), as_plain(B)
    ctx = A.ctx
    if not isinstance(ctx, PrimeField) or ctx != B.ctx:
        raise DimensionMismatch("isomorphism search needs two algebras over the same F_p")
    if A.n != B.n:
        return None
    T = general_linear_fp(A.n, ctx.p)
    hits = np.flatnonzero(_iso_mask(A.c, B.c, T, ctx.p))
    return LinearMap(ctx, T[hits[0]]) if len(hits) else None


def verify_isomorphism(A, B, T: LinearMap) -> CheckReport:
    """T invertible and multiplicative on all basis pairs."""
    A, B = as_plain(A), as_plain(B)
    ctx = A.ctx
    if T.rows != T.cols or T.rows != A.n or B.n != A.n:
        raise DimensionMismatch("T must be square with the algebras' dimension")
    det = ctx.det(T.matrix)
    if not det:
        return CheckReport("isomorphism", False, Witness((), det, ctx.zero, equation="det(T) = 0"))
    M = T.matrix
    lhs = contract(ctx, "ijk,lk->ijl", A.c, M)
    rhs = contract(ctx, "pi,qj,pql->ijl", M, M, B.c)
    hits = np.argwhere(ctx.nonzero(ctx.reduce(lhs - rhs)).any(axis=-1))
    if len(hits):
        i, j = (int(v) for v in hits[0])
        return CheckReport("isomorphism", False, Witness((i, j), lhs[i, j], rhs[i, j], equation="T(xy) = T(x)T(y)"))
    return CheckReport("isomorphism", True)


def transport(c: np.ndarray, T: np.ndarray, p: int) -> np.ndarray:
    """Structure constants of the image algebra under each ``T`` (batched), so ``T`` becomes an isomorphism."""
    ctx = PrimeField(p)
    Tinv = np.stack([ctx.inverse(t) for t in T]) if T.ndim == 3 else ctx.inverse(T)
    return np.einsum("...lk,ijk,...ia,...jb->...abl", T, c, Tinv, Tinv) % p


# --- classification report ------------------------------------------------------------


def _gl_inverses(n, p):
    key = ("inv", n, p)
    if key not in _GL_CACHE:
        ctx = PrimeField(p)
        inv = np.stack([ctx.inverse(t) for t in general_linear_fp(n, p)])
        inv.setflags(write=False)
        _GL_CACHE[key] = inv
    return _GL_CACHE[key]


def orbit_indices(c: np.ndarray, p: int) -> np.ndarray:
    """Sorted distinct table indices of the GL_n(F_p)-orbit of ``c``."""
    n = c.shape[0]
    T, Tinv = general_linear_fp(n, p), _gl_inverses(n, p)
    images = np.einsum("tlk,ijk,tia,tjb->tabl", T, c, Tinv, Tinv) % p
    powers = p ** np.arange(n**3 - 1, -1, -1, dtype=np.int64)
    return np.unique(images.reshape(len(T), -1) @ powers)


@dataclass(frozen=True)
class IsoClass:
    representative: int
    members: tuple
    families: tuple

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def family_gap(self) -> bool:
        return not self.families


def classify_fp(p: int, threads: int | None = None) -> list:
    """Isomorphism classes of nearly associative 2-dimensional algebras over F_p.

    Classes are GL_2(F_p)-orbits; each is represented by its smallest table
    index and tagged with every family instantiation that lands in it.
    """
    if p > MAX_CLASSIFY_PRIME:
        raise SearchSpaceTooLarge(f"classification supports primes up to {MAX_CLASSIFY_PRIME}, got {p}")
    idx = enumerate_indices_fp(2, p, IdentityId.NEARLY_ASSOCIATIVE, threads)
    class_of = {}
    classes = []
    tables = tables_from_indices(idx, 2, p)
    for t, c in zip(idx.tolist(), tables):
        if t in class_of:
            continue
        orbit = orbit_indices(c, p)
        k = len(classes)
        for m in orbit.tolist():
            class_of[m] = k
        classes.append(orbit)
    tags = [[] for _ in classes]
    for fp, t in family_instances_fp(p):
        tags[class_of[t]].append(fp)
    return [
        IsoClass(int(orbit[0]), tuple(int(v) for v in orbit), tuple(tag))
        for orbit, tag in zip(classes, tags)
    ]


def classify_report_fp(p: int, threads: int | None = None) -> dict:
    """JSON-ready classification report (deterministic)."""
    ctx = PrimeField(p)
    classes = classify_fp(p, threads)
    out = []
    for k, cl in enumerate(classes):
        rep = tables_from_indices(np.array([cl.representative]), 2, p)[0]
        out.append(
            {
                "class": k,
                "representative": ctx.format_array(rep),
                "representative_index": cl.representative,
                "size": cl.size,
                "families": [
                    {"family": f.family, "params": [ctx.format(v) for v in f.params]} for f in cl.families
                ],
                "family_gap": cl.family_gap,
                "note": f"family gap at p = {p}" if cl.family_gap else None,
            }
        )
    return {
        "prime": p,
        "dimension": 2,
        "identity": IdentityId.NEARLY_ASSOCIATIVE.value,
        "count": sum(cl.size for cl in classes),
        "class_count": len(classes),
        "family_gaps": sum(cl.family_gap for cl in classes),
        "classes": out,
    }
