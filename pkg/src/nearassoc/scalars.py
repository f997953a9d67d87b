"""Exact field arithmetic: rationals, quadratic extensions Q(sqrt d), prime fields F_p.

Each field is described by a :class:`FieldContext`. Scalars are immutable:

* rationals are :class:`fractions.Fraction`,
* elements of Q(sqrt d) are :class:`QuadraticNumber`,
* elements of F_p are :class:`Residue`.

Dense arrays (structure constants, matrices) are stored as numpy arrays. Prime
field arrays hold plain ``int64`` residues so enumeration can be vectorised;
the other fields use ``object`` arrays of their scalar type.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import numpy as np

from .errors import ContextMismatch, DivisionByZero, ParseError

MAX_PRIME = 251

_INT_RE = re.compile(r"[+-]?\d+")
_RAT_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_QUAD_RE = re.compile(
    r"""^(?:
        (?P<a>[+-]?\d+(?:/\d+)?)
        (?:(?P<sign>[+-])(?:(?P<b1>\d+(?:/\d+)?)\*)?rt)?
      |
        (?P<bsign>[+-]?)(?:(?P<b2>\d+(?:/\d+)?)\*)?rt
    )$""",
    re.VERBOSE,
)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def _is_squarefree(d: int) -> bool:
    d = abs(d)
    return all(d % (q * q) for q in range(2, math.isqrt(d) + 1))


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT_RE.fullmatch(text):
        raise ParseError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def _format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@total_ordering
class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a``, ``b`` and square-free ``d``.

    Only plain ``int`` operands are mixed in implicitly; combining with a
    ``Fraction`` or an element of a different extension raises ContextMismatch.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ContextMismatch(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return QuadraticNumber(int(other), 0, self.d)
        if isinstance(other, (Fraction, Residue)):
            raise ContextMismatch(f"cannot combine Q(sqrt {self.d}) with {type(other).__name__}")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(
            self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.d)

    def inverse(self) -> QuadraticNumber:
        n = self.norm()
        if n == 0:
            raise DivisionByZero("division by zero in Q(sqrt d)")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        result = QuadraticNumber(1, 0, self.d)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __lt__(self, other):
        # Total order on coefficient pairs; used only for canonical sorting.
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self.a, self.b) < (o.a, o.b)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return QuadraticField(self.d).format(self)


@total_ordering
class Residue:
    """Element of the prime field F_p, stored as a residue in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "v", int(v) % p)

    def __setattr__(self, name, value):
        raise AttributeError("Residue is immutable")

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise ContextMismatch(f"F_{self.p} vs F_{other.p}")
            return other.v
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return int(other) % self.p
        if isinstance(other, (Fraction, QuadraticNumber)):
            raise ContextMismatch(f"cannot combine F_{self.p} with {type(other).__name__}")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(o - self.v, self.p)

    def __neg__(self):
        return Residue(-self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(self.v * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> Residue:
        if self.v == 0:
            raise DivisionByZero(f"division by zero in F_{self.p}")
        return Residue(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Residue(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Residue(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return self.v == int(other) % self.p
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.v < o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Residue({self.v}, p={self.p})"

    def __str__(self):
        return str(self.v)


class FieldContext:
    """Common interface of the three supported fields.

    Subclasses implement element conversion, text form, and the handful of
    array hooks (``array``, ``reduce``, ``is_zero``) that the tensor code uses.
    """

    kind: str
    dtype = object
    characteristic = 0

    # --- scalars -----------------------------------------------------------
    def scalar(self, value):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def sqrt(self, value):
        raise NotImplementedError

    def random(self, rng):
        raise NotImplementedError

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    def descriptor(self) -> dict:
        raise NotImplementedError

    # --- arrays ------------------------------------------------------------
    def array(self, data) -> np.ndarray:
        """Convert nested data (scalars, ints, strings) to a field array."""
        raw = np.asarray(data, dtype=object)
        flat = [self._element(v) for v in raw.ravel()]
        out = np.empty(raw.shape, dtype=object)
        for idx, v in zip(np.ndindex(raw.shape), flat):
            out[idx] = v
        return out

    def _element(self, v):
        return self.scalar(v)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def nonzero(self, arr: np.ndarray) -> np.ndarray:
        """Boolean mask of the nonzero entries."""
        arr = np.asarray(arr)
        if arr.dtype != object:
            return arr != 0
        return np.vectorize(bool, otypes=[bool])(arr) if arr.size else np.zeros(arr.shape, bool)

    def is_zero(self, arr) -> bool:
        return not self.nonzero(arr).any()

    def equal(self, a, b) -> bool:
        return self.is_zero(self.reduce(np.asarray(a) - np.asarray(b)))

    def elements(self, arr: np.ndarray) -> np.ndarray:
        """Object array of proper scalars (Residue for prime fields)."""
        return arr

    def format_array(self, arr):
        arr = np.asarray(arr)
        if arr.ndim == 0:
            return self.format(arr[()])
        return [self.format_array(a) for a in arr]

    # --- exact linear algebra on small matrices ------------------------------
    def det(self, matrix):
        """Exact determinant by Gaussian elimination."""
        m = [list(row) for row in self.elements(np.asarray(matrix))]
        n = len(m)
        det = self.one
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col]), None)
            if pivot is None:
                return self.zero
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            p = m[col][col]
            det = det * p
            inv = 1 / p if not isinstance(p, (Residue, QuadraticNumber)) else p.inverse()
            for r in range(col + 1, n):
                f = m[r][col] * inv
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return det

    def inverse(self, matrix) -> np.ndarray:
        """Exact inverse; raises DivisionByZero for a singular matrix."""
        a = self.elements(np.asarray(matrix))
        n = a.shape[0]
        aug = [list(a[i]) + [self.one if i == j else self.zero for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col]), None)
            if pivot is None:
                raise DivisionByZero("singular matrix")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            p = aug[col][col]
            inv = p.inverse() if isinstance(p, (Residue, QuadraticNumber)) else 1 / p
            aug[col] = [v * inv for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return self.array([row[n:] for row in aug])


@dataclass(frozen=True)
class Rationals(FieldContext):
    kind = "rational"

    def scalar(self, value) -> Fraction:
        if isinstance(value, bool):
            raise ContextMismatch("booleans are not field elements")
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, str):
            return _parse_rational(value)
        if isinstance(value, QuadraticNumber) and value.b == 0:
            raise ContextMismatch("quadratic-extension scalar passed to Q")
        raise ContextMismatch(f"{type(value).__name__} is not a rational scalar")

    def parse(self, text: str) -> Fraction:
        return _parse_rational(text)

    def format(self, value) -> str:
        return _format_rational(Fraction(value))

    def sqrt(self, value):
        return _rational_sqrt(self.scalar(value))

    def random(self, rng, bound: int = 5):
        return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))

    def descriptor(self) -> dict:
        return {"kind": "rational"}

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class QuadraticField(FieldContext):
    d: int

    kind = "quadratic"

    def __post_init__(self):
        if self.d in (0, 1) or not _is_squarefree(self.d):
            raise ValueError(f"d must be square-free and not 0 or 1, got {self.d}")

    def scalar(self, value) -> QuadraticNumber:
        if isinstance(value, QuadraticNumber):
            if value.d != self.d:
                raise ContextMismatch(f"Q(sqrt {value.d}) element in Q(sqrt {self.d})")
            return value
        if isinstance(value, bool):
            raise ContextMismatch("booleans are not field elements")
        if isinstance(value, (int, np.integer)):
            return QuadraticNumber(int(value), 0, self.d)
        if isinstance(value, str):
            return self.parse(value)
        raise ContextMismatch(f"{type(value).__name__} is not an element of Q(sqrt {self.d})")

    def element(self, a, b) -> QuadraticNumber:
        """Build ``a + b*sqrt(d)`` from rational parts."""
        return QuadraticNumber(a, b, self.d)

    @property
    def root(self) -> QuadraticNumber:
        return QuadraticNumber(0, 1, self.d)

    def parse(self, text: str) -> QuadraticNumber:
        m = _QUAD_RE.match(text.replace(" ", ""))
        if not m:
            raise ParseError(f"not an element of Q(sqrt {self.d}): {text!r}")
        try:
            if m.group("a") is not None:
                a = Fraction(m.group("a"))
                if m.group("sign") is None:
                    b = Fraction(0)
                else:
                    b = Fraction(m.group("b1") or 1)
                    if m.group("sign") == "-":
                        b = -b
            else:
                a = Fraction(0)
                b = Fraction(m.group("b2") or 1)
                if m.group("bsign") == "-":
                    b = -b
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {text!r}") from None
        return QuadraticNumber(a, b, self.d)

    def format(self, value) -> str:
        value = self.scalar(value)
        a, b = value.a, value.b
        if b == 0:
            return _format_rational(a)
        bpart = "rt" if abs(b) == 1 else f"{_format_rational(abs(b))}*rt"
        if a == 0:
            return ("-" if b < 0 else "") + bpart
        return f"{_format_rational(a)}{'-' if b < 0 else '+'}{bpart}"

    def sqrt(self, value):
        x = self.scalar(value)
        if x.b == 0:
            r = _rational_sqrt(x.a)
            if r is not None:
                return QuadraticNumber(r, 0, self.d)
            r = _rational_sqrt(x.a / self.d)
            if r is not None:
                return QuadraticNumber(0, r, self.d)
            return None
        # (u + v rt)^2 = u^2 + d v^2 + 2uv rt, so u^2 solves 4u^4 - 4a u^2 + d b^2 = 0.
        disc = _rational_sqrt(x.norm())
        if disc is None:
            return None
        for u2 in ((x.a + disc) / 2, (x.a - disc) / 2):
            u = _rational_sqrt(u2)
            if u:
                return QuadraticNumber(u, x.b / (2 * u), self.d)
        return None

    def random(self, rng, bound: int = 5):
        r = Rationals()
        return QuadraticNumber(r.random(rng, bound), r.random(rng, bound), self.d)

    def descriptor(self) -> dict:
        return {"kind": "quadratic", "d": self.d}

    def __str__(self):
        return f"Q(sqrt {self.d})"


@dataclass(frozen=True)
class PrimeField(FieldContext):
    p: int

    kind = "prime"
    dtype = np.int64

    def __post_init__(self):
        if not _is_prime(self.p) or self.p > MAX_PRIME:
            raise ValueError(f"p must be a prime <= {MAX_PRIME}, got {self.p}")

    @property
    def characteristic(self):
        return self.p

    def scalar(self, value) -> Residue:
        return Residue(self._element(value), self.p)

    def _element(self, value) -> int:
        if isinstance(value, Residue):
            if value.p != self.p:
                raise ContextMismatch(f"F_{value.p} element in F_{self.p}")
            return value.v
        if isinstance(value, bool):
            raise ContextMismatch("booleans are not field elements")
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        if isinstance(value, str):
            return self.parse(value).v
        raise ContextMismatch(f"{type(value).__name__} is not an element of F_{self.p}")

    def parse(self, text: str) -> Residue:
        text = text.strip()
        if not _INT_RE.fullmatch(text):
            raise ParseError(f"not an integer residue: {text!r}")
        return Residue(int(text), self.p)

    def format(self, value) -> str:
        return str(self._element(value))

    def sqrt(self, value):
        v = self._element(value)
        for s in range(self.p):
            if (s * s - v) % self.p == 0:
                return Residue(s, self.p)
        return None

    def random(self, rng):
        return Residue(int(rng.integers(0, self.p)), self.p)

    def descriptor(self) -> dict:
        return {"kind": "prime", "p": self.p}

    def all_elements(self):
        return [Residue(v, self.p) for v in range(self.p)]

    # arrays hold raw int64 residues
    def array(self, data) -> np.ndarray:
        arr = np.asarray(data)
        if arr.dtype.kind in "iu":
            return (arr.astype(np.int64)) % self.p
        raw = np.asarray(data, dtype=object)
        flat = np.fromiter((self._element(v) for v in raw.ravel()), dtype=np.int64, count=raw.size)
        return flat.reshape(raw.shape)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr) % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def nonzero(self, arr) -> np.ndarray:
        return (np.asarray(arr) % self.p) != 0

    def elements(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr)
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            out[idx] = Residue(int(arr[idx]), self.p)
        return out

    def inverse(self, matrix) -> np.ndarray:
        return super().inverse(matrix)

    def __str__(self):
        return f"F_{self.p}"


def context_of(x) -> FieldContext:
    """The field a scalar belongs to."""
    if isinstance(x, Residue):
        return PrimeField(x.p)
    if isinstance(x, QuadraticNumber):
        return QuadraticField(x.d)
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return Rationals()
    raise ContextMismatch(f"{type(x).__name__} is not a scalar")


def scalar_arith(a, b, op: str):
    """Exact ``a op b`` for scalars from the same field."""
    ctx = context_of(a)
    if context_of(b) != ctx:
        raise ContextMismatch(f"{ctx} vs {context_of(b)}")
    a, b = ctx.scalar(a), ctx.scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero(f"division by zero in {ctx}")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def sqrt_in_field(x):
    """A square root of ``x`` inside its own field, or ``None``."""
    return context_of(x).sqrt(x)


def field_from_descriptor(desc) -> FieldContext:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ParseError("field descriptor must be an object with a 'kind'")
    kind = desc["kind"]
    try:
        if kind == "rational":
            return Rationals()
        if kind == "quadratic":
            return QuadraticField(int(desc["d"]))
        if kind == "prime":
            return PrimeField(int(desc["p"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid field descriptor {desc!r}: {exc}") from None
    raise ParseError(f"unknown field kind {kind!r}")
