"""Scalar backends and dense univariate / x-z bivariate polynomials.

Two backends share one interface: ``"exact"`` stores :class:`fractions.Fraction`
coefficients and compares with ``==``; ``"float"`` stores Python floats and is
compared through :meth:`Poly.isclose` with a caller-supplied tolerance.  The
two are never mixed silently.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

#: degree of the zero polynomial; compares below every integer
DEG_ZERO = -math.inf

Number = Union[int, Fraction, float]


class BackendMismatch(TypeError):
    """Raised when exact and float values meet in one operation."""


def scalar_backend(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Rational):
        return EXACT
    if isinstance(value, float):
        return FLOAT
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def to_scalar(value, backend: str):
    """Coerce ``value`` into ``backend``; ints are accepted by both."""
    if backend == EXACT:
        if isinstance(value, float):
            raise BackendMismatch("float value given to the exact backend")
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)
    if backend == FLOAT:
        if isinstance(value, Fraction) and value.denominator != 1:
            raise BackendMismatch("fraction given to the float backend")
        return float(value)
    raise ValueError(f"unknown backend {backend!r}")


def format_scalar(c) -> str:
    """``p`` or ``p/q`` for exact values, ``repr`` for floats."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"
    return repr(c)


def _infer_backend(values: Sequence) -> str:
    kinds = set()
    for v in values:
        if isinstance(v, int) and not isinstance(v, bool):
            continue
        kinds.add(scalar_backend(v))
    if len(kinds) > 1:
        raise BackendMismatch("coefficients mix exact and float values")
    return kinds.pop() if kinds else EXACT


class Poly:
    """Dense polynomial ``c[0] + c[1]*v + ... + c[d]*v^d`` in one variable.

    Instances are immutable.  The zero polynomial has an empty coefficient
    tuple and degree :data:`DEG_ZERO`.
    """

    __slots__ = ("coeffs", "backend", "_hash")

    def __init__(self, coeffs: Iterable[Number] = (), backend: str | None = None):
        cs = list(coeffs)
        if backend is None:
            backend = _infer_backend(cs)
        cs = [to_scalar(c, backend) for c in cs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.backend = backend
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list, backend: str) -> "Poly":
        # trusted constructor: coefficients already coerced
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        p.backend = backend
        p._hash = None
        return p

    @classmethod
    def zero(cls, backend: str = EXACT) -> "Poly":
        return cls._raw([], backend)

    @classmethod
    def const(cls, c: Number, backend: str | None = None) -> "Poly":
        if backend is None:
            backend = _infer_backend([c])
        return cls([c], backend)

    @classmethod
    def monomial(cls, k: int, c: Number = 1, backend: str | None = None) -> "Poly":
        if backend is None:
            backend = _infer_backend([c])
        return cls([0] * k + [c], backend)

    @classmethod
    def x(cls, backend: str = EXACT) -> "Poly":
        return cls([0, 1], backend)

    # -- basic queries -------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self._zero_scalar()

    def _zero_scalar(self):
        return Fraction(0) if self.backend == EXACT else 0.0

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self._zero_scalar()

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.backend == other.backend and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            return self.coeffs == Poly([other], self.backend).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.backend, self.coeffs))
        return self._hash

    def isclose(self, other: "Poly", tol: float) -> bool:
        """Coefficientwise comparison within absolute tolerance ``tol``."""
        n = max(len(self.coeffs), len(other.coeffs))
        return all(abs(float(self[k]) - float(other[k])) <= tol for k in range(n))

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self.coeffs), default=0.0)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.backend != self.backend:
                raise BackendMismatch(f"{self.backend} vs {other.backend}")
            return other
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            if scalar_backend(other) != self.backend and not isinstance(other, int):
                raise BackendMismatch(f"{self.backend} vs {scalar_backend(other)}")
            return Poly([other], self.backend)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(out, self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs], self.backend)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([], self.backend)
        if len(b) == 1:
            c = b[0]
            return Poly._raw([ai * c for ai in a], self.backend)
        if len(a) == 1:
            c = a[0]
            return Poly._raw([c * bi for bi in b], self.backend)
        if self.backend == EXACT:
            return Poly._raw(_mul_rational(a, b), EXACT)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly._raw(out, self.backend)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = to_scalar(c, self.backend)
        return Poly._raw([ai * c for ai in self.coeffs], self.backend)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly([1], self.backend)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derive(self, k: int = 1) -> "Poly":
        """k-th formal derivative."""
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        cs = self.coeffs
        if k == 0:
            return self
        out = []
        for j in range(k, len(cs)):
            f = 1
            for t in range(j - k + 1, j + 1):
                f *= t
            out.append(cs[j] * f)
        return Poly._raw(out, self.backend)

    def __call__(self, value):
        """Horner evaluation; ``value`` may be a scalar or anything with ring ops."""
        if isinstance(value, Poly):
            return self.compose(value)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return self._zero_scalar()
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """``self(inner(x))``."""
        if inner.backend != self.backend:
            raise BackendMismatch(f"{self.backend} vs {inner.backend}")
        acc = Poly._raw([], self.backend)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, h) -> "Poly":
        """``self(x + h)``."""
        return self.compose(Poly([h, 1], self.backend))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Euclidean division on the exact backend."""
        if self.backend != EXACT or other.backend != EXACT:
            raise BackendMismatch("division is defined on the exact backend only")
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(EXACT), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for j, oj in enumerate(other.coeffs):
                    rem[k + j] -= c * oj
        return Poly._raw(quot, EXACT), Poly._raw(rem[: len(other.coeffs) - 1], EXACT)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc) if self.backend == EXACT else self.scale(1.0 / self.lc)

    def to_float(self) -> "Poly":
        return Poly._raw([float(c) for c in self.coeffs], FLOAT)

    def format(self, var: str = "x") -> str:
        """Decreasing powers, e.g. ``3*x^2 - 1/2``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            neg = c < 0
            mag = -c if neg else c
            if k == 0:
                body = format_scalar(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{format_scalar(mag)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()!r}, backend={self.backend!r})"


def _mul_rational(a: Sequence, b: Sequence) -> list[Fraction]:
    # integer convolution over a common denominator, one reduction per coefficient
    da = math.lcm(*(c.denominator for c in a))
    db = math.lcm(*(c.denominator for c in b))
    ia = [c.numerator * (da // c.denominator) for c in a]
    ib = [c.numerator * (db // c.denominator) for c in b]
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(ia):
        if ai:
            for j, bj in enumerate(ib):
                out[i + j] += ai * bj
    den = da * db
    return [Fraction(v, den) for v in out]


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_derive(p: Poly, k: int = 1) -> Poly:
    return p.derive(k)


def poly_compose(outer: Poly, inner: Poly) -> Poly:
    return outer.compose(inner)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the rationals (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def is_squarefree(p: Poly) -> bool:
    """True iff ``gcd(p, p')`` is a nonzero constant (exact backend)."""
    if p.is_zero():
        return False
    return poly_gcd(p, p.derive()).degree == 0


_CHEB_CACHE: dict[tuple[int, str], Poly] = {}


def chebyshev(r: int, backend: str = EXACT) -> Poly:
    """Chebyshev polynomial of the first kind ``T_r``; ``T_{-r} = T_r``."""
    r = abs(int(r))
    key = (r, backend)
    if key in _CHEB_CACHE:
        return _CHEB_CACHE[key]
    t0, t1 = Poly([1], backend), Poly([0, 1], backend)
    two_y = Poly([0, 2], backend)
    if r == 0:
        out = t0
    else:
        for _ in range(r - 1):
            t0, t1 = t1, two_y * t1 - t0
        out = t1
    _CHEB_CACHE[key] = out
    return out


class BiPolyZ:
    """Polynomial in ``z`` whose coefficients are :class:`Poly` objects in ``x``."""

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs: Iterable[Poly] = (), backend: str | None = None):
        cs = list(coeffs)
        if backend is None:
            backend = cs[0].backend if cs else EXACT
        for c in cs:
            if c.backend != backend:
                raise BackendMismatch("mixed backends in BiPolyZ")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.backend = backend

    @classmethod
    def from_z_poly(cls, p: Poly) -> "BiPolyZ":
        """Embed a polynomial in ``z`` with constant x-coefficients."""
        return cls([Poly([c], p.backend) for c in p.coeffs], p.backend)

    @classmethod
    def from_x_poly(cls, p: Poly) -> "BiPolyZ":
        return cls([p], p.backend)

    @property
    def zdegree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def __getitem__(self, k: int) -> Poly:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Poly.zero(self.backend)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPolyZ):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> "BiPolyZ":
        if isinstance(other, BiPolyZ):
            return other
        if isinstance(other, Poly):
            return BiPolyZ([other], other.backend)
        return BiPolyZ([Poly([other], self.backend)], self.backend)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return BiPolyZ([self[k] + other[k] for k in range(n)], self.backend)

    __radd__ = __add__

    def __neg__(self):
        return BiPolyZ([-c for c in self.coeffs], self.backend)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return BiPolyZ([], self.backend)
        out = [Poly.zero(self.backend)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return BiPolyZ(out, self.backend)

    __rmul__ = __mul__

    def dx(self, k: int = 1) -> "BiPolyZ":
        return BiPolyZ([c.derive(k) for c in self.coeffs], self.backend)

    def is_x_free(self) -> bool:
        return all(c.is_constant() for c in self.coeffs)

    def z_poly(self) -> Poly:
        """The polynomial in ``z`` (requires :meth:`is_x_free`)."""
        if not self.is_x_free():
            raise ValueError("coefficients depend on x")
        return Poly([c[0] for c in self.coeffs], self.backend)

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            if k == 0:
                terms.append(f"({c.format()})")
            else:
                zk = "z" if k == 1 else f"z^{k}"
                terms.append(zk if c == 1 else f"({c.format()})*{zk}")
        return " + ".join(terms)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"BiPolyZ({self.format()!r})"
