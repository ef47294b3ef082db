"""Normal-form arithmetic in the first Weyl algebra.

An element is stored as ``u_0(x) + u_1(x) D + ... + u_N(x) D^N`` with every
x-factor to the left of every D-factor, so equality is coefficientwise.
Products use the Leibniz rule ``D^j v = sum_i C(j, i) v^(i) D^(j-i)``.
"""
from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

from .algebra import DEG_ZERO, EXACT, BackendMismatch, Poly


class NotEndomorphism(ValueError):
    """Images (X, D) do not satisfy ``[D, X] = 1``."""


class WeylOp:
    """Immutable operator ``sum_j coeffs[j](x) * D^j``."""

    __slots__ = ("coeffs", "backend", "_hash")

    def __init__(self, coeffs: Iterable[Poly] = (), backend: str | None = None):
        cs = list(coeffs)
        if backend is None:
            backend = cs[0].backend if cs else EXACT
        for c in cs:
            if c.backend != backend:
                raise BackendMismatch("mixed backends in WeylOp")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.backend = backend
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, backend: str = EXACT) -> "WeylOp":
        return cls([], backend)

    @classmethod
    def one(cls, backend: str = EXACT) -> "WeylOp":
        return cls([Poly([1], backend)], backend)

    @classmethod
    def scalar(cls, c, backend: str | None = None) -> "WeylOp":
        p = Poly.const(c, backend)
        return cls([p], p.backend)

    @classmethod
    def from_poly(cls, p: Poly) -> "WeylOp":
        """Multiplication operator by ``p(x)``."""
        return cls([p], p.backend)

    @classmethod
    def x(cls, backend: str = EXACT) -> "WeylOp":
        return cls([Poly([0, 1], backend)], backend)

    @classmethod
    def d(cls, k: int = 1, backend: str = EXACT) -> "WeylOp":
        """``D^k``."""
        zero = Poly.zero(backend)
        return cls([zero] * k + [Poly([1], backend)], backend)

    @classmethod
    def monomial(cls, i: int, j: int, c=1, backend: str = EXACT) -> "WeylOp":
        """``c * x^i * D^j``."""
        zero = Poly.zero(backend)
        return cls([zero] * j + [Poly.monomial(i, c, backend)], backend)

    @classmethod
    def from_d_poly(cls, p: Poly) -> "WeylOp":
        """Constant-coefficient operator ``p(D)``."""
        return cls([Poly([c], p.backend) for c in p.coeffs], p.backend)

    # -- queries -----------------------------------------------------------
    @property
    def order(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def __getitem__(self, j: int) -> Poly:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return Poly.zero(self.backend)

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1] if self.coeffs else Poly.zero(self.backend)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff_degree(self):
        """Largest x-degree among the coefficients."""
        return max((c.degree for c in self.coeffs), default=DEG_ZERO)

    def terms(self):
        """Yield ``(i, j, c)`` for every nonzero ``c * x^i * D^j``."""
        for j, p in enumerate(self.coeffs):
            for i, c in enumerate(p.coeffs):
                if c != 0:
                    yield i, j, c

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylOp):
            return self.backend == other.backend and self.coeffs == other.coeffs
        if isinstance(other, Poly):
            return self == WeylOp.from_poly(other)
        if isinstance(other, (int, float)) or hasattr(other, "denominator"):
            return self == WeylOp.scalar(other, self.backend)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def max_abs(self) -> float:
        return max((c.max_abs() for c in self.coeffs), default=0.0)

    def isclose(self, other: "WeylOp", tol: float) -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self[j].isclose(other[j], tol) for j in range(n))

    # -- arithmetic ----------------------------------------------------------
    def _lift(self, other) -> "WeylOp":
        if isinstance(other, WeylOp):
            if other.backend != self.backend:
                raise BackendMismatch(f"{self.backend} vs {other.backend}")
            return other
        if isinstance(other, Poly):
            if other.backend != self.backend:
                raise BackendMismatch(f"{self.backend} vs {other.backend}")
            return WeylOp.from_poly(other)
        return WeylOp([Poly.zero(self.backend)._coerce(other)], self.backend)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return WeylOp([self[j] + other[j] for j in range(n)], self.backend)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp([-c for c in self.coeffs], self.backend)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def scale(self, c) -> "WeylOp":
        return WeylOp([p.scale(c) for p in self.coeffs], self.backend)

    def __mul__(self, other):
        other = self._lift(other)
        return weyl_mul(self, other)

    def __rmul__(self, other):
        return weyl_mul(self._lift(other), self)

    def __pow__(self, k: int) -> "WeylOp":
        return op_pow(self, k)

    def derive_d(self) -> "WeylOp":
        """Formal derivative with respect to D (shift ``j*u_j`` to slot ``j-1``)."""
        return WeylOp([self.coeffs[j].scale(j) for j in range(1, len(self.coeffs))],
                      self.backend)

    def map_coeffs(self, f) -> "WeylOp":
        return WeylOp([f(c) for c in self.coeffs], self.backend)

    def to_float(self) -> "WeylOp":
        return WeylOp([c.to_float() for c in self.coeffs], "float")

    def __str__(self) -> str:
        return format_op(self)

    def __repr__(self) -> str:
        return f"WeylOp({format_op(self)!r})"


def weyl_mul(a: WeylOp, b: WeylOp) -> WeylOp:
    """Normal-form product ``a * b``."""
    if a.backend != b.backend:
        raise BackendMismatch(f"{a.backend} vs {b.backend}")
    if a.is_zero() or b.is_zero():
        return WeylOp.zero(a.backend)
    na, nb = len(a.coeffs), len(b.coeffs)
    # derivatives of b's coefficients, needed up to order na - 1
    derivs = [[v] for v in b.coeffs]
    for lst in derivs:
        for _ in range(na - 1):
            lst.append(lst[-1].derive())
    out = [Poly.zero(a.backend)] * (na + nb - 1)
    for j, u in enumerate(a.coeffs):
        if u.is_zero():
            continue
        for k in range(nb):
            dv = derivs[k]
            for i in range(j + 1):
                w = dv[i]
                if w.is_zero():
                    break
                term = u * w
                c = comb(j, i)
                if c != 1:
                    term = term.scale(c)
                out[j + k - i] = out[j + k - i] + term
    return WeylOp(out, a.backend)


def commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    """``a*b - b*a``."""
    return weyl_mul(a, b) - weyl_mul(b, a)


def op_pow(a: WeylOp, k: int) -> WeylOp:
    if k < 0:
        raise ValueError("negative power")
    result = WeylOp.one(a.backend)
    base = a
    while k:
        if k & 1:
            result = weyl_mul(result, base)
        k >>= 1
        if k:
            base = weyl_mul(base, base)
    return result


def formal_adjoint(a: WeylOp) -> WeylOp:
    """``sum u_j D^j  ->  sum (-D)^j u_j`` in normal form."""
    if a.is_zero():
        return a
    n = len(a.coeffs)
    out = [Poly.zero(a.backend)] * n
    for j, u in enumerate(a.coeffs):
        if u.is_zero():
            continue
        sign = -1 if j % 2 else 1
        du = u
        for i in range(j + 1):
            if du.is_zero():
                break
            c = sign * comb(j, i)
            out[j - i] = out[j - i] + du.scale(c)
            du = du.derive()
    return WeylOp(out, a.backend)


def is_self_adjoint(a: WeylOp) -> bool:
    return formal_adjoint(a) == a


def apply_homomorphism(images: tuple[WeylOp, WeylOp], a: WeylOp,
                       check: bool = True) -> WeylOp:
    """Image of ``a`` under the ring map ``x -> X``, ``D -> D'``.

    Each normal-form monomial ``x^i D^j`` goes to ``X^i D'^j``; powers are
    memoized for the duration of the call.
    """
    X, Dm = images
    if check and commutator(Dm, X) != WeylOp.one(X.backend):
        raise NotEndomorphism("[D, X] != 1")
    if a.is_zero():
        return WeylOp.zero(X.backend)
    xpow = _PowerCache(X)
    dpow = _PowerCache(Dm)
    result = WeylOp.zero(X.backend)
    for j, u in enumerate(a.coeffs):
        if u.is_zero():
            continue
        # u(X) by accumulating c_i * X^i
        ux = WeylOp.zero(X.backend)
        for i, c in enumerate(u.coeffs):
            if c != 0:
                ux = ux + xpow[i].scale(c)
        result = result + weyl_mul(ux, dpow[j])
    return result


class _PowerCache:
    def __init__(self, base: WeylOp):
        self._p = [WeylOp.one(base.backend), base]

    def __getitem__(self, k: int) -> WeylOp:
        p = self._p
        while len(p) <= k:
            # square when possible, otherwise extend by one factor
            n = len(p)
            if n % 2 == 0:
                p.append(weyl_mul(p[n // 2], p[n // 2]))
            else:
                p.append(weyl_mul(p[n - 1], p[1]))
        return p[k]


def triple_ad_x(L: WeylOp) -> WeylOp:
    """``[[[L, x], x], x]``."""
    x = WeylOp.x(L.backend)
    out = L
    for _ in range(3):
        out = commutator(out, x)
    return out


def format_op(L: WeylOp) -> str:
    """Canonical text, decreasing D-powers: ``(x^2)*D^2 + (4*x)*D + 2``."""
    if L.is_zero():
        return "0"
    parts: list[str] = []
    for j in range(len(L.coeffs) - 1, -1, -1):
        p = L.coeffs[j]
        if p.is_zero():
            continue
        body = p.format("x")
        if j == 0:
            s = body if len(p.coeffs) - sum(1 for c in p.coeffs if c == 0) == 1 else f"({body})"
        else:
            dj = "D" if j == 1 else f"D^{j}"
            s = f"({body})*{dj}"
        if parts and s.startswith("-"):
            parts.append(f"- {s[1:]}")
        elif parts:
            parts.append(f"+ {s}")
        else:
            parts.append(s)
    return " ".join(parts)


def from_terms(terms: Sequence[tuple[int, int, object]], backend: str = EXACT) -> WeylOp:
    """Build an operator from ``(i, j, c)`` triples meaning ``c x^i D^j``."""
    out = WeylOp.zero(backend)
    for i, j, c in terms:
        out = out + WeylOp.monomial(i, j, c, backend)
    return out
