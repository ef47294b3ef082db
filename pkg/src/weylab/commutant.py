"""Commuting partners by exact linear algebra, and Burchnall-Chaundy curves."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .algebra import EXACT, Poly, is_squarefree
from .linalg import InconsistentSystem, nullspace, rref, solve
from .weyl import WeylOp, commutator, op_pow, weyl_mul

log = logging.getLogger(__name__)


class EmptyBound(ValueError):
    pass


class NotCommuting(ValueError):
    pass


class NoAlgebraicRelation(ValueError):
    pass


class DegeneratePartner(ValueError):
    pass


@dataclass(frozen=True)
class SpectralCurve:
    """``w^2 = z^(2g+1) + c_{2g} z^(2g) + ... + c_0``; ``coeffs`` is ``(c_0, ..., c_{2g})``."""

    genus: int
    coeffs: tuple

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        if len(self.coeffs) != 2 * self.genus + 1:
            raise ValueError(f"expected {2 * self.genus + 1} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_poly(cls, F: Poly) -> "SpectralCurve":
        d = F.degree
        if d < 3 or d % 2 == 0 or F.lc != 1:
            raise ValueError(f"not a monic odd-degree polynomial: {F}")
        return cls((d - 1) // 2, F.coeffs[:-1])

    @property
    def F(self) -> Poly:
        return Poly(list(self.coeffs) + [1], EXACT)

    def c(self, j: int) -> Fraction:
        return self.coeffs[j]

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def to_dict(self) -> dict:
        return {"genus": self.genus, "f_coeffs": [_qstr(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, text: str) -> "SpectralCurve":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralCurve":
        return cls(int(d["genus"]), tuple(Fraction(c) for c in d["f_coeffs"]))

    def __str__(self) -> str:
        return f"w^2 = {self.F.format('z')}"


def _qstr(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def curve_is_squarefree(curve: SpectralCurve) -> bool:
    """Affine nonsingularity of ``w^2 = F(z)``: ``gcd(F, F')`` constant."""
    return is_squarefree(curve.F)


def _flatten(ops: Sequence[WeylOp]) -> tuple[list[list], list[tuple[int, int]]]:
    """Coefficient matrix whose column ``k`` is ``ops[k]`` (rows keyed by (j, i))."""
    keys = sorted({(j, i) for op in ops for i, j, _ in op.terms()}, reverse=True)
    index = {k: r for r, k in enumerate(keys)}
    rows = [[0] * len(ops) for _ in keys]
    for col, op in enumerate(ops):
        for i, j, c in op.terms():
            rows[index[(j, i)]][col] = c
    return rows, keys


def monomial_basis(order: int, degree: int) -> list[tuple[int, int]]:
    """Unknown ordering ``(D-power desc, x-power desc)`` as ``(i, j)`` pairs."""
    return [(i, j) for j in range(order, -1, -1) for i in range(degree, -1, -1)]


def find_commuting(L: WeylOp, target_order: int, coeff_degree_bound: int) -> list[WeylOp]:
    """Basis of ``{M : ord M <= target_order, deg coeffs <= bound, [L, M] = 0}``."""
    if coeff_degree_bound < 0 or target_order < 0:
        raise EmptyBound("bounds must be nonnegative")
    if L.is_zero():
        raise ValueError("L must be nonzero")
    if L.backend != EXACT:
        raise ValueError("find_commuting needs the exact backend")
    monos = monomial_basis(target_order, coeff_degree_bound)
    images = [commutator(L, WeylOp.monomial(i, j)) for i, j in monos]
    rows, _ = _flatten(images)
    kernel = nullspace(rows, len(monos))
    basis = []
    if kernel:
        # echelon form of the kernel itself, leading monomials strictly decreasing
        red, piv = rref(kernel, len(monos))
        basis = [[Fraction(c, row[p]) for c in row] for row, p in zip(red, piv)]
    out = []
    for v in basis:
        M = WeylOp.zero()
        terms: dict[int, list] = {}
        for (i, j), c in zip(monos, v):
            if c:
                terms.setdefault(j, [0] * (coeff_degree_bound + 1))[i] = c
        top = max(terms) if terms else -1
        M = WeylOp([Poly(terms.get(j, []), EXACT) for j in range(top + 1)])
        if not commutator(L, M).is_zero():
            raise AssertionError("post-solve verification failed")
        out.append(M)
    return out


def default_partner_bound(L: WeylOp) -> int:
    """4 + (x-degree of the top-order and zeroth coefficients)."""
    return 4 + max(0, L.coeff_degree())


def find_partner(L: WeylOp, order: int, bound: int | None = None, step: int = 2,
                 cap: int = 10) -> tuple[WeylOp, list[WeylOp], int]:
    """A commuting operator of exactly ``order``, escalating the degree bound.

    Returns ``(partner, basis, bound_used)``.  The partner is the basis member
    of full order (the first in echelon order).
    """
    start = default_partner_bound(L) if bound is None else bound
    b = start
    while b <= start + cap:
        basis = find_commuting(L, order, b)
        full = [M for M in basis if M.order == order]
        if full:
            return full[0], basis, b
        log.info("no order-%d partner at degree bound %d; escalating", order, b)
        b += step
    raise NoAlgebraicRelation(f"no order-{order} partner up to degree bound {start + cap}")


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def bc_curve(L4: WeylOp, L6: WeylOp, g: int) -> tuple[SpectralCurve, WeylOp]:
    """Spectral curve of a commuting pair of orders 4 and 4g+2.

    The general relation ``L6^2 = C(L4) + E(L4) L6`` (``deg C <= 2g+1``,
    ``deg E <= g``) is solved for the scalar coefficients of ``C`` and ``E``;
    completing the square with ``L6 - E(L4)/2`` and dividing by the leading
    scalar gives the pure form ``w^2 = F(z)`` with ``F`` monic.
    """
    if not commutator(L4, L6).is_zero():
        raise NotCommuting("[L4, L6] != 0")
    if L4.order != 4:
        raise ValueError("L4 must have order 4")
    if L6.order != 4 * g + 2:
        raise DegeneratePartner(f"partner has order {L6.order}, expected {4 * g + 2}")
    powers = [op_pow(L4, j) for j in range(2 * g + 2)]
    mixed = [weyl_mul(powers[k], L6) for k in range(g + 1)]
    target = weyl_mul(L6, L6)
    rows, keys = _flatten(powers + mixed + [target])
    A = [r[:-1] for r in rows]
    b = [r[-1] for r in rows]
    try:
        sol, kernel = solve(A, b)
    except InconsistentSystem:
        raise NoAlgebraicRelation(f"no relation at genus {g}") from None
    if kernel:
        raise AssertionError("powers of L4 and L4^k L6 must be independent")
    C = Poly(sol[: 2 * g + 2], EXACT)
    E = Poly(sol[2 * g + 2:], EXACT)
    kappa = _frac_sqrt(C.lc)
    if kappa is None or kappa == 0:
        raise NoAlgebraicRelation(f"leading relation coefficient {C.lc} is not a rational square")
    shift = WeylOp.zero()
    for k, e in enumerate(E.coeffs):
        if e:
            shift = shift + powers[k].scale(e)
    partner = (L6 - shift.scale(Fraction(1, 2))).scale(1 / kappa)
    F = (C + E * E * Fraction(1, 4)).scale(1 / (kappa * kappa))
    curve = SpectralCurve.from_poly(F)
    residual = weyl_mul(partner, partner)
    for j, c in enumerate(F.coeffs):
        if c:
            residual = residual - powers[j].scale(c)
    if not residual.is_zero():
        raise AssertionError("curve identity is not exactly zero")
    return curve, partner
