"""Self-adjoint fourth-order operators ``(D^2 + V)^2 + W`` and their curves.

Two independent routes lead from ``(V, W)`` to a spectral curve: the
commutant route (:mod:`weylab.commutant`) and the Q-polynomial route here,
which solves the linear fifth-order equation for ``Q(x, z)`` and reads the
curve off the quadratic identity it satisfies.  At genus one the identity
collapses to a closed formula for ``V`` in terms of ``W``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import EXACT, BiPolyZ, Poly
from .commutant import SpectralCurve
from .linalg import InconsistentSystem, solve
from .weyl import WeylOp


class DegenerateW(ValueError):
    pass


class NonPolynomialV(ValueError):
    pass


class NoQ(ValueError):
    pass


class NotXFree(ValueError):
    pass


#: Sign of c_2 inside the genus-one argument ``(SIGMA*c_2 - W)/2``.  Frozen by
#: the Dixmier oracle (V = x^3 + x^2, W = 2x has curve z^3 + 2z^2 + z, so only
#: SIGMA = -1 reproduces V); see tests/test_rank2.py::test_sigma_fixed_by_dixmier.
SIGMA = -1


def build_L4(V: Poly, W: Poly) -> "SelfAdjointPair":
    return SelfAdjointPair(V, W)


def expand_L4(V: Poly, W: Poly) -> WeylOp:
    """``D^4 + 2V D^2 + 2V' D + V'' + V^2 + W``."""
    b = V.backend
    dV = V.derive()
    return WeylOp([V.derive(2) + V * V + W, dV.scale(2), V.scale(2),
                   Poly.zero(b), Poly([1], b)], b)


@dataclass(frozen=True)
class SelfAdjointPair:
    V: Poly
    W: Poly
    L4: WeylOp = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "L4", expand_L4(self.V, self.W))

    def shifted(self, h) -> "SelfAdjointPair":
        """``(V(x + h), W(x + h))``."""
        return SelfAdjointPair(self.V.shift(h), self.W.shift(h))

    def default_partner_bound(self) -> int:
        return 4 + max(self.V.degree, 0) + max(self.W.degree, 0)


def f1_argument(c2, W: Poly) -> Poly:
    """``(SIGMA*c2 - W)/2`` as a polynomial in x."""
    return (Poly([SIGMA * Fraction(c2)], W.backend) - W).scale(Fraction(1, 2))


def genus1_residual(p: SelfAdjointPair, curve: SpectralCurve) -> Poly:
    """``4 W'^2 V + 16 F(arg) - W''^2 + 2 W' W'''``; zero iff the pair realizes the curve."""
    if curve.genus != 1:
        raise ValueError("genus-one relation")
    W, V = p.W, p.V
    W1, W2, W3 = W.derive(1), W.derive(2), W.derive(3)
    F = curve.F
    return (W1 * W1 * V).scale(4) + F.compose(f1_argument(curve.c(2), W)).scale(16) \
        - W2 * W2 + (W1 * W3).scale(2)


def genus1_residual_derivative(p: SelfAdjointPair, curve: SpectralCurve) -> Poly:
    """The x-derivative of :func:`genus1_residual` divided by ``2 W'``."""
    R = genus1_residual(p, curve)
    W1 = p.W.derive()
    if W1.is_zero():
        raise DegenerateW("W is constant")
    q, r = R.derive().divmod(W1.scale(2))
    if not r.is_zero():
        raise AssertionError("derivative of the residual is not divisible by 2W'")
    return q


def genus1_free_term(p: SelfAdjointPair, curve: SpectralCurve) -> Fraction:
    """Constant term of the residual over 4: ``a0*b1^2 + 4F(arg0) - b2^2 + 3*b1*b3``."""
    return genus1_residual(p, curve)[0] / 4


def genus1_V_from_W(W: Poly, curve: SpectralCurve) -> Poly:
    """The unique ``V`` with zero genus-one residual, by exact division."""
    if curve.genus != 1:
        raise ValueError("genus-one relation")
    W1 = W.derive()
    if W1.is_zero():
        raise DegenerateW("W' = 0")
    W2, W3 = W.derive(2), W1.derive(2)
    num = curve.F.compose(f1_argument(curve.c(2), W)).scale(-16) + W2 * W2 - (W1 * W3).scale(2)
    q, r = num.divmod((W1 * W1).scale(4))
    if not r.is_zero():
        raise NonPolynomialV(f"remainder {r}")
    return q


class QPoly(BiPolyZ):
    """``z^g + a_{g-1}(x) z^{g-1} + ... + a_0(x)``."""

    __slots__ = ()

    def __init__(self, coeffs, backend=None):
        super().__init__(coeffs, backend)
        if not self.coeffs or self.coeffs[-1] != Poly([1], self.backend):
            raise ValueError("Q must be monic in z")

    @property
    def genus(self) -> int:
        return len(self.coeffs) - 1

    @property
    def a(self) -> tuple[Poly, ...]:
        return self.coeffs[:-1]


def _xderivs(Q: BiPolyZ, n: int) -> list[BiPolyZ]:
    out = [Q]
    for _ in range(n):
        out.append(out[-1].dx())
    return out


def linear_residual(p: SelfAdjointPair, Q: BiPolyZ) -> BiPolyZ:
    """``Q5 + 4V Q3 + 6V' Q2 + 2(2z - 2W + V'') Q1 - 2W' Q``."""
    b = p.V.backend
    d = _xderivs(Q, 5)
    V, W = p.V, p.W
    z = BiPolyZ([Poly.zero(b), Poly([1], b)], b)
    mid = z * 2 + BiPolyZ.from_x_poly(V.derive(2) - W.scale(2))
    return (d[5] + d[3] * V.scale(4) + d[2] * V.derive().scale(6)
            + mid * d[1] * 2 - Q * W.derive().scale(2))


def quadratic_rhs(p: SelfAdjointPair, Q: BiPolyZ) -> BiPolyZ:
    """Right-hand side of the quadratic Q-identity (equals ``4 F(z)``)."""
    b = p.V.backend
    d = _xderivs(Q, 4)
    V, W = p.V, p.W
    z_minus_W = BiPolyZ([-W, Poly([1], b)], b)
    inner = d[1] * V.derive().scale(2) + d[2] * V.scale(4) + d[4]
    return (z_minus_W * Q * Q * 4 - d[1] * d[1] * V.scale(4) + d[2] * d[2]
            - d[1] * d[3] * 2 + Q * inner * 2)


def quadratic_residual(p: SelfAdjointPair, Q: BiPolyZ, curve: SpectralCurve) -> BiPolyZ:
    """``quadratic_rhs - 4 F(z)``; zero iff (V, W, Q, curve) are consistent."""
    return quadratic_rhs(p, Q) - BiPolyZ.from_z_poly(curve.F.scale(4))


@dataclass(frozen=True)
class QSolution:
    Q: QPoly
    curve: SpectralCurve
    #: directions along which the linear equation leaves Q undetermined
    free: tuple = ()
    xdeg_bound: int = 0


def default_q_bound(p: SelfAdjointPair, g: int) -> int:
    return g * max(p.W.degree, 0) + max(p.V.degree, 0) + 2


def _solve_Q_at(p: SelfAdjointPair, g: int, bound: int) -> tuple[BiPolyZ, list[BiPolyZ]]:
    unknowns = [(i, k) for i in range(g, -1, -1) for k in range(bound, -1, -1)]
    cols = []
    for i, k in unknowns:
        e = BiPolyZ([Poly.zero(EXACT)] * i + [Poly.monomial(k, 1, EXACT)], EXACT)
        cols.append(linear_residual(p, e))
    keys = sorted({(zi, xi) for c in cols for zi, px in enumerate(c.coeffs)
                   for xi, v in enumerate(px.coeffs) if v}, reverse=True)
    rows = [[c[zi][xi] for c in cols] for zi, xi in keys]
    rhs = [0] * len(rows)
    # a_g must be the constant 1
    for col, (i, k) in enumerate(unknowns):
        if i == g:
            row = [0] * len(unknowns)
            row[col] = 1
            rows.append(row)
            rhs.append(1 if k == 0 else 0)
    sol, kernel = solve(rows, rhs)

    def to_bipoly(v) -> BiPolyZ:
        coeffs = [[Fraction(0)] * (bound + 1) for _ in range(g + 1)]
        for (i, k), c in zip(unknowns, v):
            coeffs[i][k] = c
        return BiPolyZ([Poly(c, EXACT) for c in coeffs], EXACT)

    return to_bipoly(sol), [to_bipoly(v) for v in kernel]


def solve_Q(p: SelfAdjointPair, g: int, xdeg_bound: int | None = None,
            step: int = 2, cap: int = 10) -> QSolution:
    """Monic-in-z polynomial solution of the linear Q-equation and its curve.

    The ansatz degree escalates by ``step`` up to ``cap`` above the start.
    Free constants the equation cannot fix are set to zero and reported in
    ``QSolution.free``.
    """
    if p.V.backend != EXACT:
        raise ValueError("solve_Q needs the exact backend")
    start = default_q_bound(p, g) if xdeg_bound is None else xdeg_bound
    bound = start
    while True:
        try:
            Qb, free = _solve_Q_at(p, g, bound)
            break
        except InconsistentSystem:
            bound += step
            if bound > start + cap:
                raise NoQ(f"no monic Q of z-degree {g} with x-degree <= {start + cap}") from None
    Q = QPoly(Qb.coeffs, EXACT)
    rhs = quadratic_rhs(p, Q)
    if not rhs.is_x_free():
        raise NotXFree("quadratic identity keeps x-dependence")
    F = rhs.z_poly().scale(Fraction(1, 4))
    curve = SpectralCurve.from_poly(F)
    return QSolution(Q, curve, tuple(free), bound)
