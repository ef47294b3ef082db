"""Genus-one (V, W) systems: assembly, multi-start Newton, verification.

For ``V = sum alpha_i x^i`` (degree n = m + 2) and ``W = sum beta_j x^j``
(degree m) the genus-one residual
``4 W'^2 V + 16 F((SIGMA*c2 - W)/2) - W''^2 + 2 W' W'''`` has degree 3m, so
forcing it to vanish gives 3m + 1 polynomial equations in 2m + 4 unknowns.
The unknown vector is ``(alpha_0, ..., alpha_n, beta_0, ..., beta_m)``.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import EXACT, FLOAT, Poly
from .commutant import (NoAlgebraicRelation, SpectralCurve, _flatten, bc_curve,
                        find_partner)
from .rank2 import (SIGMA, DegenerateW, NonPolynomialV, SelfAdjointPair, genus1_residual,
                    expand_L4, genus1_V_from_W)
from .weyl import WeylOp, commutator, weyl_mul

log = logging.getLogger(__name__)

npoly = np.polynomial.polynomial

#: continued-fraction denominator cap used when rationalizing candidates
DENOMINATOR_CAP = 10 ** 6


def B(k: int, i: int) -> int:
    return (k + 1) * (i - k + 1)


def C(k: int, i: int) -> int:
    return (k + 1) * (k + 2)


def leading_law(m: int) -> Fraction:
    """``alpha_{m+2} / beta_m`` on every solution: ``3 / (2 B_{m-1,2m} + 4 C_{m-2,2m})``."""
    if m < 1:
        raise ValueError("m >= 1")
    return Fraction(3, 2 * B(m - 1, 2 * m) + 4 * C(m - 2, 2 * m))


@dataclass(frozen=True)
class VWSystem:
    m: int
    curve: SpectralCurve

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m >= 1")
        if self.curve.genus != 1:
            raise ValueError("genus-one target required")

    @property
    def n(self) -> int:
        return self.m + 2

    @property
    def n_unknowns(self) -> int:
        return 2 * self.m + 4

    @property
    def n_equations(self) -> int:
        return 3 * self.m + 1

    def split(self, u: Sequence) -> tuple[list, list]:
        u = list(u)
        return u[: self.n + 1], u[self.n + 1:]

    def pack(self, alpha: Sequence, beta: Sequence) -> list:
        alpha, beta = list(alpha), list(beta)
        if len(alpha) != self.n + 1 or len(beta) != self.m + 1:
            raise ValueError("wrong number of coefficients")
        return alpha + beta

    def pair(self, u: Sequence) -> SelfAdjointPair:
        """Exact ``(V, W)`` from a rational unknown vector."""
        alpha, beta = self.split(u)
        return SelfAdjointPair(Poly([Fraction(a) for a in alpha], EXACT),
                               Poly([Fraction(b) for b in beta], EXACT))

    # -- equations -------------------------------------------------------------
    def _curve_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.curve.coeffs] + [1.0])

    def residual(self, u) -> np.ndarray:
        """The 3m + 1 coefficients (ascending powers of x) of the residual, float."""
        u = np.asarray(u, dtype=float)
        a, b = u[: self.n + 1], u[self.n + 1:]
        W1, W2, W3 = npoly.polyder(b, 1), npoly.polyder(b, 2), npoly.polyder(b, 3)
        arg = -b / 2
        arg[0] += SIGMA * float(self.curve.c(2)) / 2
        Fa = _compose(self._curve_float(), arg)
        R = npoly.polyadd(4 * npoly.polymul(npoly.polymul(W1, W1), a), 16 * Fa)
        R = npoly.polysub(R, npoly.polymul(W2, W2))
        R = npoly.polyadd(R, 2 * npoly.polymul(W1, W3))
        return _fit(R, self.n_equations)

    def residual_exact(self, u) -> list[Fraction]:
        R = genus1_residual(self.pair(u), self.curve)
        return [R[k] for k in range(self.n_equations)]

    def _parts(self, b: np.ndarray):
        W1, W2, W3 = npoly.polyder(b, 1), npoly.polyder(b, 2), npoly.polyder(b, 3)
        arg = -b / 2
        arg[0] += SIGMA * float(self.curve.c(2)) / 2
        return W1, W2, W3, arg

    def _beta_column(self, a, b, k: int) -> np.ndarray:
        W1, W2, W3, arg = self._parts(b)
        dF = _compose(npoly.polyder(self._curve_float()), arg)
        e = _mono(k)
        d1, d2, d3 = npoly.polyder(e, 1), npoly.polyder(e, 2), npoly.polyder(e, 3)
        col = 8 * npoly.polymul(npoly.polymul(W1, a), d1)
        col = npoly.polysub(col, 8 * npoly.polymul(dF, e))
        col = npoly.polysub(col, 2 * npoly.polymul(W2, d2))
        col = npoly.polyadd(col, 2 * npoly.polymul(d1, W3))
        return npoly.polyadd(col, 2 * npoly.polymul(W1, d3))

    def jacobian(self, u) -> np.ndarray:
        """Analytic Jacobian, shape ``(3m+1, 2m+4)``."""
        u = np.asarray(u, dtype=float)
        a, b = u[: self.n + 1], u[self.n + 1:]
        W1 = npoly.polyder(b)
        W1sq = npoly.polymul(W1, W1)
        J = np.zeros((self.n_equations, self.n_unknowns))
        for k in range(self.n + 1):
            J[:, k] = _fit(4 * npoly.polymul(W1sq, _mono(k)), self.n_equations)
        for k in range(self.m + 1):
            J[:, self.n + 1 + k] = _fit(self._beta_column(a, b, k), self.n_equations)
        return J

    # -- alpha eliminated ------------------------------------------------------
    #
    # The residual is 4 W'^2 V + G(W), linear in V.  It vanishes for some
    # polynomial V iff 4 W'^2 divides G(W); V is then minus the quotient.
    def reduced_residual(self, beta) -> tuple[np.ndarray, np.ndarray]:
        """``(remainder of G(W) mod 4W'^2, V)``; the remainder has 2m - 2 coefficients."""
        b = np.asarray(beta, dtype=float)
        W1, W2, W3, arg = self._parts(b)
        G = npoly.polyadd(npoly.polysub(16 * _compose(self._curve_float(), arg),
                                        npoly.polymul(W2, W2)), 2 * npoly.polymul(W1, W3))
        q, r = npoly.polydiv(G, 4 * npoly.polymul(W1, W1))
        return _fit(r, 2 * self.m - 2), _fit(-q, self.n + 1)

    def reduced_jacobian(self, beta, V) -> np.ndarray:
        """Derivative of the remainder: each beta-column of the full Jacobian
        at ``V`` (minus the quotient), reduced mod ``4W'^2``."""
        b = np.asarray(beta, dtype=float)
        W1 = npoly.polyder(b)
        den = 4 * npoly.polymul(W1, W1)
        J = np.zeros((2 * self.m - 2, self.m + 1))
        for k in range(self.m + 1):
            J[:, k] = _fit(npoly.polydiv(self._beta_column(V, b, k), den)[1], 2 * self.m - 2)
        return J

    # -- top homogeneous part -----------------------------------------------
    def top_terms(self, u) -> tuple[list, list, list]:
        """``(b_i, c_i, d_i)`` for ``i = 0..2m``: coefficients of V'W', VW'', W^2."""
        alpha, beta = self.split(u)

        def al(j):
            return alpha[j] if 0 <= j <= self.n else 0

        def be(j):
            return beta[j] if 0 <= j <= self.m else 0

        top = 2 * self.m
        d = [sum(be(i - k) * be(k) for k in range(i + 1)) for i in range(top + 1)]
        bs = [sum(B(k, i) * al(i - k + 1) * be(k + 1) for k in range(i + 1)) for i in range(top + 1)]
        cs = [sum(C(k, i) * al(i - k) * be(k + 2) for k in range(i + 1)) for i in range(top + 1)]
        return bs, cs, d

    def top_equations(self, u) -> list:
        """``4 c_i + 2 b_i - 3 d_i`` for ``i = 0..2m``: coefficients of ``4VW'' + 2V'W' - 3W^2``."""
        bs, cs, d = self.top_terms(u)
        return [4 * c + 2 * b - 3 * dd for b, c, dd in zip(bs, cs, d)]

    def top_jacobian(self, u) -> list[list]:
        """Jacobian of :meth:`top_equations`; central differences are exact on quadratics."""
        u = [Fraction(v) if isinstance(v, int) else v for v in u]
        cols = []
        for j in range(len(u)):
            plus = self.top_equations([v + (k == j) for k, v in enumerate(u)])
            minus = self.top_equations([v - (k == j) for k, v in enumerate(u)])
            cols.append([(p - q) / 2 for p, q in zip(plus, minus)])
        return [list(r) for r in zip(*cols)]

    def leading_point(self) -> list[Fraction]:
        """``(alpha_n, beta_m) = (leading_law(m), 1)``, everything else 0."""
        u = [Fraction(0)] * self.n_unknowns
        u[self.n] = leading_law(self.m)
        u[-1] = Fraction(1)
        return u


def assemble_system(m: int, curve: SpectralCurve) -> VWSystem:
    return VWSystem(m, curve)


def _mono(k: int) -> np.ndarray:
    e = np.zeros(k + 1)
    e[k] = 1.0
    return e


def _fit(c: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n)
    c = np.atleast_1d(c)[:n]
    out[: len(c)] = c
    return out


def _compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    out = np.array([outer[-1]])
    for c in outer[-2::-1]:
        out = npoly.polyadd(npoly.polymul(out, inner), [c])
    return out


# -- Newton --------------------------------------------------------------------

@dataclass
class SolveReport:
    status: str
    m: int
    alpha: tuple
    beta: tuple
    residual: float
    curve: SpectralCurve
    iterations: int = 0
    rank: int | None = None
    verified: bool = False
    evidence: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.verified

    @property
    def candidate(self) -> list:
        return list(self.alpha) + list(self.beta)

    def sort_key(self):
        return (not self.accepted, self.residual, tuple(float(v) for v in self.candidate))

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            return float(v)

        return {"status": self.status, "m": self.m,
                "candidate": {"alpha": [enc(a) for a in self.alpha],
                              "beta": [enc(b) for b in self.beta]},
                "residual": float(self.residual), "verified": self.verified,
                "curve_echo": self.curve.to_dict(), "evidence": self.evidence}


def _damped_gauss_newton(F, J, u: np.ndarray, tol: float, maxit: int, free=None):
    """Least-squares steps with step halving on the max-abs residual."""
    r = F(u)
    res = float(np.max(np.abs(r))) if r.size else 0.0
    rank = None
    status = "diverged"
    it = 0
    for it in range(maxit + 1):
        if res < tol:
            status = "converged"
            break
        if it == maxit or not np.isfinite(res):
            break
        Jm = J(u)
        if free is not None:
            Jm = Jm[:, free]
        step, _, rank, _ = np.linalg.lstsq(Jm, -r, rcond=None)
        if rank == 0:
            status = "singular"
            break
        if free is not None:
            full = np.zeros_like(u)
            full[free] = step
            step = full
        t = 1.0
        while t > 1e-10:
            u_new = u + t * step
            with np.errstate(all="ignore"):
                r_new = F(u_new)
            res_new = float(np.max(np.abs(r_new)))
            if res_new < res:
                break
            t /= 2
        else:
            break
        u, r, res = u_new, r_new, res_new
    return u, res, status, it, rank


def newton_solve(sys: VWSystem, start: Sequence, tol: float = 1e-12,
                 maxit: int = 100, eliminate: bool = True) -> SolveReport:
    """Damped Gauss-Newton with least-squares steps.

    With ``eliminate`` (the default) the iteration first runs on W alone,
    driving the remainder of the V-free part modulo ``4W'^2`` to zero with
    ``beta_{m-1}`` held at its start value (a translation gauge), and takes
    V from the quotient.  The full 3m + 1 equation system is then polished
    from that point.  The status is ``"converged"`` when the max-abs residual
    of the full system drops below ``tol``, ``"singular"`` if a Jacobian has
    rank zero, ``"degenerate"`` if ``beta_m`` collapses, and ``"diverged"``
    otherwise; the report always holds the last accepted iterate.
    """
    u = np.array([float(v) for v in start])
    n, m = sys.n, sys.m
    iters = 0
    if eliminate and m >= 2:
        beta = u[n + 1:].copy()
        free = [k for k in range(m + 1) if k != m - 1]

        def F(b):
            if abs(b[-1]) < 1e-10:
                return np.full(2 * m - 2, np.inf)
            return sys.reduced_residual(b)[0]

        def J(b):
            return sys.reduced_jacobian(b, sys.reduced_residual(b)[1])

        beta, res, status, iters, rank = _damped_gauss_newton(F, J, beta, tol, maxit, free)
        if not np.isfinite(res) or abs(beta[-1]) < 1e-8:
            alpha, b = sys.split(u.tolist())
            return SolveReport("degenerate", m, tuple(alpha), tuple(beta.tolist()),
                               float("inf"), sys.curve, iterations=iters, rank=rank)
        u = np.concatenate([sys.reduced_residual(beta)[1], beta])
    u, res, status, it, rank = _damped_gauss_newton(sys.residual, sys.jacobian, u, tol, maxit)
    if abs(u[-1]) < 1e-8:
        status = "degenerate"
    alpha, beta = sys.split(u.tolist())
    return SolveReport(status, m, tuple(alpha), tuple(beta), res, sys.curve,
                       iterations=iters + it, rank=None if rank is None else int(rank))


def sample_start(sys: VWSystem, rng: np.random.Generator) -> np.ndarray:
    """Leading coordinates at the leading-law point plus unit Gaussian noise."""
    u = rng.normal(size=sys.n_unknowns)
    u[sys.n] += float(leading_law(sys.m))
    u[-1] += 1.0
    return u


def multi_start(sys: VWSystem, seed: int = 0, starts: int = 1000, tol: float = 1e-10,
                maxit: int = 100, jobs: int = 1, want: int = 1,
                batch: int = 32) -> list[SolveReport]:
    """Seeded multi-start Newton; stops after the first batch that brings the
    number of accepted reports to ``want``.

    Starts are drawn up front and processed in fixed batches, so the result
    does not depend on ``jobs``.  Reports come back sorted by
    (accepted first, residual, candidate).
    """
    rng = np.random.default_rng(seed)
    pool = [sample_start(sys, rng) for _ in range(starts)]
    reports: list[SolveReport] = []
    accepted = 0

    def run(u0):
        rep = newton_solve(sys, u0, tol, maxit)
        if rep.status == "converged":
            rep = verify_candidate(rep, sys, tol=max(tol, 1e-9))
        return rep

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as ex:
        for b0 in range(0, starts, batch):
            chunk = list(ex.map(run, pool[b0:b0 + batch]))
            reports.extend(chunk)
            accepted += sum(r.accepted for r in chunk)
            log.info("starts %d-%d: %d accepted so far", b0, b0 + len(chunk) - 1, accepted)
            if accepted >= want:
                break
    reports.sort(key=SolveReport.sort_key)
    return reports


# -- verification ----------------------------------------------------------

def rationalize(values: Sequence, cap: int = DENOMINATOR_CAP) -> list[Fraction]:
    return [v if isinstance(v, Fraction) else Fraction(float(v)).limit_denominator(cap)
            for v in values]


def float_partner(L4: WeylOp, coeff_bound: int) -> WeylOp:
    """Least-squares order-6 operator commuting with a float ``L4``, ``D^6`` coefficient 1."""
    monos = [(i, j) for j in range(6, -1, -1) for i in range(coeff_bound, -1, -1)]
    lead = monos.index((0, 6))
    images = [commutator(L4, WeylOp.monomial(i, j, 1.0, FLOAT)) for i, j in monos]
    rows, _ = _flatten(images)
    A = np.array(rows, dtype=float)
    rhs = -A[:, lead]
    A = np.delete(A, lead, axis=1)
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    sol, *_ = np.linalg.lstsq(A / scale, rhs, rcond=None)
    sol = sol / scale
    coeffs = np.insert(sol, lead, 1.0)
    terms: dict[int, list] = {}
    for (i, j), c in zip(monos, coeffs):
        terms.setdefault(j, [0.0] * (coeff_bound + 1))[i] = float(c)
    return WeylOp([Poly(terms[j], FLOAT) for j in range(7)], FLOAT)


def relative_commutator_norm(L: WeylOp, M: WeylOp) -> float:
    """``max|[L, M]| / max|L M|``."""
    denom = weyl_mul(L, M).max_abs()
    return commutator(L, M).max_abs() / denom if denom else float("inf")


def verify_candidate(rep: SolveReport, sys: VWSystem, tol: float = 1e-9,
                     law_tol: float = 1e-8) -> SolveReport:
    """Check a candidate; the outcome is recorded on a copy of the report.

    Candidates with ``beta_m`` near zero or violating the leading-coefficient
    law are rejected first.  Otherwise the coordinates are rationalized; an
    exactly vanishing residual is confirmed through an exact partner and its
    curve, and failing that the float pair is judged by its residual and the
    commutator with a least-squares partner.
    """
    alpha, beta = list(rep.alpha), list(rep.beta)
    ev: dict = {}
    out = SolveReport(rep.status, rep.m, rep.alpha, rep.beta, rep.residual, rep.curve,
                      rep.iterations, rep.rank, False, ev)
    bm = float(beta[-1])
    if abs(bm) < law_tol:
        out.status = "degenerate"
        return out
    law_err = abs(float(alpha[-1]) - float(leading_law(sys.m)) * bm) / max(1.0, abs(bm))
    ev["law_error"] = law_err
    if law_err > law_tol:
        out.status = "rejected"
        ev["reason"] = "leading-coefficient law"
        return out
    q = rationalize(alpha + beta)
    exact_res = sys.residual_exact(q)
    ev["rational_residual_zero"] = not any(exact_res)
    if not any(exact_res):
        pair = sys.pair(q)
        try:
            partner, _, _ = find_partner(pair.L4, 6, bound=pair.default_partner_bound())
            curve, _ = bc_curve(pair.L4, partner, 1)
        except NoAlgebraicRelation as e:
            raise AssertionError(f"zero residual without a partner: {e}") from None
        if curve != sys.curve:
            raise AssertionError("exact pair realizes a different curve")
        out.alpha, out.beta = tuple(q[: sys.n + 1]), tuple(q[sys.n + 1:])
        out.residual = 0.0
        out.status = "verified-exact"
        out.verified = True
        ev["partner"] = str(partner)
        return out
    u = [float(v) for v in alpha + beta]
    res = float(np.max(np.abs(sys.residual(u))))
    ev["float_residual"] = res
    V = Poly([float(a) for a in alpha], FLOAT)
    W = Poly([float(b) for b in beta], FLOAT)
    L4 = expand_L4(V, W)
    M = float_partner(L4, 3 * sys.n)
    rc = relative_commutator_norm(L4, M)
    ev["relative_commutator"] = rc
    if res < tol and rc < 1e-6:
        out.status = "verified-float"
        out.verified = True
    else:
        out.status = "rejected"
        ev["reason"] = "float evidence"
    return out


def exact_solve_m1(curve: SpectralCurve, beta1=2, seed: int = 0) -> SolveReport:
    """Genus-one solution with ``W = beta1 x`` (translation gauge ``beta0 = 0``).

    For linear W the residual is linear in V, so V follows by exact division.
    Falls back to multi-start Newton if that elimination degenerates.
    """
    sys = VWSystem(1, curve)
    try:
        V = genus1_V_from_W(Poly([0, Fraction(beta1)], EXACT), curve)
    except (DegenerateW, NonPolynomialV):
        log.info("m = 1 elimination degenerate; falling back to Newton")
        return multi_start(sys, seed=seed)[0]
    alpha = [V[k] for k in range(4)]
    beta = [Fraction(0), Fraction(beta1)]
    rep = SolveReport("exact", 1, tuple(alpha), tuple(beta), 0.0, curve)
    return verify_candidate(rep, sys)


def m2_from_curve_point(curve: SpectralCurve, y, w) -> SelfAdjointPair:
    """Exact m = 2 solution from a rational point ``w^2 = F(y)`` of the target.

    With ``W' = k x`` the only critical point is 0, and the divisibility of
    the V-free part by ``W'^2`` reduces to ``16 F((SIGMA*c2 - W(0))/2) = W''(0)^2``.
    Taking ``W = 2w x^2 + SIGMA*c2 - 2y`` satisfies it; V follows by division.
    """
    y, w = Fraction(y), Fraction(w)
    if w * w != curve.F(y):
        raise ValueError(f"({y}, {w}) is not on {curve}")
    if w == 0:
        raise DegenerateW("a Weierstrass point gives W'' = 0")
    W = Poly([SIGMA * curve.c(2) - 2 * y, 0, 2 * w], EXACT)
    return SelfAdjointPair(genus1_V_from_W(W, curve), W)
