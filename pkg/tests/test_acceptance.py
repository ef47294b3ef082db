"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary
("acceptance criteria" section).  Tolerances and sample counts are the
stated ones; nothing here is relaxed.
"""
import io
import json
import random
import time
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import nonzero_ops, ops, polys
from weylab.algebra import EXACT, FLOAT, BiPolyZ, Poly, chebyshev
from weylab.cli import run_command
from weylab.commutant import SpectralCurve, bc_curve, curve_is_squarefree, find_partner
from weylab.families import (dixmier_pair, cosh_curve, mokhov_curve, mokhov_L4, reference_F1,
                             reference_F2, rank_transform, recurrence_validated)
from weylab.orbits import (OrbitQuery, apply_aut, orbit_excludes, match_L4_shape,
                           random_word)
from weylab.parsing import parse_op, print_op
from weylab.rank2 import (SelfAdjointPair, quadratic_residual, linear_residual, expand_L4,
                          genus1_V_from_W, solve_Q)
from weylab.solver import (VWSystem, float_partner, leading_law, multi_start,
                           relative_commutator_norm)
from weylab.weyl import WeylOp, commutator, formal_adjoint, op_pow, triple_ad_x

X = Poly([0, 1], EXACT)
D = WeylOp.d()
T_VALUES = [Fraction(0), Fraction(1), Fraction(-3, 2)]


def check(record, n, title, fn):
    """Run ``fn``; record PASS or FAIL with the failure message, then re-raise."""
    try:
        detail = fn() or ""
    except BaseException as e:
        record(n, title, False, f"{type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''}")
        raise
    record(n, title, True, detail)


def rand_q(rng, bound=6, nonzero=False):
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def random_squarefree_cubic(rng):
    while True:
        c = SpectralCurve(1, tuple(rand_q(rng, 5) for _ in range(3)))
        if curve_is_squarefree(c):
            return c


# 1 ---------------------------------------------------------------------------

KERNEL = settings(max_examples=500, deadline=None, derandomize=True)


@KERNEL
@given(ops(), ops(), ops())
def _ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@KERNEL
@given(ops(), ops())
def _adjoint_laws(a, b):
    assert formal_adjoint(a * b) == formal_adjoint(b) * formal_adjoint(a)
    assert formal_adjoint(formal_adjoint(a)) == a


@KERNEL
@given(nonzero_ops(), nonzero_ops())
def _order_law(a, b):
    assert (a * b).order == a.order + b.order


def test_criterion_01_kernel_laws(record_criterion):
    def run():
        t0 = time.perf_counter()
        _ring_laws()
        _adjoint_laws()
        _order_law()
        dt = time.perf_counter() - t0
        assert dt < 60, f"{dt:.1f} s"
        return f"{dt:.1f} s"
    check(record_criterion, 1, "kernel laws, 500 samples each, < 60 s", run)


# 2 ---------------------------------------------------------------------------

def test_criterion_02_dixmier_commutation(record_criterion):
    def run():
        times = []
        for t in T_VALUES:
            t0 = time.perf_counter()
            L = dixmier_pair(1, 0, 0, t).L4
            M, basis, _ = find_partner(L, 6)
            assert len(basis) == 3
            curve, N = bc_curve(L, M, 1)
            assert commutator(L, N).is_zero()
            assert curve.F.degree == 3 and curve.F.lc == 1
            dt = time.perf_counter() - t0
            assert dt < 10, f"t={t}: {dt:.1f} s"
            times.append(dt)
        return f"max {max(times):.2f} s"
    check(record_criterion, 2, "Dixmier partner space dim 3, exact commutation, < 10 s", run)


# 3 ---------------------------------------------------------------------------

def test_criterion_03_V_from_W_round_trip(record_criterion):
    def run():
        for t in T_VALUES:
            L = dixmier_pair(1, 0, 0, t).L4
            M, _, _ = find_partner(L, 6)
            curve, _ = bc_curve(L, M, 1)
            assert genus1_V_from_W(Poly([0, 2], EXACT), curve) == Poly([t, 0, 0, 1], EXACT)
    check(record_criterion, 3, "V from W = 2x on the Dixmier curve is x^3 + t", run)


# 4 ---------------------------------------------------------------------------

def test_criterion_04_Q_route(record_criterion):
    def run():
        for t in T_VALUES:
            p = dixmier_pair(1, 0, 0, t)
            sol = solve_Q(p, 1)
            assert sol.Q == BiPolyZ([X, Poly([1], EXACT)])
            M, _, _ = find_partner(p.L4, 6)
            assert sol.curve == bc_curve(p.L4, M, 1)[0]
            assert linear_residual(p, sol.Q).is_zero()
            assert quadratic_residual(p, sol.Q, sol.curve).is_zero()
    check(record_criterion, 4, "Q = z + x, same curve as the commutant route", run)


# 5 ---------------------------------------------------------------------------

def _reference_F1(a, b):
    z3 = [a * a / 4, Fraction(1, 16) * (1 - 8 * b + 16 * b * b - 16 * a * a),
          Fraction(1, 2) - 2 * b, 1]
    return Poly(z3, EXACT)


def test_criterion_05_reference_F1(record_criterion):
    def run():
        for a, b in [(Fraction(1), Fraction(0)), (Fraction(2), Fraction(1, 3))]:
            L = mokhov_L4(1, 1, a, b)
            M, _, _ = find_partner(L, 6)
            assert bc_curve(L, M, 1)[0].F == _reference_F1(a, b)
    check(record_criterion, 5, "Mokhov g=1 curve equals reference F1", run)


# 6 ---------------------------------------------------------------------------

def _reference_F2(a1):
    s = a1 * a1
    return Poly([24 * s + 513 * s * s, 1 - 189 * s + 108 * s * s, Fraction(1, 4) * (34 - 531 * s),
                 Fraction(1, 16) * (321 - 336 * s), Fraction(17, 2), 1], EXACT)


def test_criterion_06_reference_F2(record_criterion):
    def run():
        times = []
        for a1 in (Fraction(1), Fraction(1, 2)):
            t0 = time.perf_counter()
            L = mokhov_L4(2, 1, a1, 0)
            M, _, _ = find_partner(L, 10)
            assert M.order == 10
            assert bc_curve(L, M, 2)[0].F == _reference_F2(a1)
            dt = time.perf_counter() - t0
            assert dt < 120
            times.append(dt)
        return f"max {max(times):.2f} s"
    check(record_criterion, 6, "order-10 partner, curve equals reference F2, < 120 s", run)


# 7 ---------------------------------------------------------------------------

def test_criterion_07_cosh_curve(record_criterion):
    def run():
        assert recurrence_validated(), "recurrence unvalidated"
        for a, b in [(Fraction(1), Fraction(0)), (Fraction(2), Fraction(1, 3))]:
            assert cosh_curve(1, b, a).F == _reference_F1(a, b)
        for a1 in (Fraction(1), Fraction(1, 2)):
            assert cosh_curve(2, 0, a1).F == _reference_F2(a1)
        rng = random.Random(2024)
        for _ in range(5):
            a, b = rand_q(rng, nonzero=True), rand_q(rng)
            assert cosh_curve(1, b, a) == mokhov_curve(1, a, b)
        assert reference_F1(0, 1) == _reference_F1(Fraction(1), Fraction(0))
        assert reference_F2(1) == _reference_F2(Fraction(1))
        return "recurrence validated"
    check(record_criterion, 7, "recurrence reproduces F1, F2; agrees with commutant", run)


# 8 ---------------------------------------------------------------------------

@settings(max_examples=200, deadline=None, derandomize=True)
@given(polys(4).filter(lambda p: not p.is_zero()), polys(4), polys(4), polys(4))
def _ad_cube(a, b, c, d):
    A, Bo, Co = (WeylOp.from_poly(p) for p in (a, b, c))
    inner = A * D * D + Bo * D + Co
    L = inner * inner + WeylOp.from_poly(d)
    expected = WeylOp([(a * b).scale(12) + (a * a.derive()).scale(12), (a * a).scale(24)])
    assert triple_ad_x(L) == expected


def test_criterion_08_ad_cube(record_criterion):
    check(record_criterion, 8, "triple ad identity on 200 random (a, b, c, d)", _ad_cube)


# 9 ---------------------------------------------------------------------------

def test_criterion_09_leading_law(record_criterion):
    def run():
        assert leading_law(1) == Fraction(1, 2)
        p = dixmier_pair(1)
        assert p.V.lc / p.W.lc == Fraction(1, 2)
        rng = random.Random(9)
        count = 0
        for m in (1, 2, 3):
            sys = VWSystem(m, random_squarefree_cubic(rng))
            reps = [r for r in multi_start(sys, seed=m, starts=1000, want=3) if r.accepted]
            assert reps, f"no accepted candidate at m={m}"
            for r in reps:
                err = abs(float(r.alpha[-1]) - float(leading_law(m)) * float(r.beta[-1]))
                assert err < 1e-8, f"m={m}: {err}"
            count += len(reps)
        return f"{count} accepted candidates"
    check(record_criterion, 9, "leading-coefficient law on accepted candidates", run)


# 10 --------------------------------------------------------------------------

def test_criterion_10_desk_scale(record_criterion):
    def run():
        rng = random.Random(10)
        notes = []
        for m in (2, 3):
            curve = random_squarefree_cubic(rng)
            sys = VWSystem(m, curve)
            reps = multi_start(sys, seed=0, starts=1000)
            best = reps[0]
            assert best.accepted, f"m={m}: no accepted candidate"
            u = [float(v) for v in best.candidate]
            res = float(np.abs(sys.residual(u)).max())
            assert res < 1e-9, f"m={m}: residual {res}"
            a, b = sys.split(u)
            L4 = expand_L4(Poly(a, FLOAT), Poly(b, FLOAT))
            rc = relative_commutator_norm(L4, float_partner(L4, 3 * sys.n))
            assert rc < 1e-6, f"m={m}: commutator {rc}"
            again = multi_start(sys, seed=0, starts=1000)
            assert [r.to_dict() for r in again] == [r.to_dict() for r in reps]
            notes.append(f"m={m} res {res:.1e} comm {rc:.1e}")
        return "; ".join(notes)
    check(record_criterion, 10, "m = 2, 3 solutions with commuting float partner", run)


# 11 --------------------------------------------------------------------------

def l47_proxy():
    """deg V = 9, deg W = 7, leading coefficients on the law (1 = 98 / 98)."""
    V = Poly([1, 0, 1] + [0] * 6 + [1], EXACT)
    W = Poly([0, 1] + [0] * 5 + [98], EXACT)
    assert V.lc == leading_law(7) * W.lc
    return SelfAdjointPair(V, W).L4


def test_criterion_11_orbit_certificates(record_criterion):
    def run():
        for dega, r, r1 in [(0, 9, 7), (0, 12, 10), (2, 11, 12), (2, 14, 11)]:
            for n in range(51):
                for m in range(51):
                    assert orbit_excludes(OrbitQuery(dega, r, r1, n, m)).check()
        L = l47_proxy()
        rng = random.Random(47)
        same = 0
        for _ in range(500):
            w = random_word(rng, max_gens=6, max_deg=4, max_scalar=10, max_image_degree=2)
            vw = match_L4_shape(apply_aut(w, L))
            if vw is not None:
                assert vw[1].degree == 7, f"shape with deg W = {vw[1].degree} via {w}"
                same += 1
        return f"4 x 51^2 certificates, 500 words ({same} kept the shape)"
    check(record_criterion, 11, "certificates on [0,50]^2; 500 words keep m' = 7", run)


# 12 --------------------------------------------------------------------------

def test_criterion_12_chebyshev_and_rank_transform(record_criterion):
    def run():
        for n in range(1, 9):
            for m in range(1, 9):
                assert chebyshev(n).compose(chebyshev(m)) == chebyshev(n * m)
        for r in (1, 2):
            L = mokhov_L4(1, r, 1, 0)
            M, _, _ = find_partner(L, 6)
            assert commutator(rank_transform(L), rank_transform(M)).is_zero()
        orders = {r: rank_transform(mokhov_L4(1, r, 1, 0)).order for r in range(1, 6)}
        bad = {r: o for r, o in orders.items() if o != 2 * r}
        assert not bad, f"order != 2r at {bad}"
    check(record_criterion, 12, "T_n(T_m) = T_nm; transformed order 2r; commutation kept", run)


# 13 --------------------------------------------------------------------------

@settings(max_examples=1000, deadline=None, derandomize=True)
@given(ops(5, 4))
def _round_trip(L):
    assert parse_op(print_op(L)) == L


@settings(max_examples=200, deadline=None, derandomize=True)
@given(ops(3, 3), ops(3, 3), st.booleans())
def _commute_contract(a, b, related):
    if related:
        b = op_pow(a, 2) - a.scale(2) + b.scale(0)
    code = run_command(["commute", print_op(a), print_op(b)], io.StringIO(), io.StringIO())
    assert code == (0 if commutator(a, b).is_zero() else 1)


def _cli(*argv):
    out = io.StringIO()
    code = run_command(list(argv), out, io.StringIO())
    assert code == 0, argv
    return out.getvalue()


def test_criterion_13_cli(record_criterion):
    def run():
        _round_trip()
        _commute_contract()
        texts = [_cli("curve", "--genus", "1", "D^4", "D^6"),
                 _cli("family", "mokhov", "--a", "2", "--b", "1/3", "--curve").splitlines()[1],
                 _cli("recurrence-curve", "--g", "2", "--alpha0", "0", "--alpha1", "1/2"),
                 _cli("certificate", "--dega", "0", "--r", "9", "--r1", "7", "--n", "2", "--m", "9"),
                 _cli("solve-vw", "--m", "1", "--curve", "1/2,-3,11/2", "--starts", "32")]
        for text in texts:
            value = json.loads(text)
            assert json.loads(json.dumps(value)) == value
        for text in texts[:3]:
            c = SpectralCurve.from_json(text)
            assert json.loads(c.to_json()) == json.loads(text)
    check(record_criterion, 13, "parser round trip, commute exit codes, JSON re-parse", run)
