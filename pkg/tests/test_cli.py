import io
import json
import subprocess
import sys
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import ops
from weylab.cli import run_command
from weylab.commutant import SpectralCurve, bc_curve, find_partner
from weylab.families import dixmier_pair, reference_F1, reference_F2, sharp_pair
from weylab.parsing import parse_op, print_op
from weylab.weyl import commutator


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


DIX = "(D^2+x^3)^2+2*x"


def dixmier_partner_text():
    L = dixmier_pair(1).L4
    M, _, _ = find_partner(L, 6)
    return print_op(bc_curve(L, M, 1)[1])


class TestBasics:
    def test_eval(self):
        assert run("eval", "D*x")[:2] == (0, "(x)*D + 1\n")

    def test_eval_syntax_error(self):
        code, _, err = run("eval", "x**2")
        assert code == 2 and "position 2" in err

    def test_usage_errors(self):
        assert run()[0] == 2
        assert run("bogus")[0] == 2
        assert run("partner", "--order", "six", "D^4")[0] == 2
        assert run("solve-vw", "--m", "2", "--curve", "1,2")[0] == 2

    def test_help(self):
        assert run("--help")[0] == 0


class TestCommute:
    def test_dixmier_pair_commutes(self):
        code, out, _ = run("commute", DIX, dixmier_partner_text())
        assert code == 0 and out.strip() == "0"

    def test_noncommuting(self):
        code, out, _ = run("commute", "D", "x")
        assert code == 1 and out.strip() == "1"


@settings(max_examples=200, deadline=None)
@given(ops(3, 3), ops(3, 3), st.booleans())
def test_commute_exit_code_contract(a, b, related):
    if related:
        b = a * a + a.scale(3) + b.scale(0)
    code, out, _ = run("commute", print_op(a), print_op(b))
    zero = commutator(a, b).is_zero()
    assert code == (0 if zero else 1)
    assert parse_op(out) == commutator(a, b)


class TestCurves:
    def test_trivial_curve(self):
        code, out, _ = run("curve", "--genus", "1", "D^4", "D^6")
        assert code == 0 and out.strip() == '{"genus":1,"f_coeffs":["0","0","0"]}'

    def test_curve_not_commuting(self):
        assert run("curve", "--genus", "1", "D^4", "x*D^6")[0] == 1

    def test_partner_basis(self):
        code, out, _ = run("partner", "--order", "6", "--maxdeg", "10", DIX)
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 3
        L = parse_op(DIX)
        assert all(commutator(L, parse_op(s)).is_zero() for s in lines)

    def test_partner_empty(self):
        assert run("partner", "--order", "3", "--maxdeg", "2", DIX)[0] == 1

    def test_family_dixmier(self):
        code, out, _ = run("family", "dixmier", "--a0", "-3/2", "--curve")
        op, curve = out.strip().splitlines()
        assert code == 0
        assert parse_op(op) == dixmier_pair(1, 0, 0, Fraction(-3, 2)).L4
        assert SpectralCurve.from_json(curve) == SpectralCurve(1, (Fraction(3, 2), 0, 0))

    def test_family_mokhov(self):
        code, out, _ = run("family", "mokhov", "--a", "2", "--b", "1/3", "--curve")
        curve = SpectralCurve.from_json(out.strip().splitlines()[1])
        assert code == 0 and curve.F == reference_F1(Fraction(1, 3), 2)

    def test_family_sharp(self):
        code, out, _ = run("family", "sharp", "--g", "3", "--a1", "-2")
        assert code == 0 and parse_op(out) == sharp_pair(3, 1, 0, -2).L4

    def test_recurrence_curve(self):
        code, out, _ = run("recurrence-curve", "--g", "2", "--alpha0", "0", "--alpha1", "1/2")
        assert code == 0 and SpectralCurve.from_json(out).F == reference_F2(Fraction(1, 2))


class TestOrbits:
    def test_aut_apply(self):
        code, out, _ = run("aut", "apply", "--word", "phi1:0,1,-1,0", "x")
        assert (code, out.strip()) == (0, "(1)*D")

    def test_aut_bad_word(self):
        assert run("aut", "apply", "--word", "phi1:1,1,1,1", "x")[0] == 2

    def test_certificate_example(self):
        code, out, _ = run("certificate", "--dega", "0", "--r", "9", "--r1", "7",
                           "--n", "2", "--m", "9")
        cert = json.loads(out)
        assert code == 0 and cert["branch"] == "iii"

    def test_certificate_sweep(self):
        code, out, _ = run("certificate", "--dega", "2", "--r", "11", "--r1", "12")
        d = json.loads(out)
        assert code == 0 and sum(d["branches"].values()) == 51 * 51

    def test_certificate_precondition(self):
        assert run("certificate", "--dega", "2", "--r", "10", "--r1", "12")[0] == 1
        assert run("certificate", "--dega", "0", "--r", "9", "--r1", "7", "--n", "2")[0] == 2


class TestSolve:
    def test_solve_vw_report(self):
        code, out, _ = run("solve-vw", "--m", "1", "--curve", "0,0,-1", "--starts", "32")
        reports = json.loads(out)
        assert code == 0 and reports[0]["verified"]
        assert set(reports[0]) >= {"status", "m", "candidate", "residual", "verified",
                                   "curve_echo"}
        assert SpectralCurve.from_dict(reports[0]["curve_echo"]) == SpectralCurve(1, (-1, 0, 0))

    def test_solve_vw_json_curve(self):
        code, out, _ = run("solve-vw", "--m", "1", "--curve",
                           '{"genus":1,"f_coeffs":["1","0","0"]}', "--starts", "32")
        assert code == 0


def test_json_outputs_reparse():
    outputs = [run("curve", "--genus", "1", "D^4", "D^6")[1],
               run("recurrence-curve", "--g", "1", "--alpha0", "1/3", "--alpha1", "2")[1],
               run("certificate", "--dega", "0", "--r", "12", "--r1", "10",
                   "--n", "3", "--m", "18")[1]]
    for text in outputs:
        value = json.loads(text)
        assert json.loads(json.dumps(value)) == value
    c = SpectralCurve.from_json(outputs[1])
    assert SpectralCurve.from_json(c.to_json()) == c
    assert json.loads(outputs[1]) == json.loads(c.to_json())


def test_log_levels(monkeypatch):
    monkeypatch.setenv("WEYLAB_LOG", "info")
    _, _, err = run("partner", "--order", "6", "--maxdeg", "10", DIX)
    assert "commutant dimension 3" in err
    monkeypatch.setenv("WEYLAB_LOG", "quiet")
    assert run("partner", "--order", "6", "--maxdeg", "10", DIX)[2] == ""


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "weylab", "eval", "D^2*x"],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0 and p.stdout.strip() == "(x)*D^2 + (2)*D"
