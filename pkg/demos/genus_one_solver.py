"""Finding (V, W) with deg W = m on a fixed genus-one curve.

For m = 2 an exact solution comes from any rational point of the curve.  The
multi-start Newton search is then run on the same curve and its best report
is printed.
"""
import json

from weylab import leading_law, multi_start, print_op, verify_candidate
from weylab.commutant import SpectralCurve
from weylab.rank2 import genus1_residual
from weylab.solver import SolveReport, VWSystem, m2_from_curve_point

curve = SpectralCurve(1, (1, -3, 0))  # z^3 - 3z + 1
y, w = 0, 1                           # F(0) = 1
pair = m2_from_curve_point(curve, y, w)
print("V =", pair.V.format("x"))
print("W =", pair.W.format("x"))
print("residual is zero:", genus1_residual(pair, curve).is_zero())
print("L4 =", print_op(pair.L4))

sys = VWSystem(2, curve)
exact = SolveReport("exact", 2, tuple(pair.V[k] for k in range(5)),
                    tuple(pair.W[k] for k in range(3)), 0.0, curve)
print("exact candidate:", verify_candidate(exact, sys).status)
print("leading law alpha_{m+2} * beta_m =", leading_law(2))

best = multi_start(sys, seed=3, starts=200)[0]
print(json.dumps(best.to_dict(), indent=1))
