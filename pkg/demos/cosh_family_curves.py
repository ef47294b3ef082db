"""Curves of the cosh family: closed-form recurrence against the direct route.

The direct route solves the Q-equations in y = cosh x; the recurrence gives
the curve in closed form.  For g = 1 the curve is also recomputed from the
polynomial form in y by linear algebra.
"""
from fractions import Fraction

from weylab import cosh_curve, mokhov_L4, print_op
from weylab.families import cosh_family_curve, mokhov_curve, rank_transform

for g in (1, 2, 3):
    a0, a1 = Fraction(1, 3), Fraction(2)
    direct = cosh_family_curve(g, -a0, a1)
    print(f"g = {g}: {cosh_curve(g, a0, a1)}   agrees: {direct == cosh_curve(g, a0, a1)}")

a, b = Fraction(2), Fraction(1, 3)
print("commutant route, g = 1:", mokhov_curve(1, a, b))

L = mokhov_L4(1, 1, a, b)
print("L4 in y:", print_op(L))
for r in (2, 3):
    T = rank_transform(mokhov_L4(1, r, a, b))
    print(f"r = {r}: transformed order {T.order}")
