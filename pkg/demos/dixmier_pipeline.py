"""Dixmier pair end to end: build L4, find its order-6 partner, read off the curve.

The curve is computed twice, once from the commuting pair and once from the
auxiliary Q(x, z), and the two must agree.
"""
from weylab import bc_curve, dixmier_pair, find_partner, print_op, solve_Q
from weylab.weyl import commutator

pair = dixmier_pair(1, a2=1)
L4 = pair.L4
print("L4 =", print_op(L4))

L6, basis, bound = find_partner(L4, 6)
print(f"partner found at coefficient degree bound {bound} (commutant dim {len(basis)})")
print("L6 =", print_op(L6))
assert commutator(L4, L6).is_zero()

curve, M = bc_curve(L4, L6, 1)
print("curve from the pair:", curve)

q = solve_Q(pair, 1)
print("curve from Q:       ", q.curve)
assert q.curve == curve
