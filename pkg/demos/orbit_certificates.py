"""Tame automorphisms and orbit-exclusion certificates.

A random bounded word is applied to a Dixmier operator; the image still
commutes with the image of the partner.  Then the certificate sweep shows
which relation excludes each pair of image orders (n, m).
"""
import random
from collections import Counter

from weylab import AutWord, apply_aut, dixmier_pair, find_partner, print_op
from weylab.orbits import OrbitQuery, image_orders, orbit_excludes, random_word
from weylab.weyl import commutator

L4 = dixmier_pair(1).L4
L6, _, _ = find_partner(L4, 6)

word = random_word(random.Random(7), max_gens=4, max_image_degree=2)
print("word:", word.format() or "(identity)", " image orders:", image_orders(word))
A, B = apply_aut(word, L4), apply_aut(word, L6)
print("image of L4:", print_op(A))
print("images commute:", commutator(A, B).is_zero())

fixed = AutWord.parse("phi1:0,1,-1,0")
print("x -> D, D -> -x sends L4 to", print_op(apply_aut(fixed, L4)))

branches = Counter()
for n in range(21):
    for m in range(21):
        cert = orbit_excludes(OrbitQuery(dega=1, r=12, r1=13, n=n, m=m))
        assert cert.check()
        branches[cert.branch] += 1
print("branches over n, m in [0, 20]:", dict(branches))
print(orbit_excludes(OrbitQuery(1, 12, 13, 2, 5)).relation)
