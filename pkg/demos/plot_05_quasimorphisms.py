"""
Counting quasi-morphisms and scl
================================

On the free group, Brooks counting functions calibrate the machinery.
On P5 we count copies of a rank-one axis word, estimate the defect on
a finite window, homogenize, and obtain a positive (empirical) lower
bound for the stable commutator length.
"""

from coxkit import systems
from coxkit.quasimorphism import (axis_counting, brooks_counting, defect_estimate, free_group_model,
                                  homogenize, scl_lower_bound)
from coxkit.rankone import inequivalent_pair

F = free_group_model(2)
f = brooks_counting(F, "ab")
d = defect_estimate(f, 4)
g = F.parse("abAB")
h = homogenize(f, g, 8, defect=d)
print("F2: defect", d.value, " hom([a,b])", h.value, " scl >=", scl_lower_bound(f, g, d, h).lower_bound)

P5 = systems.P5()
pair = inequivalent_pair(P5)
print("P5 inequivalent rank-one pair:", *pair.pair, sep="\n   ")
gamma = pair.pair[0]
f = axis_counting(gamma)
d = defect_estimate(f, 4)
g = gamma ** 2        # lies in the commutator subgroup
h = homogenize(f, g, 8, defect=d)
s = scl_lower_bound(f, g, d, h)
print(f"{f.description}: defect {d.value} on {d.pairs_tested} pairs, hom {h.value}, scl >= {s.lower_bound}")
print("caveat:", s.caveats[0])
