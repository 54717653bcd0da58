"""
A thick right-angled building
=============================

Chambers of the building of type P5 with thickness 3 are elements of the
graph product of five copies of Z/3.  We check the building axioms on a
sample, retract onto the standard apartment and certify a contracting
element.
"""

import random

from coxkit import systems
from coxkit.building import (GraphProductBuilding, check_axioms, contracting_certificate, residue,
                             retraction, sampled_triples, standard_apartment)

B = GraphProductBuilding(systems.P5(), 3)
print("residue of type {s1}:", [B.format(c) or "1" for c in residue(B, B.base(), ["s1"])])

rep = check_axioms(B, sampled_triples(B, 2000, 6, seed=1))
print("axioms on 2000 triples:", "ok" if rep.ok else rep.violations[:3])

rho = retraction(standard_apartment(B), B.base())
rng = random.Random(0)
for _ in range(3):
    x = B.random_chamber(rng, 6)
    print(f"  rho({B.format(x) or 1}) = {B.format(rho(x)) or 1}   delta = {B.delta(B.base(), x) or 1}")

g = B.element("x1^2 x2 x3 x4 x5")
print("x1^2 x2 x3 x4 x5 is", contracting_certificate(B, g).status.value)
