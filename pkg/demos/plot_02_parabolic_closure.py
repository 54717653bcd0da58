"""
Parabolic closures and essential elements
=========================================

The parabolic closure of an element is the smallest conjugate of a
standard subgroup that contains it.  Coxeter elements are essential:
their closure is the whole group.
"""

import itertools

from coxkit import systems
from coxkit.classify import shape
from coxkit.parabolic import coxeter_element, is_essential, parabolic_closure

A2 = systems.A2()
P = parabolic_closure(A2.normal_form("s t s"))
# sts is the reflection t conjugated by s
print("Pc(s t s) =", P.conjugator, "W_J", A2.names(P.J), "x^-1")

At = systems.A2_tilde()
for w in ("s1 s2", "s1 s2 s3"):
    P = parabolic_closure(At.normal_form(w))
    print(f"A2~: Pc({w}) has type", shape(At, P.J).to_json(At)["components"])

P5 = systems.P5()
n = sum(is_essential(coxeter_element(P5, p)) for p in itertools.permutations(range(5)))
print(f"P5: {n}/120 Coxeter elements are essential")
