"""
Rank-one elements
=================

An infinite-order element is rank one exactly when no standard overgroup
of its parabolic closure has a bad shape (finite times affine, or two
infinite factors).  Two independent oracles agree with the decision:
rank-one elements have no Z^2 around them and a linearly growing
centralizer.
"""

from coxkit import systems
from coxkit.parabolic import coxeter_element
from coxkit.rankone import centralizer_growth, is_rank_one, reversibility_search, z2_witness_search

At, P5, D = systems.A2_tilde(), systems.P5(), systems.D_inf()

c = coxeter_element(At)
d = is_rank_one(c)
print("A2~ :", c, "->", d.status.value, "witness", At.names(d.witness), d.reason.value)
# a glide reflection; its square is a translation sitting in a Z^2
print("   Z^2 with c^2:", z2_witness_search(c * c, 8))
print("   centralizer of c^2:", centralizer_growth(c * c, 8).profile)

c = coxeter_element(P5)
print("P5  :", c, "->", is_rank_one(c).status.value)
print("   Z^2 witness:", z2_witness_search(c, 6))
print("   centralizer:", centralizer_growth(c, 6).profile)

# D_inf: st is reversed by the involutions s and t
w = reversibility_search(D.normal_form("s t"), 3, 4)
print("Dinf: (st)^%d = %s * %s" % (w.k, w.a, w.b))
print("P5 c reversible within radius 8:", reversibility_search(c, 3, 8) is not None)
