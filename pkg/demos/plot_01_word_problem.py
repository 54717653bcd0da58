"""
Normal forms and the word problem
=================================

Every element of a Coxeter group is stored as its ShortLex normal form.
Here we reduce a few words, count finite groups, and watch the balls of
an infinite group grow.
"""

from coxkit import systems

B2 = systems.B2()
w = B2.normal_form("t s t s t")
print("t s t s t  ->", w, " length", w.length)

# the longest element of B2 has two reduced words
print("s t s t == t s t s :", B2.normal_form("s t s t") == B2.normal_form("t s t s"))

# finite groups: breadth-first search stops by itself
for W in (systems.A2(), systems.B2(), systems.A(3), systems.B(3), systems.H3()):
    ball = W.ball(100)
    print(f"{W.name:>4}: |W| = {len(ball)}  (saturated: {ball.saturated})")

# the right-angled pentagon group grows exponentially
P5 = systems.P5()
ball = P5.ball(8)
print("P5 sphere sizes:", [len(ball.shell(k)) for k in range(9)])

# conjugacy: cyclic reduction lands on a minimal-length representative
w = P5.normal_form("s3 s1 s2 s3 s4 s1 s3")
x, core = P5.cyclic_reduction(w)
print(f"cyclic reduction: {w} = x ({core}) x^-1 with x = {x}")
