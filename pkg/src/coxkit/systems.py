"""Standard Coxeter systems used throughout the tests and demos."""

from .coxeter import INF, CoxeterSystem


def _path(n, labels=None, prefix="s"):
    labels = labels or [3] * (n - 1)
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i, lab in enumerate(labels):
        m[i][i + 1] = m[i + 1][i] = lab
    gens = tuple(f"{prefix}{i + 1}" for i in range(n))
    return gens, tuple(tuple(r) for r in m)


def A2():
    return CoxeterSystem(("s", "t"), ((1, 3), (3, 1)), name="A2")


def B2():
    return CoxeterSystem(("s", "t"), ((1, 4), (4, 1)), name="B2")


def dihedral(m):
    return CoxeterSystem(("s", "t"), ((1, m), (m, 1)), name=f"I2({m})")


def A(n):
    gens, m = _path(n)
    return CoxeterSystem(gens, m, name=f"A{n}")


def B(n):
    gens, m = _path(n, [3] * (n - 2) + [4])
    return CoxeterSystem(gens, m, name=f"B{n}")


def H3():
    gens, m = _path(3, [5, 3])
    return CoxeterSystem(gens, m, name="H3")


def A2_tilde():
    return CoxeterSystem(("s1", "s2", "s3"), ((1, 3, 3), (3, 1, 3), (3, 3, 1)), name="A2~")


def D_inf():
    return CoxeterSystem(("s", "t"), ((1, INF), (INF, 1)), name="Dinf")


def D_inf_squared():
    """D_inf x D_inf on generators s, t | u, v."""
    I = INF
    m = ((1, I, 2, 2), (I, 1, 2, 2), (2, 2, 1, I), (2, 2, I, 1))
    return CoxeterSystem(("s", "t", "u", "v"), m, name="Dinf x Dinf")


def right_angled_cycle(n):
    """Right-angled Coxeter group of the n-cycle: neighbours commute, others are free."""
    m = [[INF] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
        m[i][(i + 1) % n] = m[(i + 1) % n][i] = 2
    gens = tuple(f"s{i + 1}" for i in range(n))
    return CoxeterSystem(gens, tuple(tuple(r) for r in m), name=f"P{n}")


def P5():
    return right_angled_cycle(5)


def by_name(name: str) -> CoxeterSystem:
    table = {"A2": A2, "B2": B2, "A3": lambda: A(3), "B3": lambda: B(3), "H3": H3,
             "A2~": A2_tilde, "Dinf": D_inf, "P5": P5, "DinfxDinf": D_inf_squared}
    return table[name]()


ACCEPTANCE_SYSTEMS = ("A2", "B2", "A3", "B3", "H3", "A2~", "Dinf", "P5")
