"""
Irreducible components of Coxeter diagrams and their spherical / affine /
indefinite type, plus the "bad shape" test for parabolic subgroups.

Types are recognised by isomorphism against the finite tables of connected
spherical and affine Coxeter diagrams.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .coxeter import INF, CoxeterError, CoxeterSystem


class Kind(str, Enum):
    SPHERICAL = "Spherical"
    AFFINE = "Affine"
    INDEFINITE = "Indefinite"


class Reason(str, Enum):
    ALL_FINITE = "AllFinite"
    TWO_INFINITE_FACTORS = "TwoInfiniteFactors"
    FINITE_TIMES_AFFINE = "FiniteTimesAffine"


@dataclass(frozen=True)
class TypeLabel:
    kind: Kind
    name: str
    rank: int

    def __str__(self):
        if self.kind is Kind.INDEFINITE:
            return f"Indefinite(rank {self.rank})"
        return f"{self.kind.value}({self.name})"


@dataclass(frozen=True)
class Component:
    gens: frozenset
    label: TypeLabel


@dataclass(frozen=True)
class ShapeReport:
    components: tuple
    bad: bool
    reason: Reason | None

    @property
    def all_spherical(self) -> bool:
        return all(c.label.kind is Kind.SPHERICAL for c in self.components)

    def to_json(self, system: CoxeterSystem) -> dict:
        return {
            "components": [
                {"gens": system.names(c.gens), "label": str(c.label), "rank": c.label.rank}
                for c in self.components
            ],
            "bad": self.bad,
            "reason": self.reason.value if self.reason else None,
        }

    def dumps(self, system) -> str:
        return json.dumps(self.to_json(system), sort_keys=True)


# ----------------------------------------------------------------------
# diagram tables


def _diagram(n, edges):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for a, b, m in edges:
        g.add_edge(a, b, m=m)
    return g


def _path_edges(n, labels=None):
    labels = labels or [3] * (n - 1)
    return [(i, i + 1, labels[i]) for i in range(n - 1)]


def _star(legs):
    """Tree with a centre and legs of the given lengths, all labels 3."""
    edges = []
    nxt = 1
    for leg in legs:
        prev = 0
        for _ in range(leg):
            edges.append((prev, nxt, 3))
            prev = nxt
            nxt += 1
    return nxt, edges


def _spherical_table(n):
    out = []
    if n == 1:
        return [("A1", _diagram(1, []))]
    out.append((f"A{n}", _diagram(n, _path_edges(n))))
    if n >= 3:
        out.append((f"B{n}", _diagram(n, _path_edges(n, [4] + [3] * (n - 2)))))
    if n >= 4:
        k, e = _star([1, 1, n - 3])
        out.append((f"D{n}", _diagram(k, e)))
    if n in (6, 7, 8):
        k, e = _star([1, 2, n - 4])
        out.append((f"E{n}", _diagram(k, e)))
    if n == 4:
        out.append(("F4", _diagram(4, _path_edges(4, [3, 4, 3]))))
    if n in (3, 4):
        out.append((f"H{n}", _diagram(n, _path_edges(n, [5] + [3] * (n - 2)))))
    return out


def _affine_table(n):
    """Connected affine diagrams with n vertices (affine type X~_{n-1})."""
    r = n - 1
    out = []
    if n >= 3:
        out.append((f"A~{r}", _diagram(n, [(i, (i + 1) % n, 3) for i in range(n)])))
    if n >= 4:
        # B~_r: 4-edge at one end, fork at the other
        k, e = _star([1, 1, n - 3])
        # relabel: the far end of the long leg gets the 4
        far = k - 1
        e = [(a, b, 4 if b == far else m) for a, b, m in e]
        out.append((f"B~{r}", _diagram(k, e)))
    if n >= 3:
        out.append((f"C~{r}", _diagram(n, _path_edges(n, [4] + [3] * (n - 3) + [4]))))
    if n == 5:
        k, e = _star([1, 1, 1, 1])
        out.append(("D~4", _diagram(k, e)))
    if n >= 6:
        # fork at both ends
        edges = [(0, 2, 3), (1, 2, 3)] + [(i, i + 1, 3) for i in range(2, n - 3)]
        edges += [(n - 3, n - 2, 3), (n - 3, n - 1, 3)]
        out.append((f"D~{r}", _diagram(n, edges)))
    if n == 7:
        k, e = _star([2, 2, 2])
        out.append(("E~6", _diagram(k, e)))
    if n == 8:
        k, e = _star([1, 3, 3])
        out.append(("E~7", _diagram(k, e)))
    if n == 9:
        k, e = _star([1, 2, 5])
        out.append(("E~8", _diagram(k, e)))
    if n == 5:
        out.append(("F~4", _diagram(5, _path_edges(5, [3, 3, 4, 3]))))
    if n == 3:
        out.append(("G~2", _diagram(3, _path_edges(3, [3, 6]))))
    return out


def _diagram_of(system: CoxeterSystem, J) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(J)
    J = sorted(J)
    for a in J:
        for b in J:
            if a < b:
                m = system.matrix[a][b]
                if m != 2:
                    g.add_edge(a, b, m=m)
    return g


def _edge_match(e1, e2):
    return e1["m"] == e2["m"]


# ----------------------------------------------------------------------
# operations


def components(system: CoxeterSystem, J=None) -> list:
    """Connected components of the Coxeter diagram restricted to J (sorted)."""
    J = _subset(system, J)
    g = _diagram_of(system, J)
    comps = [frozenset(c) for c in nx.connected_components(g)]
    return sorted(comps, key=lambda c: min(c))


def classify_component(system: CoxeterSystem, J) -> TypeLabel:
    J = _subset(system, J)
    if not J:
        raise CoxeterError("empty generator subset")
    if len(components(system, J)) != 1:
        raise CoxeterError("generator subset is not irreducible")
    n = len(J)
    if n == 1:
        return TypeLabel(Kind.SPHERICAL, "A1", 1)
    if n == 2:
        a, b = sorted(J)
        m = system.matrix[a][b]
        if m == INF:
            return TypeLabel(Kind.AFFINE, "A~1", 2)
        name = {3: "A2", 4: "B2", 6: "G2"}.get(m, f"I2({m})")
        return TypeLabel(Kind.SPHERICAL, name, 2)
    g = _diagram_of(system, J)
    if any(d["m"] == INF for _, _, d in g.edges(data=True)):
        return TypeLabel(Kind.INDEFINITE, "", n)
    for name, ref in _spherical_table(n):
        if _iso(g, ref):
            return TypeLabel(Kind.SPHERICAL, name, n)
    for name, ref in _affine_table(n):
        if _iso(g, ref):
            return TypeLabel(Kind.AFFINE, name, n)
    return TypeLabel(Kind.INDEFINITE, "", n)


def _iso(g, ref):
    if g.number_of_edges() != ref.number_of_edges():
        return False
    return GraphMatcher(g, ref, edge_match=_edge_match).is_isomorphic()


def shape(system: CoxeterSystem, J=None) -> ShapeReport:
    """Label every component of J and decide whether W_J has a bad shape.

    Bad means: finite, or two infinite factors, or finite x affine of rank >= 3.
    """
    comps = tuple(Component(c, classify_component(system, c)) for c in components(system, J))
    infinite = [c for c in comps if c.label.kind is not Kind.SPHERICAL]
    if not infinite:
        return ShapeReport(comps, True, Reason.ALL_FINITE)
    if len(infinite) >= 2:
        return ShapeReport(comps, True, Reason.TWO_INFINITE_FACTORS)
    lab = infinite[0].label
    if lab.kind is Kind.AFFINE and lab.rank >= 3:
        return ShapeReport(comps, True, Reason.FINITE_TIMES_AFFINE)
    return ShapeReport(comps, False, None)


def is_spherical(system: CoxeterSystem, J) -> bool:
    return all(classify_component(system, c).kind is Kind.SPHERICAL for c in components(system, J))


def is_virtually_abelian(system: CoxeterSystem) -> bool:
    """Every irreducible component is spherical or affine."""
    return all(classify_component(system, c).kind is not Kind.INDEFINITE
               for c in components(system))


def _subset(system, J):
    if J is None:
        return frozenset(range(system.rank))
    if isinstance(J, frozenset) and all(isinstance(x, int) for x in J):
        for x in J:
            system._idx(x)
        return J
    return system.subset(J)
