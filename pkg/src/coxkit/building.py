"""
Buildings as Weyl-distance spaces.

Two concrete instances: the thin building (W, x^-1 y) and the thick
right-angled building whose chambers are elements of the graph product of
cyclic groups Z/q_s over the commutation graph of a right-angled Coxeter
system.  In the latter, delta(g, h) = pi(g^-1 h) where pi sends every
nonzero power of the vertex generator x_s to s.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .classify import is_spherical
from .coxeter import INF, CoxeterError, CoxeterSystem, Element, parse_system
from .rankone import RankOneDecision, is_rank_one


class BuildingError(ValueError):
    pass


class WeylDistanceSpace:
    """Interface: a chamber set with a Weyl distance into ``self.type``."""

    type: CoxeterSystem

    def delta(self, x, y) -> Element:
        raise NotImplementedError

    def panel(self, c, s) -> list:
        """Chambers of the s-panel containing c (c included)."""
        raise NotImplementedError

    def base(self):
        raise NotImplementedError

    def neighbours(self, c):
        for s in range(self.type.rank):
            for d in self.panel(c, s):
                if d != c:
                    yield d

    def chambers(self, radius: int, center=None) -> list:
        """All chambers at gallery distance <= radius from ``center``."""
        center = self.base() if center is None else center
        seen = {center}
        out = [center]
        frontier = [center]
        for _ in range(radius):
            nxt = []
            for c in frontier:
                for d in self.neighbours(c):
                    if d not in seen:
                        seen.add(d)
                        out.append(d)
                        nxt.append(d)
            frontier = nxt
        return out

    def distance(self, x, y) -> int:
        return self.delta(x, y).length


class ThinBuilding(WeylDistanceSpace):
    def __init__(self, system: CoxeterSystem):
        self.type = system

    def delta(self, x: Element, y: Element) -> Element:
        return x.inverse() * y

    def panel(self, c: Element, s) -> list:
        s = self.type._idx(s)
        return [c, c * self.type.gen(s)]

    def base(self):
        return self.type.identity

    def act(self, g: Element, c: Element) -> Element:
        return g * c

    def format(self, c: Element) -> str:
        return str(c)


# ----------------------------------------------------------------------
# graph products


@dataclass(frozen=True)
class GPElement:
    """Graph-product element: a reduced syllable sequence ((vertex, exponent), ...)."""

    syllables: tuple

    def __len__(self):
        return len(self.syllables)


class GraphProductBuilding(WeylDistanceSpace):
    """Right-angled building from the graph product of Z/q_s."""

    def __init__(self, system: CoxeterSystem, thickness=None):
        if not system.is_right_angled:
            raise BuildingError(f"{system} is not right-angled")
        q = thickness if thickness is not None else 2
        if isinstance(q, int):
            q = {s: q for s in system.generators}
        qs = []
        for s in system.generators:
            v = q.get(s, 2) if isinstance(q, dict) else q
            if int(v) < 2:
                raise BuildingError(f"thickness q_{s} = {v} must be >= 2")
            qs.append(int(v))
        self.type = system
        self.q = tuple(qs)
        n = system.rank
        self._commute = [[i != j and system.matrix[i][j] == 2 for j in range(n)] for i in range(n)]
        self.identity = GPElement(())

    # group law ----------------------------------------------------------

    def _push(self, syl: list, v: int, e: int):
        e %= self.q[v]
        if e == 0:
            return
        for k in range(len(syl) - 1, -1, -1):
            u, f = syl[k]
            if u == v:
                new = (f + e) % self.q[v]
                if new:
                    syl[k] = (v, new)
                else:
                    del syl[k]
                return
            if not self._commute[u][v]:
                break
        syl.append((v, e))

    def _canonical(self, syl) -> GPElement:
        """Shuffle commuting syllables into the lexicographically least order."""
        rest = list(syl)
        out = []
        while rest:
            best = None
            for k, (v, e) in enumerate(rest):
                if all(self._commute[u][v] for u, _ in rest[:k]):
                    if best is None or v < rest[best][0]:
                        best = k
            out.append(rest.pop(best))
        return GPElement(tuple(out))

    def multiply(self, g: GPElement, h: GPElement) -> GPElement:
        syl = list(g.syllables)
        for v, e in h.syllables:
            self._push(syl, v, e)
        return self._canonical(syl)

    def inverse(self, g: GPElement) -> GPElement:
        return self._canonical([(v, -e % self.q[v]) for v, e in reversed(g.syllables)])

    def vertex(self, s, e: int = 1) -> GPElement:
        s = self.type._idx(s)
        e %= self.q[s]
        return GPElement(((s, e),) if e else ())

    def element(self, text: str) -> GPElement:
        """Parse "x1^2 x2" (vertex names, or the Coxeter generator names)."""
        syl: list = []
        for tok in text.split():
            name, _, exp = tok.partition("^")
            v = self._vertex_index(name)
            self._push(syl, v, int(exp) if exp else 1)
        return self._canonical(syl)

    def power(self, g: GPElement, n: int) -> GPElement:
        if n < 0:
            return self.power(self.inverse(g), -n)
        out = self.identity
        for _ in range(n):
            out = self.multiply(out, g)
        return out

    def _vertex_index(self, name):
        gens = self.type.generators
        if name in self.type.index:
            return self.type.index[name]
        for i, s in enumerate(gens):
            if self.vertex_name(i) == name:
                return i
        raise CoxeterError(f"unknown vertex generator {name!r}")

    def vertex_name(self, i: int) -> str:
        s = self.type.generators[i]
        return "x" + s[1:] if s.startswith("s") and len(s) > 1 else "x_" + s

    def format(self, g: GPElement) -> str:
        parts = []
        for v, e in g.syllables:
            parts.append(self.vertex_name(v) + (f"^{e}" if e != 1 else ""))
        return " ".join(parts)

    def project(self, g: GPElement) -> Element:
        """pi: graph product -> W, x_s^e -> s."""
        return self.type.normal_form(tuple(v for v, _ in g.syllables))

    # building structure --------------------------------------------------

    def delta(self, x: GPElement, y: GPElement) -> Element:
        return self.project(self.multiply(self.inverse(x), y))

    def panel(self, c: GPElement, s) -> list:
        s = self.type._idx(s)
        return [self.multiply(c, self.vertex(s, e)) for e in range(self.q[s])]

    def base(self):
        return self.identity

    def act(self, g: GPElement, c: GPElement) -> GPElement:
        return self.multiply(g, c)

    def random_chamber(self, rng: random.Random, radius: int) -> GPElement:
        n = rng.randint(0, radius)
        syl: list = []
        for _ in range(n):
            v = rng.randrange(self.type.rank)
            self._push(syl, v, rng.randrange(1, self.q[v]))
        return self._canonical(syl)

    def to_json(self) -> dict:
        return {"type": self.type.to_json(),
                "thickness": {s: q for s, q in zip(self.type.generators, self.q)}}


def parse_building(text: str) -> GraphProductBuilding:
    """Building description JSON: {"type": <coxeter matrix doc>, "thickness": {gen: q}}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BuildingError(f"malformed JSON: {exc}") from None
    if "type" not in doc:
        raise BuildingError('building document needs "type"')
    system = parse_system(json.dumps(doc["type"]))
    return GraphProductBuilding(system, doc.get("thickness", 2))


# ----------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    pairs_checked: int = 0
    triples_checked: int = 0
    bu3_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "pairs": self.pairs_checked, "bu2_triples": self.triples_checked,
                "bu3_checks": self.bu3_checked, "violations": self.violations[:20]}


def check_axioms(space: WeylDistanceSpace, sample: Iterable, max_violations: int = 50) -> AxiomReport:
    """Check (Bu1)-(Bu3) on chamber triples (x, y, z).

    (Bu1) is tested on (x, y); (Bu2) on (x, y, z) whenever delta(y, z) is a
    generator and on (x, y, z') for every z' in the panels of y; (Bu3) by
    scanning the s-panel of y for every s.
    """
    W = space.type
    rep = AxiomReport()
    fmt = getattr(space, "format", str)

    def bad(axiom, *cs):
        if len(rep.violations) < max_violations:
            rep.violations.append({"axiom": axiom, "chambers": [fmt(c) for c in cs]})

    def bu2(x, y, z, w):
        s_elem = space.delta(y, z)
        if s_elem.length != 1:
            return
        rep.triples_checked += 1
        ws = w * s_elem
        d = space.delta(x, z)
        if d != w and d != ws:
            bad("Bu2", x, y, z)
        elif ws.length == w.length + 1 and d != ws:
            bad("Bu2", x, y, z)

    for x, y, z in sample:
        w = space.delta(x, y)
        rep.pairs_checked += 1
        if w.is_identity() != (x == y):
            bad("Bu1", x, y)
        bu2(x, y, z, w)
        for s in range(W.rank):
            s_elem = W.gen(s)
            panel = space.panel(y, s)
            found = False
            for z2 in panel:
                if z2 == y:
                    continue
                bu2(x, y, z2, w)
                if space.delta(y, z2) == s_elem and space.delta(x, z2) == w * s_elem:
                    found = True
            rep.bu3_checked += 1
            if not found:
                bad("Bu3", x, y)
    return rep


def exhaustive_triples(space: WeylDistanceSpace, radius: int):
    cs = space.chambers(radius)
    for x in cs:
        for y in cs:
            for z in cs:
                yield x, y, z


def sampled_triples(space: WeylDistanceSpace, count: int, radius: int, seed: int = 0):
    rng = random.Random(seed)
    if hasattr(space, "random_chamber"):
        pick = lambda: space.random_chamber(rng, radius)  # noqa: E731
    else:
        pool = space.chambers(radius)
        pick = lambda: rng.choice(pool)  # noqa: E731
    for _ in range(count):
        yield pick(), pick(), pick()


# ----------------------------------------------------------------------
# residues and projections


def residue(space: WeylDistanceSpace, c, J, radius: int | None = None) -> list:
    """Res_J(c): chambers joined to c by a J-gallery (delta(c, x) in W_J)."""
    W = space.type
    J = W.subset(J) if not isinstance(J, frozenset) else J
    if radius is None and not is_spherical(W, J):
        raise BuildingError("residue of infinite type needs a radius bound")
    seen = {c}
    out = [c]
    queue = deque([(c, 0)])
    while queue:
        x, d = queue.popleft()
        if radius is not None and d >= radius:
            continue
        for s in sorted(J):
            for y in space.panel(x, s):
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    queue.append((y, d + 1))
    return out


def projection(space: WeylDistanceSpace, R: list, x):
    """The unique chamber of R closest to x."""
    dists = [(space.distance(p, x), k) for k, p in enumerate(R)]
    best = min(d for d, _ in dists)
    winners = [R[k] for d, k in dists if d == best]
    if len(winners) != 1:
        raise BuildingError(f"projection not unique ({len(winners)} minimizers)")
    return winners[0]


def gate_holds(space: WeylDistanceSpace, R: list, x) -> bool:
    p = projection(space, R, x)
    dpx = space.distance(p, x)
    return all(space.distance(y, x) == space.distance(y, p) + dpx for y in R)


# ----------------------------------------------------------------------
# apartments and retractions


@dataclass(frozen=True)
class Apartment:
    space: WeylDistanceSpace
    section: Callable        # W -> chambers
    preimage: Callable       # chamber -> W, or None off the apartment

    def __contains__(self, c) -> bool:
        return self.preimage(c) is not None


def standard_apartment(space: WeylDistanceSpace) -> Apartment:
    if isinstance(space, ThinBuilding):
        return Apartment(space, lambda w: w, lambda c: c)
    if isinstance(space, GraphProductBuilding):
        def section(w: Element):
            return space._canonical([(v, 1) for v in w.letters])

        def preimage(c: GPElement):
            if all(e == 1 for _, e in c.syllables):
                return space.project(c)
            return None
        return Apartment(space, section, preimage)
    raise BuildingError(f"no standard apartment for {type(space).__name__}")


@dataclass(frozen=True)
class Retraction:
    apartment: Apartment
    center: object

    def apply(self, x):
        A = self.apartment
        u = A.preimage(self.center)
        return A.section(u * A.space.delta(self.center, x))

    __call__ = apply


def retraction(A: Apartment, c) -> Retraction:
    if c not in A:
        raise BuildingError("retraction center is not in the apartment")
    return Retraction(A, c)


# ----------------------------------------------------------------------
# transitivity and the contracting certificate


@dataclass
class TransitivityReport:
    tested: int = 0
    succeeded: int = 0
    failures: list = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.succeeded / self.tested if self.tested else 1.0


def weyl_transitivity_sample(space: WeylDistanceSpace, act: Callable, group: Iterable, pairs) -> TransitivityReport:
    """For ((x, y), (x2, y2)) with equal Weyl distance, find g with g.x = x2, g.y = y2."""
    group = list(group)
    rep = TransitivityReport()
    fmt = getattr(space, "format", str)
    for (x, y), (x2, y2) in pairs:
        if space.delta(x, y) != space.delta(x2, y2):
            continue
        rep.tested += 1
        if any(act(g, x) == x2 and act(g, y) == y2 for g in group):
            rep.succeeded += 1
        else:
            rep.failures.append([fmt(x), fmt(y), fmt(x2), fmt(y2)])
    return rep


def cyclic_core(space: GraphProductBuilding, g: GPElement) -> GPElement:
    """Cyclically reduce g, then drop syllables commuting with all the others.

    The dropped syllables have finite order and commute with the rest, so
    some power of g is conjugate to the same power of the core, and powers
    of the core multiply without merging syllables.
    """
    changed = True
    while changed:
        changed = False
        for v in range(space.type.rank):
            for e in range(1, space.q[v]):
                x = space.vertex(v, e)
                h = space.multiply(space.multiply(space.inverse(x), g), x)
                if len(h) < len(g):
                    g, changed = h, True
                    break
            if changed:
                break
    M = space.type.matrix
    syl = g.syllables
    keep = [(v, e) for i, (v, e) in enumerate(syl)
            if not all(u != v and M[u][v] == 2 for j, (u, _) in enumerate(syl) if j != i)]
    return space._canonical(keep)


def contracting_certificate(space: GraphProductBuilding, g: GPElement) -> RankOneDecision:
    """Rank-one status of g acting on the building, read off in W.

    The chamber map is not a homomorphism once q > 2 (x1 * x1 = x1^2 lies
    over s1), but for the cyclic core h of g the reduced words of h^n are
    concatenations, so delta(c, h^n c) = pi(h)^n for the base chamber c.
    """
    if not isinstance(space, GraphProductBuilding):
        raise BuildingError("contracting_certificate needs a graph-product building")
    return is_rank_one(space.project(cyclic_core(space, g)))


def thickness_ok(space: GraphProductBuilding, c) -> bool:
    return all(len(set(space.panel(c, s))) == space.q[s] for s in range(space.type.rank))


__all__ = [
    "Apartment", "AxiomReport", "BuildingError", "GPElement", "GraphProductBuilding", "INF",
    "Retraction", "ThinBuilding", "WeylDistanceSpace", "check_axioms", "contracting_certificate", "cyclic_core",
    "exhaustive_triples", "gate_holds", "parse_building", "projection", "residue", "retraction",
    "sampled_triples", "standard_apartment", "weyl_transitivity_sample",
]
