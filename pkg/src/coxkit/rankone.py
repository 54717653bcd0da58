"""
Rank-one decisions for Coxeter group elements and the bounded witness
searches around them (commuting Z^2, reversibility, equivalence,
independence).

Every search is a semi-decision: ``None`` means "nothing found within the
stated bounds", never "impossible".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .classify import Reason, is_virtually_abelian, shape
from .coxeter import CoxeterError, CoxeterSystem, Element
from .parabolic import (OVERGROUP_LIMIT, ParabolicSubgroup, coxeter_element, parabolic_closure,
                        standard_overgroups)

DEFAULT_RADIUS = 6
DEFAULT_HORIZON = 6


class Status(str, Enum):
    RANK_ONE = "RankOne"
    NOT_RANK_ONE = "NotRankOne"
    FINITE_ORDER = "FiniteOrder"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RankOneDecision:
    status: Status
    closure: ParabolicSubgroup | None = None
    witness: frozenset | None = None
    reason: Reason | None = None
    note: str = ""

    def to_json(self, system: CoxeterSystem) -> dict:
        return {
            "status": self.status.value,
            "closure": self.closure.to_json() if self.closure else None,
            "witness": system.names(self.witness) if self.witness is not None else None,
            "witness_reason": self.reason.value if self.reason else None,
            "note": self.note,
        }


def is_rank_one(g: Element, limit: int = OVERGROUP_LIMIT) -> RankOneDecision:
    """Decide rank one by looking for a bad-shaped standard overgroup of Pc(g)."""
    W = g.system
    P = parabolic_closure(g)
    sh = shape(W, P.J)
    if sh.all_spherical:
        return RankOneDecision(Status.FINITE_ORDER, P, note="spherical parabolic closure")
    try:
        for K in standard_overgroups(W, P.J, limit):
            rep = shape(W, K)
            if rep.bad:
                return RankOneDecision(Status.NOT_RANK_ONE, P, K, rep.reason)
    except CoxeterError as exc:
        return RankOneDecision(Status.INCONCLUSIVE, P, note=str(exc))
    return RankOneDecision(Status.RANK_ONE, P)


def is_infinite_order(g: Element) -> bool:
    return not g.system.has_finite_order(g)


def _ball(W, radius):
    ball = W.ball(radius)
    if ball.truncated:
        raise CoxeterError(f"ball of radius {radius} truncated at {ball.budget} elements")
    return ball


def z2_witness_search(g: Element, radius: int = DEFAULT_RADIUS):
    """First h in ball(radius) with <g, h> free abelian of rank 2, or None.

    h must commute with g, have infinite order, and satisfy g^a != h^b for
    all 0 < |a|, |b| <= radius.
    """
    W = g.system
    if not is_infinite_order(g):
        raise CoxeterError("z2_witness_search needs an element of infinite order")
    gp = {g ** a for a in range(-radius, radius + 1) if a}
    for h in _ball(W, radius):
        if h.is_identity() or h * g != g * h:
            continue
        if not is_infinite_order(h):
            continue
        if any(h ** b in gp for b in range(-radius, radius + 1) if b):
            continue
        return h
    return None


@dataclass(frozen=True)
class CentralizerReport:
    radius: int
    shell_counts: tuple
    total: int
    profile: str          # "linear" | "super-linear" | "full"


def centralizer_growth(g: Element, radius: int = DEFAULT_RADIUS) -> CentralizerReport:
    """Count elements of ball(radius) commuting with g, by length.

    A virtually cyclic centralizer meets each sphere in a bounded number of
    elements; a centralizer containing Z^2 has spheres growing linearly.
    The profile is "super-linear" when the mean shell count over the outer
    half of the radii is at least 1.5 times that over the inner half.
    """
    W = g.system
    ball = _ball(W, radius)
    counts = [0] * (radius + 1)
    for h in ball:
        if h * g == g * h:
            counts[h.length] += 1
    total = sum(counts)
    if total == len(ball):
        profile = "full"
    else:
        half = (radius + 1) // 2
        inner = counts[1:half + 1] or [0]
        outer = counts[half + 1:] or [0]
        mi = sum(inner) / len(inner)
        mo = sum(outer) / len(outer)
        profile = "super-linear" if mo >= 1.5 * max(mi, 1) else "linear"
    return CentralizerReport(radius, tuple(counts), total, profile)


@dataclass(frozen=True)
class ReversibilityWitness:
    k: int
    a: Element
    b: Element


def reversibility_search(g: Element, k_max: int = 3, radius: int = DEFAULT_RADIUS):
    """Search g^k = a b with a, b involutions, k <= k_max, a in ball(radius)."""
    W = g.system
    if not is_infinite_order(g):
        raise CoxeterError("reversibility_search needs an element of infinite order")
    ball = _ball(W, radius)
    involutions = [a for a in ball if not a.is_identity() and (a * a).is_identity()]
    for k in range(1, k_max + 1):
        gk = g ** k
        for a in involutions:
            b = a * gk
            if not b.is_identity() and (b * b).is_identity():
                return ReversibilityWitness(k, a, b)
    return None


@dataclass(frozen=True)
class EquivalenceWitness:
    a: Element
    b: Element
    horizon: int
    conjugate_power: tuple | None = field(default=None)   # (p, h) with h g1^p h^-1 = g2^p

    def holds(self, g1: Element, g2: Element) -> bool:
        return all(g2 ** n == self.a * g1 ** n * self.b for n in range(1, self.horizon + 1))


def conjugate_powers(g1: Element, g2: Element, bound: int, max_power: int):
    """(p, h) with h g1^p h^-1 = g2^p, p <= max_power, h in ball(bound); else None."""
    ball = _ball(g1.system, bound)
    for p in range(1, max_power + 1):
        a, b = g1 ** p, g2 ** p
        if a.length != b.length and abs(a.length - b.length) > 2 * bound:
            continue
        for h in ball:
            if h * a == b * h:
                return p, h
    return None


def equivalence_witness(g1: Element, g2: Element, bound: int = DEFAULT_RADIUS,
                        horizon: int = DEFAULT_HORIZON):
    """Find a, b in ball(bound) with g2^n = a g1^n b for n = 1..horizon."""
    W = g1.system
    ball = _ball(W, bound)
    p1 = [g1 ** n for n in range(horizon + 1)]
    p2 = [g2 ** n for n in range(horizon + 1)]
    g1inv = g1.inverse()
    for a in ball:
        b = g1inv * a.inverse() * g2
        if b.length > bound:
            continue
        if all(p2[n] == a * p1[n] * b for n in range(2, horizon + 1)):
            cp = conjugate_powers(g1, g2, bound, horizon)
            return EquivalenceWitness(a, b, horizon, cp)
    return None


@dataclass(frozen=True)
class IndependenceProfile:
    horizon: int
    grid: dict               # (m, n) -> l(g1^-m g2^n)
    shell_minima: tuple      # index r -> min over max(|m|,|n|) = r
    threshold: int
    verdict: str             # "dependent-evidence" | "independent-evidence"


def independence_profile(g1: Element, g2: Element, horizon: int = 8,
                         threshold: int | None = None) -> IndependenceProfile:
    """Tabulate d(m, n) = l(g1^-m g2^n) for |m|, |n| <= horizon.

    The verdict is "dependent-evidence" when the minimum over the outermost
    shell is at most ``threshold`` (default l(g1) + l(g2)).
    """
    if threshold is None:
        threshold = g1.length + g2.length
    pw1 = {m: g1 ** (-m) for m in range(-horizon, horizon + 1)}
    pw2 = {n: g2 ** n for n in range(-horizon, horizon + 1)}
    grid = {}
    minima = [None] * (horizon + 1)
    for m in range(-horizon, horizon + 1):
        for n in range(-horizon, horizon + 1):
            d = (pw1[m] * pw2[n]).length
            grid[(m, n)] = d
            r = max(abs(m), abs(n))
            if minima[r] is None or d < minima[r]:
                minima[r] = d
    verdict = "dependent-evidence" if minima[horizon] <= threshold else "independent-evidence"
    return IndependenceProfile(horizon, grid, tuple(minima), threshold, verdict)


@dataclass
class PairSearch:
    pair: tuple | None
    candidates: int
    rank_one: int
    tested_pairs: int
    bound: int
    horizon: int
    reason: str = ""
    profile: IndependenceProfile | None = None
    inconclusive: bool = False

    def to_json(self) -> dict:
        out = {
            "pair": [str(x) for x in self.pair] if self.pair else None,
            "candidates": self.candidates,
            "rank_one_candidates": self.rank_one,
            "tested_pairs": self.tested_pairs,
            "bounds": {"ball_radius": self.bound, "horizon": self.horizon},
            "reason": self.reason,
            "inconclusive": self.inconclusive,
        }
        if self.profile is not None:
            out["independence"] = {"verdict": self.profile.verdict,
                                   "shell_minima": list(self.profile.shell_minima),
                                   "threshold": self.profile.threshold}
        return out


def _candidates(W: CoxeterSystem, orderings: int, conj_radius: int):
    seen = []
    perms = itertools.islice(itertools.permutations(range(W.rank)), orderings)
    cox = [coxeter_element(W, p) for p in perms]
    pool = list(dict.fromkeys(cox))
    for c in list(pool):
        for h in W.ball(conj_radius):
            pool.append(c.conj(h))
    for c1, c2 in itertools.combinations(cox[:3], 2):
        pool.append(c1 * c2)
        pool.append(c1 * c2.inverse())
    for g in pool:
        if g not in seen:
            seen.append(g)
    return seen


def inequivalent_pair(W: CoxeterSystem, bound: int = DEFAULT_RADIUS,
                      horizon: int = DEFAULT_HORIZON, orderings: int = 6,
                      conj_radius: int = 1, max_pairs: int = 200) -> PairSearch:
    """Two rank-one elements with no equivalence witness against g2 or g2^-1.

    Pairs whose independence profile shows dependent evidence are skipped.
    """
    if is_virtually_abelian(W):
        return PairSearch(None, 0, 0, 0, bound, horizon,
                          reason="virtually abelian: every component is spherical or affine")
    cands = _candidates(W, orderings, conj_radius)
    ranked = [g for g in cands if is_rank_one(g).status is Status.RANK_ONE]
    tested = 0
    for g1, g2 in itertools.combinations(ranked, 2):
        if tested >= max_pairs:
            break
        tested += 1
        if equivalence_witness(g1, g2, bound, horizon) is not None:
            continue
        if equivalence_witness(g1, g2.inverse(), bound, horizon) is not None:
            continue
        if conjugate_powers(g1, g2, bound, horizon) or conjugate_powers(g1, g2.inverse(), bound, horizon):
            continue
        prof = independence_profile(g1, g2, max(horizon, 2))
        if prof.verdict != "independent-evidence":
            # shared or parallel axes (e.g. g2 a power of g1) are equivalent in the geometric sense
            continue
        return PairSearch((g1, g2), len(cands), len(ranked), tested, bound, horizon,
                          reason="no equivalence witness at bounds", profile=prof)
    return PairSearch(None, len(cands), len(ranked), tested, bound, horizon,
                      reason="candidate pool exhausted", inconclusive=True)
