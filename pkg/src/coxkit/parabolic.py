"""Parabolic closures, standard elements and essential elements."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum

from .coxeter import CoxeterError, CoxeterSystem, Element

OVERGROUP_LIMIT = 20


@dataclass(frozen=True)
class ParabolicSubgroup:
    """The subgroup x W_J x^-1, with x of minimal length in the coset x W_J."""

    conjugator: Element
    J: frozenset

    @property
    def system(self) -> CoxeterSystem:
        return self.conjugator.system

    @property
    def rank(self) -> int:
        return len(self.J)

    def contains(self, w: Element) -> bool:
        x = self.conjugator
        return support(x.inverse() * w * x) <= self.J

    def generators(self) -> list:
        """The conjugated simple reflections x s x^-1, s in J."""
        x = self.conjugator
        W = self.system
        return [W.gen(s).conj(x) for s in sorted(self.J)]

    def is_subgroup_of(self, other: "ParabolicSubgroup") -> bool:
        return all(other.contains(g) for g in self.generators())

    def standard_form(self) -> frozenset | None:
        """K with x W_J x^-1 = W_K, or None when the subgroup is not standard."""
        K = frozenset().union(*(support(g) for g in self.generators())) if self.J else frozenset()
        return K if len(K) == len(self.J) else None

    @property
    def is_standard(self) -> bool:
        return self.standard_form() is not None

    def to_json(self) -> dict:
        return {"conjugator": str(self.conjugator), "J": self.system.names(self.J)}

    def __str__(self):
        return json.dumps(self.to_json())


def support(w: Element) -> frozenset:
    """Letters of the normal form; the same set for every reduced word of w."""
    return frozenset(w.letters)


def _minimal_coset_rep(x: Element, J) -> Element:
    W = x.system
    changed = True
    while changed:
        changed = False
        for s in J:
            y = x * W.gen(s)
            if y.length < x.length:
                x, changed = y, True
    return x


def parabolic_closure(w: Element) -> ParabolicSubgroup:
    """Pc(w) = x W_J x^-1 where x^-1 w x is cyclically reduced with support J."""
    W = w.system
    x, core = W.cyclic_reduction(w)
    J = support(core)
    P = ParabolicSubgroup(_minimal_coset_rep(x, J), J)
    K = P.standard_form()
    if K is not None:
        return ParabolicSubgroup(W.identity, K)
    return P


def is_standard(w: Element) -> bool:
    return parabolic_closure(w).conjugator.is_identity()


def is_essential(w: Element) -> bool:
    return len(parabolic_closure(w).J) == w.system.rank


def coxeter_element(system: CoxeterSystem, perm=None) -> Element:
    """Product of all generators in the given order (default: generator order)."""
    if perm is None:
        perm = list(range(system.rank))
    idx = system.indices(perm) if not all(isinstance(p, int) for p in perm) else tuple(perm)
    if sorted(idx) != list(range(system.rank)):
        raise CoxeterError("ordering is not a permutation of S")
    return system.normal_form(idx)


class Step(str, Enum):
    CONTAINED = "contained"   # Pc(ws) inside Pc(w)
    GROWS = "grows"           # Pc(ws) = <Pc(w), s>, ws standard


@dataclass(frozen=True)
class StepReport:
    w: Element
    s: int
    closure_w: frozenset
    closure_ws: ParabolicSubgroup
    outcome: Step | None

    @property
    def ok(self) -> bool:
        return self.outcome is not None


def closure_step(w: Element, s) -> StepReport:
    """Check which alternative holds for Pc(ws) when w is standard."""
    W = w.system
    s = W._idx(s)
    Pw = parabolic_closure(w)
    if not Pw.conjugator.is_identity():
        raise CoxeterError(f"{w!r} is not standard")
    J = Pw.J
    Pws = parabolic_closure(w * W.gen(s))
    std_ws = Pws.standard_form()
    outcome = None
    if Pws.is_subgroup_of(ParabolicSubgroup(W.identity, J)):
        outcome = Step.CONTAINED
    elif std_ws is not None and std_ws == J | {s}:
        outcome = Step.GROWS
    return StepReport(w, s, J, Pws, outcome)


def standard_overgroups(system: CoxeterSystem, J, limit: int = OVERGROUP_LIMIT):
    """All K with J <= K <= S."""
    J = frozenset(J) if not isinstance(J, str) else system.subset(J)
    rest = sorted(set(range(system.rank)) - J)
    if len(rest) > limit:
        raise CoxeterError(f"{len(rest)} generators outside J exceeds the enumeration bound {limit}")
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            yield J | frozenset(extra)
