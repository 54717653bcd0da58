"""
Counting quasi-morphisms, empirical defects, homogenization and
scl lower bounds.

Two group models are provided: free groups (exact reduced words) and
Coxeter groups (ShortLex normal forms).  The defect of a counting function
is only ever estimated over a finite window, and every report says so.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .coxeter import CoxeterError, CoxeterSystem, Element
from .rankone import Status, is_rank_one

EMPIRICAL_CAVEAT = ("defect is the maximum over a finite window of pairs; the true supremum "
                    "may be larger, so the scl bound is certified only relative to that window")


class QuasiMorphismError(ValueError):
    pass


# ----------------------------------------------------------------------
# group models


class FreeGroup:
    """Free group on ``rank`` letters; elements are reduced tuples of +-(i+1)."""

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        self.identity = ()

    def letter_name(self, x: int) -> str:
        c = "abcdefghijklmnopqrstuvwxyz"[abs(x) - 1]
        return c if x > 0 else c.upper()

    def parse(self, text: str) -> tuple:
        """Parse "a b A" or "abA"; uppercase letters are inverses."""
        toks = text.split() if " " in text.strip() else list(text.strip())
        out = []
        for t in toks:
            i = "abcdefghijklmnopqrstuvwxyz".find(t.lower()) + 1
            if not 1 <= i <= self.rank:
                raise ValueError(f"unknown free generator {t!r}")
            out.append(i if t.islower() else -i)
        return self.reduce(out)

    def reduce(self, letters) -> tuple:
        out: list = []
        for x in letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def multiply(self, a: tuple, b: tuple) -> tuple:
        k = 0
        n = min(len(a), len(b))
        while k < n and a[-1 - k] == -b[k]:
            k += 1
        return a[:len(a) - k] + b[k:]

    def inverse(self, a: tuple) -> tuple:
        return tuple(-x for x in reversed(a))

    def power(self, a: tuple, n: int) -> tuple:
        if n < 0:
            a, n = self.inverse(a), -n
        out = ()
        for _ in range(n):
            out = self.multiply(out, a)
        return out

    def length(self, a: tuple) -> int:
        return len(a)

    def word(self, a: tuple) -> tuple:
        return a

    def format(self, a: tuple) -> str:
        return "".join(self.letter_name(x) for x in a) or "1"

    def elements(self, max_len: int) -> list:
        out = [()]
        layer = [()]
        letters = [i for k in range(1, self.rank + 1) for i in (k, -k)]
        for _ in range(max_len):
            layer = [w + (x,) for w in layer for x in letters if not (w and w[-1] == -x)]
            out.extend(layer)
        return out

    def in_commutator_subgroup(self, a: tuple) -> bool:
        return all(sum(1 if x == i else -1 if x == -i else 0 for x in a) == 0
                   for i in range(1, self.rank + 1))

    def independent(self, x: int, y: int) -> bool:
        return False


def free_group_model(rank: int) -> FreeGroup:
    return FreeGroup(rank)


class CoxeterModel:
    """A Coxeter system viewed as a group model for counting functions."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.identity = system.identity

    def multiply(self, a: Element, b: Element) -> Element:
        return a * b

    def inverse(self, a: Element) -> Element:
        return a.inverse()

    def power(self, a: Element, n: int) -> Element:
        return a ** n

    def length(self, a: Element) -> int:
        return a.length

    def word(self, a: Element) -> tuple:
        return a.letters

    def format(self, a: Element) -> str:
        return str(a) or "1"

    def elements(self, max_len: int) -> list:
        ball = self.system.ball(max_len)
        if ball.truncated:
            raise CoxeterError(f"ball({max_len}) exceeded its element budget")
        return list(ball)

    def in_commutator_subgroup(self, a: Element) -> bool:
        return not any(self.system.abelianization(a))

    def independent(self, x: int, y: int) -> bool:
        return x != y and self.system.matrix[x][y] == 2


# ----------------------------------------------------------------------
# counting


def count_contiguous(word, pattern) -> int:
    """Maximum number of pairwise disjoint contiguous occurrences (greedy is optimal)."""
    n, L = len(word), len(pattern)
    if L == 0:
        raise ValueError("empty pattern")
    k = i = 0
    pattern = tuple(pattern)
    word = tuple(word)
    while i + L <= n:
        if word[i:i + L] == pattern:
            k += 1
            i += L
        else:
            i += 1
    return k


def count_up_to_commutation(word, pattern, independent: Callable[[int, int], bool],
                            state_limit: int = 200_000) -> int:
    """Largest m with word == u0 p u1 p ... p um modulo commuting adjacent letters.

    An occurrence is a set of positions that is convex in the heap order of
    ``word`` and whose letters, read in order, are commutation-equivalent to
    ``pattern``.
    """
    word = tuple(word)
    pattern = tuple(pattern)
    n, L = len(word), len(pattern)
    if L == 0:
        raise ValueError("empty pattern")
    if n < L:
        return 0
    below = [0] * n
    for j in range(n):
        m = 0
        for i in range(j):
            if not independent(word[i], word[j]):
                m |= below[i] | (1 << i)
        below[j] = m
    above = [0] * n
    for j in range(n):
        b = below[j]
        i = 0
        while b:
            if b & 1:
                above[i] |= 1 << j
            b >>= 1
            i += 1
    pdeps = [[a for a in range(b) if not independent(pattern[a], pattern[b])] for b in range(L)]
    occ = []
    phi = [0] * L

    def convex(P):
        for q in range(n):
            if not (P >> q) & 1 and below[q] & P and above[q] & P:
                return False
        return True

    positions = {}
    for x, a in enumerate(word):
        positions.setdefault(a, []).append(x)

    def dfs(b, used):
        if b == L:
            if convex(used):
                occ.append(used)
            return
        cands = [x for x in positions.get(pattern[b], ()) if not (used >> x) & 1]
        if pdeps[b]:
            # any skipped copy of this letter after a dependent predecessor would sit
            # between two chosen positions in the heap, breaking convexity
            lo = max(phi[a] for a in pdeps[b])
            cands = [x for x in cands if x > lo][:1]
        for x in cands:
            phi[b] = x
            dfs(b + 1, used | (1 << x))

    dfs(0, 0)
    if not occ:
        return 0
    downs = []
    for P in occ:
        d = P
        q, i = P, 0
        while q:
            if q & 1:
                d |= below[i]
            q >>= 1
            i += 1
        downs.append(d)
    calls = [0]

    @lru_cache(maxsize=None)
    def best(rem):
        calls[0] += 1
        if calls[0] > state_limit:
            raise QuasiMorphismError("occurrence search exceeded its state limit")
        r = 0
        for P, D in zip(occ, downs):
            if P & rem == P:
                r = max(r, 1 + best(rem & ~D))
        return r

    return best((1 << n) - 1)


@dataclass
class QuasiMorphismEval:
    model: object
    evaluator: Callable
    description: str
    _memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, g) -> int:
        v = self._memo.get(g)
        if v is None:
            v = self.evaluator(g)
            self._memo[g] = v
        return v


def brooks_counting(F: FreeGroup, alpha) -> QuasiMorphismEval:
    """f(g) = #disjoint copies of alpha in g - #disjoint copies of alpha^-1."""
    if isinstance(alpha, str):
        alpha = F.parse(alpha)
    alpha = tuple(alpha)
    if not alpha:
        raise QuasiMorphismError("alpha must be non-empty")
    if F.reduce(alpha) != alpha:
        raise QuasiMorphismError("alpha is not reduced")
    if len(alpha) > 1 and alpha[0] == -alpha[-1]:
        raise QuasiMorphismError("alpha is not cyclically reduced")
    inv = F.inverse(alpha)

    def f(g):
        return count_contiguous(g, alpha) - count_contiguous(g, inv)

    return QuasiMorphismEval(F, f, f"brooks({F.format(alpha)})")


def exponent_sum(F: FreeGroup, i: int = 1) -> QuasiMorphismEval:
    def f(g):
        return sum(1 if x == i else -1 if x == -i else 0 for x in g)
    return QuasiMorphismEval(F, f, f"exponent_sum({F.letter_name(i)})")


def _contiguous_works(W, pattern_elem, g, k, n_check=12) -> bool:
    pat = pattern_elem.letters
    return all(count_contiguous((g ** (k * n)).letters, pat) == n for n in range(1, n_check + 1))


def axis_counting(g: Element, k: int = 1, variant: str = "auto") -> QuasiMorphismEval:
    """Count copies of nf(g^k) minus copies of nf(g^-k) in normal forms.

    ``variant`` is "contiguous", "commutation" or "auto"; auto keeps the
    contiguous count when it sees exactly n copies in nf(g^(kn)) for
    n <= 12 and otherwise falls back to counting up to commutation.
    """
    if k < 1:
        raise QuasiMorphismError("k must be >= 1")
    dec = is_rank_one(g)
    if dec.status is not Status.RANK_ONE:
        raise QuasiMorphismError(f"axis_counting needs a rank-one element, got {dec.status.value}")
    W = g.system
    model = CoxeterModel(W)
    pos = (g ** k).letters
    neg = (g ** (-k)).letters
    if variant == "auto":
        variant = "contiguous" if _contiguous_works(W, g ** k, g, k) else "commutation"
    if variant == "contiguous":
        def f(h):
            return count_contiguous(h.letters, pos) - count_contiguous(h.letters, neg)
    elif variant == "commutation":
        ind = model.independent

        def f(h):
            w = h.letters
            return count_up_to_commutation(w, pos, ind) - count_up_to_commutation(w, neg, ind)
    else:
        raise ValueError(f"unknown counting variant {variant!r}")
    return QuasiMorphismEval(model, f, f"axis_counting({g}, k={k}, {variant})")


# ----------------------------------------------------------------------
# defect, homogenization, scl


@dataclass(frozen=True)
class DefectEstimate:
    value: int
    pairs_tested: int
    exhaustive_up_to: int
    sampled_pairs: int = 0
    sampled_value: int = 0
    witness: tuple | None = None

    def to_json(self, model=None) -> dict:
        fmt = model.format if model is not None else str
        return {"value": self.value, "window": {"exhaustive_up_to": self.exhaustive_up_to,
                                                 "pairs": self.pairs_tested,
                                                 "sampled_pairs": self.sampled_pairs,
                                                 "sampled_value": self.sampled_value},
                "witness": [fmt(x) for x in self.witness] if self.witness else None}


def defect_estimate(f: QuasiMorphismEval, length_bound: int, samples: int = 0,
                    sample_length: int = 12, seed: int = 0) -> DefectEstimate:
    """max |f(gh) - f(g) - f(h)| over all pairs with l(g), l(h) <= length_bound.

    With ``samples`` > 0, also tries that many random pairs of length up to
    ``sample_length`` (seeded); the reported value is the overall maximum.
    """
    model = f.model
    elems = model.elements(length_bound)
    vals = [f(g) for g in elems]
    best, wit, tested = 0, None, 0
    mul = model.multiply
    for g, fg in zip(elems, vals):
        for h, fh in zip(elems, vals):
            d = abs(f(mul(g, h)) - fg - fh)
            tested += 1
            if d > best:
                best, wit = d, (g, h)
    svalue = 0
    if samples:
        rng = random.Random(seed)
        for _ in range(samples):
            g, h = _random_element(model, rng, sample_length), _random_element(model, rng, sample_length)
            d = abs(f(mul(g, h)) - f(g) - f(h))
            svalue = max(svalue, d)
            if d > best:
                best, wit = d, (g, h)
    return DefectEstimate(best, tested, length_bound, samples, svalue, wit)


def _random_element(model, rng, max_len):
    n = rng.randint(0, max_len)
    if isinstance(model, FreeGroup):
        letters = [rng.choice([1, -1]) * rng.randint(1, model.rank) for _ in range(n)]
        return model.reduce(letters)
    W = model.system
    return W.normal_form([rng.randrange(W.rank) for _ in range(n)])


@dataclass(frozen=True)
class HomogenizationResult:
    value: Fraction
    n_max: int
    values: tuple            # f(g^n), n = 1..n_max
    residuals: tuple         # |f(g^n)/n - value|
    consistent: bool | None  # |f(g^2n) - 2 f(g^n)| <= defect, when a defect was supplied

    def to_json(self) -> dict:
        return {"value": str(self.value), "value_float": float(self.value), "n_max": self.n_max,
                "values": list(self.values), "residuals": [str(r) for r in self.residuals],
                "consistent": self.consistent}


def homogenize(f: QuasiMorphismEval, g, n_max: int = 8, defect: DefectEstimate | None = None,
               max_word_length: int = 400) -> HomogenizationResult:
    """Estimate lim f(g^n)/n by f(g^n_max)/n_max."""
    if n_max < 4:
        raise QuasiMorphismError("n_max must be >= 4")
    model = f.model
    need = 2 * n_max if defect is not None else n_max
    powers = [model.identity]
    for _ in range(need):
        p = model.multiply(powers[-1], g)
        if model.length(p) > max_word_length:
            raise QuasiMorphismError("power normal forms exceed the word-length budget")
        powers.append(p)
    values = [f(powers[n]) for n in range(need + 1)]
    value = Fraction(values[n_max], n_max)
    residuals = tuple(abs(Fraction(values[n], n) - value) for n in range(1, n_max + 1))
    consistent = None
    if defect is not None:
        consistent = all(abs(values[2 * n] - 2 * values[n]) <= defect.value
                         for n in range(1, n_max + 1))
    return HomogenizationResult(value, n_max, tuple(values[1:n_max + 1]), residuals, consistent)


@dataclass(frozen=True)
class SclBound:
    element: object
    lower_bound: Fraction
    homogenized: Fraction
    defect: int
    caveats: tuple

    def to_json(self, model=None) -> dict:
        fmt = model.format if model is not None else str
        return {"element": fmt(self.element), "lower_bound": str(self.lower_bound),
                "lower_bound_float": float(self.lower_bound), "homogenized": str(self.homogenized),
                "defect": self.defect, "formula": "max(0, hom) / (4 * defect)",
                "caveats": list(self.caveats)}


def scl_lower_bound(f: QuasiMorphismEval, g, defect: DefectEstimate,
                    hom: HomogenizationResult) -> SclBound:
    """Bavard-type bound scl(g) >= hom(g) / (2 D(hom f)) >= hom(g) / (4 D(f)).

    The homogenization of f has defect at most twice that of f, which is
    where the factor 4 comes from.
    """
    model = f.model
    if not model.in_commutator_subgroup(g):
        raise QuasiMorphismError("element is not in the commutator subgroup")
    if defect.value == 0:
        if hom.value != 0:
            raise QuasiMorphismError("zero defect with nonzero homogenization: f is a homomorphism")
        return SclBound(g, Fraction(0), hom.value, 0, (EMPIRICAL_CAVEAT,))
    bound = max(Fraction(0), hom.value) / (4 * defect.value)
    return SclBound(g, bound, hom.value, defect.value, (EMPIRICAL_CAVEAT,))


def report(f: QuasiMorphismEval, g, defect: DefectEstimate, hom: HomogenizationResult,
           scl: SclBound | None) -> dict:
    model = f.model
    return {"qm": f.description,
            "element": model.format(g),
            "defect": defect.to_json(model),
            "homogenization": hom.to_json(),
            "scl_bound": scl.to_json(model) if scl else None,
            "caveats": [EMPIRICAL_CAVEAT]}


__all__ = [
    "CoxeterModel", "DefectEstimate", "FreeGroup", "HomogenizationResult", "QuasiMorphismError",
    "QuasiMorphismEval", "SclBound", "axis_counting", "brooks_counting", "count_contiguous",
    "count_up_to_commutation", "defect_estimate", "exponent_sum", "free_group_model", "homogenize",
    "report", "scl_lower_bound",
]
