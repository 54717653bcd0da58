"""
Coxeter systems, ShortLex normal forms and Cayley-ball enumeration.

Elements are stored as their ShortLex-least reduced word.  Descents are
decided in the root representation: s is a right descent of w iff w(a_s)
is a negative root, and the exchange condition tells us which letter to
delete.  When every m(s,t) lies in {2, 3, 4, 6, inf} we use an integer
generalized Cartan matrix, so all arithmetic is exact; otherwise the
symmetric cosine form is evaluated with mpmath at high precision.

The braid-move closure (Tits' rewriting) is kept as an independent route
for reducedness, see :func:`braid_closure`.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import mpmath

INF = 0  # matrix encoding of m(s,t) = infinity

Word = tuple  # tuple of generator names

BALL_BUDGET = 200_000
BALL_FORMAT_VERSION = 1


class CoxeterError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CoxeterSystem:
    """A Coxeter system (W, S).

    ``matrix[i][j]`` is m(s_i, s_j) with 0 standing for infinity.  The order
    of ``generators`` is the ShortLex order.
    """

    generators: tuple
    matrix: tuple
    name: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "matrix", mat)
        n = len(gens)
        if n == 0:
            raise CoxeterError("generator list is empty")
        if len(set(gens)) != n:
            raise CoxeterError("generator identifiers are not unique")
        for g in gens:
            if not isinstance(g, str) or not g or any(c.isspace() for c in g):
                raise CoxeterError(f"bad generator identifier {g!r}")
        if len(mat) != n or any(len(row) != n for row in mat):
            raise CoxeterError("matrix is not square of size |S|")
        for i in range(n):
            if mat[i][i] != 1:
                raise CoxeterError(f"diagonal entry m({gens[i]},{gens[i]}) != 1")
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    raise CoxeterError(f"matrix not symmetric at ({gens[i]},{gens[j]})")
                if i != j and (mat[i][j] == 1 or mat[i][j] < 0):
                    raise CoxeterError(
                        f"off-diagonal entry m({gens[i]},{gens[j]}) = {mat[i][j]} is invalid"
                    )

    # ------------------------------------------------------------------
    # basic data

    @property
    def rank(self) -> int:
        return len(self.generators)

    @cached_property
    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.generators)}

    def m(self, s, t) -> float:
        """m(s,t) as a number, ``math.inf`` for infinity."""
        i, j = self._idx(s), self._idx(t)
        v = self.matrix[i][j]
        return math.inf if v == INF else v

    def _idx(self, s) -> int:
        if isinstance(s, int):
            if not 0 <= s < self.rank:
                raise CoxeterError(f"generator index {s} out of range")
            return s
        try:
            return self.index[s]
        except KeyError:
            raise CoxeterError(f"unknown generator {s!r}") from None

    def indices(self, letters) -> tuple:
        if isinstance(letters, str):
            letters = letters.split()
        return tuple(self._idx(s) for s in letters)

    def subset(self, J) -> frozenset:
        """Generator subset as a frozenset of indices."""
        if isinstance(J, str):
            J = J.split()
        return frozenset(self._idx(s) for s in J)

    def names(self, J) -> list:
        return [self.generators[i] for i in sorted(J)]

    @cached_property
    def is_right_angled(self) -> bool:
        return all(v in (1, 2, INF) for row in self.matrix for v in row)

    @cached_property
    def content_hash(self) -> str:
        doc = json.dumps({"generators": list(self.generators), "m": [list(r) for r in self.matrix]},
                         sort_keys=True)
        return hashlib.sha256(doc.encode()).hexdigest()[:16]

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "m": [list(r) for r in self.matrix]}

    def __str__(self):
        return self.name or f"CoxeterSystem({' '.join(self.generators)})"

    # ------------------------------------------------------------------
    # root representation

    @cached_property
    def crystallographic(self) -> bool:
        return all(v in (1, 2, 3, 4, 6, INF) for row in self.matrix for v in row)

    @cached_property
    def cartan(self) -> tuple:
        """Rows of the (generalized) Cartan matrix, as lists of (u, a_tu) with u != t."""
        n = self.rank
        rows = []
        if self.crystallographic:
            pair = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}
            A = [[0] * n for _ in range(n)]
            for i in range(n):
                A[i][i] = 2
                for j in range(i + 1, n):
                    A[i][j], A[j][i] = pair[self.matrix[i][j]]
        else:
            mpmath.mp.dps = max(mpmath.mp.dps, 60)
            A = [[mpmath.mpf(0)] * n for _ in range(n)]
            for i in range(n):
                A[i][i] = mpmath.mpf(2)
                for j in range(n):
                    if i != j:
                        m = self.matrix[i][j]
                        A[i][j] = mpmath.mpf(-2) if m == INF else -2 * mpmath.cos(mpmath.pi / m)
        for t in range(n):
            rows.append(tuple((u, A[t][u]) for u in range(n) if u != t and A[t][u] != 0))
        return tuple(rows)

    def _unit(self, s):
        zero = 0 if self.crystallographic else mpmath.mpf(0)
        v = [zero] * self.rank
        v[s] = 1 if self.crystallographic else mpmath.mpf(1)
        return v

    def _reflect(self, v, t):
        """Apply s_t to the root v in place; return the new t-coordinate."""
        acc = -v[t]
        for u, a in self.cartan[t]:
            acc -= a * v[u]
        v[t] = acc
        if not self.crystallographic and abs(acc) > 1e40:
            raise PrecisionError("root coefficients exceed the precision budget")
        return acc

    def _right_deletion(self, word: Sequence[int], s: int):
        """For reduced ``word`` = w, return j with w*s = word minus letter j, or None."""
        v = self._unit(s)
        for j in range(len(word) - 1, -1, -1):
            if self._reflect(v, word[j]) < -0.5:
                return j
        return None

    def _left_deletion(self, word: Sequence[int], s: int):
        """For reduced ``word`` = w, return j with s*w = word minus letter j, or None."""
        v = self._unit(s)
        for j in range(len(word)):
            if self._reflect(v, word[j]) < -0.5:
                return j
        return None

    # ------------------------------------------------------------------
    # word problem

    def _reduce(self, letters: Iterable[int]) -> list:
        cur: list = []
        for s in letters:
            j = self._right_deletion(cur, s)
            if j is None:
                cur.append(s)
            else:
                del cur[j]
        return cur

    def _shortlex(self, reduced: Sequence[int]) -> tuple:
        key = tuple(reduced)
        cache = self._cache.setdefault("shortlex", {})
        hit = cache.get(key)
        if hit is not None:
            return hit
        # cols[u] = w^-1(alpha_u); s is a left descent of w iff cols[s] is a negative root.
        # Stripping s replaces w by s*w, i.e. cols[u] -> cols[u] - a_su * cols[s].
        n = self.rank
        cols = []
        for u in range(n):
            v = self._unit(u)
            for t in key:
                self._reflect(v, t)
            cols.append(v)
        A = self.cartan
        tol = 0 if self.crystallographic else 1e-30
        out = []
        for _ in range(len(key)):
            for s in range(n):
                if sum(cols[s]) < -tol:
                    break
            else:  # pragma: no cover - a nonempty reduced word always has a left descent
                raise AssertionError("no left descent found")
            out.append(s)
            cs = cols[s]
            for u, a in A[s]:
                cu = cols[u]
                cols[u] = [x - a * y for x, y in zip(cu, cs)]
            cols[s] = [-y for y in cs]
        res = tuple(out)
        cache[key] = res
        return res

    def normal_form(self, letters) -> "Element":
        """The ShortLex normal form of a word (string, or sequence of names/indices)."""
        idx = self.indices(letters)
        return Element(self, self._shortlex(self._reduce(idx)))

    word = normal_form

    def element(self, letters) -> "Element":
        return self.normal_form(letters)

    def is_reduced(self, letters) -> bool:
        idx = self.indices(letters)
        return len(self._reduce(idx)) == len(idx)

    @cached_property
    def identity(self) -> "Element":
        return Element(self, ())

    def gen(self, s) -> "Element":
        return Element(self, (self._idx(s),))

    @property
    def gens(self) -> list:
        return [Element(self, (i,)) for i in range(self.rank)]

    def _rmul(self, nf: tuple, s: int) -> tuple:
        cache = self._cache.setdefault("rmul", {})
        key = (nf, s)
        hit = cache.get(key)
        if hit is None:
            cur = list(nf)
            j = self._right_deletion(cur, s)
            if j is None:
                cur.append(s)
            else:
                del cur[j]
            hit = self._shortlex(cur)
            cache[key] = hit
        return hit

    def multiply(self, a: "Element", b: "Element") -> "Element":
        self._check(a)
        self._check(b)
        if not b._w:
            return a
        if not a._w:
            return b
        if len(b._w) <= 2:
            nf = a._w
            for s in b._w:
                nf = self._rmul(nf, s)
            return Element(self, nf)
        cur = list(a._w)
        for s in b._w:
            j = self._right_deletion(cur, s)
            if j is None:
                cur.append(s)
            else:
                del cur[j]
        return Element(self, self._shortlex(cur))

    def invert(self, a: "Element") -> "Element":
        self._check(a)
        return Element(self, self._shortlex(a._w[::-1]))

    def length(self, a: "Element") -> int:
        self._check(a)
        return len(a._w)

    def _check(self, a):
        if not isinstance(a, Element):
            raise TypeError(f"expected Element, got {type(a).__name__}")
        if a.system is not self and a.system != self:
            raise CoxeterError("elements belong to different Coxeter systems")

    # ------------------------------------------------------------------
    # descents, inversions, conjugation

    def left_descents(self, w: "Element") -> frozenset:
        return frozenset(s for s in range(self.rank) if self._left_deletion(w._w, s) is not None)

    def right_descents(self, w: "Element") -> frozenset:
        return frozenset(s for s in range(self.rank) if self._right_deletion(w._w, s) is not None)

    def left_inversions(self, w: "Element") -> list:
        """Reflections s1, s1 s2 s1, ..., s1...sk...s1 read off the normal form."""
        self._check(w)
        out = []
        letters = w._w
        for k in range(len(letters)):
            pal = letters[:k + 1] + letters[:k][::-1]
            out.append(Reflection(self.normal_form(pal)))
        return out

    def abelianization(self, w: "Element") -> tuple:
        """Image of w in W^ab = (Z/2)^c, one coordinate per odd-m class of generators."""
        classes = self.odd_classes
        counts = [0] * len(classes)
        where = {s: k for k, cl in enumerate(classes) for s in cl}
        for s in w._w:
            counts[where[s]] ^= 1
        return tuple(counts)

    @cached_property
    def odd_classes(self) -> tuple:
        n = self.rank
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(n):
            for j in range(i + 1, n):
                m = self.matrix[i][j]
                if m != INF and m % 2 == 1:
                    parent[find(i)] = find(j)
        groups: dict = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return tuple(tuple(g) for g in sorted(groups.values()))

    def cyclic_reduction(self, w: "Element", plateau_budget: int = 2000):
        """Conjugate w to a cyclically reduced core.

        Returns ``(x, core)`` with ``core == x^-1 * w * x``.  Greedy descent
        by single-letter conjugations; when stuck, the set of same-length
        single-letter conjugates is explored (up to ``plateau_budget``
        elements) for a further descent.
        """
        self._check(w)
        x = self.identity
        core = w
        while True:
            dropped = False
            for s in self.gens:
                c = s * core * s
                if c.length < core.length:
                    x, core, dropped = x * s, c, True
                    break
            if dropped:
                continue
            found = self._plateau_descent(core, plateau_budget)
            if found is None:
                return x, core
            y, c = found
            x, core = x * y, c

    def _plateau_descent(self, core, budget):
        seen = {core: self.identity}
        queue = deque([core])
        n = core.length
        while queue and len(seen) < budget:
            c = queue.popleft()
            y = seen[c]
            for s in self.gens:
                d = s * c * s
                if d.length < n:
                    return y * s, d
                if d.length == n and d not in seen:
                    seen[d] = y * s
                    queue.append(d)
        return None

    def has_finite_order(self, w: "Element") -> bool:
        """Finite order iff the parabolic closure of w is spherical."""
        from .classify import is_spherical
        x, core = self.cyclic_reduction(w)
        return is_spherical(self, frozenset(core._w))

    def order(self, w: "Element", limit: int = 10_000):
        """Order of w by power iteration, None if w^k != 1 for all k <= limit."""
        p = w
        for k in range(1, limit + 1):
            if not p._w:
                return k
            p = p * w
        return None

    # ------------------------------------------------------------------
    # Cayley balls

    def ball(self, radius: int, budget: int = BALL_BUDGET, key: str = "nf") -> "BallCache":
        """All elements of length <= radius, by BFS over right multiplication.

        ``key="nf"`` deduplicates through :meth:`normal_form`; ``key="matrix"``
        deduplicates by the matrix of the root representation and never calls
        the word-problem code, which makes it usable as an independent oracle.
        Shells are expanded in ShortLex order, so the first word reaching an
        element is its ShortLex normal form in both modes.
        """
        if radius < 0:
            raise ValueError("radius must be >= 0")
        cache = self._cache.setdefault("balls", {})
        if key == "nf":
            for (r, b), ball in cache.items():
                if r >= radius and (not ball.truncated or r == radius) and b >= budget:
                    return ball.restrict(radius) if r > radius else ball
        ball = BallCache.build(self, radius, budget, key)
        if key == "nf":
            cache[(radius, budget)] = ball
        return ball

    def _matrix_gen(self, s):
        n = self.rank
        M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        # s_t(v) = v - (A_t . v) e_t, so row t changes.
        A = self.cartan[s]
        M[s][s] = -1
        for u, a in A:
            M[s][u] = -a
        return M

    def _matrix_key(self, M):
        if self.crystallographic:
            return tuple(tuple(int(x) for x in row) for row in M)
        return tuple(tuple(round(float(x), 8) + 0.0 for x in row) for row in M)


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n) if A[i][k]) for j in range(n)] for i in range(n)]


class Element:
    """Group element stored as its ShortLex normal form (generator indices)."""

    __slots__ = ("system", "_w")

    def __init__(self, system: CoxeterSystem, nf: tuple):
        self.system = system
        self._w = nf

    @property
    def nf(self) -> tuple:
        return tuple(self.system.generators[i] for i in self._w)

    @property
    def letters(self) -> tuple:
        return self._w

    @property
    def length(self) -> int:
        return len(self._w)

    def __len__(self):
        return len(self._w)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self._w == other._w and (self.system is other.system or self.system == other.system)

    def __hash__(self):
        return hash(self._w)

    def __lt__(self, other):
        return (len(self._w), self._w) < (len(other._w), other._w)

    def __mul__(self, other):
        return self.system.multiply(self, other)

    def __invert__(self):
        return self.inverse()

    def inverse(self):
        return self.system.invert(self)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.system.identity
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self, g: "Element") -> "Element":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return not self._w

    def __str__(self):
        return " ".join(self.nf)

    def __repr__(self):
        return f"Element({str(self)!r})"


@dataclass(frozen=True)
class Reflection:
    element: Element

    def __str__(self):
        return str(self.element)


class BallCache:
    """Elements of length <= radius with their right-multiplication table."""

    def __init__(self, system, radius, elements, table, truncated, budget):
        self.system = system
        self.radius = radius
        self.elements = elements          # list in ShortLex order
        self.table = table                # table[i][s] -> index or -1 (outside ball)
        self.truncated = truncated
        self.budget = budget
        self.position = {e: i for i, e in enumerate(elements)}

    @classmethod
    def build(cls, system, radius, budget=BALL_BUDGET, key="nf"):
        n = system.rank
        words = [()]
        table = [[-1] * n]
        if key == "nf":
            keys = {(): 0}
            keyof = lambda w, _mat: system._shortlex(system._reduce(w))  # noqa: E731
            mats = None
        elif key == "matrix":
            gens = [system._matrix_gen(s) for s in range(n)]
            ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            mats = [ident]
            keys = {system._matrix_key(ident): 0}
        else:
            raise ValueError(f"unknown ball key {key!r}")
        frontier = [0]
        truncated = False
        for r in range(radius):
            nxt = []
            for i in frontier:
                for s in range(n):
                    if key == "nf":
                        k = keyof(words[i] + (s,), None)
                        M = None
                    else:
                        M = _matmul(mats[i], gens[s])
                        k = system._matrix_key(M)
                    j = keys.get(k)
                    if j is None:
                        if len(words) >= budget:
                            truncated = True
                            continue
                        j = len(words)
                        keys[k] = j
                        words.append(words[i] + (s,))
                        table.append([-1] * n)
                        if mats is not None:
                            mats.append(M)
                        nxt.append(j)
                    table[i][s] = j
            frontier = nxt
            if not frontier:
                break
        # the last shell's outgoing edges may stay inside the ball
        if not truncated:
            for i in frontier:
                for s in range(n):
                    if key == "nf":
                        k = keyof(words[i] + (s,), None)
                    else:
                        k = system._matrix_key(_matmul(mats[i], gens[s]))
                    table[i][s] = keys.get(k, -1)
        elements = [Element(system, w) for w in words]
        return cls(system, radius, elements, table, truncated, budget)

    @property
    def saturated(self) -> bool:
        """True when BFS stopped before reaching the radius (the group is finite)."""
        return not self.truncated and (max((e.length for e in self.elements), default=0) < self.radius)

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, e):
        return e in self.position

    def shell(self, k):
        return [e for e in self.elements if e.length == k]

    def restrict(self, r):
        keep = [e for e in self.elements if e.length <= r]
        pos = {e: i for i, e in enumerate(keep)}
        table = []
        for e in keep:
            row = self.table[self.position[e]]
            table.append([pos.get(self.elements[j], -1) if j >= 0 else -1 for j in row])
        return BallCache(self.system, r, keep, table, self.truncated, self.budget)

    def evaluate(self, letters) -> Element | None:
        """Multiply letters through the table starting at the identity."""
        i = 0
        for s in self.system.indices(letters):
            i = self.table[i][s]
            if i < 0:
                return None
        return self.elements[i]

    def status(self) -> dict:
        return {"radius": self.radius, "elements": len(self.elements),
                "truncated": self.truncated, "budget": self.budget}

    def dumps(self) -> str:
        """Versioned JSON-lines serialization (header line, then one element per line)."""
        header = {"format": "coxkit-ball", "version": BALL_FORMAT_VERSION,
                  "system": self.system.to_json(), "hash": self.system.content_hash,
                  "radius": self.radius, "truncated": self.truncated, "budget": self.budget}
        lines = [json.dumps(header, sort_keys=True)]
        for e in self.elements:
            lines.append(json.dumps({"nf": str(e), "length": e.length}))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, system: CoxeterSystem, text: str) -> "BallCache":
        lines = text.splitlines()
        header = json.loads(lines[0])
        if header.get("format") != "coxkit-ball" or header.get("version") != BALL_FORMAT_VERSION:
            raise CoxeterError("unsupported ball cache format")
        if header.get("hash") != system.content_hash:
            raise CoxeterError("ball cache belongs to a different Coxeter matrix")
        elements = []
        for line in lines[1:]:
            rec = json.loads(line)
            w = system.indices(rec["nf"])
            if len(w) != rec["length"]:
                raise CoxeterError("corrupt ball cache line")
            elements.append(Element(system, w))
        pos = {e: i for i, e in enumerate(elements)}
        table = [[pos.get(Element(system, system._rmul(e._w, s)), -1) for s in range(system.rank)]
                 for e in elements]
        return cls(system, header["radius"], elements, table, header["truncated"], header["budget"])


# ----------------------------------------------------------------------
# parsing and serialization


def parse_system(text: str, name: str = "") -> CoxeterSystem:
    """Parse ``{"generators": [...], "m": [[...]]}``; 0 encodes infinity."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CoxeterError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "generators" not in doc or "m" not in doc:
        raise CoxeterError('system document needs "generators" and "m"')
    gens = doc["generators"]
    mat = doc["m"]
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise CoxeterError('"generators" must be a list of strings')
    if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
        raise CoxeterError('"m" must be a square integer matrix')
    for row in mat:
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool):
                raise CoxeterError('"m" entries must be integers')
    return CoxeterSystem(tuple(gens), tuple(tuple(r) for r in mat), name=name or doc.get("name", ""))


def from_matrix(generators, m, name: str = "") -> CoxeterSystem:
    if isinstance(generators, str):
        generators = generators.split()
    mat = [[INF if (v == math.inf or v is None) else int(v) for v in row] for row in m]
    return CoxeterSystem(tuple(generators), tuple(tuple(r) for r in mat), name=name)


def format_word(w: Element) -> str:
    return str(w)


# ----------------------------------------------------------------------
# Tits' braid-move closure


def braid_closure(system: CoxeterSystem, letters, limit: int = 50_000) -> set:
    """All words reachable from ``letters`` by braid moves and ss-deletions.

    Returns the set of words (tuples of indices) in the closure.  A word is
    reduced iff no word in its braid closure contains ``s s``.
    """
    start = system.indices(letters)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for nxt in _braid_moves(system, w):
            if nxt not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("braid closure exceeded its limit")
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _braid_moves(system, w):
    n = len(w)
    for i in range(n - 1):
        if w[i] == w[i + 1]:
            yield w[:i] + w[i + 2:]
    for i in range(n - 1):
        s, t = w[i], w[i + 1]
        if s == t:
            continue
        m = system.matrix[s][t]
        if m == INF or i + m > n:
            continue
        alt = tuple(s if k % 2 == 0 else t for k in range(m))
        if w[i:i + m] == alt:
            rep = tuple(t if k % 2 == 0 else s for k in range(m))
            yield w[:i] + rep + w[i + m:]


def is_reduced_by_braids(system: CoxeterSystem, letters, limit: int = 50_000) -> bool:
    start = system.indices(letters)
    closure = braid_closure(system, start, limit)
    return all(len(w) == len(start) for w in closure)


def words(system: CoxeterSystem, max_len: int) -> Iterator[tuple]:
    """All words (index tuples) of length <= max_len."""
    n = system.rank
    layer = [()]
    yield ()
    for _ in range(max_len):
        layer = [w + (s,) for w in layer for s in range(n)]
        yield from layer
