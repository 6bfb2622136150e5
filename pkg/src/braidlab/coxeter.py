"""Coxeter-Dynkin diagrams and the word problem in Coxeter groups.

Words are tuples of generator indices; index order is the order in which the
generators were declared and doubles as the ShortLex tie-break.  Every
element is stored through its canonical word, the ShortLex-least reduced
expression, so equality of elements is equality of tuples.

The word problem is solved with Tits' rewriting: a word is reduced exactly
when no word reachable from it by braid moves contains a square ``ss``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    ClassTooLarge,
    DiagramMismatch,
    InvalidMatrix,
    NotFiniteType,
    ParseError,
    UnknownGenerator,
)

INF = math.inf

Word = tuple[int, ...]
Subdiagram = frozenset[int]

DEFAULT_CLASS_BUDGET = 200_000


class CoxeterDiagram:
    """The pair (I, m) together with the per-diagram memo tables.

    ``matrix[i][j]`` is an ``int`` or :data:`INF`.  The public fields are
    never mutated after construction; the private caches only grow, and
    each insert goes through ``dict.setdefault`` so concurrent readers and
    writers always agree on the stored value.
    """

    def __init__(self, generators: Sequence[str], matrix: Sequence[Sequence[float]],
                 *, class_budget: int = DEFAULT_CLASS_BUDGET):
        generators = tuple(str(g) for g in generators)
        if len(set(generators)) != len(generators):
            raise InvalidMatrix(f"duplicate generator names in {generators}")
        for g in generators:
            if not g or re.search(r"[\s,]", g) or g == "1":
                raise ParseError(f"invalid generator name {g!r}")
        n = len(generators)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise InvalidMatrix("matrix shape does not match the generator list")
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                v = matrix[i][j]
                if v != INF:
                    if v != int(v):
                        raise InvalidMatrix(f"non-integer label {v!r}")
                    v = int(v)
                if v != matrix[j][i]:
                    raise InvalidMatrix(
                        f"asymmetric labels m({generators[i]},{generators[j]})")
                if i == j and v != 1:
                    raise InvalidMatrix(f"diagonal entry m({generators[i]},{generators[i]}) must be 1")
                if i != j and v < 2:
                    raise InvalidMatrix(
                        f"m({generators[i]},{generators[j]}) = {v} is below 2")
                row.append(v)
            rows.append(tuple(row))
        if class_budget <= 0:
            raise ValueError("class_budget must be positive")
        self.generators = generators
        self.matrix = tuple(rows)
        self.index = {g: i for i, g in enumerate(generators)}
        self.class_budget = class_budget
        # alternating words sts... of length m_st, keyed by (s, t)
        self._alt: dict[tuple[int, int], tuple[Word, Word, int]] = {}
        for i, j in itertools.permutations(range(n), 2):
            m = self.matrix[i][j]
            if m != INF:
                self._alt[(i, j)] = (
                    tuple(i if k % 2 == 0 else j for k in range(m)),
                    tuple(j if k % 2 == 0 else i for k in range(m)),
                    m,
                )
        self._classes: dict[Word, frozenset[Word]] = {}
        self._reduced: dict[Word, Word] = {}
        self._steps: dict[tuple[Word, int], Word] = {}
        self._finite: dict[Subdiagram, bool] = {}

    @classmethod
    def from_labels(cls, generators: Sequence[str], labels: dict | None = None, **kw):
        """Build from ``{(s, t): m}``; unspecified pairs commute (m = 2)."""
        generators = tuple(generators)
        index = {g: i for i, g in enumerate(generators)}
        n = len(generators)
        matrix = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        seen: dict[tuple[int, int], float] = {}
        for (a, b), m in (labels or {}).items():
            if a not in index or b not in index:
                raise UnknownGenerator(f"label refers to unknown generator in ({a}, {b})")
            i, j = index[a], index[b]
            key = (min(i, j), max(i, j))
            if key in seen and seen[key] != m:
                raise InvalidMatrix(f"conflicting labels for ({a}, {b})")
            seen[key] = m
            if i == j:
                matrix[i][i] = m
            else:
                matrix[i][j] = matrix[j][i] = m
        return cls(generators, matrix, **kw)

    def __repr__(self):
        labels = [f"{self.generators[i]}{self.generators[j]}={_fmt_m(self.matrix[i][j])}"
                  for i, j in itertools.combinations(range(self.rank), 2)
                  if self.matrix[i][j] != 2]
        return f"CoxeterDiagram({' '.join(self.generators)}; {', '.join(labels)})"

    def __eq__(self, other):
        if not isinstance(other, CoxeterDiagram):
            return NotImplemented
        return self.generators == other.generators and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.generators, self.matrix))

    def __getstate__(self):
        return {"generators": self.generators, "matrix": self.matrix,
                "class_budget": self.class_budget}

    def __setstate__(self, state):
        self.__init__(state["generators"], state["matrix"],
                      class_budget=state["class_budget"])

    @property
    def rank(self) -> int:
        return len(self.generators)

    def m(self, s: int, t: int) -> float:
        return self.matrix[s][t]

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        for i, j in itertools.combinations(range(self.rank), 2):
            if self.matrix[i][j] != 2:
                lines.append(f"m: {self.generators[i]} {self.generators[j]} "
                             f"{_fmt_m(self.matrix[i][j])}")
        return "\n".join(lines) + "\n"

    # -- words ---------------------------------------------------------

    def word(self, text: str | Iterable) -> Word:
        """Parse a word.

        Accepts a tuple of indices, a sequence of generator names, or a
        string.  Strings are split on whitespace, commas or dots; a single
        token that is not a generator name is read letter by letter.  The
        empty string and ``"1"`` denote the empty word.
        """
        if isinstance(text, str):
            tokens = [t for t in re.split(r"[\s,.*]+", text.strip()) if t]
            if tokens == ["1"]:
                return ()
            if len(tokens) == 1 and tokens[0] not in self.index:
                tokens = list(tokens[0])
        else:
            tokens = list(text)
        out = []
        for tok in tokens:
            if isinstance(tok, int) and not isinstance(tok, bool):
                if not 0 <= tok < self.rank:
                    raise UnknownGenerator(f"generator index {tok} out of range")
                out.append(tok)
            elif tok in self.index:
                out.append(self.index[tok])
            else:
                raise UnknownGenerator(f"unknown generator {tok!r}")
        return tuple(out)

    def format(self, word: Word) -> str:
        if not word:
            return "1"
        names = [self.generators[i] for i in word]
        if all(len(g) == 1 for g in self.generators):
            return "".join(names)
        return " ".join(names)

    def subset(self, J: Iterable | None) -> Subdiagram:
        """Normalise generator names or indices to a frozenset of indices."""
        if J is None:
            return frozenset(range(self.rank))
        if isinstance(J, str):
            J = self.word(J)
        return frozenset(self.word(list(J)))

    def format_subset(self, J: Iterable[int]) -> list[str]:
        return [self.generators[i] for i in sorted(J)]

    # -- braid moves ---------------------------------------------------

    def braid_moves(self, word: Word) -> Iterator[Word]:
        """All words obtained from ``word`` by one braid move sts... -> tst...."""
        n = len(word)
        for i in range(n - 1):
            a, b = word[i], word[i + 1]
            if a == b:
                continue
            alt = self._alt.get((a, b))
            if alt is None:
                continue
            lhs, rhs, m = alt
            if i + m <= n and word[i:i + m] == lhs:
                yield word[:i] + rhs + word[i + m:]


def _fmt_m(m: float) -> str:
    return "inf" if m == INF else str(int(m))


# -- parsing ---------------------------------------------------------------

def parse_diagram(text: str, **kw) -> CoxeterDiagram:
    """Parse the line-oriented diagram format.

    >>> d = parse_diagram("gens: s t\\nm: s t 3")
    >>> d.m(0, 1)
    3
    """
    gens = None
    labels: dict[tuple[str, str], float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key = key.strip()
        parts = rest.split()
        if key == "gens":
            if gens is not None:
                raise ParseError(f"line {lineno}: duplicate 'gens' line")
            if labels:
                raise ParseError(f"line {lineno}: 'gens' must come first")
            gens = parts
        elif key == "m":
            if gens is None:
                raise ParseError(f"line {lineno}: 'm' line before 'gens'")
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected 'm: a b k'")
            a, b, k = parts
            if k.lower() in ("inf", "infinity", "∞"):
                value = INF
            else:
                try:
                    value = int(k)
                except ValueError:
                    raise ParseError(f"line {lineno}: bad label {k!r}") from None
            key2 = (a, b)
            if key2 in labels or (b, a) in labels:
                prev = labels.get(key2, labels.get((b, a)))
                if prev != value:
                    raise InvalidMatrix(f"line {lineno}: conflicting labels for ({a}, {b})")
            labels[key2] = value
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if gens is None:
        raise ParseError("missing 'gens' line")
    if len(set(gens)) != len(gens):
        raise InvalidMatrix("duplicate generator names")
    for a, b in labels:
        if a not in gens or b not in gens:
            raise ParseError(f"label refers to unknown generator in ({a}, {b})")
    return CoxeterDiagram.from_labels(gens, labels, **kw)


def load_diagram(path: str | Path, **kw) -> CoxeterDiagram:
    return parse_diagram(Path(path).read_text(encoding="utf-8"), **kw)


# -- braid classes -----------------------------------------------------------

def braid_class(d: CoxeterDiagram, word: Word) -> frozenset[Word]:
    """All words reachable from ``word`` by braid moves (no deletions)."""
    cached = d._classes.get(word)
    if cached is not None:
        return cached
    seen = {word}
    queue = deque([word])
    budget = d.class_budget
    while queue:
        w = queue.popleft()
        for v in d.braid_moves(w):
            if v not in seen:
                seen.add(v)
                if len(seen) > budget:
                    raise ClassTooLarge(
                        f"braid class of {d.format(word)} exceeds {budget} words")
                queue.append(v)
    cls = frozenset(seen)
    for v in cls:
        d._classes.setdefault(v, cls)
    return d._classes[word]


def has_square(word: Word) -> int:
    """Index of the first adjacent repeated letter, or -1."""
    for i in range(len(word) - 1):
        if word[i] == word[i + 1]:
            return i
    return -1


# -- elements --------------------------------------------------------------

@dataclass(frozen=True)
class CoxeterElement:
    word: Word
    diagram: CoxeterDiagram = field(compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self):
        return self.diagram.format(self.word)

    def __mul__(self, other):
        return multiply_cox(self.diagram, self, other)

    def support(self) -> Subdiagram:
        return frozenset(self.word)


def identity(d: CoxeterDiagram) -> CoxeterElement:
    return CoxeterElement((), d)


def _step(d: CoxeterDiagram, cur: Word, s: int) -> Word:
    # cur is canonical (hence reduced); cur+s is reduced or drops to length-1
    key = (cur, s)
    hit = d._steps.get(key)
    if hit is not None:
        return hit
    cls = braid_class(d, cur + (s,))
    result = None
    for v in cls:
        i = has_square(v)
        if i >= 0:
            result = min(braid_class(d, v[:i] + v[i + 2:]))
            break
    if result is None:
        result = min(cls)
    return d._steps.setdefault(key, result)


def _canonical(d: CoxeterDiagram, word: Word) -> Word:
    hit = d._reduced.get(word)
    if hit is not None:
        return hit
    cur: Word = ()
    for s in word:
        cur = _step(d, cur, s)
    return d._reduced.setdefault(word, cur)


def reduce_word(d: CoxeterDiagram, w) -> CoxeterElement:
    """Canonical reduced representative of the group element spelled by ``w``."""
    return CoxeterElement(_canonical(d, d.word(w)), d)


def _check(d: CoxeterDiagram, *elements) -> None:
    for x in elements:
        if x.diagram is not d and x.diagram != d:
            raise DiagramMismatch("elements belong to different diagrams")


def multiply_cox(d: CoxeterDiagram, a: CoxeterElement, b: CoxeterElement) -> CoxeterElement:
    _check(d, a, b)
    cur = a.word
    for s in b.word:
        cur = _step(d, cur, s)
    return CoxeterElement(cur, d)


def inverse(d: CoxeterDiagram, a: CoxeterElement) -> CoxeterElement:
    _check(d, a)
    return CoxeterElement(min(braid_class(d, a.word[::-1])), d)


def prefix_leq_cox(d: CoxeterDiagram, lower: CoxeterElement, upper: CoxeterElement) -> bool:
    """Weak right order: ``l(upper) == l(lower) + l(lower^-1 upper)``."""
    _check(d, lower, upper)
    if lower.length > upper.length:
        return False
    return upper.length == lower.length + multiply_cox(d, inverse(d, lower), upper).length


def is_reduced_sequence(d: CoxeterDiagram, seq: Sequence[CoxeterElement]) -> bool:
    total = identity(d)
    for w in seq:
        total = multiply_cox(d, total, w)
    return total.length == sum(w.length for w in seq)


# -- finite type -------------------------------------------------------------

def _components(d: CoxeterDiagram, J: Subdiagram) -> list[list[int]]:
    remaining = set(J)
    comps = []
    while remaining:
        start = min(remaining)
        comp, stack = {start}, [start]
        while stack:
            v = stack.pop()
            for u in J:
                if u not in comp and d.matrix[v][u] >= 3:
                    comp.add(u)
                    stack.append(u)
        remaining -= comp
        comps.append(sorted(comp))
    return comps


def _classify_component(d: CoxeterDiagram, comp: list[int]) -> str | None:
    n = len(comp)
    if n == 1:
        return "A1"
    edges = {(u, v): d.matrix[u][v] for u, v in itertools.combinations(comp, 2)
             if d.matrix[u][v] >= 3}
    if any(m == INF for m in edges.values()):
        return None
    if len(edges) != n - 1:
        return None  # a connected graph with n-1 edges is a tree; otherwise a cycle
    if n == 2:
        m = int(next(iter(edges.values())))
        return {3: "A2", 4: "B2", 6: "G2"}.get(m, f"I2({m})")
    adj: dict[int, list[int]] = {v: [] for v in comp}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    labels = sorted(int(m) for m in edges.values())
    branch = [v for v in comp if len(adj[v]) >= 3]
    if branch:
        if len(branch) > 1 or len(adj[branch[0]]) > 3 or labels[-1] != 3:
            return None
        c = branch[0]
        arms = []
        for start in adj[c]:
            prev, cur, k = c, start, 1
            while len(adj[cur]) == 2:
                prev, cur = cur, next(x for x in adj[cur] if x != prev)
                k += 1
            arms.append(k)
        arms.sort()
        if arms[:2] == [1, 1]:
            return f"D{n}"
        return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}.get(tuple(arms))
    # a path: read the labels in order from one end
    end = next(v for v in comp if len(adj[v]) == 1)
    order, prev = [end], None
    while len(order) < n:
        cur = order[-1]
        nxt = next(x for x in adj[cur] if x != prev)
        prev = cur
        order.append(nxt)
    path = [int(d.matrix[order[k]][order[k + 1]]) for k in range(n - 1)]
    if all(m == 3 for m in path):
        return f"A{n}"
    if path[-1] != 3:
        path.reverse()
    odd = [m for m in path if m != 3]
    if len(odd) == 1 and path[0] == 4:
        return f"B{n}"
    if len(odd) == 1 and path[0] == 5 and n in (3, 4):
        return f"H{n}"
    if path == [3, 4, 3]:
        return "F4"
    return None


def coxeter_type(d: CoxeterDiagram, J=None) -> list[str] | None:
    """Cartan-Killing names of the components of J, or None if W_J is infinite."""
    J = d.subset(J)
    names = []
    for comp in _components(d, J):
        name = _classify_component(d, comp)
        if name is None:
            return None
        names.append(name)
    return names


def is_finite_type(d: CoxeterDiagram, J=None) -> bool:
    J = d.subset(J)
    hit = d._finite.get(J)
    if hit is None:
        hit = d._finite.setdefault(J, coxeter_type(d, J) is not None)
    return hit


def finite_type_closure(d: CoxeterDiagram) -> list[Subdiagram]:
    """Every finite-type subset of I, ordered by size then generator order."""
    out = []
    for k in range(d.rank + 1):
        for J in itertools.combinations(range(d.rank), k):
            if is_finite_type(d, frozenset(J)):
                out.append(frozenset(J))
    return out


def enumerate_elements(d: CoxeterDiagram, J=None, max_len: int = 0) -> list[CoxeterElement]:
    """Elements of W_J of length at most ``max_len`` in ShortLex order."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    J = sorted(d.subset(J))
    level: list[Word] = [()]
    out = [()]
    for k in range(1, max_len + 1):
        nxt = set()
        for w in level:
            for s in J:
                v = _step(d, w, s)
                if len(v) == k:
                    nxt.add(v)
        if not nxt:
            break
        level = sorted(nxt)
        out.extend(level)
    return [CoxeterElement(w, d) for w in out]


def longest_element(d: CoxeterDiagram, J=None) -> CoxeterElement:
    """Delta_J, grown greedily by length-increasing right multiplications."""
    J = d.subset(J)
    if not is_finite_type(d, J):
        raise NotFiniteType(f"{d.format_subset(J)} is not of finite type")
    cur: Word = ()
    grew = True
    while grew:
        grew = False
        for s in sorted(J):
            v = _step(d, cur, s)
            if len(v) > len(cur):
                cur, grew = v, True
                break
    return CoxeterElement(cur, d)


# Orders of the irreducible finite Coxeter groups, for reporting.
def group_order(d: CoxeterDiagram, J=None) -> int | float:
    names = coxeter_type(d, J)
    if names is None:
        return INF
    total = 1
    for name in names:
        total *= _irreducible_order(name)
    return total


def _irreducible_order(name: str) -> int:
    fixed = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152,
             "G2": 12, "H3": 120, "H4": 14400}
    if name in fixed:
        return fixed[name]
    if name.startswith("I2("):
        return 2 * int(name[3:-1])
    kind, n = name[0], int(name[1:])
    if kind == "A":
        return math.factorial(n + 1)
    if kind == "B":
        return 2 ** n * math.factorial(n)
    if kind == "D":
        return 2 ** (n - 1) * math.factorial(n)
    raise ValueError(name)
