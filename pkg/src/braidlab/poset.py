"""Finite posets, factorization-chain posets Word(b) and their variants.

A chain ``1 < b_1 < ... < b_{n-1} < b`` is stored by its intermediate stops;
the same object read as a sequence is the tuple of quotients
``(b_1, b_1^-1 b_2, ..., b_{n-1}^-1 b)``.  Chains are ordered opposite to
containment: ``x <= y`` iff ``stops(y)`` is a subset of ``stops(x)``, so the
coarsest chain ``(1 < b)`` is the top element of Word(b).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .braid import (
    PosBraidElement,
    _bcanon,
    is_delta_element,
    is_finite_type_braid,
    is_reduced,
)
from .coxeter import CoxeterDiagram, Word, braid_class
from .errors import PosetTooLarge

VARIANTS = ("full", "s", "r", "f", "fr", "delta")
_VARIANT_ALIASES = {"Δ": "delta", "d": "delta", "D": "delta", "word": "full"}

DEFAULT_POSET_BUDGET = 50_000


def normalize_variant(variant: str) -> str:
    v = _VARIANT_ALIASES.get(variant, variant)
    if v not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return v


class FinitePoset:
    """A finite poset on ``range(len(labels))``.

    ``up[i]`` is the set of indices strictly above ``i``.  Only
    comparability data is consumed by the topology code, so reversing the
    order never changes a verdict.
    """

    def __init__(self, labels: Sequence[Hashable], up: Sequence[Iterable[int]]):
        self.labels = list(labels)
        self.up = [frozenset(u) for u in up]
        down: list[set[int]] = [set() for _ in self.labels]
        for i, u in enumerate(self.up):
            for j in u:
                down[j].add(i)
        self.down = [frozenset(x) for x in down]

    @classmethod
    def from_leq(cls, labels: Sequence[Hashable], leq: Callable) -> "FinitePoset":
        labels = list(labels)
        up = [[j for j, y in enumerate(labels) if j != i and leq(x, y)]
              for i, x in enumerate(labels)]
        return cls(labels, up)

    def __len__(self):
        return len(self.labels)

    def leq(self, i: int, j: int) -> bool:
        return i == j or j in self.up[i]

    def comparable(self, i: int, j: int) -> bool:
        return i == j or j in self.up[i] or i in self.up[j]

    def upper_covers(self, i: int) -> list[int]:
        u = self.up[i]
        return sorted(j for j in u if not any(j in self.up[k] for k in u))

    def hasse_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self)) for j in self.upper_covers(i)]

    def maximum(self) -> int | None:
        n = len(self)
        for i in range(n):
            if len(self.down[i]) == n - 1:
                return i
        return None

    def minimum(self) -> int | None:
        n = len(self)
        for i in range(n):
            if len(self.up[i]) == n - 1:
                return i
        return None

    def cone_point(self) -> int | None:
        """An element comparable to every other element."""
        n = len(self)
        for i in range(n):
            if len(self.up[i]) + len(self.down[i]) == n - 1:
                return i
        return None

    def subposet(self, keep: Iterable[int]) -> "FinitePoset":
        keep = sorted(set(keep))
        pos = {old: new for new, old in enumerate(keep)}
        up = [[pos[j] for j in self.up[i] if j in pos] for i in keep]
        return FinitePoset([self.labels[i] for i in keep], up)

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.labels, self.down)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for start in range(len(self)):
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in itertools.chain(self.up[v], self.down[v]):
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_partial_order(self) -> bool:
        for i, u in enumerate(self.up):
            if i in u:
                return False
            for j in u:
                if i in self.up[j] or not self.up[j] <= u:
                    return False
        return True


@dataclass(frozen=True)
class FactorizationChain:
    stops: tuple[Word, ...]
    quotients: tuple[Word, ...]

    @property
    def size(self) -> int:
        """Number of points of the chain including both endpoints."""
        return len(self.stops) + 2


class ChainPoset(FinitePoset):
    def __init__(self, diagram: CoxeterDiagram, base: PosBraidElement, variant: str,
                 chains: Sequence[FactorizationChain], up=None):
        self.diagram = diagram
        self.base = base
        self.variant = variant
        self.chains = list(chains)
        self.index = {frozenset(c.stops): i for i, c in enumerate(self.chains)}
        if up is None:
            up = []
            for c in self.chains:
                st = c.stops
                above = []
                for k in range(len(st)):
                    for sub in itertools.combinations(st, k):
                        j = self.index.get(frozenset(sub))
                        if j is not None:
                            above.append(j)
                up.append(above)
        super().__init__(self.chains, up)

    def chain_label(self, i: int) -> str:
        fmt = self.diagram.format
        return "(" + ", ".join(fmt(q) for q in self.chains[i].quotients) + ")"

    def subposet(self, keep: Iterable[int]) -> "ChainPoset":
        keep = sorted(set(keep))
        return ChainPoset(self.diagram, self.base, self.variant,
                          [self.chains[i] for i in keep])


def quotient_predicate(d: CoxeterDiagram, variant: str) -> Callable[[Word], bool]:
    variant = normalize_variant(variant)

    def elt(q):
        return PosBraidElement(q, d)

    if variant in ("full", "s"):
        return lambda q: True
    if variant == "r":
        return lambda q: is_reduced(d, elt(q))
    if variant == "f":
        return lambda q: is_finite_type_braid(d, elt(q))
    if variant == "fr":
        return lambda q: is_finite_type_braid(d, elt(q)) and is_reduced(d, elt(q))
    return lambda q: is_delta_element(d, elt(q)) is not None


def divisor_table(d: CoxeterDiagram, b: PosBraidElement):
    """Pre(b) in (length, ShortLex) order plus all quotients among divisors.

    Returns ``(prefixes, quot)`` where ``quot[i]`` maps ``j`` to the canonical
    word of ``prefixes[i]^-1 prefixes[j]`` whenever ``prefixes[i]`` divides
    ``prefixes[j]``.
    """
    words = braid_class(d, b.word)
    canon: dict[Word, Word] = {}
    for w in words:
        for k in range(len(w) + 1):
            p = w[:k]
            if p not in canon:
                canon[p] = _bcanon(d, p)
    prefixes = sorted(set(canon.values()), key=lambda w: (len(w), w))
    pos = {p: i for i, p in enumerate(prefixes)}
    quot: list[dict[int, Word]] = [dict() for _ in prefixes]
    for j, pj in enumerate(prefixes):
        for w in braid_class(d, pj):
            for k in range(len(w) + 1):
                i = pos[canon.get(w[:k]) or _bcanon(d, w[:k])]
                if j not in quot[i]:
                    quot[i][j] = _bcanon(d, w[k:])
    return prefixes, quot


def build_word_poset(d: CoxeterDiagram, b: PosBraidElement, variant: str = "full",
                     budget: int = DEFAULT_POSET_BUDGET) -> ChainPoset:
    """Word(b) or one of its full subposets Word_s, _r, _f, _fr, _delta."""
    variant = normalize_variant(variant)
    if b.length == 0:
        # Word(1) is the single empty chain; Word_s(1) is empty
        chains = [] if variant == "s" else [FactorizationChain((), ())]
        return ChainPoset(d, b, variant, chains)
    ok = quotient_predicate(d, variant)
    good: dict[Word, bool] = {}

    def accept(q: Word) -> bool:
        v = good.get(q)
        if v is None:
            v = good[q] = ok(q)
        return v

    prefixes, quot = divisor_table(d, b)
    top = len(prefixes) - 1
    chains: list[FactorizationChain] = []

    def extend(cur: int, stops: list[Word], quots: list[Word]):
        for j, q in quot[cur].items():
            if j == cur or not accept(q):
                continue
            if j == top:
                if variant == "s" and not stops:
                    continue
                chains.append(FactorizationChain(tuple(stops), tuple(quots) + (q,)))
                if len(chains) > budget:
                    raise PosetTooLarge(f"Word_{variant}({d.format(b.word)}) exceeds {budget} chains")
            else:
                stops.append(prefixes[j])
                quots.append(q)
                extend(j, stops, quots)
                stops.pop()
                quots.pop()

    extend(0, [], [])
    chains.sort(key=lambda c: (len(c.quotients), c.quotients))
    return ChainPoset(d, b, variant, chains)


def chain_to_sequence(chain: FactorizationChain) -> tuple[Word, ...]:
    return chain.quotients


def sequence_to_chain(d: CoxeterDiagram, seq: Sequence[Word]) -> FactorizationChain:
    stops = []
    acc: Word = ()
    for q in seq[:-1]:
        acc = _bcanon(d, acc + tuple(q))
        stops.append(acc)
    return FactorizationChain(tuple(stops), tuple(tuple(q) for q in seq))


def sequence_leq(d: CoxeterDiagram, finer: Sequence[Word], coarser: Sequence[Word]) -> bool:
    """A weakly increasing surjection [n1] -> [n2] multiplies finer blocks into coarser.

    Block boundaries are forced by lengths, since braid relations preserve them.
    """
    i = 0
    for target in coarser:
        need = len(target)
        acc: Word = ()
        start = i
        while i < len(finer) and len(acc) < need:
            acc += tuple(finer[i])
            i += 1
        if i == start or len(acc) != need or _bcanon(d, acc) != _bcanon(d, tuple(target)):
            return False
    return i == len(finer)


def slice_poset(source: FinitePoset, target: FinitePoset, F: Callable[[int], int],
                t: int, direction: str = "under") -> FinitePoset:
    """Comma poset of a monotone map ``F: source -> target`` at ``t``.

    ``direction="under"`` gives ``(t | F) = {x : t <= F(x)}``; ``"over"``
    gives ``(F | t) = {x : F(x) <= t}``.  Both carry the induced order.
    """
    if direction not in ("under", "over"):
        raise ValueError("direction must be 'under' or 'over'")
    if direction == "under":
        keep = [x for x in range(len(source)) if target.leq(t, F(x))]
    else:
        keep = [x for x in range(len(source)) if target.leq(F(x), t)]
    return source.subposet(keep)


def is_monotone(source: FinitePoset, target: FinitePoset, F: Callable[[int], int]) -> bool:
    return all(target.leq(F(i), F(j)) for i in range(len(source)) for j in source.up[i])
