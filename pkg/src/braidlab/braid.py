"""The positive braid monoid B_I^+.

Elements are stored through the ShortLex-least word of their braid class.
Braid relations preserve length, so every class is finite and is
materialised by breadth-first search (bounded by the diagram's
``class_budget``).  Divisibility is read off the class directly: ``a``
left-divides ``b`` exactly when some word of ``b`` starts with a word of
``a``.  This works for every diagram, finite type or not, and needs no
gcd machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import (
    CoxeterDiagram,
    CoxeterElement,
    Subdiagram,
    Word,
    _canonical,
    _check,
    braid_class,
    enumerate_elements,
    has_square,
    is_finite_type,
    longest_element,
)
from .errors import NonUniqueMaximum


@dataclass(frozen=True)
class PosBraidElement:
    word: Word
    diagram: CoxeterDiagram = field(compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self):
        return self.diagram.format(self.word)

    def __mul__(self, other):
        return multiply_braid(self.diagram, self, other)

    def support(self) -> Subdiagram:
        return frozenset(self.word)

    def words(self) -> frozenset[Word]:
        return braid_class(self.diagram, self.word)


def braid_identity(d: CoxeterDiagram) -> PosBraidElement:
    return PosBraidElement((), d)


def _bcanon(d: CoxeterDiagram, word: Word) -> Word:
    return min(braid_class(d, word))


def braid_canonical(d: CoxeterDiagram, w) -> PosBraidElement:
    return PosBraidElement(_bcanon(d, d.word(w)), d)


def multiply_braid(d: CoxeterDiagram, a: PosBraidElement, b: PosBraidElement) -> PosBraidElement:
    _check(d, a, b)
    return PosBraidElement(_bcanon(d, a.word + b.word), d)


def left_divides(d: CoxeterDiagram, a: PosBraidElement, b: PosBraidElement) -> bool:
    _check(d, a, b)
    k = a.length
    if k > b.length:
        return False
    words_a = braid_class(d, a.word)
    return any(w[:k] in words_a for w in braid_class(d, b.word))


def left_quotient(d: CoxeterDiagram, a: PosBraidElement, b: PosBraidElement) -> PosBraidElement | None:
    """The unique c with a*c = b, or None when a does not divide b.

    Uniqueness is left cancellativity of B_I^+.
    """
    _check(d, a, b)
    k = a.length
    words_a = braid_class(d, a.word)
    for w in braid_class(d, b.word):
        if w[:k] in words_a:
            return PosBraidElement(_bcanon(d, w[k:]), d)
    return None


def is_reduced(d: CoxeterDiagram, b: PosBraidElement) -> bool:
    return all(has_square(w) < 0 for w in braid_class(d, b.word))


def reduced_lift(d: CoxeterDiagram, w: CoxeterElement) -> PosBraidElement:
    # the canonical group word is already ShortLex-least among reduced words,
    # and those form a single braid class (Matsumoto)
    _check(d, w)
    return PosBraidElement(_bcanon(d, w.word), d)


def group_image(d: CoxeterDiagram, b: PosBraidElement) -> CoxeterElement:
    """Image of b under the quotient map B_I^+ -> W_I."""
    return CoxeterElement(_canonical(d, b.word), d)


def descent_set(d: CoxeterDiagram, b: PosBraidElement) -> Subdiagram:
    return frozenset(w[0] for w in braid_class(d, b.word) if w)


def enumerate_prefixes(d: CoxeterDiagram, b: PosBraidElement) -> list[PosBraidElement]:
    """Pre(b): all left divisors of b, sorted by (length, ShortLex)."""
    seen = set()
    for w in braid_class(d, b.word):
        for k in range(len(w) + 1):
            seen.add(w[:k])
    canon = {_bcanon(d, w) for w in seen}
    return [PosBraidElement(w, d) for w in sorted(canon, key=lambda w: (len(w), w))]


def maximal_reduced_prefix(d: CoxeterDiagram, b: PosBraidElement) -> PosBraidElement:
    reduced = [p for p in enumerate_prefixes(d, b) if is_reduced(d, p)]
    maximal = [p for p in reduced
               if not any(q != p and left_divides(d, p, q) for q in reduced)]
    if len(maximal) != 1:
        raise NonUniqueMaximum(
            f"{d.format(b.word)} has maximal reduced prefixes "
            f"{[d.format(p.word) for p in maximal]}")
    return maximal[0]


def is_finite_type_braid(d: CoxeterDiagram, b: PosBraidElement) -> bool:
    """b lies in B_J^+ for a finite-type J, i.e. its support is finite type."""
    return is_finite_type(d, b.support())


def is_delta_element(d: CoxeterDiagram, b: PosBraidElement) -> Subdiagram | None:
    """Return J when b = r(Delta_J) for a finite-type J, else None."""
    J = b.support()
    if not is_finite_type(d, J):
        return None
    delta = longest_element(d, J)
    if delta.length != b.length:
        return None
    return J if reduced_lift(d, delta) == b else None


@dataclass
class PrefixReport:
    element: str
    descents: list[str]
    finite_type: bool
    lifts_checked: int
    passed: bool
    counterexample: str | None = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def verify_prefix_corollary(d: CoxeterDiagram, b: PosBraidElement) -> PrefixReport:
    """Check that L(b) is finite type and every r(w), w in W_{L(b)}, divides b."""
    L = descent_set(d, b)
    report = PrefixReport(d.format(b.word), d.format_subset(L),
                          is_finite_type(d, L), 0, False)
    if not report.finite_type:
        report.counterexample = f"L(b) = {report.descents} is not finite type"
        return report
    bound = longest_element(d, L).length
    for w in enumerate_elements(d, L, bound):
        report.lifts_checked += 1
        if not left_divides(d, reduced_lift(d, w), b):
            report.counterexample = f"r({d.format(w.word)}) does not divide b"
            return report
    report.passed = True
    return report


def enumerate_braids(d: CoxeterDiagram, max_len: int) -> list[list[PosBraidElement]]:
    """Elements of B_I^+ grouped by length 0..max_len."""
    levels: list[list[Word]] = [[()]]
    for _ in range(max_len):
        nxt = {_bcanon(d, w + (s,)) for w in levels[-1] for s in range(d.rank)}
        levels.append(sorted(nxt))
    return [[PosBraidElement(w, d) for w in level] for level in levels]
