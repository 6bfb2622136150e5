"""One-vertex partial 1-categories, spines and fibers over B_I^+.

A :class:`PartialCategory` is stored through its 2-simplices, i.e. triples
``(a, b, c)`` meaning "a then b composes to c".  Arrow labels are canonical
Coxeter words; ``()`` is the identity (degenerate) arrow.  Composition is
written in sequence order, ``compose(a, b)`` corresponds to the edge
sequence ``(a, b)`` and for the reduced-lift presentations equals ``ab``.

The presentations are length-graded truncations: arrows of length at most
``cutoff`` and compositions landing within that length.  Lengths add along
reduced sequences, so every statement about weight ``n <= cutoff`` is
unaffected by the truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .braid import PosBraidElement, _bcanon, enumerate_braids
from .coxeter import (
    CoxeterDiagram,
    CoxeterElement,
    Word,
    enumerate_elements,
    is_finite_type,
    multiply_cox,
)
from .errors import HypothesisFailed, SizeBudget
from .poset import ChainPoset, FinitePoset, build_word_poset
from .topology import certify

Arrow = Word
Spine = tuple[Arrow, ...]

DEFAULT_SPINE_BUDGET = 200_000


class PartialCategory:
    def __init__(self, arrows: Iterable[Arrow], triples: Iterable[tuple[Arrow, Arrow, Arrow]],
                 identity: Arrow = (), *, diagram: CoxeterDiagram | None = None,
                 kind: str = "custom", cutoff: int | None = None,
                 simplex_oracle: Callable[[Spine], bool] | None = None):
        self.arrows = sorted(set(arrows), key=lambda w: (len(w), w))
        self.identity = identity
        self.diagram = diagram
        self.kind = kind
        self.cutoff = cutoff
        self.table: dict[tuple[Arrow, Arrow], list[Arrow]] = {}
        for a, b, c in triples:
            vals = self.table.setdefault((a, b), [])
            if c not in vals:
                vals.append(c)
        self._oracle = simplex_oracle

    def __repr__(self):
        return (f"PartialCategory(kind={self.kind}, arrows={len(self.arrows)}, "
                f"pairs={len(self.table)})")

    def compose(self, a: Arrow, b: Arrow) -> Arrow | None:
        """Composite of the edge sequence (a, b), None if undefined."""
        vals = self.table.get((a, b))
        if not vals:
            return None
        if len(vals) > 1:
            raise ValueError(f"ambiguous composite for {self.label(a)}, {self.label(b)}")
        return vals[0]

    def with_override(self, a: Arrow, b: Arrow, c: Arrow) -> "PartialCategory":
        """Copy with the composite of (a, b) replaced by c (fault injection hook)."""
        triples = [(x, y, z) for (x, y), zs in self.table.items() for z in zs
                   if (x, y) != (a, b)]
        triples.append((a, b, c))
        return PartialCategory(self.arrows, triples, self.identity, diagram=self.diagram,
                               kind=self.kind + "+fault", cutoff=self.cutoff)

    def label(self, a: Arrow) -> str:
        name = self.diagram.format(a) if self.diagram is not None else str(a)
        return "α_" + name

    def is_degenerate(self, a: Arrow) -> bool:
        return a == self.identity

    def is_simplex(self, seq: Spine) -> bool:
        """Whether the edge sequence spans a simplex of the simplicial set.

        The built presentations answer from the Coxeter data directly;
        tables without an oracle use the 2-coskeleton of the table.
        """
        if self._oracle is not None:
            return self._oracle(seq)
        n = len(seq)
        if n <= 1:
            return all(a in self._arrow_set for a in seq)
        # edge (i, j) must be the composite of (i, k) and (k, j) for all i < k < j
        edge = {(i, i + 1): seq[i] for i in range(n)}
        for span in range(2, n + 1):
            for i in range(n - span + 1):
                j = i + span
                vals = set()
                for k in range(i + 1, j):
                    fill = self.table.get((edge[(i, k)], edge[(k, j)]), ())
                    if len(fill) != 1:  # missing or ambiguous filler
                        return False
                    vals.add(fill[0])
                if len(vals) != 1:
                    return False
                edge[(i, j)] = vals.pop()
        return True

    @property
    def _arrow_set(self) -> set[Arrow]:
        return set(self.arrows)


def build_presentation(d: CoxeterDiagram, kind: str = "fin", cutoff: int = 3) -> PartialCategory:
    """Truncations of S_I (``kind="fin"``) and S_I' (``kind="full"``)."""
    if kind not in ("fin", "full"):
        raise ValueError("kind must be 'fin' or 'full'")
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    elements = enumerate_elements(d, None, cutoff)
    if kind == "fin":
        elements = [w for w in elements if is_finite_type(d, w.support())]
    arrows = [w.word for w in elements]
    allowed = set(arrows)
    triples = []
    for a, b in itertools.product(elements, repeat=2):
        if a.length + b.length > cutoff:
            continue
        ab = multiply_cox(d, a, b)
        if ab.length == a.length + b.length and ab.word in allowed:
            triples.append((a.word, b.word, ab.word))

    def oracle(seq: Spine) -> bool:
        if any(w not in allowed for w in seq):
            return False
        total = CoxeterElement((), d)
        for w in seq:
            total = multiply_cox(d, total, CoxeterElement(w, d))
        return total.length == sum(map(len, seq)) and total.word in allowed

    return PartialCategory(arrows, triples, (), diagram=d, kind=kind, cutoff=cutoff,
                           simplex_oracle=oracle)


# -- parenthesized composites -------------------------------------------------

def parenthesizations(n: int) -> Iterator:
    """All full binary bracketings of n leaves, as nested tuples of indices."""
    @lru_cache(maxsize=None)
    def trees(lo: int, hi: int) -> tuple:
        if hi - lo == 1:
            return (lo,)
        out = []
        for mid in range(lo + 1, hi):
            for left in trees(lo, mid):
                for right in trees(mid, hi):
                    out.append((left, right))
        return tuple(out)

    if n < 1:
        return iter(())
    return iter(trees(0, n))


def left_tree(n: int):
    tree = 0
    for i in range(1, n):
        tree = (tree, i)
    return tree


def parenthesized_composite(C: PartialCategory, edges: Sequence[Arrow], tree=None) -> Arrow | None:
    """Fold the binary partial composition along ``tree`` (default: left-nested)."""
    if not edges:
        return C.identity
    if tree is None:
        tree = left_tree(len(edges))

    def fold(t):
        if isinstance(t, int):
            return edges[t]
        left = fold(t[0])
        if left is None:
            return None
        right = fold(t[1])
        if right is None:
            return None
        return C.compose(left, right)

    return fold(tree)


def composite(C: PartialCategory, edges: Sequence[Arrow]) -> Arrow | None:
    return parenthesized_composite(C, edges)


# -- axiom audit ---------------------------------------------------------------

@dataclass
class AuditReport:
    kind: str
    arrows: int
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"kind": self.kind, "arrows": self.arrows, "checked": self.checked,
                "passed": self.passed, "violations": self.violations}


def _sequences(C: PartialCategory, n: int, nondegenerate: bool = True) -> Iterator[Spine]:
    arrows = [a for a in C.arrows if not (nondegenerate and C.is_degenerate(a))]
    cutoff = C.cutoff

    def rec(prefix, weight):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for a in arrows:
            w = weight + len(a)
            if cutoff is not None and w > cutoff:
                continue
            prefix.append(a)
            yield from rec(prefix, w)
            prefix.pop()

    yield from rec([], 0)


def audit_axioms(C: PartialCategory, max_n: int = 4, max_violations: int = 20) -> AuditReport:
    """Exhaustive check of (P1), (P2), (P3) and the derived (P0)."""
    report = AuditReport(C.kind, len(C.arrows))
    lbl = C.label

    def fail(axiom, witness, detail):
        if len(report.violations) < max_violations:
            report.violations.append({"axiom": axiom, "witness": [lbl(a) for a in witness],
                                      "detail": detail})

    arrow_set = set(C.arrows)
    # (P1): every inner horn has at most one filler
    n = 0
    for (a, b), vals in C.table.items():
        n += 1
        if len(vals) > 1:
            fail("P1", (a, b), f"{len(vals)} fillers: {[lbl(v) for v in vals]}")
        for v in vals:
            if v not in arrow_set:
                fail("P1", (a, b), f"composite {v!r} is not an arrow")
    report.checked["P1"] = n

    def comp(a, b):
        vals = C.table.get((a, b))
        return vals[0] if vals and len(vals) == 1 else None

    # units
    n = 0
    for a in C.arrows:
        n += 1
        if comp(C.identity, a) != a or comp(a, C.identity) != a:
            fail("unit", (a,), "identity arrow does not act neutrally")
    report.checked["unit"] = n

    # (P2): both kinds of commutative square extend to a unique 3-simplex
    n = 0
    for x, y, z in _sequences(C, 3, nondegenerate=False):
        n += 1
        xy, yz = comp(x, y), comp(y, z)
        xy_z = comp(xy, z) if xy is not None else None
        x_yz = comp(x, yz) if yz is not None else None
        if xy_z is not None and (yz is None or x_yz != xy_z):
            fail("P2", (x, y, z), "square 012|023 has no compatible filler")
        if x_yz is not None and (xy is None or xy_z != x_yz):
            fail("P2", (x, y, z), "square 013|123 has no compatible filler")
        if xy_z is not None and x_yz == xy_z and not C.is_simplex((x, y, z)):
            fail("P2", (x, y, z), "faces exist but the 3-simplex does not")
    report.checked["P2"] = n

    # (P3): for n >= 3 a boundary extends to exactly one n-simplex
    n = 0
    for k in range(3, max_n + 1):
        for seq in _sequences(C, k, nondegenerate=False):
            faces = _boundary(C, seq)
            if faces is None:
                continue
            n += 1
            all_faces = all(C.is_simplex(f) for f in faces)
            if all_faces != C.is_simplex(seq):
                fail("P3", seq, "boundary and simplex disagree")
    report.checked["P3"] = n

    # derived (P0): parenthesized composites agree, and then the spine fills
    n = 0
    for k in range(2, max_n + 1):
        for seq in _sequences(C, k, nondegenerate=False):
            n += 1
            try:
                values = {parenthesized_composite(C, seq, t) for t in parenthesizations(k)}
            except ValueError as exc:  # ambiguous table, already a (P1) violation
                fail("P0", seq, str(exc))
                continue
            if len(values) > 1:
                fail("P0", seq, "parenthesizations disagree: "
                     + ", ".join(sorted(lbl(v) if v is not None else "undefined" for v in values)))
            elif None not in values and not C.is_simplex(seq):
                fail("P0", seq, "composite exists but the sequence is not strongly composable")
    report.checked["P0"] = n
    return report


def _boundary(C: PartialCategory, seq: Spine) -> list[Spine] | None:
    """Spines of the codimension-one faces, or None if some face is undefined."""
    faces = [seq[1:], seq[:-1]]
    for i in range(len(seq) - 1):
        vals = C.table.get((seq[i], seq[i + 1]), ())
        c = vals[0] if len(vals) == 1 else None
        if c is None:
            return None
        faces.append(seq[:i] + (c,) + seq[i + 2:])
    return faces


# -- spine categories ------------------------------------------------------------

@dataclass(frozen=True)
class SpineMorphism:
    source: int
    target: int
    vertex_map: tuple[int, ...]  # F^*: [n_target] -> [n_source]


class SpineCategory:
    """Objects are edge sequences; a morphism x -> y is a vertex map
    ``F^*: [len(y)] -> [len(x)]`` whose blocks of x compose to the edges of y.
    """

    def __init__(self, C: PartialCategory, objects: Sequence[Spine], nondegenerate: bool):
        self.C = C
        self.objects = list(objects)
        self.index = {o: i for i, o in enumerate(self.objects)}
        self.nondegenerate = nondegenerate
        self.hom: dict[tuple[int, int], list[SpineMorphism]] = {}
        longest = max((len(o) for o in self.objects), default=0)
        for i, x in enumerate(self.objects):
            for F, y in _outgoing(C, x, nondegenerate, longest):
                j = self.index.get(y)
                if j is not None:
                    self.hom.setdefault((i, j), []).append(SpineMorphism(i, j, F))

    def __len__(self):
        return len(self.objects)

    def morphisms(self, i: int, j: int) -> list[SpineMorphism]:
        return self.hom.get((i, j), [])

    def identity(self, i: int) -> SpineMorphism:
        return SpineMorphism(i, i, tuple(range(len(self.objects[i]) + 1)))

    def compose(self, f: SpineMorphism, g: SpineMorphism) -> SpineMorphism:
        """``g o f`` for f: x -> y, g: y -> z, with vertex map F_f^* o F_g^*."""
        if f.target != g.source:
            raise ValueError("morphisms are not composable")
        return SpineMorphism(f.source, g.target, tuple(f.vertex_map[k] for k in g.vertex_map))

    def is_valid(self, m: SpineMorphism) -> bool:
        x, y = self.objects[m.source], self.objects[m.target]
        F = m.vertex_map
        if len(F) != len(y) + 1 or F[0] != 0 or F[-1] != len(x):
            return False
        if any(F[k] > F[k + 1] for k in range(len(y))):
            return False
        return all(composite(self.C, x[F[k]:F[k + 1]]) == y[k] for k in range(len(y)))

    def as_poset(self) -> FinitePoset:
        up = [[j for j in range(len(self)) if j != i and (i, j) in self.hom]
              for i in range(len(self))]
        return FinitePoset(self.objects, up)


def _outgoing(C: PartialCategory, x: Spine, nondegenerate: bool,
              max_edges: int | None = None) -> Iterator[tuple[tuple[int, ...], Spine]]:
    """All (F^*, y) with a morphism x -> y.

    With ``nondegenerate`` only strictly increasing F^* are produced: an
    empty block composes to the identity arrow, which no nondegenerate
    target contains.  Otherwise targets have at most ``max_edges`` edges.
    """
    n = len(x)
    if n == 0:
        yield (0,), ()
    if nondegenerate:
        cuts = (c for k in range(n) for c in itertools.combinations(range(1, n), k))
    else:
        top = n if max_edges is None else max_edges
        cuts = (c for k in range(top) for c in
                itertools.combinations_with_replacement(range(n + 1), k))
    for cut in cuts:
        F = (0,) + tuple(cut) + (n,)
        edges = []
        for a, b in zip(F, F[1:]):
            c = composite(C, x[a:b])
            if c is None:
                break
            edges.append(c)
        else:
            yield F, tuple(edges)


def spine_objects(C: PartialCategory, max_edges: int, nondegenerate: bool = True,
                  budget: int = DEFAULT_SPINE_BUDGET) -> list[Spine]:
    out: list[Spine] = []
    for n in range(0, max_edges + 1):
        for s in _sequences(C, n, nondegenerate):
            out.append(s)
            if len(out) > budget:
                raise SizeBudget(f"more than {budget} spines")
    return out


def spine_category(C: PartialCategory, cutoff: int, nondegenerate: bool = False,
                   target: PosBraidElement | None = None,
                   budget: int = DEFAULT_SPINE_BUDGET) -> SpineCategory:
    """Spine_C(*, *) truncated to at most ``cutoff`` edges.

    ``target`` restricts to the fiber of p over a braid element.
    """
    objs = spine_objects(C, cutoff, nondegenerate, budget)
    if target is not None:
        objs = [s for s in objs if spine_product(C, s) == target.word]
    return SpineCategory(C, objs, nondegenerate)


def spine_product(C: PartialCategory, s: Spine) -> Word:
    """p(s): canonical word of r(w_1) ... r(w_n) in B_I^+."""
    return _bcanon(C.diagram, tuple(itertools.chain.from_iterable(s)))


def check_nondegenerate_hypothesis(C: PartialCategory) -> bool:
    """No composable pair of nondegenerate arrows composes to the identity."""
    for (a, b), vals in C.table.items():
        if not C.is_degenerate(a) and not C.is_degenerate(b):
            if any(C.is_degenerate(v) for v in vals):
                return False
    return True


def nondegenerate_spines(SC: SpineCategory) -> SpineCategory:
    if not check_nondegenerate_hypothesis(SC.C):
        raise HypothesisFailed("a nondegenerate pair composes to the identity")
    keep = [o for o in SC.objects if not any(SC.C.is_degenerate(a) for a in o)]
    return SpineCategory(SC.C, keep, nondegenerate=True)


def contract_degenerate(C: PartialCategory, s: Spine) -> Spine:
    """Right adjoint to the nondegenerate inclusion: drop identity edges."""
    return tuple(a for a in s if not C.is_degenerate(a))


# -- necklaces -------------------------------------------------------------------

def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Ordered partitions of n into positive parts."""
    for k in range(n):
        for cut in itertools.combinations(range(1, n), k):
            bounds = (0,) + cut + (n,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def _refines(p: tuple[int, ...], q: tuple[int, ...]) -> bool:
    cp = set(itertools.accumulate(p))
    cq = set(itertools.accumulate(q))
    return cq <= cp


@dataclass
class NecklaceObject:
    spine: Spine
    partition: tuple[int, ...]


def necklace_fiber(C: PartialCategory, x: Spine) -> FinitePoset:
    """Partitions of len(x) into composable blocks, ordered by refinement.

    Finer partitions sit lower, so the all-singletons partition is the
    initial object.
    """
    valid = []
    for p in compositions(len(x)):
        start, ok = 0, True
        for part in p:
            if composite(C, x[start:start + part]) is None:
                ok = False
                break
            start += part
        if ok:
            valid.append(p)
    return FinitePoset.from_leq(valid, _refines)


# -- fibers and pi_0 -------------------------------------------------------------

@dataclass
class FiberReport:
    element: str
    kind: str
    fiber_objects: int
    poset_objects: int
    objects_match: bool
    morphisms_match: bool
    at_most_one_morphism: bool
    verdict: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class FiberIndex:
    """Nondegenerate spines of weight <= L grouped by their image in B_I^+."""

    def __init__(self, C: PartialCategory, max_weight: int, budget: int = DEFAULT_SPINE_BUDGET):
        self.C = C
        self.max_weight = max_weight
        self.fibers: dict[Word, list[Spine]] = {}
        self.count = 0
        arrows = [a for a in C.arrows if not C.is_degenerate(a) and len(a) <= max_weight]

        def rec(prefix, weight):
            if prefix:
                self.fibers.setdefault(spine_product(C, tuple(prefix)), []).append(tuple(prefix))
                self.count += 1
                if self.count > budget:
                    raise SizeBudget(f"more than {budget} nondegenerate spines")
            for a in arrows:
                if weight + len(a) <= max_weight:
                    prefix.append(a)
                    rec(prefix, weight + len(a))
                    prefix.pop()

        rec([], 0)
        self.fibers.setdefault((), []).append(())  # empty spine lies over 1

    def fiber(self, b: PosBraidElement) -> list[Spine]:
        return self.fibers.get(b.word, [])


def fiber_check(d: CoxeterDiagram, b: PosBraidElement, kind: str = "fin",
                C: PartialCategory | None = None, index: FiberIndex | None = None) -> FiberReport:
    """Compare p^{-1}(b) with Word_fr(b) (kind fin) or Word_r(b) (kind full)."""
    L = max(b.length, 1)
    if C is None:
        C = build_presentation(d, kind, L)
    if index is None:
        index = FiberIndex(C, b.length)
    variant = "fr" if kind == "fin" else "r"
    P = build_word_poset(d, b, variant)
    objs = sorted(index.fiber(b), key=lambda s: (len(s), s))
    SC = SpineCategory(C, objs, nondegenerate=True)
    # objects correspond through their quotient sequences
    as_seq = {s: tuple(_bcanon(d, a) for a in s) for s in objs}
    poset_pos = {c.quotients: i for i, c in enumerate(P.chains)}
    objects_match = (len(objs) == len(P)
                     and set(as_seq.values()) == set(poset_pos)
                     and len(set(as_seq.values())) == len(objs))
    one = all(len(v) == 1 for v in SC.hom.values())
    morphisms_match = objects_match
    detail = ""
    if objects_match:
        for i, s in enumerate(objs):
            pi = poset_pos[as_seq[s]]
            for j, t in enumerate(objs):
                pj = poset_pos[as_seq[t]]
                if bool(SC.morphisms(i, j)) != P.leq(pi, pj):
                    morphisms_match = False
                    detail = f"morphism mismatch between {s} and {t}"
                    break
            if not morphisms_match:
                break
    else:
        detail = f"fiber has {len(objs)} objects, Word_{variant} has {len(P)}"
    verdict = certify(SC.as_poset()).verdict if objs else "NotContractible"
    cert_ok = verdict.startswith("Contractible")
    return FiberReport(d.format(b.word), kind, len(objs), len(P), objects_match,
                       morphisms_match, one, verdict,
                       objects_match and morphisms_match and one and cert_ok, detail)


@dataclass
class Pi0Report:
    kind: str
    cutoff: int
    components: list[int]
    braid_elements: list[int]
    injective: bool
    constant_on_components: bool

    @property
    def passed(self) -> bool:
        return (self.components == self.braid_elements and self.injective
                and self.constant_on_components)

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        out["passed"] = self.passed
        return out


def presentation_pi0(d: CoxeterDiagram, kind: str = "fin", cutoff: int = 4,
                     budget: int = DEFAULT_SPINE_BUDGET) -> Pi0Report:
    """Components of nondegenerate spines vs elements of B_I^+, weight by weight.

    Components are found from elementary merges of adjacent composable
    edges alone; the braid product is only used afterwards to compare.
    """
    C = build_presentation(d, kind, cutoff)
    arrows = [a for a in C.arrows if not C.is_degenerate(a)]
    spines: list[Spine] = []

    def rec(prefix, weight):
        if prefix:
            spines.append(tuple(prefix))
            if len(spines) > budget:
                raise SizeBudget(f"more than {budget} nondegenerate spines")
        for a in arrows:
            if weight + len(a) <= cutoff:
                prefix.append(a)
                rec(prefix, weight + len(a))
                prefix.pop()

    rec([], 0)
    pos = {s: i for i, s in enumerate(spines)}
    parent = list(range(len(spines)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, s in enumerate(spines):
        for k in range(len(s) - 1):
            c = C.compose(s[k], s[k + 1])
            if c is not None:
                j = pos[s[:k] + (c,) + s[k + 2:]]
                parent[find(i)] = find(j)
    comps: dict[int, set[Word]] = {}
    weight_of: dict[int, int] = {}
    for i, s in enumerate(spines):
        r = find(i)
        comps.setdefault(r, set()).add(spine_product(C, s))
        weight_of[r] = sum(map(len, s))
    constant = all(len(v) == 1 for v in comps.values())
    images = [next(iter(v)) for v in comps.values()]
    injective = len(images) == len(set(images))
    per_weight = [1] + [0] * cutoff  # weight 0: the empty spine over 1
    for r in comps:
        per_weight[weight_of[r]] += 1
    braids = [len(level) for level in enumerate_braids(d, cutoff)]
    return Pi0Report(kind, cutoff, per_weight, braids, injective, constant)
