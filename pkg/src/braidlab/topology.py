"""Order complexes and contractibility certificates.

Three independent routes are used, strongest first:

1. closure operators on the poset itself (Delta-insertion retractions and
   beat-point removals), each a deformation retraction of the nerve;
2. greedy elementary collapses of the order complex;
3. exact homology plus a pi_1 heuristic, which is the only route allowed to
   say *not* contractible.

Homology is computed with integer arithmetic only.  A GF(2) rank pass runs
first; since rational Betti numbers never exceed GF(2) ones, an all-zero
GF(2) answer settles the rational one, and otherwise an exact fraction-free
elimination over Q takes over.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .braid import PosBraidElement, descent_set, left_divides, reduced_lift
from .coxeter import finite_type_closure, longest_element
from .poset import ChainPoset, FinitePoset

CLOSURE = "ContractibleByClosure"
COLLAPSE = "ContractibleByCollapse"
HOMOLOGY = "ContractibleByHomology"
NOT_CONTRACTIBLE = "NotContractible"
INCONCLUSIVE = "Inconclusive"
CONTRACTIBLE_VERDICTS = (CLOSURE, COLLAPSE, HOMOLOGY)

TIETZE_BUDGET = 10_000


class SimplicialComplex:
    """Abstract simplicial complex stored as all of its faces.

    ``faces[k]`` is a sorted list of ``k``-simplices, each a sorted tuple of
    vertex indices.  ``vertices`` holds labels.
    """

    def __init__(self, vertices: Sequence, faces: Iterable[tuple[int, ...]]):
        self.vertices = list(vertices)
        by_dim: dict[int, set[tuple[int, ...]]] = {}
        for f in faces:
            f = tuple(sorted(f))
            if not f:
                raise ValueError("faces must be nonempty")
            by_dim.setdefault(len(f) - 1, set()).add(f)
        dim = max(by_dim, default=-1)
        self.faces = [sorted(by_dim.get(k, ())) for k in range(dim + 1)]

    @classmethod
    def from_facets(cls, vertices: Sequence, facets: Iterable[Iterable[int]]):
        faces = set()
        for f in facets:
            f = tuple(sorted(f))
            for k in range(1, len(f) + 1):
                faces.update(itertools.combinations(f, k))
        return cls(vertices, faces)

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def __len__(self):
        return sum(len(fs) for fs in self.faces)

    def is_empty(self) -> bool:
        return not self.faces

    @property
    def facets(self) -> list[tuple[int, ...]]:
        covered = set()
        for k in range(1, len(self.faces)):
            for f in self.faces[k]:
                for i in range(len(f)):
                    covered.add(f[:i] + f[i + 1:])
        return [f for fs in self.faces for f in fs if f not in covered]


def order_complex(p: FinitePoset) -> SimplicialComplex:
    """Nerve of ``p``: one simplex per nonempty totally ordered subset."""
    faces = []
    stack = [(i,) for i in range(len(p))]
    while stack:
        f = stack.pop()
        faces.append(f)
        for j in p.up[f[-1]]:
            stack.append(f + (j,))
    return SimplicialComplex(p.labels, faces)


# -- homology ----------------------------------------------------------------

def _face_index(c: SimplicialComplex) -> list[dict[tuple[int, ...], int]]:
    return [{f: i for i, f in enumerate(fs)} for fs in c.faces]


def _rank_gf2(columns: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for col in columns:
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                break
            col ^= other
    return len(pivots)


def _ranks_gf2(c: SimplicialComplex) -> list[int]:
    index = _face_index(c)
    ranks = [1 if c.faces else 0]  # augmentation C_0 -> Z
    for k in range(1, len(c.faces)):
        lower = index[k - 1]
        cols = []
        for f in c.faces[k]:
            bits = 0
            for i in range(len(f)):
                bits |= 1 << lower[f[:i] + f[i + 1:]]
            cols.append(bits)
        ranks.append(_rank_gf2(cols))
    return ranks


def _rank_q(columns: list[dict[int, int]]) -> int:
    """Exact rank over Q by fraction-free column elimination."""
    pivots: dict[int, dict[int, int]] = {}
    for col in columns:
        col = dict(col)
        while col:
            low = max(col)
            other = pivots.get(low)
            if other is None:
                g = 0
                for v in col.values():
                    g = math.gcd(g, v)
                if g > 1:
                    col = {r: v // g for r, v in col.items()}
                pivots[low] = col
                break
            a, b = col[low], other[low]
            new = {r: b * v for r, v in col.items()}
            for r, v in other.items():
                x = new.get(r, 0) - a * v
                if x:
                    new[r] = x
                else:
                    new.pop(r, None)
            col = new
    return len(pivots)


def _ranks_q(c: SimplicialComplex) -> list[int]:
    index = _face_index(c)
    ranks = [1 if c.faces else 0]
    for k in range(1, len(c.faces)):
        lower = index[k - 1]
        cols = []
        for f in c.faces[k]:
            cols.append({lower[f[:i] + f[i + 1:]]: (-1) ** i for i in range(len(f))})
        ranks.append(_rank_q(cols))
    return ranks


def _betti_from_ranks(c: SimplicialComplex, ranks: list[int]) -> list[int]:
    out = []
    for k in range(len(c.faces)):
        nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
        out.append(len(c.faces[k]) - ranks[k] - nxt)
    return out


def homology(c: SimplicialComplex, field: str = "Q") -> list[int]:
    """Reduced Betti numbers [b~_0, b~_1, ...] with exact arithmetic.

    The empty complex returns ``[]``; its only nonzero reduced Betti number
    sits in degree -1 (see :func:`reduced_betti_minus_one`).
    """
    if field not in ("Q", "GF2"):
        raise ValueError("field must be 'Q' or 'GF2'")
    if c.is_empty():
        return []
    b2 = _betti_from_ranks(c, _ranks_gf2(c))
    if field == "GF2" or not any(b2):
        return b2
    return _betti_from_ranks(c, _ranks_q(c))


def reduced_betti_minus_one(c: SimplicialComplex) -> int:
    return 1 if c.is_empty() else 0


def _unit_pivot_acyclic(c: SimplicialComplex) -> bool:
    """True if every boundary matrix diagonalises over Z using +-1 pivots only.

    Then every Smith invariant is 1 and no homology group has torsion, so
    vanishing rational homology forces vanishing integral homology.  A
    False answer only means "not shown", never "torsion present".
    """
    index = _face_index(c)
    for k in range(1, len(c.faces)):
        lower = index[k - 1]
        rows: dict[int, dict[int, int]] = {}
        cols: dict[int, set[int]] = {}
        for r, f in enumerate(c.faces[k]):
            rows[r] = {lower[f[:i] + f[i + 1:]]: (-1) ** i for i in range(len(f))}
            for j in rows[r]:
                cols.setdefault(j, set()).add(r)
        while True:
            pivot = next(((r, j) for r, row in rows.items()
                          for j, v in row.items() if v in (1, -1)), None)
            if pivot is None:
                break
            r, j = pivot
            prow = rows.pop(r)
            for j2 in prow:
                cols[j2].discard(r)
            for r2 in list(cols.get(j, ())):
                row = rows[r2]
                a = row[j] * prow[j]  # prow[j] is +-1
                for j2, v in prow.items():
                    x = row.get(j2, 0) - a * v
                    if x:
                        if j2 not in row:
                            cols[j2].add(r2)
                        row[j2] = x
                    elif j2 in row:
                        del row[j2]
                        cols[j2].discard(r2)
                if not row:
                    del rows[r2]
            cols.pop(j, None)
        if any(rows.values()):
            return False
    return True


# -- certificates ------------------------------------------------------------

@dataclass
class HomotopyCertificate:
    verdict: str
    betti: list[int] | None = None
    closure_steps: list[tuple] = field(default_factory=list)
    collapses: list[tuple] = field(default_factory=list)
    pi1_relators: int | None = None
    cone_point: int | None = None
    note: str = ""

    @property
    def contractible(self) -> bool:
        return self.verdict in CONTRACTIBLE_VERDICTS

    @property
    def kind(self) -> str:
        return {CLOSURE: "closure", COLLAPSE: "collapse", HOMOLOGY: "homology+pi1",
                NOT_CONTRACTIBLE: "betti", INCONCLUSIVE: "none"}[self.verdict]


@dataclass
class ClosureStep:
    """One retraction of the current subposet onto a smaller one.

    ``mapping`` sends each removed element to its image; every element not
    listed is fixed.  ``kind`` is ``"delta"`` (insert r(Delta_T) as first
    stop), ``"up"`` (upper beat point, an inflationary operator) or
    ``"down"`` (lower beat point, a deflationary operator).
    """
    kind: str
    mapping: dict[int, int]
    label: str = ""

    def as_tuple(self):
        return (self.kind, self.label, sorted(self.mapping.items()))


def check_closure_step(p: FinitePoset, alive: set[int], step: ClosureStep) -> bool:
    """Verify the step is a monotone idempotent (in|de)flationary self-map of ``alive``."""
    def f(x):
        return step.mapping.get(x, x)

    image = {f(x) for x in alive}
    if not image <= alive or any(f(y) != y for y in image):
        return False
    for x in alive:
        if step.kind == "up" and not p.leq(x, f(x)):
            return False
        if step.kind in ("down", "delta") and not p.leq(f(x), x):
            return False
        for y in p.up[x]:
            if y in alive and not p.leq(f(x), f(y)):
                return False
    return True


def _delta_candidates(p: ChainPoset) -> list[tuple[str, tuple]]:
    d, b = p.diagram, p.base
    L = descent_set(d, b)
    out = []
    for T in finite_type_closure(d):
        if T and T <= L:
            D = reduced_lift(d, longest_element(d, T))
            if D.length < b.length:
                out.append((d.format(D.word), D.word))
    return out


def _try_delta_step(p: ChainPoset, alive: set[int], word: tuple) -> dict[int, int] | None:
    d = p.diagram
    D = PosBraidElement(word, d)
    comparable: dict[tuple, bool] = {}

    def comp(stop):
        v = comparable.get(stop)
        if v is None:
            s = PosBraidElement(stop, d)
            v = comparable[stop] = left_divides(d, D, s) or left_divides(d, s, D)
        return v

    mapping = {}
    for x in alive:
        stops = p.chains[x].stops
        if word in stops:
            continue
        if not all(comp(s) for s in stops):
            return None
        y = p.index.get(frozenset(stops) | {word})
        if y is None or y not in alive:
            return None
        mapping[x] = y
    return mapping or None


def _beat_step(p: FinitePoset, alive: set[int]) -> ClosureStep | None:
    for x in sorted(alive):
        ups = [y for y in p.up[x] if y in alive]
        if ups:
            mins = [y for y in ups if not any(z != y and y in p.up[z] for z in ups)]
            if len(mins) == 1:
                return ClosureStep("up", {x: mins[0]})
        downs = [y for y in p.down[x] if y in alive]
        if downs:
            maxs = [y for y in downs if not any(z != y and y in p.down[z] for z in downs)]
            if len(maxs) == 1:
                return ClosureStep("down", {x: maxs[0]})
    return None


def closure_reduce(p: FinitePoset, strategy: str = "delta+beat") -> tuple[list[int], list[ClosureStep]]:
    """Retract ``p`` through closure operators as far as they go.

    Returns the surviving elements (a subposet homotopy equivalent to ``p``)
    and the witness steps in the order applied.
    """
    if strategy not in ("delta+beat", "delta", "beat"):
        raise ValueError(f"unknown strategy {strategy!r}")
    alive = set(range(len(p)))
    steps: list[ClosureStep] = []
    if "delta" in strategy and isinstance(p, ChainPoset) and p.base.length:
        progress = True
        while progress and len(alive) > 1:
            progress = False
            for label, word in _delta_candidates(p):
                mapping = _try_delta_step(p, alive, word)
                if mapping:
                    steps.append(ClosureStep("delta", mapping, label))
                    alive -= set(mapping)
                    progress = True
                    break
    if "beat" in strategy:
        while len(alive) > 1:
            step = _beat_step(p, alive)
            if step is None:
                break
            steps.append(step)
            alive -= set(step.mapping)
    return sorted(alive), steps


def closure_certificate(p: FinitePoset, strategy: str = "delta+beat") -> HomotopyCertificate | None:
    if len(p) == 0:
        return None
    cone = p.cone_point()
    if cone is not None:
        return HomotopyCertificate(CLOSURE, cone_point=cone, note="cone point")
    alive, steps = closure_reduce(p, strategy)
    if len(alive) == 1:
        return HomotopyCertificate(CLOSURE, closure_steps=[s.as_tuple() for s in steps],
                                   cone_point=alive[0])
    core = p.subposet(alive)
    cone = core.cone_point()
    if cone is not None:
        return HomotopyCertificate(CLOSURE, closure_steps=[s.as_tuple() for s in steps],
                                   cone_point=alive[cone])
    return None


def collapse_certificate(c: SimplicialComplex) -> HomotopyCertificate | None:
    """Greedy elementary collapses; success means the complex shrank to a vertex."""
    if c.is_empty():
        return None
    alive: set[tuple[int, ...]] = {f for fs in c.faces for f in fs}
    cofaces: dict[tuple[int, ...], set[tuple[int, ...]]] = {f: set() for f in alive}
    for f in alive:
        for i in range(len(f)):
            if len(f) > 1:
                cofaces[f[:i] + f[i + 1:]].add(f)
    queue = [f for f in alive if len(cofaces[f]) == 1]
    collapses = []
    while queue:
        sigma = queue.pop()
        if sigma not in alive or len(cofaces[sigma]) != 1:
            continue
        (tau,) = cofaces[sigma]
        if cofaces[tau]:
            continue
        alive.discard(sigma)
        alive.discard(tau)
        collapses.append((sigma, tau))
        for g in (sigma, tau):
            if len(g) > 1:
                for i in range(len(g)):
                    h = g[:i] + g[i + 1:]
                    cofaces[h].discard(g)
                    if h in alive and len(cofaces[h]) == 1:
                        queue.append(h)
        # the other faces of tau may have become free
        for i in range(len(tau)):
            h = tau[:i] + tau[i + 1:]
            if h in alive and len(cofaces[h]) == 1:
                queue.append(h)
        if len(sigma) > 1:
            for i in range(len(sigma)):
                h = sigma[:i] + sigma[i + 1:]
                if h in alive and len(cofaces[h]) == 1:
                    queue.append(h)
    if len(alive) == 1 and len(next(iter(alive))) == 1:
        return HomotopyCertificate(COLLAPSE, collapses=collapses)
    return None


def fundamental_group_trivial(c: SimplicialComplex, budget: int = TIETZE_BUDGET) -> tuple[bool, int]:
    """Heuristic pi_1 check on a connected complex.

    Generators are the edges off a spanning tree, relators come from the
    2-simplices; relators of length one kill a generator, length-two
    relators identify two generators.  Returns ``(trivial, relators_left)``.
    """
    if c.is_empty():
        return False, 0
    n = len(c.vertices)
    edges = c.faces[1] if len(c.faces) > 1 else []
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.add((a, b))
    used = {v for f in c.faces[0] for v in f}
    if len({find(v) for v in used}) != 1:
        return False, 0
    gen = {e: i for i, e in enumerate(e for e in edges if e not in tree)}
    if not gen:
        return True, 0

    def letter(a, b):
        if (a, b) in tree:
            return None
        return gen[(a, b)] + 1

    relators = []
    for a, b, x in (c.faces[2] if len(c.faces) > 2 else []):
        word = [l for l in (letter(a, b), letter(b, x)) if l is not None]
        inv = letter(a, x)
        if inv is not None:
            word.append(-inv)
        relators.append(word)
    subst: dict[int, list[int]] = {}

    def apply(word):
        out: list[int] = []
        for l in word:
            g = abs(l)
            rep = subst.get(g)
            seq = [l] if rep is None else (rep if l > 0 else [-x for x in reversed(rep)])
            for y in seq:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        while len(out) > 1 and out[0] == -out[-1]:  # cyclic reduction
            out = out[1:-1]
        return out

    live = set(range(1, len(gen) + 1))
    moves = 0
    changed = True
    while changed and live and moves < budget:
        changed = False
        relators = [r for r in (apply(r) for r in relators) if r]
        relators.sort(key=len)
        for r in relators:
            if len(r) == 1:
                g = abs(r[0])
                subst[g] = []
            elif len(r) == 2 and abs(r[0]) != abs(r[1]):
                g, h = r
                # g h = 1  =>  g = h^-1
                subst[abs(g)] = [-h] if g > 0 else [h]
            else:
                continue
            live.discard(abs(r[0]))
            moves += 1
            changed = True
            break
        # resolve substitutions through each other
        for g in list(subst):
            subst[g] = apply(subst[g])
    remaining = [r for r in (apply(r) for r in relators) if r]
    return not live, len(remaining)


def certify(p: FinitePoset, strategy: str = "delta+beat", cross_check: bool = False) -> HomotopyCertificate:
    """Closure, then collapse, then homology with a pi_1 heuristic.

    With ``cross_check`` the exact Betti numbers of the full order complex
    are always attached, so the positive certificates can be compared with
    the homology backend.
    """
    def attach(cert):
        if cross_check and cert.betti is None:
            cert.betti = homology(order_complex(p))
        return cert

    if len(p) == 0:
        return HomotopyCertificate(NOT_CONTRACTIBLE, betti=[], note="empty poset (b~_-1 = 1)")
    cert = closure_certificate(p, strategy)
    if cert is not None:
        return attach(cert)
    alive, steps = closure_reduce(p, strategy)
    core = p.subposet(alive)
    cx = order_complex(core)
    cert = collapse_certificate(cx)
    if cert is not None:
        cert.closure_steps = [s.as_tuple() for s in steps]
        return attach(cert)
    betti = homology(cx)
    if any(betti):
        return HomotopyCertificate(NOT_CONTRACTIBLE, betti=homology(order_complex(p)),
                                   closure_steps=[s.as_tuple() for s in steps])
    trivial, left = fundamental_group_trivial(cx)
    if trivial and _unit_pivot_acyclic(cx):
        return attach(HomotopyCertificate(HOMOLOGY, betti=betti, pi1_relators=0,
                                          closure_steps=[s.as_tuple() for s in steps]))
    return HomotopyCertificate(INCONCLUSIVE, betti=betti, pi1_relators=left,
                               closure_steps=[s.as_tuple() for s in steps])


def timed_certify(p: FinitePoset, **kw) -> tuple[HomotopyCertificate, float]:
    t0 = time.perf_counter()
    cert = certify(p, **kw)
    return cert, (time.perf_counter() - t0) * 1000.0
