import itertools

import pytest

from braidlab import (
    audit_axioms,
    braid_canonical,
    braid_identity,
    build_presentation,
    build_word_poset,
    certify,
    check_nondegenerate_hypothesis,
    enumerate_braids,
    fiber_check,
    necklace_fiber,
    parse_diagram,
    presentation_pi0,
    spine_category,
)
from braidlab.errors import HypothesisFailed
from braidlab.partial import (
    FiberIndex,
    PartialCategory,
    composite,
    compositions,
    contract_degenerate,
    nondegenerate_spines,
    parenthesizations,
    parenthesized_composite,
    spine_product,
)
from oracles import DIAGRAMS


def test_arrows(a2, affine_a1):
    assert len(build_presentation(a2, "fin", 4).arrows) == 6
    assert build_presentation(affine_a1, "fin", 4).arrows == [(), (0,), (1,)]
    full = build_presentation(affine_a1, "full", 4)
    assert len(full.arrows) == 1 + 2 + 2 + 2 + 2
    with pytest.raises(ValueError):
        build_presentation(a2, "half", 3)


def test_compose_in_sequence_order(a2):
    C = build_presentation(a2, "fin", 3)
    s, t = a2.word("s"), a2.word("t")
    assert C.compose(s, t) == a2.word("st")
    assert C.compose(t, s) == a2.word("ts")
    assert C.compose(a2.word("st"), s) == a2.word("sts")
    assert C.compose(s, s) is None
    assert C.compose(a2.word("sts"), s) is None
    assert C.label(a2.word("sts")) == "α_sts"


def test_cutoff_truncates(a3):
    C = build_presentation(a3, "fin", 2)
    assert max(map(len, C.arrows)) == 2
    assert C.compose(a3.word("st"), a3.word("u")) is None


def test_parenthesizations():
    # Catalan numbers
    assert [len(list(parenthesizations(n))) for n in range(1, 7)] == [1, 1, 2, 5, 14, 42]
    assert list(parenthesizations(0)) == []


@pytest.mark.parametrize("kind", ["fin", "full"])
def test_parenthesization_independence(a3, kind):
    C = build_presentation(a3, kind, 4)
    arrows = [a for a in C.arrows if a]
    for n in (2, 3, 4):
        for seq in itertools.product(arrows, repeat=n):
            if sum(map(len, seq)) > 4:
                continue
            values = {parenthesized_composite(C, seq, t) for t in parenthesizations(n)}
            assert len(values) == 1
            v = values.pop()
            assert (v is not None) == C.is_simplex(seq)


def test_audit_passes_and_fault_is_caught(diagram):
    for kind in ("fin", "full"):
        assert audit_axioms(build_presentation(diagram, kind, 3)).passed
    C = build_presentation(diagram, "fin", 3)
    s, t = (0,), (1,)
    bad = C.with_override(s, t, (1, 0))
    rep = audit_axioms(bad)
    assert not rep.passed
    assert any(v["axiom"] == "P2" for v in rep.violations)


def test_ambiguous_table_is_reported():
    C = PartialCategory([(), (0,), (1,)],
                        [((), (0,), (0,)), ((0,), (), (0,)), ((), (1,), (1,)),
                         ((1,), (), (1,)), ((), (), ()), ((0,), (0,), ()), ((0,), (0,), (1,))])
    rep = audit_axioms(C, max_n=3)
    assert any(v["axiom"] == "P1" for v in rep.violations)
    with pytest.raises(ValueError):
        C.compose((0,), (0,))
    assert not check_nondegenerate_hypothesis(C)


def test_nondegenerate_hypothesis(diagram):
    C = build_presentation(diagram, "full", 3)
    assert check_nondegenerate_hypothesis(C)
    SC = spine_category(C, 2, nondegenerate=False)
    ND = nondegenerate_spines(SC)
    assert all(all(a for a in o) for o in ND.objects)


def test_hypothesis_failure_raises():
    # an involution whose square is the identity
    C = PartialCategory([(), (0,)], [((), (0,), (0,)), ((0,), (), (0,)), ((), (), ()),
                                     ((0,), (0,), ())])
    SC = spine_category(C, 2)
    with pytest.raises(HypothesisFailed):
        nondegenerate_spines(SC)


@pytest.mark.parametrize("nondegenerate", [True, False])
def test_spine_category_is_a_category(a2, nondegenerate):
    C = build_presentation(a2, "fin", 3)
    SC = spine_category(C, 3, nondegenerate=nondegenerate)
    for i in range(len(SC)):
        ident = SC.identity(i)
        assert ident in SC.morphisms(i, i)
    arrows = [m for ms in SC.hom.values() for m in ms]
    assert all(SC.is_valid(m) for m in arrows)
    by_source = {}
    for m in arrows:
        by_source.setdefault(m.source, []).append(m)
    for f in arrows:
        assert SC.compose(SC.identity(f.source), f) == f == SC.compose(f, SC.identity(f.target))
        for g in by_source.get(f.target, []):
            gf = SC.compose(f, g)
            assert SC.is_valid(gf) and gf in SC.morphisms(f.source, g.target)
            for h in by_source.get(g.target, []):
                assert SC.compose(gf, h) == SC.compose(f, SC.compose(g, h))
    # p is a functor to the one-object monoid: products agree along morphisms
    for (i, j) in SC.hom:
        assert spine_product(C, SC.objects[i]) == spine_product(C, SC.objects[j])


def test_contract_degenerate(a2):
    C = build_presentation(a2, "fin", 3)
    s = ((0,), (), (1,), ())
    assert contract_degenerate(C, s) == ((0,), (1,))
    assert composite(C, s) == a2.word("st")


def test_necklace_fiber(a2):
    C = build_presentation(a2, "fin", 3)
    s, t = a2.word("s"), a2.word("t")
    P = necklace_fiber(C, (s, t, s))
    assert sorted(P.labels) == sorted(compositions(3))
    assert P.labels[P.minimum()] == (1, 1, 1)
    assert certify(P).contractible
    Q = necklace_fiber(C, (s, s))
    assert Q.labels == [(1, 1)]


def test_fiber_examples(a2):
    b = braid_canonical(a2, "sts")
    for kind in ("fin", "full"):
        rep = fiber_check(a2, b, kind)
        assert rep.passed and rep.fiber_objects == rep.poset_objects == 7
    rep = fiber_check(a2, braid_canonical(a2, "stst"), "full")
    assert rep.passed and rep.fiber_objects == 13 and rep.element == "ssts"
    assert fiber_check(a2, braid_identity(a2), "fin").passed


def test_fiber_sizes_match_word_posets(affine_a1):
    for kind, variant in (("fin", "fr"), ("full", "r")):
        C = build_presentation(affine_a1, kind, 4)
        index = FiberIndex(C, 4)
        for level in enumerate_braids(affine_a1, 4):
            for b in level:
                assert len(index.fiber(b)) == len(build_word_poset(affine_a1, b, variant))


@pytest.mark.parametrize("name", sorted(DIAGRAMS))
def test_pi0(name):
    d = parse_diagram(DIAGRAMS[name])
    for kind in ("fin", "full"):
        rep = presentation_pi0(d, kind, 4)
        assert rep.passed, rep
        assert rep.components == [len(level) for level in enumerate_braids(d, 4)]


def test_spine_category_examples(a2):
    C = build_presentation(a2, "fin", 3)
    SC = spine_category(C, 3, nondegenerate=True, target=braid_canonical(a2, "sts"))
    assert len(SC) == 7
    one = spine_category(C, 1, nondegenerate=True)
    assert () in one.objects and len(one) == len(C.arrows)
    assert all(i == j for i, j in one.hom)
