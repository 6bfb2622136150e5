import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from braidlab import (
    DiagramMismatch,
    PosBraidElement,
    braid_canonical,
    braid_identity,
    descent_set,
    enumerate_braids,
    enumerate_elements,
    enumerate_prefixes,
    group_image,
    is_delta_element,
    is_finite_type,
    is_reduced,
    left_divides,
    left_quotient,
    maximal_reduced_prefix,
    multiply_braid,
    parse_diagram,
    reduce_word,
    reduced_lift,
    verify_prefix_corollary,
)
from braidlab.coxeter import braid_class
from oracles import DIAGRAMS, monoid_counts, shortlex_forms


@pytest.mark.parametrize("name", sorted(DIAGRAMS))
def test_monoid_growth_matches_oracle(name):
    d = parse_diagram(DIAGRAMS[name])
    assert [len(level) for level in enumerate_braids(d, 6)] == monoid_counts(d.matrix, 6)


def test_no_cancellation_of_squares(a2):
    assert braid_canonical(a2, "ss").word == (0, 0)
    assert braid_canonical(a2, "tst").word == a2.word("sts")
    assert braid_canonical(a2, "").length == 0


def test_braid_class_of_delta(a3):
    # Delta of A3 has 16 reduced words
    assert len(braid_class(a3, a3.word("stsuts"))) == 16


def test_free_monoid_divisibility(affine_a1):
    # no relations at all: divisibility is the prefix relation on words
    words = [w for n in range(5) for w in itertools.product(range(2), repeat=n)]
    for a, b in itertools.product(words, repeat=2):
        A, B = PosBraidElement(a, affine_a1), PosBraidElement(b, affine_a1)
        assert left_divides(affine_a1, A, B) == (b[:len(a)] == a)


def test_commuting_divisibility():
    d = parse_diagram("gens: s t")
    words = [w for n in range(5) for w in itertools.product(range(2), repeat=n)]
    for a, b in itertools.product(words, repeat=2):
        A, B = braid_canonical(d, a), braid_canonical(d, b)
        counts_leq = a.count(0) <= b.count(0) and a.count(1) <= b.count(1)
        assert left_divides(d, A, B) == counts_leq


def test_quotient(a2):
    b = braid_canonical(a2, "stst")
    assert left_quotient(a2, braid_canonical(a2, "s"), b) == braid_canonical(a2, "sts")
    assert left_quotient(a2, braid_canonical(a2, "t"), braid_canonical(a2, "ss")) is None
    assert left_quotient(a2, braid_identity(a2), b) == b


@pytest.mark.parametrize("name", sorted(DIAGRAMS))
def test_reduced_lift_is_a_section(name):
    d = parse_diagram(DIAGRAMS[name])
    for w in enumerate_elements(d, None, 5):
        b = reduced_lift(d, w)
        assert is_reduced(d, b) and b.length == w.length
        assert group_image(d, b) == w


def test_reduced_counts_match_group(diagram):
    forms = shortlex_forms(diagram.matrix, 5)
    per_len = [0] * 6
    for w in forms.values():
        per_len[len(w)] += 1
    reduced = [sum(is_reduced(diagram, b) for b in level) for level in enumerate_braids(diagram, 5)]
    assert reduced == per_len


def test_descents_and_prefixes(a2):
    b = braid_canonical(a2, "stst")
    assert descent_set(a2, b) == {0, 1}
    assert [p.word for p in enumerate_prefixes(a2, braid_canonical(a2, "sts"))] == [
        (), (0,), (1,), (0, 1), (1, 0), (0, 1, 0)]
    assert maximal_reduced_prefix(a2, b) == braid_canonical(a2, "sts")
    assert maximal_reduced_prefix(a2, braid_identity(a2)).length == 0
    assert maximal_reduced_prefix(a2, braid_canonical(a2, "sstt")) == braid_canonical(a2, "s")


def test_delta_elements(a2, affine_a1):
    assert is_delta_element(a2, braid_canonical(a2, "tst")) == {0, 1}
    assert is_delta_element(a2, braid_canonical(a2, "t")) == {1}
    assert is_delta_element(a2, braid_canonical(a2, "st")) is None
    assert is_delta_element(a2, braid_identity(a2)) == frozenset()
    assert is_delta_element(affine_a1, braid_canonical(affine_a1, "st")) is None


def test_prefix_corollary_on_affine(affine_a1):
    d = parse_diagram(DIAGRAMS["Ã2"])
    for level in enumerate_braids(d, 4):
        for b in level:
            rep = verify_prefix_corollary(d, b)
            assert rep.passed, rep
            assert is_finite_type(d, descent_set(d, b))
    rep = verify_prefix_corollary(affine_a1, braid_canonical(affine_a1, "stst"))
    assert rep.passed and rep.descents == ["s"]


def test_mismatch(a2, affine_a1):
    with pytest.raises(DiagramMismatch):
        multiply_braid(a2, braid_canonical(a2, "s"), braid_canonical(affine_a1, "s"))


words = st.lists(st.integers(0, 2), max_size=7).map(tuple)


@settings(max_examples=150, deadline=None)
@given(words, words)
def test_cancellative_monoid(a, b):
    d = parse_diagram(DIAGRAMS["Ã2"])
    x, y = braid_canonical(d, a), braid_canonical(d, b)
    xy = multiply_braid(d, x, y)
    assert xy.length == x.length + y.length
    assert left_divides(d, x, xy)
    assert left_quotient(d, x, xy) == y
    assert braid_canonical(d, xy.word) == xy


@settings(max_examples=100, deadline=None)
@given(words, st.randoms(use_true_random=False))
def test_canonical_form_invariant_under_braid_moves(a, rnd):
    d = parse_diagram(DIAGRAMS["A3"])
    w = a
    for _ in range(10):
        moves = list(d.braid_moves(w))
        if moves:
            w = rnd.choice(moves)
    assert braid_canonical(d, w) == braid_canonical(d, a)
    assert reduce_word(d, w) == reduce_word(d, a)


def test_maximal_reduced_prefix_divides(a3):
    rng = random.Random(7)
    for _ in range(40):
        b = braid_canonical(a3, [rng.randrange(3) for _ in range(rng.randrange(7))])
        p = maximal_reduced_prefix(a3, b)
        assert is_reduced(a3, p) and left_divides(a3, p, b)
        for q in enumerate_prefixes(a3, b):
            if is_reduced(a3, q):
                assert left_divides(a3, q, p)
