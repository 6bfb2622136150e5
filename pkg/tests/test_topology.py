import random

import pytest
from hypothesis import given, settings, strategies as st

from braidlab import (
    FinitePoset,
    braid_canonical,
    build_word_poset,
    certify,
    closure_certificate,
    collapse_certificate,
    enumerate_braids,
    homology,
    order_complex,
    parse_diagram,
)
from braidlab.topology import (
    CLOSURE,
    INCONCLUSIVE,
    NOT_CONTRACTIBLE,
    SimplicialComplex,
    check_closure_step,
    closure_reduce,
    fundamental_group_trivial,
    reduced_betti_minus_one,
)
from oracles import DIAGRAMS

RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
       (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
TORUS = ([tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))) for i in range(7)]
         + [tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))) for i in range(7)])


def complex_of(facets, n):
    return SimplicialComplex.from_facets(range(n), facets)


def face_poset(c):
    faces = sorted({f for fs in c.faces for f in fs}, key=lambda f: (len(f), f))
    return FinitePoset.from_leq(faces, lambda x, y: set(x) < set(y))


@pytest.mark.parametrize("facets, n, q, gf2", [
    ([(0,), (1,)], 2, [1], [1]),
    ([(0, 1), (1, 2), (0, 2)], 3, [0, 1], [0, 1]),
    ([(0, 1, 2)], 3, [0, 0, 0], [0, 0, 0]),
    ([f for f in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]], 4, [0, 0, 1], [0, 0, 1]),
    (TORUS, 7, [0, 2, 1], [0, 2, 1]),
    (RP2, 6, [0, 0, 0], [0, 1, 1]),
])
def test_homology_of_known_spaces(facets, n, q, gf2):
    c = complex_of(facets, n)
    assert homology(c) == q
    assert homology(c, "GF2") == gf2


def test_empty_complex():
    c = SimplicialComplex([], [])
    assert homology(c) == [] and reduced_betti_minus_one(c) == 1
    assert certify(FinitePoset([], [])).verdict == NOT_CONTRACTIBLE


def test_collapse():
    assert collapse_certificate(complex_of([(0, 1, 2)], 3)) is not None
    assert collapse_certificate(complex_of([(0, 1), (1, 2), (0, 2)], 3)) is None
    assert fundamental_group_trivial(complex_of([(0, 1, 2)], 3))[0]


def test_projective_plane_is_not_certified():
    # rationally acyclic, yet pi_1 = Z/2: the certifier must not claim contractibility
    cert = certify(face_poset(complex_of(RP2, 6)))
    assert cert.verdict == INCONCLUSIVE and not cert.contractible


def test_torus_is_not_contractible():
    cert = certify(face_poset(complex_of(TORUS, 7)))
    assert cert.verdict == NOT_CONTRACTIBLE and cert.betti == [0, 2, 1]


def test_two_point_antichain():
    cert = certify(FinitePoset(["a", "b"], [[], []]))
    assert cert.verdict == NOT_CONTRACTIBLE and cert.betti == [1]


def test_a2_word_s_of_delta(a2):
    cert = certify(build_word_poset(a2, braid_canonical(a2, "sts"), "s"))
    assert cert.verdict == NOT_CONTRACTIBLE and cert.betti == [1, 0]


def test_collapse_on_word_poset(a2):
    P = build_word_poset(a2, braid_canonical(a2, "stst"), "r")
    assert collapse_certificate(order_complex(P)) is not None
    assert homology(order_complex(P)) == [0] * (order_complex(P).dim + 1)


@pytest.mark.parametrize("name", ["A2", "B2", "A3", "Ã2"])
def test_closure_steps_replay(name):
    d = parse_diagram(DIAGRAMS[name])
    for level in enumerate_braids(d, 4)[1:]:
        for b in level:
            for v in ("full", "r", "s", "fr"):
                P = build_word_poset(d, b, v)
                if not len(P):
                    continue
                alive = set(range(len(P)))
                final, steps = closure_reduce(P)
                for step in steps:
                    assert check_closure_step(P, alive, step), (b, v, step)
                    alive -= set(step.mapping)
                assert sorted(alive) == final


def test_bad_closure_step_rejected():
    chain = FinitePoset.from_leq(range(3), lambda x, y: x <= y)
    from braidlab.topology import ClosureStep
    assert check_closure_step(chain, {0, 1, 2}, ClosureStep("up", {0: 1}))
    assert not check_closure_step(chain, {0, 1, 2}, ClosureStep("up", {1: 0}))
    assert not check_closure_step(chain, {0, 1, 2}, ClosureStep("down", {0: 2, 2: 1}))


def test_strategies(a3):
    P = build_word_poset(a3, braid_canonical(a3, "stsuts"), "r")
    for strategy in ("delta", "beat", "delta+beat"):
        alive, _ = closure_reduce(P, strategy)
        assert alive
    assert closure_certificate(P).verdict == CLOSURE
    with pytest.raises(ValueError):
        closure_reduce(P, "magic")


def random_poset(seed, n):
    rng = random.Random(seed)
    rel = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3}
    up = [set() for _ in range(n)]
    for i in reversed(range(n)):
        for j in range(i + 1, n):
            if (i, j) in rel:
                up[i] |= {j} | up[j]
    return FinitePoset(list(range(n)), up)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 9))
def test_certificates_agree_with_homology(seed, n):
    P = random_poset(seed, n)
    assert P.is_partial_order()
    cert = certify(P, cross_check=True)
    full = homology(order_complex(P))
    assert cert.betti == full or not cert.contractible
    if cert.contractible:
        assert not any(full)
    if cert.verdict == NOT_CONTRACTIBLE:
        assert any(full)
    # the order complex of the dual poset is the same complex
    assert certify(P.dual()).contractible == cert.contractible or INCONCLUSIVE in (
        cert.verdict, certify(P.dual()).verdict)


@pytest.mark.parametrize("name", ["A2", "B2", "A3", "Ã2"])
def test_subposets_between_delta_and_full(name):
    from braidlab.campaign import CampaignConfig, _subposet_samples

    d = parse_diagram(DIAGRAMS[name])
    cfg = CampaignConfig(seed=3)
    for level in enumerate_braids(d, 4)[1:]:
        for b in level:
            for rec in _subposet_samples(d, b, cfg):
                assert rec["status"] == "pass", rec


def test_dual_has_same_homology(a3):
    P = build_word_poset(a3, braid_canonical(a3, "stsu"), "s")
    assert homology(order_complex(P)) == homology(order_complex(P.dual()))
