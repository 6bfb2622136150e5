"""Coxeter groups, positive braid monoids, factorization posets and partial categories."""

from .braid import (
    PosBraidElement,
    braid_canonical,
    braid_identity,
    descent_set,
    enumerate_braids,
    enumerate_prefixes,
    group_image,
    is_delta_element,
    is_finite_type_braid,
    is_reduced,
    left_divides,
    left_quotient,
    maximal_reduced_prefix,
    multiply_braid,
    reduced_lift,
    verify_prefix_corollary,
)
from .coxeter import (
    INF,
    CoxeterDiagram,
    CoxeterElement,
    coxeter_type,
    enumerate_elements,
    finite_type_closure,
    group_order,
    identity,
    inverse,
    is_finite_type,
    is_reduced_sequence,
    load_diagram,
    longest_element,
    multiply_cox,
    parse_diagram,
    prefix_leq_cox,
    reduce_word,
)
from .errors import *  # noqa: F401,F403
from .partial import (
    PartialCategory,
    audit_axioms,
    build_presentation,
    check_nondegenerate_hypothesis,
    fiber_check,
    necklace_fiber,
    presentation_pi0,
    spine_category,
)
from .poset import FinitePoset, build_word_poset, slice_poset
from .topology import (
    HomotopyCertificate,
    certify,
    closure_certificate,
    collapse_certificate,
    homology,
    order_complex,
)

__version__ = "0.1.0"
