"""Batch verification over every braid element up to a length bound."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .braid import (
    PosBraidElement,
    enumerate_braids,
    is_delta_element,
    verify_prefix_corollary,
)
from .coxeter import CoxeterDiagram, load_diagram
from .errors import BraidlabError
from .partial import (
    FiberIndex,
    audit_axioms,
    build_presentation,
    fiber_check,
    presentation_pi0,
)
from .poset import VARIANTS, build_word_poset, normalize_variant, quotient_predicate
from .reports import certificate_record, diagram_id, envelope
from .topology import INCONCLUSIVE, certify

PASS, FAIL, OBSERVED, INCONCLUSIVE_STATUS = "pass", "fail", "observed", "inconclusive"


@dataclass
class CampaignConfig:
    diagram_path: str | None = None
    max_len: int = 6
    variants: tuple[str, ...] = VARIANTS
    class_budget: int = 200_000
    poset_budget: int = 50_000
    jobs: int = 1
    seed: int = 0
    out: str | None = None
    samples_per_b: int = 20
    sample_max_len: int = 4
    fiber_max_len: int = 5
    audit_len: int = 4
    fault: tuple[str, str, str] | None = None  # test hook: override one composite

    def __post_init__(self):
        self.variants = tuple(normalize_variant(v) for v in self.variants)
        if self.class_budget <= 0 or self.poset_budget <= 0:
            raise ValueError("budgets must be positive")
        if self.max_len < 0 or self.jobs < 1:
            raise ValueError("max_len must be >= 0 and jobs >= 1")


def _expect_contractible(d: CoxeterDiagram, b: PosBraidElement, variant: str) -> bool:
    if variant != "s":
        return True
    return b.length > 0 and is_delta_element(d, b) is None


def _status(cert, expected: bool) -> str:
    if cert.verdict == INCONCLUSIVE:
        return INCONCLUSIVE_STATUS
    if cert.contractible and cert.betti is not None and any(cert.betti):
        return FAIL  # the certificate backends disagree
    if expected:
        return PASS if cert.contractible else FAIL
    return OBSERVED


_FIBER_CACHE: dict = {}


def _fiber_index(d: CoxeterDiagram, kind: str, L: int):
    key = (d, kind, L)
    hit = _FIBER_CACHE.get(key)
    if hit is None:
        C = build_presentation(d, kind, L)
        hit = _FIBER_CACHE.setdefault(key, (C, FiberIndex(C, L)))
    return hit


def instances_for(d: CoxeterDiagram, b: PosBraidElement, cfg: CampaignConfig) -> list[dict]:
    """Every per-element check of the campaign for one braid element."""
    out = []
    fmt = d.format(b.word)
    t0 = time.perf_counter()
    try:
        rep = verify_prefix_corollary(d, b)
        out.append({"check": "prefix-corollary", "b_canonical": fmt, "length": b.length,
                    "status": PASS if rep.passed else FAIL, "detail": rep.as_dict(),
                    "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)})
    except BraidlabError as exc:
        out.append({"check": "prefix-corollary", "b_canonical": fmt, "length": b.length,
                    "status": FAIL, "error": repr(exc)})

    for variant in cfg.variants:
        t0 = time.perf_counter()
        try:
            P = build_word_poset(d, b, variant, cfg.poset_budget)
            cert = certify(P, cross_check=True)
        except BraidlabError as exc:
            out.append({"check": "certify", "b_canonical": fmt, "length": b.length,
                        "variant": variant, "status": FAIL, "error": repr(exc)})
            continue
        ms = (time.perf_counter() - t0) * 1000
        expected = _expect_contractible(d, b, variant)
        out.append(certificate_record(
            d, b.word, variant, cert, ms, check="certify", length=b.length,
            elements=len(P), expected="Contractible" if expected else "any",
            status=_status(cert, expected)))

    if b.length <= cfg.sample_max_len and cfg.samples_per_b > 0:
        out.extend(_subposet_samples(d, b, cfg))

    if b.length <= min(cfg.fiber_max_len, cfg.max_len):
        L = max(1, min(cfg.fiber_max_len, cfg.max_len))
        for kind in ("fin", "full"):
            t0 = time.perf_counter()
            C, index = _fiber_index(d, kind, L)
            rep = fiber_check(d, b, kind, C, index)
            out.append({"check": "fiber", "b_canonical": fmt, "length": b.length,
                        "kind": kind, "status": PASS if rep.passed else FAIL,
                        "verdict": rep.verdict, "detail": rep.as_dict(),
                        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)})
    return out


def _subposet_samples(d: CoxeterDiagram, b: PosBraidElement, cfg: CampaignConfig) -> list[dict]:
    """Random full subposets squeezed between Word_delta(b) and Word(b)."""
    full = build_word_poset(d, b, "full", cfg.poset_budget)
    is_delta = quotient_predicate(d, "delta")
    base = [i for i, c in enumerate(full.chains) if all(is_delta(q) for q in c.quotients)]
    rest = [i for i in range(len(full)) if i not in set(base)]
    rng = random.Random(f"{cfg.seed}:{d.format(b.word)}")
    out = []
    for k in range(cfg.samples_per_b):
        keep = base + [i for i in rest if rng.random() < 0.5]
        t0 = time.perf_counter()
        cert = certify(full.subposet(keep), cross_check=True)
        ms = (time.perf_counter() - t0) * 1000
        out.append(certificate_record(
            d, b.word, "sample", cert, ms, check="subposet-sample", length=b.length,
            sample=k, seed=cfg.seed, elements=len(keep), expected="Contractible",
            status=_status(cert, True)))
    return out


def _global_checks(d: CoxeterDiagram, cfg: CampaignConfig) -> list[dict]:
    out = []
    L = min(cfg.audit_len, cfg.max_len)
    if L >= 1:
        for kind in ("fin", "full"):
            C = build_presentation(d, kind, L)
            if cfg.fault is not None and kind == "fin":
                a, b, c = (d.word(x) for x in cfg.fault)
                C = C.with_override(a, b, c)
            rep = audit_axioms(C, max_n=4)
            out.append({"check": "audit", "kind": C.kind, "cutoff": L,
                        "status": PASS if rep.passed else FAIL, "detail": rep.as_dict()})
    L = min(cfg.fiber_max_len, cfg.max_len)
    if L >= 1:
        for kind in ("fin", "full"):
            rep = presentation_pi0(d, kind, L)
            out.append({"check": "pi0", "kind": kind, "cutoff": L,
                        "status": PASS if rep.passed else FAIL, "detail": rep.as_dict()})
    return out


def _worker(args) -> list[dict]:
    state, words, cfg = args
    d = CoxeterDiagram(state["generators"], state["matrix"], class_budget=cfg.class_budget)
    records = []
    for w in words:
        records.extend(instances_for(d, PosBraidElement(w, d), cfg))
    return records


def _sort_key(r: dict):
    return (r.get("check", ""), r.get("length", -1), r.get("b_canonical", ""),
            r.get("variant", r.get("kind", "")), r.get("sample", -1))


def run_campaign(cfg: CampaignConfig, d: CoxeterDiagram | None = None) -> tuple[dict, int]:
    if d is None:
        if cfg.diagram_path is None:
            raise ValueError("no diagram given")
        d = load_diagram(cfg.diagram_path, class_budget=cfg.class_budget)
    t0 = time.perf_counter()
    elements = [b.word for level in enumerate_braids(d, cfg.max_len) for b in level]
    state = {"generators": d.generators, "matrix": d.matrix}
    if cfg.jobs > 1 and len(elements) > 1:
        chunks = [elements[i::cfg.jobs] for i in range(cfg.jobs)]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            parts = pool.map(_worker, [(state, c, cfg) for c in chunks])
            records = [r for part in parts for r in part]
    else:
        records = []
        for w in elements:
            records.extend(instances_for(d, PosBraidElement(w, d), cfg))
    records.extend(_global_checks(d, cfg))
    did = diagram_id(d)
    for r in records:
        r.setdefault("diagram", did)
    records.sort(key=_sort_key)
    counts: dict[str, int] = {}
    for r in records:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    failures = counts.get(FAIL, 0) + counts.get(INCONCLUSIVE_STATUS, 0)
    config = asdict(cfg)
    config["variants"] = list(cfg.variants)
    report = envelope("verify", d, config=config, elements=len(elements),
                      summary={"counts": counts, "failures": failures,
                               "elapsed_s": round(time.perf_counter() - t0, 3)},
                      instances=records)
    return report, (0 if failures == 0 else 1)
