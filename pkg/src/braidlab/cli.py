"""Command-line driver: single queries and full verification campaigns."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import braid, coxeter
from .braid import PosBraidElement
from .campaign import CampaignConfig, run_campaign
from .errors import BraidlabError
from .partial import audit_axioms, build_presentation, fiber_check
from .poset import VARIANTS, build_word_poset
from .reports import (
    certificate_record,
    dumps,
    envelope,
    poset_dot,
    write_json,
    write_tsv,
)
from .topology import timed_certify


def _diagram(args) -> coxeter.CoxeterDiagram:
    return coxeter.load_diagram(args.diagram, class_budget=args.budget_class)


def _braid(d, args) -> PosBraidElement:
    return braid.braid_canonical(d, d.word(args.word))


def _emit(report: dict, out: str | None) -> None:
    if out:
        write_json(report, out)
    else:
        print(dumps(report))


def cmd_normal_form(args) -> int:
    d = _diagram(args)
    w = d.word(args.word)
    if args.target == "group":
        res = coxeter.reduce_word(d, w).word
    else:
        res = braid.braid_canonical(d, w).word
    print(f"{d.format(res)} (length {len(res)})")
    return 0


def cmd_reduced_lift(args) -> int:
    d = _diagram(args)
    b = braid.reduced_lift(d, coxeter.reduce_word(d, d.word(args.word)))
    print(f"{d.format(b.word)} (length {b.length})")
    return 0


def cmd_prefixes(args) -> int:
    d = _diagram(args)
    for p in braid.enumerate_prefixes(d, _braid(d, args)):
        print(d.format(p.word))
    return 0


def cmd_descents(args) -> int:
    d = _diagram(args)
    L = braid.descent_set(d, _braid(d, args))
    print(" ".join(d.format_subset(L)))
    return 0


def cmd_max_reduced_prefix(args) -> int:
    d = _diagram(args)
    p = braid.maximal_reduced_prefix(d, _braid(d, args))
    print(f"{d.format(p.word)} (length {p.length})")
    return 0


def _certify_report(command: str, args, with_dot: bool) -> int:
    d = _diagram(args)
    b = _braid(d, args)
    variant = args.variant or "full"
    P = build_word_poset(d, b, variant, args.budget_poset)
    cert, ms = timed_certify(P, cross_check=True)
    record = certificate_record(d, b.word, P.variant, cert, ms,
                                elements=len(P), hasse_edges=len(P.hasse_edges()))
    if with_dot and args.dot:
        Path(args.dot).write_text(
            poset_dot(P, f"Word_{P.variant}({d.format(b.word)})"), encoding="utf-8")
    _emit(envelope(command, d, instances=[record]), args.out)
    return 0


def cmd_poset(args) -> int:
    return _certify_report("poset", args, with_dot=True)


def cmd_certify(args) -> int:
    return _certify_report("certify", args, with_dot=False)


def _fault(text: str | None):
    if not text:
        return None
    parts = text.split(",")
    if len(parts) != 3:
        raise SystemExit("--inject-fault expects A,B,C")
    return tuple(p.strip() for p in parts)


def cmd_audit_axioms(args) -> int:
    d = _diagram(args)
    C = build_presentation(d, args.kind, args.max_len if args.max_len is not None else 4)
    fault = _fault(args.inject_fault)
    if fault is not None:
        C = C.with_override(*(d.word(x) for x in fault))
    rep = audit_axioms(C, max_n=4)
    _emit(envelope("audit-axioms", d, kind=args.kind, cutoff=C.cutoff,
                   passed=rep.passed, detail=rep.as_dict()), args.out)
    return 0 if rep.passed else 1


def cmd_fiber_check(args) -> int:
    d = _diagram(args)
    rep = fiber_check(d, _braid(d, args), args.kind)
    _emit(envelope("fiber-check", d, passed=rep.passed, detail=rep.as_dict()), args.out)
    return 0 if rep.passed else 1


def cmd_verify(args) -> int:
    cfg = CampaignConfig(
        diagram_path=args.diagram,
        max_len=args.max_len if args.max_len is not None else 6,
        variants=tuple(args.variant) if args.variant else VARIANTS,
        class_budget=args.budget_class,
        poset_budget=args.budget_poset,
        jobs=args.jobs,
        seed=args.seed,
        out=args.out,
        fault=_fault(args.inject_fault),
    )
    report, code = run_campaign(cfg)
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(report, out / "report.json")
        write_tsv(report["instances"], out / "summary.tsv")
    s = report["summary"]
    counts = ", ".join(f"{k}={v}" for k, v in sorted(s["counts"].items()))
    print(f"{report['diagram'] or '(empty)'}: {report['elements']} elements, {counts}")
    for r in report["instances"]:
        if r["status"] in ("fail", "inconclusive"):
            print(f"  {r['status'].upper()} {r['check']} {r.get('b_canonical', '')} "
                  f"{r.get('variant', r.get('kind', ''))}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--diagram", required=True, help="diagram file")
    common.add_argument("--budget-class", type=int, default=coxeter.DEFAULT_CLASS_BUDGET)
    common.add_argument("--budget-poset", type=int, default=50_000)
    common.add_argument("--out", help="output file (directory for verify)")

    word = argparse.ArgumentParser(add_help=False)
    word.add_argument("--word", default="", help='word such as "sts"; "" or 1 is the identity')

    parser = argparse.ArgumentParser(prog="braidlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-form", parents=[common, word])
    p.add_argument("--target", choices=("group", "monoid"), default="group")
    p.set_defaults(func=cmd_normal_form)

    for name, func in (("reduced-lift", cmd_reduced_lift), ("prefixes", cmd_prefixes),
                       ("descents", cmd_descents), ("max-reduced-prefix", cmd_max_reduced_prefix)):
        sub.add_parser(name, parents=[common, word]).set_defaults(func=func)

    for name, func in (("poset", cmd_poset), ("certify", cmd_certify)):
        p = sub.add_parser(name, parents=[common, word])
        p.add_argument("--variant", choices=VARIANTS + ("Δ",), default="full")
        if name == "poset":
            p.add_argument("--dot", help="write the Hasse diagram here")
        p.set_defaults(func=func)

    p = sub.add_parser("audit-axioms", parents=[common])
    p.add_argument("--kind", choices=("fin", "full"), default="fin")
    p.add_argument("--max-len", type=int, help="length cutoff L (default 4)")
    p.add_argument("--inject-fault", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_audit_axioms)

    p = sub.add_parser("fiber-check", parents=[common, word])
    p.add_argument("--kind", choices=("fin", "full"), default="fin")
    p.set_defaults(func=cmd_fiber_check)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--max-len", type=int, help="braid length bound (default 6)")
    p.add_argument("--variant", action="append", choices=VARIANTS + ("Δ",),
                   help="repeatable; default all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BraidlabError, ValueError, OSError) as exc:
        print(f"braidlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
