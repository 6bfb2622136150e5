"""JSON, TSV and DOT output."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .coxeter import CoxeterDiagram
from .poset import ChainPoset, FinitePoset
from .topology import HomotopyCertificate

SCHEMA = "braidlab-report/1"

TSV_COLUMNS = ("check", "diagram", "b_canonical", "variant", "verdict", "betti",
               "elapsed_ms", "certificate_kind", "status")


def diagram_id(d: CoxeterDiagram) -> str:
    return "; ".join(d.to_text().strip().splitlines())


def certificate_record(d: CoxeterDiagram, b_word, variant: str, cert: HomotopyCertificate,
                       elapsed_ms: float, **extra) -> dict:
    rec = {
        "diagram": diagram_id(d),
        "b_canonical": d.format(b_word),
        "variant": variant,
        "verdict": cert.verdict,
        "betti": cert.betti,
        "elapsed_ms": round(elapsed_ms, 3),
        "certificate_kind": cert.kind,
    }
    rec.update(extra)
    return rec


def envelope(command: str, d: CoxeterDiagram | None, **body) -> dict:
    out = {"schema": SCHEMA, "command": command}
    if d is not None:
        out["diagram"] = diagram_id(d)
    out.update(body)
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False, sort_keys=False)


def write_json(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(report) + "\n", encoding="utf-8")


def write_tsv(records: Iterable[dict], path: str | Path) -> None:
    lines = ["\t".join(TSV_COLUMNS)]
    for r in records:
        row = []
        for col in TSV_COLUMNS:
            v = r.get(col, "")
            if col == "variant" and v == "":
                v = r.get("kind", "")  # presentation checks are keyed by S_I kind
            row.append(json.dumps(v) if isinstance(v, list) else str(v))
        lines.append("\t".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def poset_dot(p: FinitePoset, name: str = "poset", labels: list[str] | None = None) -> str:
    """Hasse diagram, edges drawn from each element to its upper covers."""
    if labels is None:
        if isinstance(p, ChainPoset):
            labels = [p.chain_label(i) for i in range(len(p))]
        else:
            labels = [str(x) for x in p.labels]
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    for i, lab in enumerate(labels):
        lines.append(f"  n{i} [label={_quote(lab)}];")
    for i, j in p.hasse_edges():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
