"""Rendering of results as JSON, markdown and CSV.

Every document is a dict with a "kind", scalar "meta" fields, a list of
flat "rows" and optional nested "details". JSON carries everything with
sorted keys; markdown and CSV show the rows.

This module provides:
- strata_document, report_document, diff_document, oracle_document,
  invariants_document: documents for each CLI command
- render: a document in one of the output formats
- write_document: atomic write of a rendered document
"""

import contextlib
import csv
import io
import json
import logging
import os
import tempfile
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from jordanstrata.affine_diagram import ExtendedDiagram, IsogenyAction
from jordanstrata.classify import StratumReport
from jordanstrata.config import OutputFormat
from jordanstrata.coxclass import StratumOrbit
from jordanstrata.models import NodeSet
from jordanstrata.subdiagram import marks_short_roots, pattern_of
from jordanstrata.tables import TableDiff

logger = logging.getLogger(__name__)

Document = dict[str, Any]


def format_nodes(nodes: NodeSet) -> str:
    """Render a node set as "{1,3}"."""
    return "{" + ",".join(str(i) for i in nodes) + "}"


def _nodes_list(sets: Iterable[NodeSet]) -> list[list[int]]:
    return [list(s) for s in sets]


def _document(
    kind: str,
    meta: dict[str, Any],
    rows: list[dict[str, Any]],
    details: dict[str, Any] | None = None,
) -> Document:
    return {"kind": kind, "meta": meta, "rows": rows, "details": details or {}}


def strata_document(
    extdiag: ExtendedDiagram, K: IsogenyAction, orbits: Sequence[StratumOrbit]
) -> Document:
    """List the strata as K-orbits of Coxeter classes, with ids c0, c1, ..."""
    mark_short = marks_short_roots(extdiag.base_type)
    rows = [
        {
            "id": f"c{k}",
            "rep": format_nodes(orbit.rep),
            "pattern": pattern_of(extdiag.diagram, orbit.rep, mark_short),
            "dimension": extdiag.rank - len(orbit.rep),
            "classes": len(orbit.classes),
            "members": len(orbit.members),
        }
        for k, orbit in enumerate(orbits)
    ]
    details = {"members": {f"c{k}": _nodes_list(o.members) for k, o in enumerate(orbits)}}
    meta = {"type": str(extdiag.base_type), "isogeny": K.selector, "strata": len(orbits)}
    return _document("strata", meta, rows, details)


def _optional(value: Any) -> Any:
    if value is None:
        return None
    return getattr(value, "value", value)


def report_document(report: StratumReport) -> Document:
    """Render a StratumReport; counterparts and vertex conditions go to details."""
    stratum = report.stratum
    row = {
        "rep": format_nodes(report.rep),
        "pattern": report.pattern,
        "dimension": stratum.dimension,
        "sigma_size": report.sigma_size,
        "class_size": report.class_size,
        "normal_codim1": report.normal_codim1,
        "unibranch": report.unibranch_minimal.value,
        "normal_generic": _optional(report.normal_generic),
        "normal_bytype": report.normal_bytype,
        "smooth": report.smooth.value,
        "rules": ";".join(report.rules),
    }
    details = {
        "sigma": _nodes_list(report.sigma),
        "minimal_vertices": list(report.minimal_vertices),
        "vertex_conditions": {str(j): ok for j, ok in report.vertex_conditions},
        "counterparts": [
            {
                "vertex": c.counterpart.vertex,
                "subset": list(c.counterpart.subset),
                "group_order": c.counterpart.group.order,
                "verdict": c.result.verdict.value,
                "rule": c.result.rule,
            }
            for c in report.counterparts
        ],
    }
    meta = {"type": str(stratum.diagram.base_type), "isogeny": stratum.K.selector}
    return _document("stratum-report", meta, [row], details)


def reports_document(reports: Sequence[StratumReport]) -> Document:
    """Several reports of one (type, isogeny), e.g. from an ambiguous pattern."""
    documents = [report_document(r) for r in reports]
    meta = dict(documents[0]["meta"]) if documents else {}
    meta["matches"] = len(documents)
    rows = [row for d in documents for row in d["rows"]]
    details = {d["rows"][0]["rep"]: d["details"] for d in documents}
    return _document("stratum-reports", meta, rows, details)


def diff_document(diff: TableDiff, extdiag: ExtendedDiagram) -> Document:
    """Render a table diff, one row per stratum that is expected, regenerated or undecided."""
    mark_short = marks_short_roots(extdiag.base_type)
    reps = sorted(set(diff.expected) | set(diff.regenerated) | set(diff.undecided))
    rows = []
    for rep in reps:
        if rep in diff.missing:
            status = "missing"
        elif rep in diff.unexpected:
            status = "unexpected"
        elif rep in diff.undecided:
            status = "undecided"
        else:
            status = "ok"
        rows.append(
            {
                "rep": format_nodes(rep),
                "pattern": pattern_of(extdiag.diagram, rep, mark_short),
                "expected": rep in diff.expected,
                "regenerated": rep in diff.regenerated,
                "status": status,
            }
        )
    meta = {
        "type": diff.cartan_type,
        "isogeny": diff.selector,
        "property": diff.prop,
        "source": diff.source,
        "matches": diff.matches,
        "exact": diff.exact,
        "missing": len(diff.missing),
        "unexpected": len(diff.unexpected),
        "undecided": len(diff.undecided),
    }
    return _document("table-diff", meta, rows)


def oracle_document(meta: dict[str, Any], rows: list[dict[str, Any]]) -> Document:
    """Wrap the rows of an oracle cross-check."""
    return _document("oracle-check", meta, rows)


def invariants_document(meta: dict[str, Any], rows: list[dict[str, Any]]) -> Document:
    """Wrap the rows of an invariant-theory check."""
    return _document("invariants-check", meta, rows)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _columns(rows: Sequence[dict[str, Any]]) -> list[str]:
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def to_json(document: Document) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_markdown(document: Document) -> str:
    """A heading, the meta fields as a list, and the rows as a table."""
    lines = [f"## {document['kind']}", ""]
    for key in sorted(document["meta"]):
        lines.append(f"- {key}: {_cell(document['meta'][key])}")
    rows = document["rows"]
    if rows:
        columns = _columns(rows)
        lines.append("")
        lines.append("| " + " | ".join(columns) + " |")
        lines.append("|" + "|".join("---" for _ in columns) + "|")
        for row in rows:
            lines.append("| " + " | ".join(_cell(row.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def to_csv(document: Document) -> str:
    """The rows as CSV with a header line."""
    rows = document["rows"]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=_columns(rows), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.items()})
    return buffer.getvalue()


def render(document: Document, fmt: OutputFormat = "json") -> str:
    """Render a document.

    Raises:
        ValueError: If the format is unknown.
    """
    if fmt == "json":
        return to_json(document)
    if fmt == "markdown":
        return to_markdown(document)
    if fmt == "csv":
        return to_csv(document)
    raise ValueError(f"Unknown output format: {fmt}")


def _atomic_write(file_path: Path, content: str) -> None:
    """Write next to the target, then rename over it; the temp file never survives.

    Raises:
        OSError: If writing or renaming fails.
    """
    file_path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(
        dir=file_path.parent, prefix=f"{file_path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.rename(temp_name, file_path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(temp_name)
        raise


def write_document(path: Path, document: Document, fmt: OutputFormat = "json") -> None:
    """Render a document and write it atomically."""
    _atomic_write(path, render(document, fmt))
    logger.debug("Wrote %s document to %s", document["kind"], path)
