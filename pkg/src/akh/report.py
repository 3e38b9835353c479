"""Serialization of verification reports: deterministic JSON and markdown.

The JSON artifact is fully determined by the report contents — keys sorted,
floats via repr, no timestamps or host details — so two runs with the same
configuration produce byte-identical files.  Anything time- or machine-
dependent belongs on stderr, never in the artifact.
"""

from __future__ import annotations

import json
import os
import tempfile

from .verification import Entry, VerificationReport

_FIELDS = ("suite", "identity", "statement", "block",
           "residual", "tolerance", "verdict", "note")


def entry_as_dict(entry: Entry) -> dict:
    out = {}
    for name in _FIELDS:
        value = getattr(entry, name)
        if name in ("residual", "tolerance") and value is not None:
            value = float(value)
        out[name] = value
    return out


def report_as_dict(report: VerificationReport) -> dict:
    return {
        "model": report.model,
        "kind": report.kind,
        "suites": list(report.suites),
        "meta": report.meta,
        "ok": report.ok,
        "counts": report.counts(),
        "entries": [entry_as_dict(e) for e in report.entries],
    }


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report_as_dict(report), sort_keys=True, indent=2) + "\n"


def _fmt(value: float | None) -> str:
    if value is None:
        return "-"
    return "%.12g" % value


def report_to_markdown(report: VerificationReport) -> str:
    """Markdown rendering: header, verdict counts, then one row per entry."""
    lines = [
        f"# verification: {report.model} ({report.kind})",
        "",
        f"suites: {', '.join(report.suites)}",
        "counts: " + ", ".join(f"{k}={v}" for k, v in sorted(report.counts().items())),
        f"overall: {'ok' if report.ok else 'FAIL'}",
        "",
        "| suite | identity | block | residual | tolerance | verdict | note |",
        "|---|---|---|---|---|---|---|",
    ]
    for e in report.entries:
        lines.append("| %s | %s | %s | %s | %s | %s | %s |" % (
            e.suite, e.identity, e.block or "-", _fmt(e.residual),
            _fmt(e.tolerance), e.verdict, e.note or ""))
    return "\n".join(lines) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
