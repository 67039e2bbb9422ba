"""Report assembly and serialisation (json, csv, markdown, text)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

FORMATS = ("json", "csv", "markdown", "text")
TIMESTAMP_KEY = "generated_at"


@dataclass
class Report:
    command: list[str]
    config: dict
    results: dict
    rows: list[dict] = field(default_factory=list)  # one entry per result item (csv / tables)
    table: list[dict] | None = None  # rows with keys N, rho, field for the three-column layout
    generated_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "config": self.config,
            TIMESTAMP_KEY: self.generated_at,
            "results": self.results,
        }
        if self.rows:
            out["rows"] = self.rows
        if self.table is not None:
            out["table"] = self.table
        return out


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    return str(obj)


def to_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, default=_default) + "\n"


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False, default=_default)
    if v is None:
        return ""
    return str(v)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    keys: list[str] = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k)) for k in keys})
    return buf.getvalue()


def _flatten(d, prefix="") -> list[dict]:
    out = []
    if isinstance(d, dict):
        for k in sorted(d):
            out.extend(_flatten(d[k], f"{prefix}.{k}" if prefix else str(k)))
    else:
        out.append({"key": prefix, "value": _cell(d)})
    return out


def three_column_markdown(table: list[dict]) -> str:
    lines = ["N | ρ | Field", "--- | --- | ---"]
    for r in table:
        lines.append(f"{r['N']} | {r['rho']} | {r['field']}")
    return "\n".join(lines) + "\n"


def three_column_text(table: list[dict]) -> str:
    w_n = max([1] + [len(str(r["N"])) for r in table])
    w_r = max([1] + [len(r["rho"]) for r in table])
    lines = [f"{'N':>{w_n}}  {'ρ':<{w_r}}  Field"]
    for r in table:
        lines.append(f"{r['N']:>{w_n}}  {r['rho']:<{w_r}}  {r['field']}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report | dict, fmt: str = "json") -> bytes:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    data = report.as_dict() if isinstance(report, Report) else report
    table = data.get("table")
    rows = data.get("rows") or []
    if fmt == "json":
        text = to_json(data)
    elif fmt == "csv":
        text = _csv(rows if rows else _flatten(data.get("results", {})))
    elif fmt == "markdown":
        parts = [f"# {' '.join(data.get('command', []))}\n"]
        if table is not None:
            parts.append(three_column_markdown(table))
        flat = _flatten(data.get("results", {}))
        if flat:
            parts.append("key | value\n--- | ---\n" + "".join(f"{r['key']} | {r['value']}\n" for r in flat))
        text = "\n".join(parts)
    else:
        parts = []
        if table is not None:
            parts.append(three_column_text(table))
        parts.extend(f"{r['key']}: {r['value']}\n" for r in _flatten(data.get("results", {})))
        if rows and table is None:
            parts.append("\n" + _csv(rows).replace(",", "\t"))
        text = "".join(parts)
    return text.encode("utf-8")


def strip_timestamps(data: dict) -> dict:
    return {k: v for k, v in data.items() if k != TIMESTAMP_KEY}
