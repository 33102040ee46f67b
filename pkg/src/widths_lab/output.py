"""Row emitters for the command line: aligned text tables, CSV and JSON.

Rows are lists of dicts sharing the same keys.  Values are written as-is
except ``None``, which becomes an empty CSV field, ``null`` in JSON and
``-`` in tables.  Nothing depends on the locale.
"""

from __future__ import annotations

import csv
import io
import json

FORMATS = ("table", "csv", "json")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, columns=None) -> str:
    buf = io.StringIO()
    columns = columns or (list(rows[0]) if rows else [])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def rows_to_table(rows, columns=None, title=None) -> str:
    columns = columns or (list(rows[0]) if rows else [])
    cells = [[_cell(row.get(c)) or "-" for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


def mapping_to_table(mapping: dict, title=None) -> str:
    """Two-column key/value listing; nested dicts are flattened with dots."""
    flat = list(flatten(mapping))
    width = max((len(k) for k, _ in flat), default=0)
    lines = [title] if title else []
    lines.extend(f"{k.ljust(width)}  {_cell(v) or '-'}" for k, v in flat)
    return "\n".join(lines) + "\n"


def flatten(obj, prefix=""):
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from flatten(v, key + ".")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            yield key, f"[{len(v)} rows]"
        else:
            yield key, v


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def render(fmt: str, rows, columns=None, meta=None, title=None) -> str:
    """Render tabular output.  JSON wraps the rows together with ``meta``."""
    if fmt == "csv":
        return rows_to_csv(rows, columns)
    if fmt == "json":
        doc = dict(meta or {})
        doc["rows"] = [{c: r.get(c) for c in (columns or list(r))} for r in rows]
        return to_json(doc)
    head = mapping_to_table(meta, title) if meta else (title + "\n" if title else "")
    return head + rows_to_table(rows, columns)
