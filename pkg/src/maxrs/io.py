"""Instance files, operation traces, and result tables.

JSON instances carry every floating value as a decimal string produced by
repr, so files byte-match across platforms and round-trip exactly.  Traces
are newline-delimited JSON operations.  Result tables are RFC-4180 CSV
with a header row.
"""

from __future__ import annotations

import csv
import json
from typing import Any

from maxrs.balls import ColoredBall, WeightedBall

__all__ = [
    "KINDS",
    "num_str",
    "save_instance",
    "load_instance",
    "instance_balls",
    "save_trace",
    "load_trace",
    "write_csv",
    "write_json_rows",
]

KINDS = ("balls", "colored_disks", "sequences", "batched1d", "bsei", "trace")


def num_str(x) -> str:
    """Decimal-string form of a number; ints stay ints in JSON."""
    return repr(float(x))


def _encode(value):
    if isinstance(value, float):
        return num_str(value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    return value


def _decode(value):
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return value
    if isinstance(value, list):
        return [_decode(v) for v in value]
    if isinstance(value, dict):
        return {k: _decode(v) for k, v in value.items()}
    return value


def save_instance(path: str, kind: str, d: int, items: list[dict], meta: dict | None = None) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown instance kind {kind!r}")
    doc: dict[str, Any] = {"kind": kind, "d": int(d), "items": _encode(items)}
    if meta:
        doc["meta"] = _encode(meta)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_instance(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("kind") not in KINDS:
        raise ValueError(f"unknown instance kind {doc.get('kind')!r}")
    doc["items"] = _decode(doc["items"])
    if "meta" in doc:
        doc["meta"] = _decode(doc["meta"])
    return doc


def instance_balls(doc: dict):
    """Materialize a balls / colored_disks instance as ball objects."""
    kind = doc["kind"]
    if kind == "balls":
        return [
            WeightedBall(tuple(it["center"]), float(it["weight"]), id=it.get("id", i))
            for i, it in enumerate(doc["items"])
        ]
    if kind == "colored_disks":
        return [
            ColoredBall(tuple(it["center"]), int(it["color"]), id=it.get("id", i))
            for i, it in enumerate(doc["items"])
        ]
    raise ValueError(f"instance kind {kind!r} does not hold balls")


def save_trace(path: str, ops: list[dict]) -> None:
    """Newline-delimited operations, e.g. {"op": "insert", ...}."""
    with open(path, "w") as fh:
        for op in ops:
            fh.write(json.dumps(_encode(op)) + "\n")


def load_trace(path: str) -> list[dict]:
    ops = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                ops.append(_decode(json.loads(line)))
    return ops


def write_csv(path: str, rows: list[dict], fields: list[str] | None = None) -> None:
    if fields is None:
        fields = list(rows[0].keys()) if rows else []
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, quoting=csv.QUOTE_MINIMAL)
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in fields})


def write_json_rows(path: str, rows: list[dict]) -> None:
    with open(path, "w") as fh:
        json.dump(_encode(rows), fh, indent=1)
        fh.write("\n")
