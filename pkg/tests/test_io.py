"""File formats: JSON instances, NDJSON traces, CSV tables."""

import csv
import json

import numpy as np
import pytest

from maxrs.io import (
    KINDS,
    instance_balls,
    load_instance,
    load_trace,
    num_str,
    save_instance,
    save_trace,
    write_csv,
    write_json_rows,
)


def test_numbers_become_decimal_strings():
    assert num_str(0.1) == "0.1"
    assert num_str(1) == "1.0"
    # repr round-trips doubles exactly.
    assert float(num_str(1 / 3)) == 1 / 3


def test_instance_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    vals = rng.uniform(-5, 5, size=(6, 2))
    items = [
        {"center": [float(x), float(y)], "weight": float(w), "id": i}
        for i, ((x, y), w) in enumerate(zip(vals, rng.uniform(0, 3, size=6)))
    ]
    path = tmp_path / "inst.json"
    save_instance(str(path), "balls", 2, items, meta={"seed": 0, "scale": 0.125})
    doc = load_instance(str(path))
    assert doc["kind"] == "balls"
    assert doc["d"] == 2
    assert doc["meta"]["scale"] == 0.125
    for orig, back in zip(items, doc["items"]):
        assert back["center"] == orig["center"]
        assert back["weight"] == orig["weight"]
        assert back["id"] == orig["id"]


def test_saved_file_stores_floats_as_strings(tmp_path):
    path = tmp_path / "inst.json"
    save_instance(str(path), "balls", 1, [{"center": [0.1], "weight": 2.0}])
    raw = json.loads(path.read_text())
    assert raw["items"][0]["center"] == ["0.1"]
    assert raw["items"][0]["weight"] == "2.0"


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="kind"):
        save_instance(str(tmp_path / "x.json"), "mystery", 2, [])
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "mystery", "d": 2, "items": []}\n')
    with pytest.raises(ValueError, match="kind"):
        load_instance(str(path))
    assert "balls" in KINDS and "trace" in KINDS


def test_instance_balls_materializes_both_kinds(tmp_path):
    wpath = tmp_path / "w.json"
    save_instance(
        str(wpath),
        "balls",
        2,
        [
            {"center": [0.5, -1.0], "weight": 1.25, "id": 7},
            {"center": [2.0, 0.0], "weight": 0.5},
        ],
    )
    balls = instance_balls(load_instance(str(wpath)))
    assert balls[0].center == (0.5, -1.0)
    assert balls[0].weight == 1.25
    assert balls[0].id == 7
    assert balls[1].id == 1

    cpath = tmp_path / "c.json"
    save_instance(str(cpath), "colored_disks", 2, [{"center": [0.0, 0.0], "color": 4}])
    disks = instance_balls(load_instance(str(cpath)))
    assert disks[0].color == 4

    spath = tmp_path / "s.json"
    save_instance(str(spath), "sequences", 1, [{"A": [1.0], "B": [2.0]}])
    with pytest.raises(ValueError, match="balls"):
        instance_balls(load_instance(str(spath)))


def test_trace_round_trip(tmp_path):
    ops = [
        {"op": "insert", "id": 0, "center": [0.25, 0.75], "weight": 1.5},
        {"op": "query"},
        {"op": "delete", "id": 0},
    ]
    path = tmp_path / "trace.ndjson"
    save_trace(str(path), ops)
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 3
    assert json.loads(lines[1]) == {"op": "query"}
    back = load_trace(str(path))
    assert back == ops


def test_trace_skips_blank_lines(tmp_path):
    path = tmp_path / "trace.ndjson"
    path.write_text('{"op": "query"}\n\n{"op": "delete", "id": "3"}\n')
    assert load_trace(str(path)) == [{"op": "query"}, {"op": "delete", "id": 3.0}]


def test_csv_header_quoting_and_missing_fields(tmp_path):
    path = tmp_path / "out.csv"
    rows = [
        {"name": "a,b", "value": 1.5},
        {"name": "plain"},
    ]
    write_csv(str(path), rows)
    text = path.read_text()
    assert text.startswith("name,value")
    assert '"a,b"' in text
    with open(path, newline="") as fh:
        back = list(csv.DictReader(fh))
    assert back[0]["name"] == "a,b"
    assert back[1]["value"] == ""


def test_csv_explicit_field_order(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(str(path), [{"b": 2, "a": 1}], fields=["a", "b"])
    assert path.read_text().splitlines()[0] == "a,b"


def test_json_rows_encode_floats(tmp_path):
    path = tmp_path / "rows.json"
    write_json_rows(str(path), [{"t": 0.3, "n": 5}])
    raw = json.loads(path.read_text())
    assert raw == [{"t": "0.3", "n": 5}]
