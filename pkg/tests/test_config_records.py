"""Config parsing and CSV record round-trips."""
import math

import pytest

from specrad.config import (cfg_bool, cfg_complex, cfg_float, cfg_floats,
                            cfg_int, parse_config_text)
from specrad.errors import ConfigurationError
from specrad.records import TrialRecord, format_value, read_records, write_records


def test_parse_basic():
    cfg = parse_config_text("n = 50\n# full comment\nz = 1.0+0.5j  # trailing\n\nname = radius-mc\n")
    assert cfg == {"n": "50", "z": "1.0+0.5j", "name": "radius-mc"}


def test_parse_rejects_garbage_line():
    with pytest.raises(ConfigurationError, match="line 2"):
        parse_config_text("a = 1\nnot an assignment\n")


def test_parse_rejects_duplicate_key():
    with pytest.raises(ConfigurationError, match="duplicate"):
        parse_config_text("a = 1\na = 2\n")


def test_typed_accessors():
    cfg = {"n": "64", "x": "1.5e-3", "z": "2-1j", "flag": "yes",
           "ys": "0.5, 1.0,2", "hexseed": "0x10"}
    assert cfg_int(cfg, "n") == 64
    assert cfg_int(cfg, "hexseed") == 16
    assert cfg_float(cfg, "x") == 1.5e-3
    assert cfg_complex(cfg, "z") == 2 - 1j
    assert cfg_bool(cfg, "flag") is True
    assert cfg_floats(cfg, "ys") == [0.5, 1.0, 2.0]
    assert cfg_int(cfg, "missing", 7) == 7
    with pytest.raises(ConfigurationError, match="missing required"):
        cfg_int(cfg, "absent")
    with pytest.raises(ConfigurationError, match="not an integer"):
        cfg_int(cfg, "x")


def test_format_value_17_digits_and_specials():
    assert format_value(float("nan")) == "nan"
    assert format_value(float("inf")) == "inf"
    assert format_value(-float("inf")) == "-inf"
    x = 1.0 / 3.0
    assert float(format_value(x)) == x  # round trip exact
    assert format_value(True) == "1"


def test_write_read_round_trip(tmp_path):
    recs = [
        TrialRecord("demo", 2, 22, {"v": 1 / 7, "w": float("nan")}),
        TrialRecord("demo", 0, 20, {"v": 0.25}),
        TrialRecord("demo", 1, 21, {"v": 2.0}, failed=True, failure_reason="svd, blew up"),
    ]
    path = tmp_path / "x.csv"
    cols = write_records(path, recs)
    assert cols[:3] == ["experiment", "trial_index", "seed"]
    raw = path.read_bytes()
    assert b"\r\n" in raw                       # RFC-4180 line endings
    assert b'"svd, blew up"' in raw             # comma quoted
    header, rows = read_records(path)
    assert [r["trial_index"] for r in rows] == ["0", "1", "2"]  # sorted
    assert float(rows[2]["v"]) == 1 / 7
    assert rows[2]["w"] == "nan"
    assert rows[0]["w"] == "nan"                # absent value filled as nan


def test_read_missing_and_empty(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        read_records(tmp_path / "nope.csv")
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ConfigurationError, match="empty"):
        read_records(empty)
