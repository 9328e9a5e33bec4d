"""Per-trial result rows and their CSV serialization.

CSV output follows RFC 4180 (CRLF line endings, minimal quoting, header row).
Floats are written with 17 significant digits so a round trip through the file
is bit-exact; IEEE specials are spelled ``nan``, ``inf``, ``-inf``.  Rows are
sorted by trial index before writing, which makes output byte-identical across
worker counts and scheduling orders.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError


def format_value(val) -> str:
    if isinstance(val, bool):
        return "1" if val else "0"
    if isinstance(val, float):
        if math.isnan(val):
            return "nan"
        if math.isinf(val):
            return "inf" if val > 0 else "-inf"
        return f"{val:.17g}"
    if isinstance(val, complex):
        return f"{val.real:.17g}{val.imag:+.17g}j"
    return str(val)


@dataclass
class TrialRecord:
    experiment: str
    trial_index: int
    seed: int
    values: dict = field(default_factory=dict)
    failed: bool = False
    failure_reason: str = ""

    def row(self, columns: list) -> list:
        base = {"experiment": self.experiment, "trial_index": self.trial_index,
                "seed": self.seed, "failed": self.failed,
                "failure_reason": self.failure_reason}
        out = []
        for col in columns:
            if col in base:
                out.append(format_value(base[col]))
            else:
                out.append(format_value(self.values.get(col, float("nan"))))
        return out


BASE_COLUMNS = ["experiment", "trial_index", "seed", "failed", "failure_reason"]


def columns_for(records: list) -> list:
    extra: list[str] = []
    for rec in records:
        for key in rec.values:
            if key not in extra:
                extra.append(key)
    return BASE_COLUMNS + sorted(extra)


def write_records(path: str | Path, records: list) -> list:
    """Write sorted rows; returns the column list used."""
    records = sorted(records, key=lambda r: r.trial_index)
    columns = columns_for(records)
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow(rec.row(columns))
    return columns


def read_records(path: str | Path) -> tuple:
    """Read back (columns, rows-as-dicts); raises on missing/empty files."""
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"CSV file not found: {p}")
    with open(p, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigurationError(f"CSV file is empty: {p}") from None
        rows = [dict(zip(header, row)) for row in reader]
    return header, rows
