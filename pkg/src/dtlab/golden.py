"""Reference values shipped with the package and the comparison against them.

The data directory holds two CSV files plus a SHA256SUMS manifest.  Every
comparison first re-hashes the files, so an edited value cannot pass silently.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path

from . import sieve_constants as sc

TABLES = {
    # table id -> (file, value column)
    "appendix": ("nu_values.csv", "nu_k"),
    "running-min": ("running_minimum.csv", "m_k"),
}
LAST_DIGIT = Decimal("0.0001")


def default_dir() -> Path:
    return Path(str(resources.files("dtlab") / "data"))


def checksum_problems(directory: Path) -> list[str]:
    manifest = directory / "SHA256SUMS"
    if not manifest.exists():
        return [f"missing manifest {manifest}"]
    problems = []
    for line in manifest.read_text().splitlines():
        if not line.strip():
            continue
        digest, name = line.split()
        path = directory / name
        if not path.exists():
            problems.append(f"missing file {name}")
        elif hashlib.sha256(path.read_bytes()).hexdigest() != digest:
            problems.append(f"checksum mismatch for {name}")
    return problems


def load_table(table: str, directory: Path | None = None) -> list[tuple[int, str]]:
    if table not in TABLES:
        raise KeyError(f"unknown table {table!r}; choose from {sorted(TABLES)}")
    name, column = TABLES[table]
    path = (directory or default_dir()) / name
    with open(path, newline="") as fh:
        return [(int(row["k"]), row[column]) for row in csv.DictReader(fh)]


@dataclass
class GoldenReport:
    table: str
    rows_checked: int
    problems: list[str] = field(default_factory=list)
    diffs: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems and not self.diffs

    def lines(self) -> list[str]:
        head = f"{self.table}: {self.rows_checked} rows, {len(self.diffs)} diffs"
        return [head] + self.problems + self.diffs


def _close(computed: str, expected: str) -> bool:
    return abs(Decimal(computed) - Decimal(expected)) <= LAST_DIGIT


def check_table(table: str, k_max: int | None = None, directory: Path | None = None,
                workers: int | None = None) -> GoldenReport:
    """Recompute the table and compare row by row within one unit in the last digit.

    For the running minimum the set of change points up to k_max must also
    coincide with the listed rows.
    """
    directory = directory or default_dir()
    problems = checksum_problems(directory)
    golden = load_table(table, directory)
    if table == "appendix":
        top = max(k for k, _ in golden) if k_max is None else k_max
        golden = [(k, v) for k, v in golden if k <= top]
        computed = {row["k"]: row["nu_k"] for row in sc.table_rows(2, top, workers)} if golden else {}
        diffs = [f"k={k}: expected {v}, computed {computed[k]}"
                 for k, v in golden if not _close(computed[k], v)]
        return GoldenReport(table, len(golden), problems, diffs)

    top = 10080 if k_max is None else k_max
    golden = [(k, v) for k, v in golden if k <= top]
    points = {k: sc.round4(m) for k, m in sc.m_k_change_points(top, workers)}
    diffs = []
    for k, v in golden:
        if k not in points:
            diffs.append(f"k={k}: expected a change to {v}, none computed")
        elif not _close(points[k], v):
            diffs.append(f"k={k}: expected {v}, computed {points[k]}")
    listed = {k for k, _ in golden}
    diffs += [f"k={k}: computed change to {m} is not listed" for k, m in sorted(points.items())
              if k not in listed]
    return GoldenReport(table, len(golden), problems, diffs)
