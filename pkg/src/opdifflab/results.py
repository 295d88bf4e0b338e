"""Result records with stable CSV/JSON emission.

Every check produces one row with the tolerance it was judged against; rows
serialize with fixed columns (experiment, check, n, p, q, r, lhs, rhs, ratio,
tol, pass, notes) so downstream diffs are stable.  The record's config hash is
computed from the echoed configuration, and the wall-time footer is excluded
from hashing so byte-level reproducibility holds for everything else.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from opdifflab import __version__

CSV_COLUMNS = ["experiment", "check", "n", "p", "q", "r", "lhs", "rhs",
               "ratio", "tol", "pass", "notes"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(value)


@dataclass
class CheckRow:
    experiment: str
    check: str
    passed: bool
    n: int | None = None
    p: float | None = None
    q: float | None = None
    r: float | None = None
    lhs: float | None = None
    rhs: float | None = None
    ratio: float | None = None
    tol: float | None = None
    notes: str = ""

    def as_list(self) -> list[str]:
        return [
            self.experiment, self.check, _fmt(self.n), _fmt(self.p), _fmt(self.q),
            _fmt(self.r), _fmt(self.lhs), _fmt(self.rhs), _fmt(self.ratio),
            _fmt(self.tol), _fmt(self.passed), self.notes,
        ]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, default=_fmt)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


@dataclass
class ResultRecord:
    experiment: str
    config: dict
    rows: list[CheckRow] = field(default_factory=list)
    wall_time_s: float = 0.0
    version: str = __version__

    @property
    def config_digest(self) -> str:
        return config_hash(self.config)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def exit_status(self) -> int:
        return 0 if self.all_passed else 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.as_list())
        buf.write(f"# config_hash={self.config_digest} version={self.version}\n")
        buf.write(f"# wall_time_s={self.wall_time_s:.3f}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        body = {
            "experiment": self.experiment,
            "config": self.config,
            "config_hash": self.config_digest,
            "version": self.version,
            "wall_time_s": round(self.wall_time_s, 3),
            "rows": [r.as_dict() for r in self.rows],
        }
        return json.dumps(body, indent=2, sort_keys=True, default=_fmt) + "\n"

    def write(self, path, fmt: str = "csv") -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)

    def summary(self) -> str:
        n_pass = sum(r.passed for r in self.rows)
        return (f"{self.experiment}: {n_pass}/{len(self.rows)} checks passed "
                f"(config {self.config_digest}, {self.wall_time_s:.2f}s)")
