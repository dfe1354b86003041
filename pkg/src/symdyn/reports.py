"""Command reports: versioned JSON documents and per-command CSV tables."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .properties import EXIT_CODES, FAILS, HOLDS, INCONCLUSIVE, Verdict

SCHEMA = "symdyn.report/1"


def tool_version() -> str:
    from . import __version__

    return __version__


def jsonable(x):
    """Plain JSON values; exact rationals become "p/q" strings, non-finite floats strings."""
    if isinstance(x, Verdict):
        return jsonable(x.to_dict())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if x is None or isinstance(x, str):
        return x
    return str(x)


def worst(statuses) -> str:
    """fails beats inconclusive beats holds."""
    statuses = list(statuses)
    if FAILS in statuses:
        return FAILS
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return HOLDS


@dataclass
class Report:
    command: str
    parameters: dict
    status: str = HOLDS
    tables: dict = field(default_factory=dict)  # name -> list of row dicts, in order
    verdicts: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    fingerprint: str | None = None
    horizons: dict = field(default_factory=dict)
    approximate: bool = False
    primary: str | None = None  # table written by --format csv

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def add_verdict(self, v: Verdict):
        self.verdicts.append(v)
        self.status = worst([self.status, v.status])

    def to_dict(self) -> dict:
        return jsonable(
            {
                "schema": SCHEMA,
                "command": self.command,
                "parameters": self.parameters,
                "status": self.status,
                "approximate": self.approximate,
                "results": self.results,
                "verdicts": self.verdicts,
                "tables": self.tables,
                "notes": self.notes,
                "provenance": {
                    "tool": "symdyn",
                    "tool_version": tool_version(),
                    "shift_fingerprint": self.fingerprint,
                    "horizons": self.horizons,
                },
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self, table: str | None = None) -> str:
        name = table or self.primary or next(iter(self.tables), None)
        rows = self.tables.get(name, []) if name else []
        return rows_to_csv(rows)


def rows_to_csv(rows) -> str:
    rows = [jsonable(r) for r in rows]
    buf = io.StringIO()
    if not rows:
        return ""
    cols = list(rows[0])
    for r in rows[1:]:
        cols += [c for c in r if c not in cols]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return "" if v is None else v
