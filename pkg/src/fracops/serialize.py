"""CSV and JSON forms of :class:`GridResult`.

Floats are written with 17 significant digits so that reading a file back
reproduces every value bit for bit.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from typing import IO

from .operators import GridResult

CSV_HEADER = ("x", "re_value", "im_value", "error_estimate", "converged")


def _num(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(result: GridResult, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for x, v, e, c in zip(result.points, result.values, result.error_estimates,
                          result.converged):
        w.writerow([_num(x), _num(v.real), _num(v.imag), _num(e), "true" if c else "false"])


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def write_json(result: GridResult, fh: IO[str]) -> None:
    meta = dict(result.metadata)
    doc = {
        "operator": result.operator.as_dict(),
        "function": meta.pop("function", ""),
        "config": meta.pop("config", {}),
        "x": list(result.points),
        "re": [v.real for v in result.values],
        "im": [v.imag for v in result.values],
        "err": list(result.error_estimates),
        "converged": list(result.converged),
        "metadata": _json_safe(meta),
    }
    json.dump(doc, fh, indent=1)
    fh.write("\n")


@dataclass
class Table:
    """Parsed grid output: parallel lists."""

    x: list[float]
    values: list[complex]
    error_estimates: list[float]
    converged: list[bool]

    def as_dict(self) -> dict:
        return asdict(self)


def read_csv(fh: IO[str]) -> Table:
    rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    t = Table([], [], [], [])
    for r in rows[1:]:
        t.x.append(float(r[0]))
        t.values.append(complex(float(r[1]), float(r[2])))
        t.error_estimates.append(float(r[3]))
        t.converged.append(r[4] == "true")
    return t


def read_json(fh: IO[str]) -> Table:
    doc = json.load(fh)
    return Table(
        [float(v) for v in doc["x"]],
        [complex(a, b) for a, b in zip(doc["re"], doc["im"])],
        [float(v) for v in doc["err"]],
        [bool(v) for v in doc.get("converged", [True] * len(doc["x"]))],
    )
