"""Instance JSON files and report tables."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .cls_sparsifier import SparsificationInstance, make_instance
from .core_space import make_space, renormalize
from .errors import InputError, ParseError, ShapeMismatch

REPORT_COLUMNS = ("suite", "seed", "instance_id", "p", "N", "K", "L", "lhs", "bound", "ratio", "verdict")


def _pairs_to_complex(data, where: str) -> list[complex]:
    out = []
    for i, pair in enumerate(data):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ParseError(f"{where}[{i}] must be an [re, im] pair, got {pair!r}")
        re, im = pair
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            raise ParseError(f"{where}[{i}] must hold two numbers, got {pair!r}")
        out.append(complex(re, im))
    return out


def _complex_to_pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=np.complex128)]


def load_instance(path, p: float | None = None, renormalize_weights: bool = False) -> SparsificationInstance:
    """Read and fully validate an instance file.

    ``p`` overrides the file's optional ``p`` key.  Validation errors name
    the first violated invariant.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc})") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    missing = [k for k in ("points", "weights", "functions", "lambda") if k not in doc]
    if missing:
        raise ParseError(f"{path}: missing keys {missing}")
    points = [str(x) for x in doc["points"]]
    weights = doc["weights"]
    if not isinstance(weights, list) or len(weights) != len(points):
        raise ShapeMismatch(f"{len(points)} points but weights has {len(weights) if isinstance(weights, list) else '?'} entries")
    if renormalize_weights:
        weights = renormalize(weights)
    space = make_space(points, weights)
    rows = doc["functions"]
    if not isinstance(rows, list) or not rows:
        raise ShapeMismatch("functions must be a non-empty list of rows")
    g = []
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(points):
            raise ShapeMismatch(f"function row {k} must have {len(points)} entries")
        g.append(_pairs_to_complex(row, f"functions[{k}]"))
    lam = _pairs_to_complex(doc["lambda"], "lambda")
    if len(lam) != len(g):
        raise ShapeMismatch(f"{len(g)} functions but {len(lam)} lambda entries")
    if p is None:
        p = doc.get("p")
    if p is None:
        raise ParseError(f"{path}: no p in file and none given")
    return make_instance(space, g, lam, float(p))


def instance_to_dict(inst: SparsificationInstance) -> dict:
    return {
        "points": [str(x) for x in inst.space.labels],
        "weights": [float(w) for w in inst.space.weights],
        "functions": [_complex_to_pairs(row) for row in inst.g.values],
        "lambda": _complex_to_pairs(inst.lam.values),
        "p": inst.p,
    }


def save_instance(inst: SparsificationInstance, path) -> None:
    # json writes floats with repr(), the shortest string that round-trips exactly
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")


@dataclass(frozen=True)
class ReportRow:
    suite: str
    seed: int
    instance_id: str
    p: float
    N: int | None
    K: int | None
    L: int | None
    lhs: float
    bound: float
    ratio: float
    verdict: bool


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def _jsonable(row: ReportRow) -> dict:
    d = asdict(row)
    d["verdict"] = "pass" if row.verdict else "fail"
    for k in ("lhs", "bound", "ratio"):
        if not math.isfinite(d[k]):
            d[k] = str(d[k])
    return d


def format_report(rows, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow([_cell(getattr(row, c)) for c in REPORT_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([_jsonable(r) for r in rows], indent=1) + "\n"
    if fmt == "text":
        table = [list(REPORT_COLUMNS)] + [
            [_cell(getattr(r, c)) for c in REPORT_COLUMNS] for r in rows
        ]
        widths = [max(len(line[i]) for line in table) for i in range(len(REPORT_COLUMNS))]
        return "".join("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() + "\n" for line in table)
    raise InputError(f"unknown report format {fmt!r}")


def write_report(rows, fmt: str, path=None) -> str:
    """Render rows and write them to `path` (or just return the text when path is None)."""
    text = format_report(rows, fmt)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return text


assert tuple(f.name for f in fields(ReportRow)) == REPORT_COLUMNS
