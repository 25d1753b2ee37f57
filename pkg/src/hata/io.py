"""CSV and JSON writers shared by the command-line tools.

Floats are written with ``repr`` (shortest round-trip form) so repeated runs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .geometry import VertexGraph, to_json
from .harmonic import VertexFunction
from .spectral import DERIVED, SpectralResult
from .trace import ThetaReport, TraceSeries

VERTEX_COLUMNS = ("address", "x", "y", "value")
EIGENVECTOR_COLUMNS = VERTEX_COLUMNS + ("k",)
EIGENVALUE_COLUMNS = ("k", "lambda", "label", "paired_k", "pair_mismatch", "residual")
TRACE_COLUMNS = ("x", "value", "birth_level")
THETA_COLUMNS = ("x_q", "theta", "level", "excluded")


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def config_comment(alpha: complex, h: float, m: int) -> str:
    return f"hata {__version__} alpha={alpha.real!r},{alpha.imag!r} h={h!r} m={m}"


def write_table(
    path: Path, columns: Sequence[str], rows: Iterable[Sequence], comment: str, fmt_name: str = "csv"
) -> Path:
    """Write rows either as CSV (comment line, header, data) or as a JSON document."""
    path = Path(path)
    rows = [[fmt(v) for v in row] for row in rows]
    if fmt_name == "json":
        path = path.with_suffix(".json")
        doc = {"comment": comment, "columns": list(columns), "rows": rows}
        path.write_text(json.dumps(doc, indent=1) + "\n")
        return path
    with path.open("w", newline="") as fh:
        fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def read_table(path: Path) -> tuple[list[str], list[list[str]]]:
    """Inverse of :func:`write_table` for CSV files (comment lines skipped)."""
    with Path(path).open(newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, list(reader)


def vertex_rows(u: VertexFunction):
    g = u.graph
    for a, z, v in zip(g.addresses, g.coords, u.values):
        yield (str(a), float(z.real), float(z.imag), float(v))


def eigenvector_rows(r: SpectralResult):
    for k in range(1, len(r) + 1):
        for row in vertex_rows(r.function(k)):
            yield row + (k,)


def eigenvalue_rows(r: SpectralResult):
    pairs = {p.derived_k: p for p in (r.pairing or ())}
    labels = r.labels or ("",) * len(r)
    for k, (lam, res) in enumerate(zip(r.eigenvalues, r.residuals), 1):
        p = pairs.get(k) if labels[k - 1] == DERIVED else None
        yield (
            k,
            float(lam),
            labels[k - 1],
            p.primary_k if p else None,
            p.mismatch if p else None,
            float(res),
        )


def trace_rows(t: TraceSeries):
    for x, v, b in zip(t.x, t.values, t.birth_level):
        yield (float(x), float(v), int(b))


def theta_rows(rep: ThetaReport):
    for x, th, lev, exc in zip(rep.x_q, rep.theta, rep.level, rep.excluded):
        yield (float(x), float(th), int(lev), bool(exc))


def write_mesh(path: Path, g: VertexGraph, comment: str) -> Path:
    doc = to_json(g)
    doc["comment"] = comment
    path = Path(path)
    path.write_text(json.dumps(doc, indent=1) + "\n")
    return path
