"""CSV and JSON serialisation of samples and residual reports.

CSV floats are written with 17 significant digits, which round-trips any
double exactly. JSON uses the standard library's shortest round-trip float
repr, which is equally lossless. Output is deterministic: fixed column and
key order, rows in sampling order, ``\\n`` line endings, UTF-8.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import IO, Iterable, List, Optional, Sequence, Union

from .core import PointStatus, Regime, SolutionParams
from .sampler import FieldSample, GridSpec
from .verifier import ResidualReport

SAMPLE_HEADER = ("t", "x", "v_re", "v_im", "u_re", "u_im", "status")
REPORT_HEADER = ("t", "x", "h", "r_cr", "r_mass", "r_momentum", "status")

Record = Union[FieldSample, ResidualReport]


def fmt(x: float) -> str:
    return format(x, ".17g")


def _sample_row(s: FieldSample):
    if s.v is None or s.status is PointStatus.POLE:
        vals = ("", "", "", "")
    else:
        vals = (fmt(s.v.real), fmt(s.v.imag), fmt(s.u.real), fmt(s.u.imag))
    return (fmt(s.t), fmt(s.x), *vals, s.status.value)


def _report_row(r: ResidualReport):
    return (fmt(r.t), fmt(r.x), fmt(r.h), fmt(r.r_cr), fmt(r.r_mass), fmt(r.r_momentum), r.status.value)


def to_csv(records: Sequence[Record], kind: Optional[str] = None) -> str:
    """Render samples (default) or residual reports as CSV text."""
    if kind is None:
        kind = "reports" if records and isinstance(records[0], ResidualReport) else "samples"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if kind == "samples":
        w.writerow(SAMPLE_HEADER)
        w.writerows(_sample_row(s) for s in records)
    elif kind == "reports":
        w.writerow(REPORT_HEADER)
        w.writerows(_report_row(r) for r in records)
    else:
        raise ValueError(f"unknown record kind {kind!r}")
    return buf.getvalue()


def parse_csv(text: str) -> List[Record]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty CSV")
    header, body = tuple(rows[0]), rows[1:]
    out: List[Record] = []
    if header == SAMPLE_HEADER:
        for t, x, vr, vi, ur, ui, status in body:
            st = PointStatus(status)
            if vr == "":
                out.append(FieldSample(float(t), float(x), None, None, st))
            else:
                out.append(FieldSample(float(t), float(x), complex(float(vr), float(vi)),
                                       complex(float(ur), float(ui)), st))
    elif header == REPORT_HEADER:
        for t, x, h, a, b, c, status in body:
            out.append(ResidualReport(float(t), float(x), float(h), float(a), float(b), float(c),
                                      PointStatus(status)))
    else:
        raise ValueError(f"unrecognised CSV header {header!r}")
    return out


def _pair(z: Optional[complex]):
    return None if z is None else [z.real, z.imag]


def _sample_obj(s: FieldSample) -> dict:
    return {"t": s.t, "x": s.x, "v": _pair(s.v), "u": _pair(s.u), "status": s.status.value}


def _report_obj(r: ResidualReport) -> dict:
    return {"t": r.t, "x": r.x, "h": r.h, "r_cr": r.r_cr, "r_mass": r.r_mass,
            "r_momentum": r.r_momentum, "status": r.status.value}


def _record_obj(r) -> dict:
    if isinstance(r, ResidualReport):
        return _report_obj(r)
    if isinstance(r, FieldSample):
        return _sample_obj(r)
    return dict(r)


def build_document(params: SolutionParams, regime: Regime, grid: Optional[Union[GridSpec, dict]] = None,
                   records: Iterable[Record] = (), summary: Optional[dict] = None) -> dict:
    """Run document with keys in the fixed order params, regime, grid, samples, summary."""
    if isinstance(grid, GridSpec):
        grid = grid.as_dict()
    samples = [_record_obj(r) for r in records]
    return {
        "params": {"C": _pair(params.C), "C2": _pair(params.C2)},
        "regime": regime.tag.value,
        "grid": grid,
        "samples": samples,
        "summary": summary if summary is not None else {},
    }


def to_json(document: dict) -> str:
    return json.dumps(document, indent=1, allow_nan=False) + "\n"


def parse_json_records(text: str) -> List[Record]:
    """Samples or reports back from a run document."""
    out: List[Record] = []
    for obj in json.loads(text)["samples"]:
        st = PointStatus(obj["status"])
        if "r_cr" in obj:
            out.append(ResidualReport(obj["t"], obj["x"], obj["h"], obj["r_cr"], obj["r_mass"],
                                      obj["r_momentum"], st))
        else:
            v = None if obj["v"] is None else complex(*obj["v"])
            u = None if obj["u"] is None else complex(*obj["u"])
            out.append(FieldSample(float(obj["t"]), float(obj["x"]), v, u, st))
    return out


def write_text(text: str, destination: Union[str, IO[str], None]) -> None:
    """Write to a path, an open text stream, or stdout when ``destination`` is None."""
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
