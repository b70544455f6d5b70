"""Canonical byte-level artifact formats.

Every artifact the package emits (CLI file or HTTP body) is produced by
exactly one function here, so the two routes are byte-identical by
construction.  Numbers are rendered with Python's shortest round-trip
float representation in both the delimited and the JSON forms: parsing the
text back gives the exact double that was computed.

Lattice mapping for surface grids: ``values[i][j]`` is the field sampled
at ``(xs[j], zs[i])``; the delimited long form carries the same indices
explicitly as (i, j) columns.
"""

from __future__ import annotations

import json
from typing import Iterable

from . import _jsonutil as ju
from .errors import LayoutFormatError
from .kinematics import Pose
from .layout import Violation
from .pipeline import DepthChartSeries, DepthProbeSeries, FrameRecord
from .rbf import RbfField

CSV_MEDIA_TYPE = "text/csv; charset=utf-8"
JSON_MEDIA_TYPE = "application/json"

FRAME_COLUMNS = (
    ["t", "pos_x", "pos_y", "pos_z", "q_w", "q_x", "q_y", "q_z",
     "eye_offset", "d_ia", "d_zp_raw", "d_zp", "was_clamped"]
    + [f"left_{i}{j}" for i in range(4) for j in range(4)]
    + [f"right_{i}{j}" for i in range(4) for j in range(4)]
)

PATH_COLUMNS = ["t", "pos_x", "pos_y", "pos_z", "q_w", "q_x", "q_y", "q_z"]
SURFACE_COLUMNS = ["i", "j", "x", "z", "value"]
CHART_COLUMNS = ["t", "rel_min", "rel_max", "d_zp"]


def _num(x: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def _csv(header: list[str], rows: Iterable[list[str]]) -> bytes:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return ("\n".join(lines) + "\n").encode("utf-8")


def json_bytes(obj) -> bytes:
    # json.dumps renders floats with repr, matching the delimited output.
    return (json.dumps(obj, separators=(",", ":")) + "\n").encode("utf-8")


# --- frame streams ----------------------------------------------------------

def _frame_row(rec: FrameRecord) -> list[str]:
    row = [_num(rec.t),
           _num(rec.pose.position[0]), _num(rec.pose.position[1]), _num(rec.pose.position[2]),
           _num(rec.pose.orientation[0]), _num(rec.pose.orientation[1]),
           _num(rec.pose.orientation[2]), _num(rec.pose.orientation[3]),
           _num(rec.eye_offset), _num(rec.d_ia), _num(rec.d_zp_raw), _num(rec.d_zp),
           "1" if rec.was_clamped else "0"]
    row.extend(_num(v) for v in rec.projections.left.ravel().tolist())
    row.extend(_num(v) for v in rec.projections.right.ravel().tolist())
    return row


def frames_csv(frames: list[FrameRecord]) -> bytes:
    """One row per frame; matrices flattened row-major as left_ij/right_ij."""
    return _csv(FRAME_COLUMNS, (_frame_row(rec) for rec in frames))


def _frame_obj(rec: FrameRecord) -> dict:
    return {
        "t": rec.t,
        "position": list(rec.pose.position),
        "orientation": list(rec.pose.orientation),
        "eye_offset": rec.eye_offset,
        "d_ia": rec.d_ia,
        "d_zp_raw": rec.d_zp_raw,
        "d_zp": rec.d_zp,
        "was_clamped": rec.was_clamped,
        "left": rec.projections.left.tolist(),
        "right": rec.projections.right.tolist(),
    }


def frames_json(frames: list[FrameRecord]) -> bytes:
    return json_bytes({"frames": [_frame_obj(rec) for rec in frames]})


# --- path samples -----------------------------------------------------------

def path_csv(samples: list[tuple[float, Pose]]) -> bytes:
    rows = ([_num(t),
             _num(p.position[0]), _num(p.position[1]), _num(p.position[2]),
             _num(p.orientation[0]), _num(p.orientation[1]),
             _num(p.orientation[2]), _num(p.orientation[3])]
            for t, p in samples)
    return _csv(PATH_COLUMNS, rows)


def path_json(samples: list[tuple[float, Pose]]) -> bytes:
    return json_bytes({"samples": [
        {"t": t, "position": list(p.position), "orientation": list(p.orientation)}
        for t, p in samples
    ]})


# --- parameter surfaces -----------------------------------------------------

def surface_csv(xs, zs, values) -> bytes:
    """Long form of the lattice: row i (over zs) x column j (over xs)."""
    def rows():
        for i in range(len(zs)):
            for j in range(len(xs)):
                yield [str(i), str(j), _num(xs[j]), _num(zs[i]), _num(values[i][j])]
    return _csv(SURFACE_COLUMNS, rows())


def surface_json(param: str, xs, zs, values) -> bytes:
    return json_bytes({
        "param": param,
        "xs": [float(x) for x in xs],
        "zs": [float(z) for z in zs],
        "values": [[float(v) for v in row] for row in values],
    })


# --- depth charts -----------------------------------------------------------

def chart_csv(series: DepthChartSeries) -> bytes:
    rows = ([_num(t), _num(rel_min), _num(rel_max), _num(d_zp)]
            for t, rel_min, rel_max, d_zp in series.samples)
    return _csv(CHART_COLUMNS, rows)


def chart_json(series: DepthChartSeries) -> bytes:
    return json_bytes({"samples": [
        {"t": t, "rel_min": rel_min, "rel_max": rel_max, "d_zp": d_zp}
        for t, rel_min, rel_max, d_zp in series.samples
    ]})


def parse_probes(data: bytes | str) -> DepthProbeSeries:
    """Parse a depth-probe document: {"samples": [{t, d_min, d_max}, ...]}."""
    return parse_probes_doc(ju.loads(data, "probe file"))


def parse_probes_doc(doc) -> DepthProbeSeries:
    """Probe series from an already-parsed JSON document (extra keys ignored)."""
    raw, path = ju.require(doc, "samples", "")
    samples = []
    for i, item in enumerate(ju.array(raw, path)):
        base = ju.join(path, i)
        t, _ = ju.require(item, "t", base)
        d_min, _ = ju.require(item, "d_min", base)
        d_max, _ = ju.require(item, "d_max", base)
        samples.append((ju.number(t, ju.join(base, "t")),
                        ju.number(d_min, ju.join(base, "d_min")),
                        ju.number(d_max, ju.join(base, "d_max"))))
    try:
        return DepthProbeSeries(samples=tuple(samples))
    except ValueError as exc:
        raise LayoutFormatError(path, str(exc)) from exc


# --- validation reports and model dumps -------------------------------------

def validation_json(violations: list[Violation]) -> bytes:
    return json_bytes({
        "valid": not violations,
        "violations": [v.to_dict() for v in violations],
    })


def field_dump_json(param: str, field: RbfField) -> bytes:
    """Debug/oracle dump of a solved interpolant."""
    return json_bytes({
        "param": param,
        "kind": field.kind,
        "r0": field.r0,
        "residual": field.residual,
        "centers": field.centers.tolist(),
        "weights": field.weights.tolist(),
        "values": field.values.tolist(),
    })
