"""Local HTTP JSON API for authoring sessions.

Sessions are in-memory: a layout is loaded (from a document or a bundled
preset), edited waypoint-by-waypoint, previewed (path, parameter surfaces,
frame streams, depth charts), and finally saved back to a file.  Preview
bodies are produced by the same serializers the CLI uses, so the two
routes emit byte-identical artifacts for identical inputs.

Concurrency: one lock per session serializes edits and reads, so a
preview never observes a half-applied edit; distinct sessions are
independent.  Prepared evaluation state is cached per session and
invalidated by every edit.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import __version__, _jsonutil as ju, formats
from .errors import (
    AsymmetricEyesError,
    DegenerateInterpolantError,
    InvalidLayoutError,
    LayoutFormatError,
    PathDomainError,
    ProjectionError,
    SingularSystemError,
    StereoRigError,
    UnsatisfiableBandError,
)
from .kinematics import eval_pose
from .layout import (
    PATH_MODES,
    DepthLayout,
    MIN_WAYPOINTS,
    Waypoint,
    layout_from_dict,
    parse_waypoint,
    serialize_layout,
    validate_layout,
    with_waypoints,
)
from .pipeline import (
    SPACINGS,
    PreparedSession,
    default_surface_bounds,
    depth_chart,
    eval_frames,
    prepare,
    surface_field,
)
from .presets import list_presets, load_preset
from .rbf import evaluate_grid

DEFAULT_EDIT_RADIUS = 2.0  # m; how far PATCH may move a waypoint per request

MAX_FRAMES = 1_000_000
MAX_SURFACE_RES = 2048

_SURFACE_PARAMS = {"d_ia": "d_ia", "ia": "d_ia", "d_zp": "d_zp", "zp": "d_zp"}


@dataclass
class SessionHandle:
    id: str
    layout: DepthLayout
    lock: threading.Lock = field(default_factory=threading.Lock)
    # prepared cache, keyed by (path mode, fixed params); cleared on edit
    prepared: dict = field(default_factory=dict)


class _ApiError(Exception):
    """Internal carrier for an HTTP error response."""

    def __init__(self, status: int, payload: dict):
        self.status = status
        self.payload = payload
        super().__init__(payload.get("error", ""))


def _error_response(status: int, payload: dict) -> Response:
    return Response(content=formats.json_bytes(payload), status_code=status,
                    media_type=formats.JSON_MEDIA_TYPE)


def _json_response(payload: dict, status: int = 200) -> Response:
    return Response(content=formats.json_bytes(payload), status_code=status,
                    media_type=formats.JSON_MEDIA_TYPE)


def _translate(exc: Exception) -> _ApiError:
    if isinstance(exc, _ApiError):
        return exc
    if isinstance(exc, LayoutFormatError):
        return _ApiError(400, {"error": exc.message, "path": exc.path})
    if isinstance(exc, InvalidLayoutError):
        return _ApiError(409, {"error": "layout fails validation",
                               "violations": [v.to_dict() for v in exc.violations]})
    if isinstance(exc, (UnsatisfiableBandError, SingularSystemError,
                        DegenerateInterpolantError, ProjectionError,
                        AsymmetricEyesError)):
        return _ApiError(409, {"error": str(exc)})
    if isinstance(exc, (PathDomainError, ValueError)):
        return _ApiError(400, {"error": str(exc)})
    raise exc


def _report(layout: DepthLayout) -> dict:
    violations = validate_layout(layout)
    return {"valid": not violations, "violations": [v.to_dict() for v in violations]}


def create_app(edit_radius: float = DEFAULT_EDIT_RADIUS) -> FastAPI:
    """Build the service application.

    ``edit_radius`` caps how far a single PATCH may move a waypoint,
    mirroring the authoring rule that positions are adjusted locally.
    """
    app = FastAPI(title="stereorig", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    sessions: dict[str, SessionHandle] = {}
    registry_lock = threading.Lock()
    counter = iter(range(1, 1_000_000_000))

    def _session(sid: str) -> SessionHandle:
        with registry_lock:
            handle = sessions.get(sid)
        if handle is None:
            raise _ApiError(404, {"error": f"unknown session {sid!r}"})
        return handle

    def _prepared(handle: SessionHandle, mode: str | None,
                  fixed: tuple[float, float] | None = None) -> PreparedSession:
        key = (mode, fixed)
        hit = handle.prepared.get(key)
        if hit is None:
            hit = prepare(handle.layout, path_mode=mode, fixed_params=fixed)
            handle.prepared[key] = hit
        return hit

    def _parse_mode(mode: str | None) -> str | None:
        if mode is not None and mode not in PATH_MODES:
            raise _ApiError(400, {"error": f"unknown path mode {mode!r}; "
                                           f"expected one of {list(PATH_MODES)}"})
        return mode

    def _format_response(fmt: str, csv_bytes, json_bytes_fn) -> Response:
        if fmt == "csv":
            return Response(content=csv_bytes(), media_type=formats.CSV_MEDIA_TYPE)
        if fmt == "json":
            return Response(content=json_bytes_fn(), media_type=formats.JSON_MEDIA_TYPE)
        raise _ApiError(400, {"error": f"unknown format {fmt!r}; expected 'csv' or 'json'"})

    @app.get("/healthz")
    async def healthz():
        return _json_response({"status": "ok", "version": __version__})

    @app.get("/presets")
    async def presets():
        return _json_response({"presets": list_presets()})

    @app.put("/sessions")
    async def create_session(request: Request):
        try:
            body = await request.body()
            doc = ju.loads(body, "session request")
            if isinstance(doc, dict) and set(doc.keys()) == {"preset"}:
                layout = load_preset(ju.string(doc["preset"], "preset"))
            else:
                layout = layout_from_dict(doc)
            with registry_lock:
                sid = f"s{next(counter)}"
                sessions[sid] = SessionHandle(id=sid, layout=layout)
            return _json_response({"id": sid, **_report(layout)})
        except Exception as exc:  # noqa: BLE001 - translated to HTTP codes
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.get("/sessions/{sid}/layout")
    async def get_layout(sid: str):
        try:
            handle = _session(sid)
            with handle.lock:
                return Response(content=serialize_layout(handle.layout),
                                media_type=formats.JSON_MEDIA_TYPE)
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.post("/sessions/{sid}/waypoints")
    async def add_waypoint(sid: str, request: Request):
        try:
            body = await request.body()
            handle = _session(sid)
            wp = parse_waypoint(ju.loads(body, "waypoint"), "")
            with handle.lock:
                handle.layout = with_waypoints(
                    handle.layout, (*handle.layout.waypoints, wp))
                handle.prepared.clear()
                return _json_response(
                    {"index": len(handle.layout.waypoints) - 1, **_report(handle.layout)})
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.delete("/sessions/{sid}/waypoints/last")
    async def remove_last_waypoint(sid: str):
        try:
            handle = _session(sid)
            with handle.lock:
                if len(handle.layout.waypoints) <= MIN_WAYPOINTS:
                    raise _ApiError(409, {
                        "error": f"cannot remove: a path needs at least "
                                 f"{MIN_WAYPOINTS} waypoints"})
                handle.layout = with_waypoints(
                    handle.layout, handle.layout.waypoints[:-1])
                handle.prepared.clear()
                return _json_response(
                    {"count": len(handle.layout.waypoints), **_report(handle.layout)})
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.patch("/sessions/{sid}/waypoints/{index}")
    async def edit_waypoint(sid: str, index: int, request: Request):
        try:
            body = await request.body()
            doc = ju.loads(body, "waypoint edit")
            handle = _session(sid)
            with handle.lock:
                wps = handle.layout.waypoints
                if not 0 <= index < len(wps):
                    raise _ApiError(404, {
                        "error": f"no waypoint {index}; layout has {len(wps)}"})
                current = wps[index]
                position = current.position
                if (found := ju.optional(doc, "position", "")) is not None:
                    position = ju.vector(found[0], found[1], 3)
                    dist = math.dist(position, current.position)
                    if dist > edit_radius:
                        raise _ApiError(409, {
                            "error": f"position moves {dist:.3f} m, beyond the "
                                     f"{edit_radius} m edit radius; move in steps"})
                orientation = current.orientation
                if (found := ju.optional(doc, "orientation", "")) is not None:
                    orientation = ju.vector(found[0], found[1], 4)
                d_ia = current.d_ia
                if (found := ju.optional(doc, "d_ia", "")) is not None:
                    d_ia = ju.number(*found)
                d_zp = current.d_zp
                if (found := ju.optional(doc, "d_zp", "")) is not None:
                    d_zp = ju.number(*found)
                edited = Waypoint(position=position, orientation=orientation,
                                  d_ia=d_ia, d_zp=d_zp)
                handle.layout = with_waypoints(
                    handle.layout, (*wps[:index], edited, *wps[index + 1:]))
                handle.prepared.clear()
                return _json_response({"index": index, **_report(handle.layout)})
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.get("/sessions/{sid}/path")
    async def get_path(sid: str, n: int = 200, mode: str | None = None,
                       format: str = "json"):
        try:
            handle = _session(sid)
            if not 2 <= n <= MAX_FRAMES:
                raise _ApiError(400, {"error": f"n must lie in [2, {MAX_FRAMES}], got {n}"})
            with handle.lock:
                session = _prepared(handle, _parse_mode(mode))
                samples = [(i / (n - 1), eval_pose(session.path, i / (n - 1)))
                           for i in range(n)]
            return _format_response(format,
                                    lambda: formats.path_csv(samples),
                                    lambda: formats.path_json(samples))
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.get("/sessions/{sid}/surface")
    async def get_surface(sid: str, param: str = "d_ia", res: int = 64,
                          x_min: float | None = None, x_max: float | None = None,
                          z_min: float | None = None, z_max: float | None = None,
                          format: str = "json"):
        try:
            handle = _session(sid)
            canonical = _SURFACE_PARAMS.get(param)
            if canonical is None:
                raise _ApiError(400, {"error": f"unknown surface parameter {param!r}; "
                                               f"expected 'd_ia' or 'd_zp'"})
            if not 2 <= res <= MAX_SURFACE_RES:
                raise _ApiError(400, {
                    "error": f"res must lie in [2, {MAX_SURFACE_RES}], got {res}"})
            explicit = (x_min, x_max, z_min, z_max)
            if any(v is not None for v in explicit) and None in explicit:
                raise _ApiError(400, {
                    "error": "bounds need all four of x_min, x_max, z_min, z_max"})
            with handle.lock:
                session = _prepared(handle, None)
                bounds = (explicit if None not in explicit
                          else default_surface_bounds(handle.layout))
                xs, zs, values = evaluate_grid(surface_field(session, canonical),
                                               bounds, res)
            xs_l, zs_l, values_l = xs.tolist(), zs.tolist(), values.tolist()
            return _format_response(
                format,
                lambda: formats.surface_csv(xs_l, zs_l, values_l),
                lambda: formats.surface_json(canonical, xs_l, zs_l, values_l))
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.get("/sessions/{sid}/frames")
    async def get_frames(sid: str, n: int = 100, spacing: str = "uniform-parameter",
                         mode: str | None = None, format: str = "json"):
        try:
            handle = _session(sid)
            if not 2 <= n <= MAX_FRAMES:
                raise _ApiError(400, {"error": f"n must lie in [2, {MAX_FRAMES}], got {n}"})
            if spacing not in SPACINGS:
                raise _ApiError(400, {"error": f"unknown spacing {spacing!r}; "
                                               f"expected one of {list(SPACINGS)}"})
            with handle.lock:
                session = _prepared(handle, _parse_mode(mode))
                frames = eval_frames(session, n, spacing)
            return _format_response(format,
                                    lambda: formats.frames_csv(frames),
                                    lambda: formats.frames_json(frames))
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.post("/sessions/{sid}/chart")
    async def post_chart(sid: str, request: Request, format: str = "json"):
        try:
            body = await request.body()
            handle = _session(sid)
            doc = ju.loads(body, "chart request")
            probes = formats.parse_probes_doc(doc)
            fixed = None
            fixed_ia = ju.optional(doc, "fixed_d_ia", "")
            fixed_zp = ju.optional(doc, "fixed_d_zp", "")
            if (fixed_ia is None) != (fixed_zp is None):
                raise _ApiError(400, {
                    "error": "fixed_d_ia and fixed_d_zp must be given together"})
            if fixed_ia is not None:
                fixed = (ju.number(*fixed_ia), ju.number(*fixed_zp))
            with handle.lock:
                session = _prepared(handle, None, fixed)
                series = depth_chart(session, probes)
            return _format_response(format,
                                    lambda: formats.chart_csv(series),
                                    lambda: formats.chart_json(series))
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    @app.post("/sessions/{sid}/save")
    async def save_session(sid: str, request: Request):
        try:
            body = await request.body()
            doc = ju.loads(body, "save request")
            raw, path_path = ju.require(doc, "path", "")
            target = ju.string(raw, path_path)
            handle = _session(sid)
            with handle.lock:
                blob = serialize_layout(handle.layout)
            with open(target, "wb") as fh:
                fh.write(blob)
            return _json_response({"path": target, "bytes": len(blob)})
        except OSError as exc:
            return _error_response(400, {"error": f"cannot write file: {exc}"})
        except Exception as exc:
            err = _translate(exc)
            return _error_response(err.status, err.payload)

    return app
