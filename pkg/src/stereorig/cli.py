"""Batch command-line interface.

Every artifact-producing verb writes through the same serializers the HTTP
service uses, so a file produced here is byte-identical to the matching
endpoint body.  Delimited output is the default; ``--out`` ending in
``.json`` selects the JSON form.  ``--plot`` drops a rendered figure next
to the data file, and ``report`` emits the full artifact set at once.
"""

from __future__ import annotations

import os
import sys

import click

from . import __version__, formats
from .errors import StereoRigError
from .kinematics import eval_pose
from .layout import PATH_MODES, DepthLayout, deserialize_layout, validate_layout
from .pipeline import (
    SPACINGS,
    default_surface_bounds,
    depth_chart,
    eval_frames,
    prepare,
    surface_field,
)
from .presets import list_presets, preset_bytes
from .rbf import evaluate_grid

_PARAM_CHOICES = ("d_ia", "ia", "d_zp", "zp")


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _load_layout(path: str) -> DepthLayout:
    try:
        with open(path, "rb") as fh:
            return deserialize_layout(fh.read())
    except OSError as exc:
        raise _fail(exc) from exc
    except StereoRigError as exc:
        raise _fail(exc) from exc


def _write(out: str, data: bytes):
    try:
        with open(out, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise _fail(exc) from exc
    click.echo(f"wrote {out} ({len(data)} bytes)")


def _is_json(out: str) -> bool:
    return out.lower().endswith(".json")


def _figure_path(out: str) -> str:
    return os.path.splitext(out)[0] + ".png"


def _canonical_param(param: str) -> str:
    return "d_ia" if param in ("d_ia", "ia") else "d_zp"


def _fixed_pair(fixed_d_ia, fixed_d_zp):
    if (fixed_d_ia is None) != (fixed_d_zp is None):
        raise click.UsageError("--fixed-d-ia and --fixed-d-zp must be given together")
    if fixed_d_ia is None:
        return None
    return (fixed_d_ia, fixed_d_zp)


@click.group()
@click.version_option(version=__version__, prog_name="stereorig")
def main():
    """Authored stereoscopic camera control: validate layouts, stream
    frames, sample parameter surfaces, chart depth comfort, or serve the
    authoring API."""


@main.command()
@click.argument("layout_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Also write the report as JSON.")
def validate(layout_file, out):
    """Check a layout against every engine invariant."""
    layout = _load_layout(layout_file)
    violations = validate_layout(layout)
    if out:
        _write(out, formats.validation_json(violations))
    if not violations:
        click.echo(f"{layout_file}: valid ({len(layout.waypoints)} waypoints)")
        return
    for v in violations:
        where = f"waypoint {v.waypoint}" if v.waypoint is not None else "layout"
        click.echo(f"{where} / {v.field}: {v.message}", err=True)
    sys.exit(1)


@main.command()
@click.argument("layout_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", default=100, show_default=True, help="Number of frames.")
@click.option("--spacing", type=click.Choice(SPACINGS), default="uniform-parameter",
              show_default=True)
@click.option("--mode", type=click.Choice(PATH_MODES), default=None,
              help="Override the layout's path mode.")
@click.option("--fixed-d-ia", type=float, default=None,
              help="Pin interaxial separation (with --fixed-d-zp).")
@click.option("--fixed-d-zp", type=float, default=None,
              help="Pin zero-parallax distance (with --fixed-d-ia).")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output file; .json selects JSON, anything else CSV.")
@click.option("--plot", is_flag=True, help="Render parameter traces next to --out.")
def frames(layout_file, n, spacing, mode, fixed_d_ia, fixed_d_zp, out, plot):
    """Evaluate the per-frame record stream along the camera path."""
    layout = _load_layout(layout_file)
    try:
        session = prepare(layout, path_mode=mode,
                          fixed_params=_fixed_pair(fixed_d_ia, fixed_d_zp))
        records = eval_frames(session, n, spacing)
    except (StereoRigError, ValueError) as exc:
        raise _fail(exc) from exc
    _write(out, formats.frames_json(records) if _is_json(out)
           else formats.frames_csv(records))
    if plot:
        from . import report

        click.echo(f"wrote {report.frame_traces(records, _figure_path(out))}")


@main.command()
@click.argument("layout_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--param", type=click.Choice(_PARAM_CHOICES), default="d_ia",
              show_default=True, help="Which parameter surface to sample.")
@click.option("--res", default=64, show_default=True, help="Grid resolution per axis.")
@click.option("--bounds", default=None,
              help="x_min,x_max,z_min,z_max (default: waypoint box +20%).")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output file; .json selects JSON, anything else CSV.")
@click.option("--plot", is_flag=True, help="Render a heatmap next to --out.")
def surface(layout_file, param, res, bounds, out, plot):
    """Sample an interpolated parameter surface on a ground-plane grid."""
    layout = _load_layout(layout_file)
    param = _canonical_param(param)
    try:
        session = prepare(layout)
        if bounds is not None:
            parts = bounds.split(",")
            if len(parts) != 4:
                raise click.UsageError("--bounds needs x_min,x_max,z_min,z_max")
            rect = tuple(float(p) for p in parts)
        else:
            rect = default_surface_bounds(layout)
        xs, zs, values = evaluate_grid(surface_field(session, param), rect, res)
    except (StereoRigError, ValueError) as exc:
        raise _fail(exc) from exc
    xs_l, zs_l, values_l = xs.tolist(), zs.tolist(), values.tolist()
    _write(out, formats.surface_json(param, xs_l, zs_l, values_l) if _is_json(out)
           else formats.surface_csv(xs_l, zs_l, values_l))
    if plot:
        from . import report

        click.echo(f"wrote {report.surface_map(param, xs, zs, values, layout, _figure_path(out))}")


@main.command()
@click.argument("layout_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--probes", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Depth probe file: {\"samples\": [{t, d_min, d_max}, ...]}.")
@click.option("--fixed-d-ia", type=float, default=None,
              help="Pin interaxial separation (with --fixed-d-zp).")
@click.option("--fixed-d-zp", type=float, default=None,
              help="Pin zero-parallax distance (with --fixed-d-ia).")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Output file; .json selects JSON, anything else CSV.")
@click.option("--plot", is_flag=True, help="Render the chart next to --out.")
def chart(layout_file, probes, fixed_d_ia, fixed_d_zp, out, plot):
    """Chart scene depth relative to the zero-parallax plane."""
    layout = _load_layout(layout_file)
    try:
        with open(probes, "rb") as fh:
            series_in = formats.parse_probes(fh.read())
        session = prepare(layout, fixed_params=_fixed_pair(fixed_d_ia, fixed_d_zp))
        series = depth_chart(session, series_in)
    except OSError as exc:
        raise _fail(exc) from exc
    except (StereoRigError, ValueError) as exc:
        raise _fail(exc) from exc
    _write(out, formats.chart_json(series) if _is_json(out)
           else formats.chart_csv(series))
    if plot:
        from . import report

        click.echo(f"wrote {report.chart_figure(series, _figure_path(out))}")


@main.command()
@click.argument("layout_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", type=click.Path(file_okay=False), required=True,
              help="Directory for the artifact set (created if missing).")
@click.option("--n", default=400, show_default=True, help="Frames in the stream.")
@click.option("--res", default=96, show_default=True, help="Surface grid resolution.")
@click.option("--probes", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Optional depth probes; adds the relative-depth chart.")
def report(layout_file, out_dir, n, res, probes):
    """Produce the full report: validation, frames, surfaces, path map,
    and (with probes) the depth chart — delimited data plus figures."""
    from . import report as figures

    layout = _load_layout(layout_file)
    os.makedirs(out_dir, exist_ok=True)
    dest = lambda name: os.path.join(out_dir, name)  # noqa: E731

    violations = validate_layout(layout)
    _write(dest("validation.json"), formats.validation_json(violations))
    if violations:
        raise click.ClickException(
            f"layout is invalid ({len(violations)} violations); see validation.json")

    try:
        session = prepare(layout)
        records = eval_frames(session, n)
        _write(dest("frames.csv"), formats.frames_csv(records))
        click.echo(f"wrote {figures.frame_traces(records, dest('frames.png'))}")

        samples = [(i / 199, eval_pose(session.path, i / 199)) for i in range(200)]
        _write(dest("path.csv"), formats.path_csv(samples))
        click.echo(f"wrote {figures.path_map(layout, session.path, dest('path.png'))}")

        rect = default_surface_bounds(layout)
        for param in ("d_ia", "d_zp"):
            xs, zs, values = evaluate_grid(surface_field(session, param), rect, res)
            _write(dest(f"surface_{param}.csv"),
                   formats.surface_csv(xs.tolist(), zs.tolist(), values.tolist()))
            click.echo(f"wrote {figures.surface_map(param, xs, zs, values, layout, dest(f'surface_{param}.png'))}")

        if probes:
            with open(probes, "rb") as fh:
                series = depth_chart(session, formats.parse_probes(fh.read()))
            _write(dest("chart.csv"), formats.chart_csv(series))
            click.echo(f"wrote {figures.chart_figure(series, dest('chart.png'))}")
    except OSError as exc:
        raise _fail(exc) from exc
    except (StereoRigError, ValueError) as exc:
        raise _fail(exc) from exc


@main.command()
@click.option("--export", default=None, metavar="NAME",
              help="Write the named preset layout instead of listing.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Destination for --export (defaults to NAME.json).")
def presets(export, out):
    """List bundled example layouts, or export one to a file."""
    if export is None:
        for name in list_presets():
            click.echo(name)
        return
    try:
        data = preset_bytes(export)
    except StereoRigError as exc:
        raise _fail(exc) from exc
    _write(out or f"{export}.json", data)


@main.command()
@click.option("--port", default=8765, show_default=True)
@click.option("--bind", default="127.0.0.1", show_default=True,
              help="Interface to listen on.")
@click.option("--edit-radius", default=2.0, show_default=True,
              help="Maximum waypoint move per edit request, meters.")
def serve(port, bind, edit_radius):
    """Run the authoring HTTP API."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(edit_radius=edit_radius), host=bind, port=port,
                log_level="info")


if __name__ == "__main__":
    main()
