"""Figure rendering for report artifacts.

Every CLI report path can drop a rendered figure next to its delimited
output: a top-down path map, a parameter-surface heatmap, per-frame
parameter traces, and the relative-depth chart.  Rendering is headless
(Agg); each function writes one image file and returns its path.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection

from .kinematics import CameraPath, eval_position
from .layout import DepthLayout
from .pipeline import DepthChartSeries, FrameRecord

DPI = 150


def _waypoint_markers(ax, layout: DepthLayout):
    xs = [wp.position[0] for wp in layout.waypoints]
    zs = [wp.position[2] for wp in layout.waypoints]
    ax.scatter(xs, zs, s=42, marker="o", facecolor="white",
               edgecolor="black", zorder=5)
    for i, wp in enumerate(layout.waypoints):
        ax.annotate(f"{i}\n{wp.d_ia:.3f} / {wp.d_zp:.2f}",
                    (wp.position[0], wp.position[2]),
                    textcoords="offset points", xytext=(6, 6),
                    fontsize=6, zorder=6)


def path_map(layout: DepthLayout, path: CameraPath, out: str, samples: int = 400) -> str:
    """Top-down map: the fitted curve as a playback-gradient polyline,
    waypoints as labeled markers (index plus authored d_ia / d_zp)."""
    ts = np.linspace(0.0, 1.0, samples)
    pts = np.array([eval_position(path, float(t)) for t in ts])
    ground = pts[:, [0, 2]]
    segs = np.stack([ground[:-1], ground[1:]], axis=1)

    fig, ax = plt.subplots(figsize=(6, 6))
    lc = LineCollection(segs, cmap="viridis", array=ts[:-1], linewidth=2)
    ax.add_collection(lc)
    _waypoint_markers(ax, layout)
    ax.autoscale()
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("z [m]")
    ax.set_title(f"{layout.name}: camera path ({path.mode})")
    fig.colorbar(lc, ax=ax, label="playback parameter t", shrink=0.8)
    fig.savefig(out, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return out


def surface_map(param: str, xs, zs, values, layout: DepthLayout, out: str) -> str:
    """Heatmap of one interpolated parameter surface over the ground plane,
    with the authoring waypoints on top."""
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    mesh = ax.pcolormesh(np.asarray(xs), np.asarray(zs), np.asarray(values),
                         shading="nearest", cmap="magma")
    _waypoint_markers(ax, layout)
    ax.set_aspect("equal", adjustable="box")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("z [m]")
    ax.set_title(f"{layout.name}: interpolated {param} surface [m]")
    fig.colorbar(mesh, ax=ax, label=f"{param} [m]", shrink=0.85)
    fig.savefig(out, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return out


def frame_traces(frames: list[FrameRecord], out: str) -> str:
    """Parameter traces along playback: interaxial separation on top,
    raw vs clamped zero-parallax distance below, clamped spans shaded."""
    ts = [f.t for f in frames]
    fig, (ax_ia, ax_zp) = plt.subplots(2, 1, figsize=(7, 5.5), sharex=True)

    ax_ia.plot(ts, [f.d_ia for f in frames], color="tab:blue", linewidth=1.5)
    ax_ia.set_ylabel("d_ia [m]")
    ax_ia.grid(alpha=0.3)

    ax_zp.plot(ts, [f.d_zp_raw for f in frames], color="tab:gray",
               linewidth=1.0, linestyle="--", label="interpolated")
    ax_zp.plot(ts, [f.d_zp for f in frames], color="tab:red",
               linewidth=1.5, label="comfort clamped")
    clamped = np.array([f.was_clamped for f in frames])
    if clamped.any():
        ax_zp.fill_between(ts, *ax_zp.get_ylim(), where=clamped,
                           color="tab:red", alpha=0.08, label="clamp active")
    ax_zp.set_xlabel("playback parameter t")
    ax_zp.set_ylabel("d_zp [m]")
    ax_zp.grid(alpha=0.3)
    ax_zp.legend(fontsize=8)

    fig.align_ylabels()
    fig.savefig(out, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return out


def chart_figure(series: DepthChartSeries, out: str) -> str:
    """Relative depth chart: scene min/max depth relative to the
    zero-parallax plane, the display plane itself at zero."""
    ts = [s[0] for s in series.samples]
    rel_min = [s[1] for s in series.samples]
    rel_max = [s[2] for s in series.samples]
    d_zp = [s[3] for s in series.samples]

    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.fill_between(ts, rel_min, rel_max, color="tab:blue", alpha=0.18,
                    label="scene depth range")
    ax.plot(ts, rel_max, color="tab:blue", linewidth=1.2, label="max depth")
    ax.plot(ts, rel_min, color="tab:orange", linewidth=1.2, label="min depth")
    ax.axhline(0.0, color="black", linewidth=1.0)
    ax.annotate("display plane (zero parallax)", (0.01, 0.0),
                textcoords="offset points", xytext=(2, 3), fontsize=7)

    ax2 = ax.twinx()
    ax2.plot(ts, d_zp, color="tab:green", linewidth=1.0, linestyle=":")
    ax2.set_ylabel("d_zp [m]", color="tab:green")
    ax2.tick_params(axis="y", labelcolor="tab:green")

    ax.set_xlabel("playback parameter t")
    ax.set_ylabel("depth relative to display plane [m]")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8, loc="upper right")
    fig.savefig(out, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return out
