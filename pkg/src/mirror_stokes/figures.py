"""SVG figures of the base paths and their lifts.

Each file has two panels, the base plane (left) and the x-plane (right).
Panels are nested <svg> elements whose viewBox is the data bounding box plus
a 10% margin, so polyline coordinates are data coordinates with y negated.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .geometry import complex_json, fiber
from .pipeline import RunSettings, prepare, write_atomic
from .tracking import (PathPlan, Segment, TrackConfig, canonical_labels, cut_direction,
                       lift_path, loop_plan)

# sigma_1 green, sigma_2 red, sigma_3 purple, sigma_4 orange, then extras
COLORS = ["green", "red", "purple", "orange", "blue", "brown", "teal", "magenta"]
PANEL = 480
GAP = 40


def _color(i: int) -> str:
    return COLORS[i % len(COLORS)]


def _fmt(v: float) -> str:
    s = f"{v:.9f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _points(curve: Sequence[complex]) -> str:
    return " ".join(f"{_fmt(z.real)},{_fmt(-z.imag)}" for z in curve)


def _bbox(curves: Sequence[Sequence[complex]]) -> tuple[float, float, float, float]:
    xs = [z.real for c in curves for z in c]
    ys = [-z.imag for c in curves for z in c]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    w = max(x1 - x0, 1e-9)
    h = max(y1 - y0, 1e-9)
    side = max(w, h)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = side * 1.1 / 2
    return cx - half, cy - half, 2 * half, 2 * half


def _panel(x_offset: int, title: str, curves: list[dict], marks: list[dict]) -> list[str]:
    all_pts = [c["points"] for c in curves] + [[m["at"]] for m in marks]
    vx, vy, vw, vh = _bbox(all_pts)
    r = vw / 150
    out = [f'<svg x="{x_offset}" y="30" width="{PANEL}" height="{PANEL}" '
           f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
           f'<rect x="{_fmt(vx)}" y="{_fmt(vy)}" width="{_fmt(vw)}" height="{_fmt(vh)}" '
           'fill="white" stroke="black" vector-effect="non-scaling-stroke"/>']
    for c in curves:
        attrs = " ".join(f'data-{k}="{v}"' for k, v in c.get("data", {}).items())
        dash = ' stroke-dasharray="4 3"' if c.get("dashed") else ""
        out.append(f'<polyline class="{c["kind"]}" {attrs} fill="none" stroke="{c["color"]}" '
                   f'stroke-width="1.2" vector-effect="non-scaling-stroke"{dash} '
                   f'points="{_points(c["points"])}"/>')
    for m in marks:
        z = m["at"]
        out.append(f'<circle class="{m["kind"]}" cx="{_fmt(z.real)}" cy="{_fmt(-z.imag)}" '
                   f'r="{_fmt(r)}" fill="{m["color"]}"/>')
    out.append("</svg>")
    out.append(f'<text x="{x_offset + PANEL / 2}" y="20" text-anchor="middle" '
               f'font-family="sans-serif" font-size="14">{title}</text>')
    return out


def _document(title: str, base_curves, base_marks, x_curves, x_marks) -> str:
    width = 2 * PANEL + GAP
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL + 40}" '
             f'viewBox="0 0 {width} {PANEL + 40}">',
             f"<title>{title}</title>"]
    lines += _panel(0, "base", base_curves, base_marks)
    lines += _panel(PANEL + GAP, "x-plane", x_curves, x_marks)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _lift_curves(f, plan: PathPlan, start, cfg: TrackConfig, color: str, tag: dict) -> tuple[list[dict], list]:
    lift = lift_path(f, plan, start, cfg)
    curves = []
    for j, curve in enumerate(lift.sheet_curves()):
        curves.append({"kind": "lift", "color": color, "points": curve,
                       "data": {**tag, "sheet": j + 1}})
    return curves, lift


def figure_data(settings: RunSettings) -> dict:
    """Compute every curve drawn by :func:`emit_figures` (also used by tests)."""
    f, crit, frame = prepare(settings)
    cfg = TrackConfig(**{**settings.track_config().__dict__, "keep_samples": True})
    labeling = canonical_labels(f, crit.critical_values, frame, cfg)
    ordered = [frame.values[i] for i in frame.order]
    vmax = max(abs(v) for v in ordered)
    L = 1.5 * vmax + 1.0
    sig_marks = [{"kind": "sigma", "color": _color(k), "at": v} for k, v in enumerate(ordered)]
    crit_marks = []
    for k, i in enumerate(frame.order):
        for z in crit.fibers_at_critical[i].points:
            crit_marks.append({"kind": "critical-fiber", "color": _color(k), "at": z})
    out = {}

    # preimages of the full lines sigma + alpha*R
    base, lifted = [], []
    for k, v in enumerate(ordered):
        for side in (1, -1):
            far = v + side * L * frame.alpha
            near = v + side * 10 * cfg.cluster_radius * frame.alpha
            plan = PathPlan([Segment.line(far, near)], f"line {k + 1}", labeling.eps / 8)
            start = fiber(f, far, cfg.root_tol, seed=cfg.seed, cluster_radius=cfg.cluster_radius)
            base.append({"kind": "path", "color": _color(k), "points": [far, near],
                         "data": {"sigma": k + 1}})
            cs, _ = _lift_curves(f, plan, start, cfg, _color(k), {"sigma": k + 1})
            lifted += cs
    out["preimages"] = (base, sig_marks, lifted, crit_marks)

    # loops gamma_i
    base, lifted = [], []
    e_marks = [{"kind": "base-point", "color": "black", "at": labeling.base_point}]
    sheet_marks = [{"kind": "sheet", "color": "black", "at": z} for z in labeling.sheets.points]
    for k, i in enumerate(frame.order):
        plan = loop_plan(frame, labeling, i)
        base.append({"kind": "path", "color": _color(k), "points": plan.sample(),
                     "data": {"sigma": k + 1}})
        cs, _ = _lift_curves(f, plan, labeling.sheets, cfg, _color(k), {"sigma": k + 1})
        lifted += cs
    out["loops"] = (base, sig_marks + e_marks, lifted, sheet_marks + crit_marks)

    # half-lines (cut direction) and their lifts, traced inward
    base, lifted = [], []
    cut = cut_direction(frame)
    for k, v in enumerate(ordered):
        far = v + L * cut
        near = v + 10 * cfg.cluster_radius * cut
        plan = PathPlan([Segment.line(far, near)], f"halfline {k + 1}", labeling.eps / 8)
        start = fiber(f, far, cfg.root_tol, seed=cfg.seed, cluster_radius=cfg.cluster_radius)
        base.append({"kind": "path", "color": _color(k), "points": [far, near],
                     "data": {"sigma": k + 1}})
        cs, _ = _lift_curves(f, plan, start, cfg, _color(k), {"sigma": k + 1})
        lifted += cs
    out["halflines"] = (base, sig_marks, lifted, crit_marks)
    out["labeling"] = labeling
    return out


TITLES = {
    "preimages": "lines through the critical values and their preimages",
    "loops": "loops around the critical values and their lifts",
    "halflines": "half-lines and their lifts",
}


def emit_figures(settings: RunSettings, out_dir: str | Path) -> list[Path]:
    data = figure_data(settings)
    out_dir = Path(out_dir)
    paths = []
    export = {}
    for name in ("preimages", "loops", "halflines"):
        base, bmarks, lifted, xmarks = data[name]
        svg = _document(TITLES[name], base, bmarks, lifted, xmarks)
        p = out_dir / f"{name}.svg"
        write_atomic(p, svg)
        paths.append(p)
        export[name] = {
            "base": [{"sigma": c["data"]["sigma"], "points": [complex_json(z) for z in c["points"]]}
                     for c in base],
            "lifts": [{**c["data"], "points": [complex_json(z) for z in c["points"]]}
                      for c in lifted],
        }
    p = out_dir / "curves.json"
    write_atomic(p, json.dumps({"schema": 1, **export}) + "\n")
    paths.append(p)
    return paths
