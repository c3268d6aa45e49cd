"""End-to-end Stokes computation: geometry -> tracking -> quiver -> S_(+-beta)."""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import DegenerateInput, UnsupportedDegeneracy
from .geometry import (CLUSTER_RADIUS, DEFAULT_TOL, LaurentPoly, complex_json, critical_data,
                       direction_report, format_phase, parse_laurent, parse_phase)
from .stokes import assemble_stokes, extract_quiver, transposition_of
from .tracking import (TrackConfig, canonical_labels, cycle_type, halfline_boundary,
                       infinity_monodromy, loop_monodromy, matrix_to_perm)

SCHEMA = 1
SEED_ENV = "MIRROR_STOKES_SEED"


@dataclass
class RunSettings:
    f: str
    alpha_phase: str = "pi/8"
    seed: int = 0
    root_tol: float = DEFAULT_TOL
    cluster_radius: float = CLUSTER_RADIUS
    track_tol: float = 1e-10
    separation_floor: float = 1e-7
    step_scale: float = 1.0

    def track_config(self) -> TrackConfig:
        return TrackConfig(track_tol=self.track_tol, separation_floor=self.separation_floor,
                           cluster_radius=self.cluster_radius, root_tol=self.root_tol,
                           step_scale=self.step_scale, seed=self.seed)

    @classmethod
    def from_manifest(cls, manifest: dict) -> "RunSettings":
        return cls(**manifest["inputs"])


def resolve_seed(seed: int | None) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        return int(env)
    return 0 if seed is None else seed


def prepare(settings: RunSettings):
    """Parse f, compute critical data and the direction frame; reject unsupported input."""
    f = parse_laurent(settings.f)
    if f.a < 1 or f.b < 1:
        raise DegenerateInput(f"need a >= 1 and b >= 1, got a = {f.a}, b = {f.b}")
    crit = critical_data(f, settings.root_tol, seed=settings.seed,
                         cluster_radius=settings.cluster_radius)
    if not crit.critical_values:
        raise DegenerateInput("f has no critical points on G_m")
    if any(m > 1 for m in crit.point_multiplicities):
        raise UnsupportedDegeneracy("degenerate (non-Morse) critical point")
    if any(len(g) > 1 for g in crit.groups.values()):
        raise UnsupportedDegeneracy("several critical points share a critical value")
    frame = direction_report(crit.critical_values, parse_phase(settings.alpha_phase))
    return f, crit, frame


def run_stokes_pipeline(settings: RunSettings) -> dict:
    """Run the whole chain and return the manifest as a JSON-ready dict."""
    timings = {}
    t0 = time.perf_counter()
    f, crit, frame = prepare(settings)
    timings["geometry"] = time.perf_counter() - t0

    cfg = settings.track_config()
    t0 = time.perf_counter()
    labeling = canonical_labels(f, crit.critical_values, frame, cfg)
    T = [loop_monodromy(f, i, labeling, frame, cfg) for i in frame.order]
    b = [halfline_boundary(f, i, labeling, frame, cfg) for i in frame.order]
    T_inf = infinity_monodromy(f, crit.critical_values, labeling, cfg)
    timings["tracking"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    quiver = extract_quiver(T, b)
    stokes = assemble_stokes(quiver, frame)
    timings["stokes"] = time.perf_counter() - t0

    pairs = [transposition_of(t) for t in T]
    manifest = {
        "schema": SCHEMA,
        "tool": {"name": "mirror-stokes", "version": __version__},
        "inputs": asdict(settings),
        "f": {"text": str(f), "a": f.a, "b": f.b},
        "critical": crit.to_json(),
        "frame": frame.to_json(),
        "labeling": {
            **labeling.to_json(),
            "rule": "sheets over e sorted by descending real part, then descending imaginary part",
            "sign_note": ("u_i = e_p - e_q with p < q in this sheet order; relabeling the sheets "
                          "changes S_beta by conjugation with a diagonal +-1 matrix"),
        },
        "monodromy": {
            "T": T,
            "transpositions": [[p + 1, q + 1] for p, q in pairs],
            "b": b,
            "infinity": T_inf,
            "infinity_cycle_type": cycle_type(matrix_to_perm(T_inf)),
        },
        "quiver": quiver.to_json(),
        "stokes": stokes.to_json(),
        "timings": timings,
    }
    return manifest


def dumps(manifest: dict) -> str:
    return json.dumps(manifest, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def without_timings(manifest: dict) -> dict:
    return {k: v for k, v in manifest.items() if k != "timings"}
