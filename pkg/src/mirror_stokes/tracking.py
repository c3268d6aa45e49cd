"""Analytic continuation of fibers of f along paths in the base.

All canonical paths are built in the frame rotated by -1/alpha, where every
cut sigma - alpha*R>=0 becomes a horizontal ray pointing right.  The base
point sits on the far side of the cuts (Re(e) > Re(sigma)).  The
complement of those rays is simply connected, so a route that stays inside it
is unique up to homotopy; only the small circle around sigma_i leaves it.

Sheets are continued by an Euler predictor (dx = dt / f'(x)) followed by at
most ``max_corrector`` Newton steps on f(x) = t.  A step is rejected and
halved when the corrector fails, when two sheets come closer than
``separation_floor``, or when a sheet moves more than a third of its distance
to the nearest other sheet (path-jumping guard).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import AmbiguousLimit, CorrectorDiverged, DegenerateBasePoint, SheetCollision
from .geometry import (CLUSTER_RADIUS, DEFAULT_TOL, DirectionFrame, Fiber, LaurentPoly,
                       canonical_order, complex_json, fiber)


@dataclass(frozen=True)
class TrackConfig:
    track_tol: float = 1e-10
    separation_floor: float = 1e-7
    cluster_radius: float = CLUSTER_RADIUS
    root_tol: float = DEFAULT_TOL
    max_corrector: int = 5
    # multiplies the default max step eps/8; 0.5 is the step-halving check
    step_scale: float = 1.0
    min_step: float = 1e-13
    seed: int = 0
    keep_samples: bool = False


# ---------------------------------------------------------------------------
# path plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    kind: str  # "line" or "arc"
    start: complex
    end: complex
    center: complex = 0j
    radius: float = 0.0
    theta0: float = 0.0
    theta1: float = 0.0

    @classmethod
    def line(cls, a: complex, b: complex) -> "Segment":
        return cls("line", complex(a), complex(b))

    @classmethod
    def arc(cls, center: complex, radius: float, theta0: float, theta1: float) -> "Segment":
        c = complex(center)
        return cls("arc", c + radius * cmath.exp(1j * theta0), c + radius * cmath.exp(1j * theta1),
                   c, float(radius), float(theta0), float(theta1))

    def point(self, s: float) -> complex:
        if self.kind == "line":
            return self.start + s * (self.end - self.start)
        return self.center + self.radius * cmath.exp(1j * (self.theta0 + s * (self.theta1 - self.theta0)))

    @property
    def length(self) -> float:
        if self.kind == "line":
            return abs(self.end - self.start)
        return abs(self.radius * (self.theta1 - self.theta0))

    def reversed(self) -> "Segment":
        if self.kind == "line":
            return Segment.line(self.end, self.start)
        return Segment.arc(self.center, self.radius, self.theta1, self.theta0)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "start": complex_json(self.start), "end": complex_json(self.end)}
        if self.kind == "arc":
            d.update(center=complex_json(self.center), radius=self.radius,
                     theta0=self.theta0, theta1=self.theta1)
        return d


@dataclass
class PathPlan:
    segments: list[Segment]
    purpose: str
    max_step: float

    @property
    def start(self) -> complex:
        return self.segments[0].start

    @property
    def end(self) -> complex:
        return self.segments[-1].end

    def is_closed(self, tol: float = 1e-9) -> bool:
        return abs(self.start - self.end) < tol

    def sample(self, per_unit: float = 40.0) -> list[complex]:
        pts = []
        for seg in self.segments:
            n = max(2, int(seg.length * per_unit))
            pts.extend(seg.point(k / n) for k in range(n + (seg is self.segments[-1])))
        return pts

    def to_json(self) -> dict:
        return {"purpose": self.purpose, "max_step": self.max_step,
                "segments": [s.to_json() for s in self.segments]}


def _check_continuity(segments: Sequence[Segment]) -> None:
    for s0, s1 in zip(segments, segments[1:]):
        if abs(s0.end - s1.start) > 1e-9 * max(1.0, abs(s0.end)):
            raise ValueError("path segments do not join")


# ---------------------------------------------------------------------------
# continuation
# ---------------------------------------------------------------------------

class _Evaluator:
    def __init__(self, f: LaurentPoly):
        self.exps = np.array(list(f.coeffs), dtype=float)
        self.coefs = np.array([float(c) for c in f.coeffs.values()], dtype=complex)
        nz = self.exps != 0
        self.dexps = self.exps[nz] - 1
        self.dcoefs = self.coefs[nz] * self.exps[nz]

    def f(self, x: np.ndarray) -> np.ndarray:
        return (self.coefs * x[:, None] ** self.exps).sum(axis=1)

    def df(self, x: np.ndarray) -> np.ndarray:
        return (self.dcoefs * x[:, None] ** self.dexps).sum(axis=1)


def _min_separation(x: np.ndarray) -> tuple[float, np.ndarray]:
    if len(x) < 2:
        return math.inf, np.full(len(x), math.inf)
    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)
    nearest = d.min(axis=1)
    return float(nearest.min()), nearest


@dataclass
class TrackLog:
    steps: int = 0
    rejected: int = 0
    max_step: float = 0.0
    min_separation: float = math.inf

    def to_json(self) -> dict:
        return {"steps": self.steps, "rejected": self.rejected, "max_step": self.max_step,
                "min_separation": self.min_separation}


def continue_points(f: LaurentPoly, segments: Sequence[Segment], x0: Sequence[complex],
                    max_step: float, cfg: TrackConfig, log: TrackLog | None = None,
                    samples: list | None = None) -> np.ndarray:
    """Continue the points x0 (lying over segments[0].start) along the segments."""
    ev = _Evaluator(f)
    x = np.array(x0, dtype=complex)
    log = log if log is not None else TrackLog()
    h_max = max_step * cfg.step_scale
    sep, nearest = _min_separation(x)
    log.min_separation = min(log.min_separation, sep)
    for seg in segments:
        L = seg.length
        if L == 0:
            continue
        s = 0.0
        t_old = seg.point(0.0)
        ds = min(1.0, h_max / L)
        while s < 1.0:
            ds = min(ds, 1.0 - s, h_max / L)
            t_new = seg.point(s + ds)
            scale = max(1.0, abs(t_new))
            d = ev.df(x)
            if np.any(d == 0):
                raise CorrectorDiverged(f"f'(x) vanished on a tracked sheet near t={t_new:.6g}")
            xn = x + (t_new - t_old) / d
            ok = False
            for _ in range(cfg.max_corrector):
                r = ev.f(xn) - t_new
                dn = ev.df(xn)
                if np.any(dn == 0) or not np.all(np.isfinite(xn)):
                    break
                xn = xn - r / dn
                if np.all(np.abs(ev.f(xn) - t_new) < cfg.track_tol * scale):
                    ok = True
                    break
            if ok:
                new_sep, _ = _min_separation(xn)
                moved = np.abs(xn - x)
                ok = new_sep > cfg.separation_floor and bool(np.all(moved < nearest / 3))
            if not ok:
                log.rejected += 1
                ds *= 0.5
                if ds * L < cfg.min_step:
                    new_sep, _ = _min_separation(xn) if np.all(np.isfinite(xn)) else (0.0, None)
                    if new_sep <= cfg.separation_floor:
                        raise SheetCollision(
                            f"sheets closer than {cfg.separation_floor:g} near t={t_new:.6g}")
                    raise CorrectorDiverged(f"step size underflow near t={t_new:.6g}")
                continue
            x = xn
            s += ds
            t_old = t_new
            log.steps += 1
            log.max_step = max(log.max_step, ds * L)
            sep, nearest = _min_separation(x)
            log.min_separation = min(log.min_separation, sep)
            if samples is not None:
                samples.append((t_new, x.copy()))
            ds *= 2
    return x


@dataclass
class TrackedLift:
    start: Fiber
    end_points: list[complex]
    correspondence: list[int | None]
    log: TrackLog
    plan: PathPlan
    samples: list = field(default_factory=list)

    def sheet_curves(self) -> list[list[complex]]:
        """Per-sheet polylines in the x-plane (needs keep_samples)."""
        n = len(self.start.points)
        curves = [[self.start.points[j]] for j in range(n)]
        for _, xs in self.samples:
            for j in range(n):
                curves[j].append(complex(xs[j]))
        return curves


def _match(points: Sequence[complex], targets: Sequence[complex], radius: float) -> list[int | None]:
    out: list[int | None] = []
    for p in points:
        d = [abs(p - q) for q in targets]
        k = int(np.argmin(d))
        out.append(k if d[k] < radius else None)
    return out


def lift_path(f: LaurentPoly, plan: PathPlan, start: Fiber, cfg: TrackConfig = TrackConfig(),
              end_fiber: Fiber | None = None) -> TrackedLift:
    """Continue every sheet of ``start`` along ``plan`` and match to the end fiber."""
    if abs(start.base - plan.start) > 1e-9 * max(1.0, abs(plan.start)):
        raise ValueError("start fiber does not lie over the start of the path")
    _check_continuity(plan.segments)
    log = TrackLog()
    samples: list | None = [] if cfg.keep_samples else None
    end = continue_points(f, plan.segments, start.points, plan.max_step, cfg, log, samples)
    if end_fiber is None:
        end_fiber = start if plan.is_closed() else fiber(f, plan.end, cfg.root_tol, seed=cfg.seed,
                                                         cluster_radius=cfg.cluster_radius)
    corr = _match(list(end), end_fiber.points, 10 * cfg.cluster_radius)
    if plan.is_closed() and (None in corr or len(set(corr)) != len(corr)):
        raise SheetCollision("closed loop did not return to a permutation of the start fiber")
    return TrackedLift(start, [complex(z) for z in end], corr, log, plan, samples or [])


def permutation_matrix(corr: Sequence[int]) -> list[list[int]]:
    """T with T[corr[j]][j] = 1: column j is the image of sheet j."""
    n = len(corr)
    T = [[0] * n for _ in range(n)]
    for j, k in enumerate(corr):
        T[k][j] = 1
    return T


# ---------------------------------------------------------------------------
# canonical geometry
# ---------------------------------------------------------------------------

def cut_direction(frame: DirectionFrame) -> complex:
    """Unit direction of the cuts attached to each critical value."""
    return -frame.alpha


def to_rotated(frame: DirectionFrame, t: complex) -> complex:
    return t / cut_direction(frame)


def from_rotated(frame: DirectionFrame, w: complex) -> complex:
    return w * cut_direction(frame)


def _dist_to_ray(p: complex, origin: complex) -> float:
    """Distance from p to the ray origin + R>=0 (rotated frame)."""
    if p.real >= origin.real:
        return abs(p.imag - origin.imag)
    return abs(p - origin)


def loop_radius(frame: DirectionFrame, i: int) -> float:
    """eps_i: a quarter of the distance from sigma_i to other values and their rays."""
    rot = [to_rotated(frame, v) for v in frame.values]
    p = rot[i]
    d = [min(abs(p - q), _dist_to_ray(p, q)) for j, q in enumerate(rot) if j != i]
    if not d:
        return 0.25 * max(1.0, abs(p))
    return min(d) / 4


@dataclass
class SheetLabeling:
    base_point: complex
    sheets: Fiber
    eps: float
    nudges: int = 0

    def to_json(self) -> dict:
        return {"base_point": complex_json(self.base_point), "sheets": self.sheets.to_json(),
                "eps": self.eps, "nudges": self.nudges}


def canonical_labels(f: LaurentPoly, values: Sequence[complex], frame: DirectionFrame,
                     cfg: TrackConfig = TrackConfig()) -> SheetLabeling:
    """Base point e = 2 max|sigma| on the real axis, nudged upward until generic."""
    vmax = max([abs(v) for v in values] + [0.0]) or 1.0
    eps = min(loop_radius(frame, i) for i in range(len(frame.values)))
    rot = [to_rotated(frame, v) for v in frame.values]
    e = complex(2 * vmax, 0.0)
    for nudge in range(101):
        ehat = to_rotated(frame, e)
        generic = all(abs(ehat.imag - r.imag) > eps / 2 for r in rot)
        if generic:
            fb = fiber(f, e, cfg.root_tol, seed=cfg.seed, cluster_radius=cfg.cluster_radius)
            sep, _ = _min_separation(np.array(fb.points))
            if len(fb.points) == f.a + f.b and sep > 10 * cfg.cluster_radius:
                return SheetLabeling(e, fb, eps, nudge)
        e += 0.01j * vmax
    raise DegenerateBasePoint("no generic base point found in 100 nudges")


def _route(frame: DirectionFrame, labeling: SheetLabeling, i: int, eps_i: float) -> list[complex]:
    """Corner points (rotated frame) from e-hat to sigma_i-hat - eps_i."""
    rot = [to_rotated(frame, v) for v in frame.values]
    ehat = to_rotated(frame, labeling.base_point)
    spread = max([abs(r) for r in rot] + [1.0])
    x_left = min([r.real for r in rot] + [ehat.real]) - 0.5 * spread
    target = rot[i] - eps_i
    return [ehat, complex(x_left, ehat.imag), complex(x_left, target.imag), target]


def _polyline(frame: DirectionFrame, pts: Sequence[complex]) -> list[Segment]:
    return [Segment.line(from_rotated(frame, a), from_rotated(frame, b))
            for a, b in zip(pts, pts[1:]) if abs(a - b) > 0]


def _rotated_arc(frame: DirectionFrame, center_hat: complex, r: float, th0: float, th1: float) -> Segment:
    rot = cmath.phase(cut_direction(frame))
    return Segment.arc(from_rotated(frame, center_hat), r, th0 + rot, th1 + rot)


def _max_step(labeling: SheetLabeling) -> float:
    return labeling.eps / 8


def loop_plan(frame: DirectionFrame, labeling: SheetLabeling, i: int) -> PathPlan:
    """gamma_i: route to sigma_i - eps, one counterclockwise turn, route back."""
    eps_i = loop_radius(frame, i)
    pts = _route(frame, labeling, i, eps_i)
    out = _polyline(frame, pts)
    circle = _rotated_arc(frame, to_rotated(frame, frame.values[i]), eps_i, math.pi, 3 * math.pi)
    back = [s.reversed() for s in reversed(out)]
    segs = out + [circle] + back
    return PathPlan(segs, f"loop {i}", _max_step(labeling))


def halfline_plan(frame: DirectionFrame, labeling: SheetLabeling, i: int, stop: float) -> PathPlan:
    """Route to sigma_i - eps, lower half circle onto the ray, then inward to distance ``stop``."""
    eps_i = loop_radius(frame, i)
    pts = _route(frame, labeling, i, eps_i)
    out = _polyline(frame, pts)
    sig = to_rotated(frame, frame.values[i])
    arc = _rotated_arc(frame, sig, eps_i, math.pi, 2 * math.pi)
    inward = Segment.line(from_rotated(frame, sig + eps_i), from_rotated(frame, sig + stop))
    return PathPlan(out + [arc, inward], f"halfline {i}", _max_step(labeling))


def loop_monodromy(f: LaurentPoly, i: int, labeling: SheetLabeling, frame: DirectionFrame,
                   cfg: TrackConfig = TrackConfig()) -> list[list[int]]:
    """Permutation matrix of continuation along gamma_i (index i into frame.values)."""
    lift = lift_path(f, loop_plan(frame, labeling, i), labeling.sheets, cfg)
    return permutation_matrix(lift.correspondence)


def _richardson_sqrt(x1: complex, x2: complex, x3: complex) -> complex:
    """Limit at s=0 from samples at s, s/4, s/16 of x = x0 + c1 sqrt(s) + c2 s + ..."""
    r1 = 2 * x2 - x1
    r2 = 2 * x3 - x2
    return (4 * r2 - r1) / 3


def halfline_limits(f: LaurentPoly, i: int, labeling: SheetLabeling, frame: DirectionFrame,
                    cfg: TrackConfig = TrackConfig()) -> tuple[list[complex], Fiber]:
    """Limits at sigma_i of the sheets continued along the half-line approach."""
    stop = 10 * cfg.cluster_radius
    plan = halfline_plan(frame, labeling, i, 16 * stop)
    log = TrackLog()
    x1 = continue_points(f, plan.segments, labeling.sheets.points, plan.max_step, cfg, log)
    sig = frame.values[i]
    a = cut_direction(frame)
    seg2 = [Segment.line(sig + 16 * stop * a, sig + 4 * stop * a)]
    x2 = continue_points(f, seg2, x1, plan.max_step, cfg, log)
    seg3 = [Segment.line(sig + 4 * stop * a, sig + stop * a)]
    x3 = continue_points(f, seg3, x2, plan.max_step, cfg, log)
    limits = [_richardson_sqrt(p, q, r) for p, q, r in zip(x1, x2, x3)]
    crit = fiber(f, sig, cfg.root_tol, seed=cfg.seed, cluster_radius=cfg.cluster_radius)
    return limits, crit


def halfline_boundary(f: LaurentPoly, i: int, labeling: SheetLabeling, frame: DirectionFrame,
                      cfg: TrackConfig = TrackConfig()) -> list[list[int]]:
    """0/1 matrix b_i: row j has a 1 in the column of the critical point sheet j lands on."""
    limits, crit = halfline_limits(f, i, labeling, frame, cfg)
    corr = _match(limits, crit.points, cfg.cluster_radius)
    if None in corr:
        j = corr.index(None)
        raise AmbiguousLimit(f"sheet {j} on half-line {i} ended at {limits[j]:.8g}, "
                             "not within cluster_radius of the critical fiber")
    b = [[0] * len(crit.points) for _ in limits]
    for j, k in enumerate(corr):
        b[j][k] = 1
    return b


def infinity_plan(values: Sequence[complex], labeling: SheetLabeling) -> PathPlan:
    """Radial segment from e to a big circle around mean(Sigma), one ccw turn, back."""
    c = complex(np.mean(values)) if len(values) else 0j
    e = labeling.base_point
    R = max(abs(e - c), 2 * max([abs(v - c) for v in values] + [0.0]))
    th = cmath.phase(e - c)
    p = c + R * cmath.exp(1j * th)
    segs = []
    if abs(p - e) > 0:
        segs.append(Segment.line(e, p))
    segs.append(Segment.arc(c, R, th, th + 2 * math.pi))
    if abs(p - e) > 0:
        segs.append(Segment.line(p, e))
    return PathPlan(segs, "big circle", _max_step(labeling))


def infinity_monodromy(f: LaurentPoly, values: Sequence[complex], labeling: SheetLabeling,
                       cfg: TrackConfig = TrackConfig()) -> list[list[int]]:
    lift = lift_path(f, infinity_plan(values, labeling), labeling.sheets, cfg)
    return permutation_matrix(lift.correspondence)


# ---------------------------------------------------------------------------
# permutation helpers
# ---------------------------------------------------------------------------

def matrix_to_perm(T: Sequence[Sequence[int]]) -> list[int]:
    """corr with corr[j] = image of sheet j."""
    n = len(T)
    return [next(k for k in range(n) if T[k][j]) for j in range(n)]


def cycle_type(perm: Sequence[int]) -> list[int]:
    seen = set()
    out = []
    for j in range(len(perm)):
        if j in seen:
            continue
        k, n = j, 0
        while k not in seen:
            seen.add(k)
            k = perm[k]
            n += 1
        out.append(n)
    return sorted(out)
