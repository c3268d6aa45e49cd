"""Laurent polynomials in x, their critical data, fibers and direction frames.

Root finding is a self-contained Aberth--Ehrlich iteration on the cleared
polynomial ``x**b * (f(x) - t)``; roots closer than ``cluster_radius`` are
reported as a single point with multiplicity.
"""

from __future__ import annotations

import cmath
import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateInput, InadmissibleDirection, ParseError, RootFindingDiverged
from .exact import as_fraction, format_fraction

DEFAULT_TOL = 1e-12
CLUSTER_RADIUS = 1e-6
DISTINCT_TOL = 1e-8
MAX_ITER = 200


# ---------------------------------------------------------------------------
# Laurent polynomials in x
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    """f(x) = sum c_k x**k, exact rational coefficients, zero terms dropped."""

    coeffs: Mapping[int, Fraction]

    def __post_init__(self):
        clean = {int(k): as_fraction(c) for k, c in self.coeffs.items() if as_fraction(c) != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @property
    def degree(self) -> int:
        """a: the top exponent (0 if there are no positive powers)."""
        return max(0, max(self.coeffs, default=0))

    @property
    def pole_order(self) -> int:
        """b: the order of the pole at x = 0."""
        return max(0, -min(self.coeffs, default=0))

    @property
    def a(self) -> int:
        return self.degree

    @property
    def b(self) -> int:
        return self.pole_order

    def is_constant(self) -> bool:
        return set(self.coeffs) <= {0}

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * c for k, c in self.coeffs.items() if k})

    def __call__(self, x):
        return sum(float(c) * x ** k for k, c in self.coeffs.items())

    def eval(self, x: complex) -> complex:
        return complex(sum(complex(float(c)) * x ** k for k, c in self.coeffs.items()))

    def eval_deriv(self, x: complex) -> complex:
        return complex(sum(k * complex(float(c)) * x ** (k - 1) for k, c in self.coeffs.items() if k))

    def cleared(self, t: complex = 0.0) -> np.ndarray:
        """Coefficients (highest first) of x**b * (f(x) - t)."""
        b = self.pole_order
        top = self.degree + b
        out = np.zeros(top + 1, dtype=complex)
        for k, c in self.coeffs.items():
            out[top - (k + b)] += float(c)
        out[top - b] -= t
        return out

    def critical_numerator(self) -> np.ndarray:
        """Coefficients (highest first) of x**(b+1) * f'(x)."""
        b = self.pole_order
        terms = {k + b: k * float(c) for k, c in self.coeffs.items() if k}
        top = max(terms, default=0)
        out = np.zeros(top + 1, dtype=complex)
        for e, c in terms.items():
            out[top - e] += c
        return out

    def __str__(self) -> str:
        return format_laurent(self)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<x>x)|(?P<op>\*\*|[-+*^(){}−]))"
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse e.g. ``"x + x^-3"`` or ``"2/3*x^2 - x^-1"`` into a LaurentPoly."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    src = text.replace("−", "-")
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", 0)

    coeffs: dict[int, Fraction] = {}
    i = 0

    def peek(k=0):
        return tokens[i + k] if i + k < len(tokens) else (None, None, len(src))

    def parse_int() -> int:
        nonlocal i
        sign = 1
        kind, val, p = peek()
        if kind == "op" and val in "({":
            close = ")" if val == "(" else "}"
            i += 1
            n = parse_int()
            kind, val, p = peek()
            if val != close:
                raise ParseError(f"expected {close!r}", p)
            i += 1
            return n
        while kind == "op" and val in "+-":
            sign = -sign if val == "-" else sign
            i += 1
            kind, val, p = peek()
        if kind != "num" or "/" in val:
            raise ParseError("expected an integer exponent", p)
        i += 1
        return sign * int(val)

    first = True
    while i < len(tokens):
        sign = 1
        kind, val, p = peek()
        if kind == "op" and val in "+-":
            while kind == "op" and val in "+-":
                sign = -sign if val == "-" else sign
                i += 1
                kind, val, p = peek()
        elif not first:
            raise ParseError(f"expected '+' or '-' before term, got {val!r}", p)
        first = False
        coef = Fraction(1)
        exp = 0
        kind, val, p = peek()
        if kind == "num":
            coef = Fraction(val)
            i += 1
            kind, val, p = peek()
            if kind == "op" and val == "*":
                i += 1
                kind, val, p = peek()
                if kind != "x":
                    raise ParseError("expected 'x' after '*'", p)
            if kind == "x":
                i += 1
                exp = 1
        elif kind == "x":
            i += 1
            exp = 1
        else:
            raise ParseError(f"expected a term, got {val!r}" if val is not None else "expected a term at end of input", p)
        if exp == 1:
            kind, val, p = peek()
            if kind == "op" and val in ("^", "**"):
                i += 1
                exp = parse_int()
        kind, val, p = peek()
        if kind is not None and not (kind == "op" and val in "+-"):
            raise ParseError(f"unexpected token {val!r}", p)
        coeffs[exp] = coeffs.get(exp, Fraction(0)) + sign * coef
    return LaurentPoly(coeffs)


def format_laurent(f: LaurentPoly) -> str:
    if not f.coeffs:
        return "0"
    out = ""
    for k, c in sorted(f.coeffs.items(), reverse=True):
        neg = c < 0
        c = abs(c)
        if k == 0:
            body = format_fraction(c)
        else:
            mono = "x" if k == 1 else f"x^{k}"
            body = mono if c == 1 else f"{format_fraction(c)}*{mono}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------

def _backward_error(p: np.ndarray, z: np.ndarray) -> np.ndarray:
    absp = np.abs(p)
    return np.abs(np.polyval(p, z)) / np.maximum(np.polyval(absp, np.abs(z)), 1e-300)


def aberth_roots(p: Sequence[complex], tol: float = DEFAULT_TOL, *,
                 seed: int = 0, max_iter: int = MAX_ITER) -> np.ndarray:
    """All roots of the polynomial with coefficients ``p`` (highest first).

    Convergence is declared once every root has backward error below ``tol``
    and the Aberth corrections have stopped shrinking (multiple roots converge
    only linearly, so we keep iterating until the noise floor).
    """
    p = np.trim_zeros(np.asarray(p, dtype=complex), "f")
    n = len(p) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    p = p / p[0]
    dp = np.polyder(p)
    # geometric mean of the root moduli, bounded by the Cauchy bound
    r = abs(p[-1]) ** (1.0 / n) if p[-1] != 0 else 1.0
    r = min(max(r, 1e-3), 1 + np.max(np.abs(p[1:])))
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * (np.arange(n) + 0.25 + 0.5 * rng.random(n)) / n + 0.4
    z = r * np.exp(1j * angles)
    last = np.inf
    stall = 0
    for _ in range(max_iter):
        pz = np.polyval(p, z)
        dpz = np.polyval(dp, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(pz == 0, 0, pz / dpz)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0)
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        step = float(np.max(np.abs(w) / np.maximum(np.abs(z), 1.0)))
        if np.all(_backward_error(p, z) < tol):
            if step < 1e-15 or step >= last:
                stall += 1
                if stall >= 3 or step < 1e-15:
                    return z
        last = step
    if np.all(_backward_error(p, z) < tol):
        return z
    raise RootFindingDiverged(
        f"Aberth iteration did not reach backward error {tol} in {max_iter} steps"
    )


def cluster_points(z: Sequence[complex], radius: float = CLUSTER_RADIUS) -> list[tuple[complex, int]]:
    """Group points closer than ``radius`` (single linkage); return (mean, count)."""
    z = list(z)
    parent = list(range(len(z)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if abs(z[i] - z[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i, w in enumerate(z):
        groups.setdefault(find(i), []).append(w)
    return [(complex(np.mean(g)), len(g)) for g in groups.values()]


def _canonical_cmp(u: complex, v: complex, tol: float = 1e-9) -> int:
    scale = max(1.0, abs(u), abs(v))
    if abs(u.real - v.real) > tol * scale:
        return -1 if u.real > v.real else 1
    if abs(u.imag - v.imag) > tol * scale:
        return -1 if u.imag > v.imag else 1
    return 0


def canonical_order(points: Sequence[complex]) -> list[int]:
    """Indices sorting points by descending real part, then descending imaginary part."""
    key = functools.cmp_to_key(lambda i, j: _canonical_cmp(points[i], points[j]))
    return sorted(range(len(points)), key=key)


@dataclass(frozen=True)
class Fiber:
    """Points of f^{-1}(t) in canonical order, with cluster multiplicities."""

    base: complex
    points: tuple[complex, ...]
    multiplicities: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)

    def to_json(self) -> dict:
        return {
            "base": complex_json(self.base),
            "points": [complex_json(z) for z in self.points],
            "multiplicities": list(self.multiplicities),
        }


def complex_json(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def fiber(f: LaurentPoly, t: complex, tol: float = DEFAULT_TOL, *, seed: int = 0,
          cluster_radius: float = CLUSTER_RADIUS) -> Fiber:
    """All a + b preimages of t, clustered and canonically ordered."""
    if f.is_constant():
        raise DegenerateInput("fiber of a constant function")
    roots = aberth_roots(f.cleared(t), tol, seed=seed)
    clusters = cluster_points(roots, cluster_radius)
    pts = [c for c, _ in clusters]
    order = canonical_order(pts)
    return Fiber(complex(t), tuple(pts[i] for i in order), tuple(clusters[i][1] for i in order))


# ---------------------------------------------------------------------------
# critical data
# ---------------------------------------------------------------------------

@dataclass
class CriticalData:
    critical_points: list[complex]
    point_multiplicities: list[int]
    critical_values: list[complex]
    groups: dict[int, list[int]]
    fibers_at_critical: list[Fiber]

    def to_json(self) -> dict:
        return {
            "critical_points": [complex_json(z) for z in self.critical_points],
            "point_multiplicities": self.point_multiplicities,
            "critical_values": [complex_json(z) for z in self.critical_values],
            "fibers": [fb.to_json() for fb in self.fibers_at_critical],
        }


def critical_data(f: LaurentPoly, tol: float = DEFAULT_TOL, *, seed: int = 0,
                  cluster_radius: float = CLUSTER_RADIUS) -> CriticalData:
    if f.is_constant():
        raise DegenerateInput("constant function has no critical data")
    num = f.critical_numerator()
    roots = aberth_roots(num, tol, seed=seed) if len(np.trim_zeros(num, "f")) > 1 else []
    roots = [z for z in roots if abs(z) > cluster_radius]
    clusters = cluster_points(roots, cluster_radius)
    order = canonical_order([c for c, _ in clusters])
    points = [clusters[i][0] for i in order]
    mults = [clusters[i][1] for i in order]
    # polish simple critical points with Newton on f'
    fp = f.derivative()
    polished = []
    for z, m in zip(points, mults):
        if m == 1:
            for _ in range(3):
                d2 = sum(k * (k - 1) * float(c) * z ** (k - 2) for k, c in f.coeffs.items() if k not in (0, 1))
                if d2 == 0:
                    break
                z = z - fp.eval(z) / d2
        polished.append(complex(z))
    values_raw = [f.eval(z) for z in polished]
    vclusters = cluster_points(values_raw, DISTINCT_TOL * max(1.0, max((abs(v) for v in values_raw), default=1.0)))
    vorder = canonical_order([c for c, _ in vclusters])
    values = [vclusters[i][0] for i in vorder]
    groups: dict[int, list[int]] = {i: [] for i in range(len(values))}
    for j, v in enumerate(values_raw):
        i = min(range(len(values)), key=lambda i: abs(values[i] - v))
        groups[i].append(j)
    fibers = [fiber(f, v, tol, seed=seed, cluster_radius=cluster_radius) for v in values]
    return CriticalData(polished, mults, values, groups, fibers)


# ---------------------------------------------------------------------------
# directions
# ---------------------------------------------------------------------------

_PHASE = re.compile(r"^\s*(?P<sign>[-+]?)\s*(?P<num>\d*)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+))?\s*$")


def parse_phase(text: str | Fraction | int) -> Fraction:
    """'3pi/8' -> Fraction(3, 8): the phase as a rational multiple of pi."""
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    src = text.replace("π", "pi").replace("−", "-").strip()
    if src in ("0", "+0", "-0"):
        return Fraction(0)
    m = _PHASE.match(src)
    if not m:
        raise ParseError(f"cannot parse phase {text!r}; expected forms like 'pi/8' or '3pi/8'", 0)
    num = int(m.group("num") or 1)
    den = int(m.group("den") or 1)
    if den == 0:
        raise ParseError("zero denominator in phase", 0)
    val = Fraction(num, den)
    return -val if m.group("sign") == "-" else val


def format_phase(q: Fraction) -> str:
    q = Fraction(q)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    num = "" if q.numerator == 1 else str(q.numerator)
    den = "" if q.denominator == 1 else f"/{q.denominator}"
    return f"{sign}{num}pi{den}"


def wrap_phase(phi: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    phi = math.remainder(phi, 2 * math.pi)
    if phi <= -math.pi + 1e-12:
        phi += 2 * math.pi
    return phi


@dataclass
class DirectionFrame:
    alpha_phase: Fraction
    alpha: complex
    beta: complex
    values: list[complex]
    order: list[int]
    stokes_rays: list[float]
    sector_alpha: tuple[Fraction, Fraction]
    sector_minus_alpha: tuple[Fraction, Fraction]
    ordered_values: list[complex] = field(init=False)

    def __post_init__(self):
        self.ordered_values = [self.values[i] for i in self.order]

    def to_json(self) -> dict:
        return {
            "alpha_phase": format_phase(self.alpha_phase),
            "alpha": complex_json(self.alpha),
            "beta": complex_json(self.beta),
            "order": [complex_json(v) for v in self.ordered_values],
            "stokes_rays": self.stokes_rays,
            "stokes_rays_over_pi": [round(r / math.pi, 12) for r in self.stokes_rays],
            "sectors": {
                "H_alpha": [format_phase(p) for p in self.sector_alpha],
                "H_minus_alpha": [format_phase(p) for p in self.sector_minus_alpha],
            },
        }


def _on_halfline(origin: complex, direction: complex, point: complex, tol: float) -> bool:
    d = (point - origin) / direction
    return d.real >= -tol and abs(d.imag) <= tol


def direction_report(values: Sequence[complex], alpha_phase: Fraction | str,
                     tol: float = DISTINCT_TOL) -> DirectionFrame:
    """Order critical values for the direction alpha = exp(i*pi*alpha_phase).

    beta = i/alpha so that alpha*beta = i; values are sorted by Re(sigma*beta).
    """
    q = parse_phase(alpha_phase)
    values = [complex(v) for v in values]
    if not values:
        raise DegenerateInput("no critical values")
    scale = max(1.0, max(abs(v) for v in values))
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) < tol * scale:
                raise DegenerateInput("critical values are not pairwise distinct")
    alpha = cmath.exp(1j * math.pi * float(q))
    beta = 1j / alpha
    for i, si in enumerate(values):
        for j, sj in enumerate(values):
            if i != j and _on_halfline(si, alpha, sj, tol * scale):
                raise InadmissibleDirection(
                    f"collinear half-line: {si:.6g} + alpha*R>=0 contains {sj:.6g}"
                )
    proj = [(v * beta).real for v in values]
    order = sorted(range(len(values)), key=lambda i: proj[i])
    for i, j in zip(order, order[1:]):
        if abs(proj[i] - proj[j]) < tol * scale:
            raise InadmissibleDirection(f"tied projection Re(sigma*beta) for {values[i]:.6g}, {values[j]:.6g}")
    rays = sorted({0.0 + round(wrap_phase(cmath.phase(si - sj)), 12)
                   for i, si in enumerate(values) for j, sj in enumerate(values) if i != j})
    beta_phase = Fraction(1, 2) - q
    h_alpha = (beta_phase - 1, beta_phase)
    h_minus = (beta_phase, beta_phase + 1)
    return DirectionFrame(q, alpha, beta, values, order, rays, h_alpha, h_minus)
