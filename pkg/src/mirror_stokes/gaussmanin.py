"""Localized Fourier--Laplace transform of the Gauss--Manin system of f on G_m.

Classes of 1-forms x**m dx are rewritten modulo (theta*d - df^) into the basis
x**-1 dx, ..., x**-(a+b) dx.  With g = x**k the relation reads

    theta * k * x**(k-1) dx  ==  f'(x) * x**k dx,

and isolating the top (resp. bottom) monomial of f'(x) x**k gives a rule that
lowers every exponent m >= 0 (resp. raises every m <= -(a+b)-1).  The two
rules never feed each other, so rewriting terminates and is confluent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NoCyclicVector, RankMismatch, ReductionFailure, SingularSystem
from .exact import RatFunc, ThetaLaurent, ThetaMatrix, fraction_free_solve, format_fraction
from .geometry import LaurentPoly

FormClass = dict  # exponent m -> ThetaLaurent coefficient of x**m dx


def _add_term(cls: FormClass, m: int, c: ThetaLaurent) -> None:
    new = cls.get(m, ThetaLaurent.zero()) + c
    if new:
        cls[m] = new
    else:
        cls.pop(m, None)


def reduce_form(f: LaurentPoly, form: Mapping[int, ThetaLaurent | int | Fraction],
                order: str = "top", rng: random.Random | None = None) -> list[ThetaLaurent]:
    """Coordinates of the class of sum_m form[m] x**m dx in the basis x**-1 dx ... x**-n dx.

    ``order`` picks which reducible exponent is rewritten next: "top" (largest
    first), "bottom" (smallest first) or "random".
    """
    a, b = f.a, f.b
    n = a + b
    if a < 1 or b < 1:
        raise ReductionFailure("need a >= 1 and b >= 1")
    top_c = f.coeffs[a] * a
    bot_c = f.coeffs[-b] * (-b)
    if top_c == 0 or bot_c == 0:
        raise ReductionFailure("vanishing leading or trailing coefficient")
    dcoef = {j: j * c for j, c in f.coeffs.items() if j}
    cls: FormClass = {}
    for m, c in form.items():
        c = c if isinstance(c, ThetaLaurent) else ThetaLaurent.const(c)
        _add_term(cls, int(m), c)
    span = max([abs(m) for m in cls] + [0])
    # top-first needs about span + n steps; other orders may revisit exponents
    cap = 200 * n * (span + n) ** 2
    rng = rng or random.Random(0)
    steps = 0
    while True:
        bad = [m for m in cls if m >= 0 or m <= -n - 1]
        if not bad:
            break
        steps += 1
        if steps > cap:
            raise ReductionFailure(f"rewriting did not terminate within {cap} steps")
        if order == "top":
            m = max(bad)
        elif order == "bottom":
            m = min(bad)
        else:
            m = rng.choice(sorted(bad))
        coef = cls.pop(m)
        if m >= 0:
            k, lead, skip = m - a + 1, top_c, a
        else:
            k, lead, skip = m + b + 1, bot_c, -b
        # lead * x**m dx == theta*k*x**(k-1) dx - sum_{j != skip} j c_j x**(j-1+k) dx
        inv = 1 / lead
        if k:
            _add_term(cls, k - 1, coef.shift(1).scale(k * inv))
        for j, dc in dcoef.items():
            if j != skip:
                _add_term(cls, j - 1 + k, coef.scale(-dc * inv))
    return [cls.get(-(i + 1), ThetaLaurent.zero()) for i in range(n)]


@dataclass(frozen=True)
class ThetaConnection:
    """nabla_{theta d/dtheta} = theta d/dtheta + M(theta) on a free module."""

    matrix: ThetaMatrix
    basis: tuple[str, ...]

    @property
    def rank(self) -> int:
        return self.matrix.rows

    def nabla(self, vec: Sequence[ThetaLaurent]) -> list[ThetaLaurent]:
        return [d + m for d, m in zip((v.theta_derivative() for v in vec), self.matrix.apply(vec))]

    def to_json(self) -> dict:
        return {"rank": self.rank, "basis": list(self.basis), "M": self.matrix.to_json()}


def gm_connection(f: LaurentPoly) -> ThetaConnection:
    """Column i of M is (1/theta) * [f * x**-(i+1) dx] in the basis."""
    n = f.a + f.b
    cols = []
    for i in range(n):
        form = {k - (i + 1): ThetaLaurent.const(c) for k, c in f.coeffs.items()}
        cols.append([c.shift(-1) for c in reduce_form(f, form)])
    M = ThetaMatrix([[cols[j][i] for j in range(n)] for i in range(n)])
    basis = tuple("dx/x" if i == 0 else f"dx/x^{i + 1}" for i in range(n))
    return ThetaConnection(M, basis)


@dataclass(frozen=True)
class DiffOperator:
    """sum_k coeffs[k] * (theta d/dtheta)**k, monic: coeffs[-1] == 1."""

    coeffs: tuple[RatFunc, ...]
    cyclic_vector: tuple[ThetaLaurent, ...] | None = None

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def format(self, var: str = "t") -> str:
        parts = []
        D = f"({var}·d/d{var})"
        for k in range(self.order, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            op = "" if k == 0 else (D if k == 1 else f"{D}^{k}")
            if c.is_laurent():
                lt = c.num
                if lt.is_constant():
                    val = lt.constant_value()
                    mag = format_fraction(abs(val))
                    sign = "-" if val < 0 else "+"
                    body = op if (abs(val) == 1 and op) else (f"{mag}*{op}" if op else mag)
                    parts.append((sign, body))
                    continue
                if len(lt.terms) == 1:
                    (e, val), = lt.terms.items()
                    sign = "-" if val < 0 else "+"
                    mono = ThetaLaurent.monomial(abs(val), e).format(var)
                    parts.append((sign, f"{mono}*{op}" if op else mono))
                    continue
            text = str(c).replace("θ", var)
            parts.append(("+", f"({text})*{op}" if op else f"({text})"))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [
                {"num": c.num.to_json(), "den": c.den.to_json()} for c in self.coeffs
            ],
            "text": self.format(),
        }


def _power_vectors(conn: ThetaConnection, m: Sequence[ThetaLaurent]) -> list[list[ThetaLaurent]]:
    vecs = [list(m)]
    for _ in range(conn.rank):
        vecs.append(conn.nabla(vecs[-1]))
    return vecs


def cyclic_operator(conn: ThetaConnection, seed: int = 0) -> DiffOperator:
    """Monic scalar operator annihilating a cyclic vector.

    Tries e_seed, e_seed+1, ..., then the all-ones vector.
    """
    n = conn.rank
    one, zero = ThetaLaurent.one(), ThetaLaurent.zero()
    candidates = [[one if j == i else zero for j in range(n)] for i in range(seed, n)]
    candidates.append([one] * n)
    for m in candidates:
        vecs = _power_vectors(conn, m)
        A = ThetaMatrix([[vecs[k][r] for k in range(n)] for r in range(n)])
        try:
            c = fraction_free_solve(A, vecs[n])
        except SingularSystem:
            continue
        coeffs = tuple(-ck for ck in c) + (RatFunc(1),)
        return DiffOperator(coeffs, tuple(m))
    raise NoCyclicVector("no basis vector nor the all-ones vector is cyclic")


def operator_residual(conn: ThetaConnection, P: DiffOperator) -> list[RatFunc]:
    """sum_k a_k nabla^k m for the recorded cyclic vector (zero iff P annihilates m)."""
    vecs = _power_vectors(conn, P.cyclic_vector)
    out = [RatFunc(0)] * conn.rank
    for k, a in enumerate(P.coeffs):
        out = [o + a * RatFunc(v) for o, v in zip(out, vecs[k])]
    return out


@dataclass
class NewtonPolygon:
    points: list[tuple[int, int]]
    vertices: list[tuple[int, int]]
    slopes: list[Fraction]
    infinity_points: list[tuple[int, int]]
    infinity_slopes: list[Fraction]

    @property
    def regular_at_zero(self) -> bool:
        return not self.slopes

    @property
    def regular_at_infinity(self) -> bool:
        return not self.infinity_slopes

    def to_json(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "vertices": [list(p) for p in self.vertices],
            "slopes": [format_fraction(s) for s in self.slopes],
            "regular_at_zero": self.regular_at_zero,
            "infinity_points": [list(p) for p in self.infinity_points],
            "infinity_slopes": [format_fraction(s) for s in self.infinity_slopes],
            "regular_at_infinity": self.regular_at_infinity,
        }


def _boundary(points: Sequence[tuple[int, int]]) -> tuple[list[tuple[int, int]], list[Fraction]]:
    """Vertices and positive slopes of the boundary of the union of the
    quadrants {x <= k, y >= v} over the points (k, v)."""
    lowest = min(v for _, v in points)
    start = max(k for k, v in points if v == lowest)
    right = max(k for k, _ in points)
    verts = [(start, lowest)]
    slopes: list[Fraction] = []
    cur = verts[0]
    while cur[0] < right:
        cands = [(Fraction(v - cur[1], k - cur[0]), k, v) for k, v in points if k > cur[0]]
        s = min(c[0] for c in cands)
        k, v = max((c[1], c[2]) for c in cands if c[0] == s)
        cur = (k, v)
        verts.append(cur)
        if s > 0:
            slopes.append(s)
    return verts, slopes


def newton_slopes(P: DiffOperator) -> NewtonPolygon:
    """Newton polygon of P at theta = 0 (points (k, ord a_k)) and, mirrored in
    1/theta, at theta = infinity (points (k, -deg a_k))."""
    nz = [(k, c) for k, c in enumerate(P.coeffs) if not c.is_zero()]
    if not nz:
        raise ValueError("zero operator")
    pts = [(k, c.ord) for k, c in nz]
    inf_pts = [(k, -c.deg) for k, c in nz]
    verts, slopes = _boundary(pts)
    _, inf_slopes = _boundary(inf_pts)
    return NewtonPolygon(sorted(pts, reverse=True), verts, sorted(slopes),
                         sorted(inf_pts, reverse=True), sorted(inf_slopes))


@dataclass
class GaugeReport:
    match: bool
    residual: ThetaMatrix
    transformed: ThetaMatrix

    def to_json(self) -> dict:
        return {"match": self.match, "residual": self.residual.to_json(),
                "transformed": self.transformed.to_json()}


def gauge_compare(conn: ThetaConnection, quantum_matrix: ThetaMatrix, flip: bool = True) -> GaugeReport:
    """Shift M by -1/2 (gauge theta**-1/2), optionally substitute theta -> -theta,
    and compare with the quantum connection matrix -C/z + mu (z = theta)."""
    n = conn.rank
    if quantum_matrix.rows != n or quantum_matrix.cols != n:
        raise RankMismatch(f"ranks differ: {n} vs {quantum_matrix.rows}")
    half = ThetaMatrix([[Fraction(1, 2) if i == j else 0 for j in range(n)] for i in range(n)])
    G = conn.matrix - half
    if flip:
        G = G.map(lambda e: e.substitute_neg())
    residual = G - quantum_matrix
    return GaugeReport(residual.is_zero(), residual, G)
