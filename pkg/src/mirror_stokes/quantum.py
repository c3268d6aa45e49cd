"""Small orbifold quantum cohomology of P(a, b) for coprime weights, q = 1.

The ring is modelled as Q[x, 1/x] / (x**(a+b) - b/a) with y = 1/x; the basis
is the monomial window x**k, k = -b .. a-1, ordered by orbifold degree
(k/a for k >= 0, -k/b for k < 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedWeights
from .exact import ThetaLaurent, ThetaMatrix, format_fraction


def _check(a: int, b: int) -> None:
    if a < 1 or b < 1:
        raise UnsupportedWeights(f"weights must be positive, got ({a}, {b})")
    if math.gcd(a, b) != 1:
        raise UnsupportedWeights(f"gcd({a}, {b}) > 1 is not supported")


def _degree(k: int, a: int, b: int) -> Fraction:
    return Fraction(k, a) if k >= 0 else Fraction(-k, b)


@dataclass(frozen=True)
class OrbifoldBasis:
    a: int
    b: int
    exponents: tuple[int, ...]   # x**k; negative k means y**-k
    degrees: tuple[Fraction, ...]

    @property
    def labels(self) -> list[str]:
        out = []
        for k in self.exponents:
            if k == 0:
                out.append("1")
            elif k > 0:
                out.append("x" if k == 1 else f"x^{k}")
            else:
                out.append("y" if k == -1 else f"y^{-k}")
        return out

    @property
    def mu(self) -> list[Fraction]:
        # degrees are already halved relative to the real cohomological degree
        return [d - Fraction(1, 2) for d in self.degrees]

    def to_json(self) -> dict:
        return {"weights": [self.a, self.b], "basis": self.labels,
                "degrees": [format_fraction(d) for d in self.degrees],
                "mu": [format_fraction(m) for m in self.mu]}


def orbifold_data(a: int, b: int) -> OrbifoldBasis:
    _check(a, b)
    ks = sorted(range(-b, a), key=lambda k: _degree(k, a, b))
    return OrbifoldBasis(a, b, tuple(ks), tuple(_degree(k, a, b) for k in ks))


def _reduce_exponent(e: int, a: int, b: int) -> tuple[int, Fraction]:
    """x**e == c * x**k with k in [-b, a-1], using x**(a+b) = b/a."""
    n = a + b
    c = Fraction(1)
    while e > a - 1:
        e -= n
        c *= Fraction(b, a)
    while e < -b:
        e += n
        c *= Fraction(a, b)
    return e, c


def quantum_mult(a: int, b: int) -> list[list[Fraction]]:
    """Matrix of multiplication by -K = x**a + y**b in the degree-ordered basis."""
    basis = orbifold_data(a, b)
    pos = {k: i for i, k in enumerate(basis.exponents)}
    n = a + b
    C = [[Fraction(0)] * n for _ in range(n)]
    for j, k in enumerate(basis.exponents):
        for shift in (a, -b):
            e, c = _reduce_exponent(k + shift, a, b)
            C[pos[e]][j] += c
    return C


@dataclass(frozen=True)
class QuantumConnectionData:
    basis: OrbifoldBasis
    C: tuple[tuple[Fraction, ...], ...]
    mu: tuple[Fraction, ...]
    singularities: str = "irregular singular at z = 0, regular singular at z = infinity"

    def as_theta_matrix(self) -> ThetaMatrix:
        """-C/z + mu as a matrix of Laurent polynomials in z."""
        n = len(self.mu)
        return ThetaMatrix([
            [ThetaLaurent({-1: -self.C[i][j], 0: self.mu[i] if i == j else 0}) for j in range(n)]
            for i in range(n)
        ])

    def format(self) -> str:
        rows_c = "; ".join(", ".join(format_fraction(x) for x in r) for r in self.C)
        mu = ", ".join(format_fraction(m) for m in self.mu)
        return f"∇_(z∂z) = z∂z - (1/z)[{rows_c}] + diag({mu})"

    def to_json(self) -> dict:
        return {"basis": self.basis.to_json(),
                "C": [[format_fraction(x) for x in r] for r in self.C],
                "mu": [format_fraction(m) for m in self.mu],
                "text": self.format(), "singularities": self.singularities}


def quantum_connection(a: int, b: int) -> QuantumConnectionData:
    basis = orbifold_data(a, b)
    C = quantum_mult(a, b)
    return QuantumConnectionData(basis, tuple(tuple(r) for r in C), tuple(basis.mu))
