"""Exact arithmetic over Q[theta, 1/theta] and its fraction field.

Rationals are :class:`fractions.Fraction` (always stored reduced, denominator
positive).  On top of that this module provides

* :class:`ThetaLaurent` -- immutable Laurent polynomials in one variable,
* :class:`RatFunc` -- reduced quotients of two Laurent polynomials,
* :class:`ThetaMatrix` -- small dense matrices of Laurent polynomials,
* :func:`fraction_free_solve` -- Bareiss elimination for square systems.

Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence, Union

from .errors import SingularSystem

Scalar = Union[int, Fraction]


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.replace("−", "-"))
    raise TypeError(f"not an exact rational: {c!r}")


def format_fraction(c: Fraction) -> str:
    c = as_fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class ThetaLaurent:
    """Laurent polynomial sum(c_k * theta**k) with rational coefficients.

    Zero coefficients are never stored.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        terms = {}
        for k, c in (coeffs or {}).items():
            c = as_fraction(c)
            if c:
                terms[int(k)] = c
        self._terms = dict(sorted(terms.items()))
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "ThetaLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Scalar, k: int) -> "ThetaLaurent":
        return cls({k: c})

    @classmethod
    def zero(cls) -> "ThetaLaurent":
        return cls()

    @classmethod
    def one(cls) -> "ThetaLaurent":
        return cls({0: 1})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coeff(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def ord(self) -> int:
        if not self._terms:
            raise ValueError("ord of the zero Laurent polynomial")
        return next(iter(self._terms))

    @property
    def deg(self) -> int:
        if not self._terms:
            raise ValueError("deg of the zero Laurent polynomial")
        return next(reversed(self._terms))

    def leading_coeff(self) -> Fraction:
        return self._terms[self.deg]

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeff(0)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _lift(other) -> "ThetaLaurent":
        if isinstance(other, ThetaLaurent):
            return other
        return ThetaLaurent.const(as_fraction(other))

    def __add__(self, other) -> "ThetaLaurent":
        other = self._lift(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return ThetaLaurent(out)

    __radd__ = __add__

    def __neg__(self) -> "ThetaLaurent":
        return ThetaLaurent({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "ThetaLaurent":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "ThetaLaurent":
        return self._lift(other) - self

    def __mul__(self, other) -> "ThetaLaurent":
        if not isinstance(other, ThetaLaurent):
            return self.scale(other)
        out: dict[int, Fraction] = {}
        for i, a in self._terms.items():
            for j, b in other._terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return ThetaLaurent(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "ThetaLaurent":
        c = as_fraction(c)
        return ThetaLaurent({k: c * v for k, v in self._terms.items()})

    def shift(self, n: int) -> "ThetaLaurent":
        """Multiply by theta**n."""
        return ThetaLaurent({k + n: c for k, c in self._terms.items()})

    def theta_derivative(self) -> "ThetaLaurent":
        """theta * d/dtheta, i.e. theta**k -> k * theta**k."""
        return ThetaLaurent({k: k * c for k, c in self._terms.items()})

    def __pow__(self, n: int) -> "ThetaLaurent":
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (k, c), = self._terms.items()
            return ThetaLaurent({k * n: c ** n})
        out = ThetaLaurent.one()
        for _ in range(n):
            out = out * self
        return out

    def substitute_neg(self) -> "ThetaLaurent":
        """theta -> -theta."""
        return ThetaLaurent({k: (-c if k % 2 else c) for k, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, ThetaLaurent):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == ThetaLaurent.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"ThetaLaurent({self})"

    def __str__(self) -> str:
        return self.format("θ")

    def format(self, var: str = "θ") -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items(), reverse=True):
            if k == 0:
                body = format_fraction(c)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if c == 1:
                    body = mono
                elif c == -1:
                    body = "-" + mono
                else:
                    body = f"{format_fraction(c)}*{mono}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self) -> dict[str, str]:
        return {str(k): format_fraction(c) for k, c in self._terms.items()}


# -- univariate polynomial helpers (dense, ascending powers) -----------------

def _to_poly(p: ThetaLaurent) -> tuple[int, list[Fraction]]:
    """Split p = theta**s * q with q an ordinary polynomial, q(0) != 0."""
    s = p.ord
    return s, [p.coeff(k) for k in range(s, p.deg + 1)]


def _from_poly(coeffs: Sequence[Fraction], shift: int = 0) -> ThetaLaurent:
    return ThetaLaurent({i + shift: c for i, c in enumerate(coeffs)})


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _polydivmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num, den = _trim(list(num)), _trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [], num
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    r = list(num)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(den) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                r[i + j] -= c * d
    return _trim(q), _trim(r[: len(den) - 1])


def _polygcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _polydivmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def laurent_divexact(a: ThetaLaurent, b: ThetaLaurent) -> ThetaLaurent:
    """Exact quotient a / b in Q[theta, 1/theta]; raises if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return ThetaLaurent.zero()
    sa, pa = _to_poly(a)
    sb, pb = _to_poly(b)
    q, r = _polydivmod(pa, pb)
    if r:
        raise ArithmeticError(f"{b} does not divide {a}")
    return _from_poly(q, sa - sb)


def laurent_gcd(a: ThetaLaurent, b: ThetaLaurent) -> ThetaLaurent:
    """Monic polynomial gcd with nonzero constant term (units theta**k dropped)."""
    if a.is_zero() and b.is_zero():
        return ThetaLaurent.zero()
    if a.is_zero():
        a, b = b, a
    if b.is_zero():
        _, pa = _to_poly(a)
        return _from_poly([c / pa[-1] for c in pa])
    _, pa = _to_poly(a)
    _, pb = _to_poly(b)
    return _from_poly(_polygcd(pa, pb))


class RatFunc:
    """Reduced quotient num/den of Laurent polynomials.

    Canonical form: den is an ordinary monic polynomial with den(0) != 0 and
    gcd(num, den) = 1; all powers of theta live in num.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = ThetaLaurent._lift(num)
        den = ThetaLaurent.one() if den is None else ThetaLaurent._lift(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ThetaLaurent.zero(), ThetaLaurent.one()
            return
        s = den.ord
        den = den.shift(-s)
        num = num.shift(-s)
        g = laurent_gcd(num, den)
        if g.deg > 0:
            num = laurent_divexact(num, g)
            den = laurent_divexact(den, g)
        lead = den.leading_coeff()
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    def is_laurent(self) -> bool:
        return self.den == ThetaLaurent.one()

    def as_laurent(self) -> ThetaLaurent:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def ord(self) -> int:
        return self.num.ord - self.den.ord

    @property
    def deg(self) -> int:
        return self.num.deg - self.den.deg

    @staticmethod
    def _lift(x) -> "RatFunc":
        return x if isinstance(x, RatFunc) else RatFunc(x)

    def __add__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (RatFunc, ThetaLaurent, int, Fraction)):
            o = self._lift(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"


class ThetaMatrix:
    """Dense rows x cols matrix with ThetaLaurent entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        grid = tuple(tuple(ThetaLaurent._lift(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("empty matrix")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise ValueError("ragged matrix")
        self.rows, self.cols, self.entries = len(grid), width, grid

    @classmethod
    def identity(cls, n: int) -> "ThetaMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> ThetaLaurent:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[ThetaLaurent]:
        return [row[j] for row in self.entries]

    def apply(self, vec: Sequence[ThetaLaurent]) -> list[ThetaLaurent]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for row in self.entries:
            acc = ThetaLaurent.zero()
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def map(self, fn) -> "ThetaMatrix":
        return ThetaMatrix([[fn(e) for e in row] for row in self.entries])

    def __add__(self, other: "ThetaMatrix") -> "ThetaMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return ThetaMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "ThetaMatrix") -> "ThetaMatrix":
        return self + other.map(lambda e: -e)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"ThetaMatrix([{body}])"

    def to_json(self) -> list[list[str]]:
        return [[e.format("θ") for e in row] for row in self.entries]


def laurent_arith(a: ThetaLaurent, b: ThetaLaurent | Scalar | None, op: str) -> ThetaLaurent:
    """Dispatch helper: op in {"add", "mul", "scale", "derivative"}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    if op == "derivative":
        return a.theta_derivative()
    raise ValueError(f"unknown op {op!r}")


def fraction_free_solve(A: ThetaMatrix | Sequence[Sequence], y: Sequence) -> list[RatFunc]:
    """Solve A x = y over Q(theta) by Bareiss elimination.

    All intermediate quantities stay in Q[theta, 1/theta]; divisions in the
    elimination are exact.  The triangular system is then back-substituted
    in the fraction field.
    """
    if not isinstance(A, ThetaMatrix):
        A = ThetaMatrix(A)
    n = A.rows
    if A.cols != n:
        raise ValueError("fraction_free_solve needs a square matrix")
    if len(y) != n:
        raise ValueError("right-hand side has wrong length")
    M = [list(row) + [ThetaLaurent._lift(y[i])] for i, row in enumerate(A.entries)]
    prev = ThetaLaurent.one()
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k]), None)
        if piv is None:
            raise SingularSystem("matrix is singular over Q(theta)")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                M[i][j] = laurent_divexact(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev)
            M[i][k] = ThetaLaurent.zero()
        prev = M[k][k]
    x: list[RatFunc] = [RatFunc(0)] * n
    for i in range(n - 1, -1, -1):
        acc = RatFunc(M[i][n])
        for j in range(i + 1, n):
            if M[i][j]:
                acc = acc - RatFunc(M[i][j]) * x[j]
        x[i] = acc / RatFunc(M[i][i])
    return x
