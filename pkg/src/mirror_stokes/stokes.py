"""Quiver data (Psi, Phi_i, u_i, v_i) and the Stokes matrices S_beta, S_-beta.

Everything here is integer linear algebra on small dense lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InconsistentTopology, UnsupportedDegeneracy
from .geometry import DirectionFrame, format_phase

IntMatrix = list[list[int]]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(len(B[0]))] for row in A]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*A)]


def rank(A: Sequence[Sequence[int]]) -> int:
    M = [[Fraction(x) for x in row] for row in A]
    r = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                q = M[i][c] / M[r][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def transposition_of(T: Sequence[Sequence[int]]) -> tuple[int, int] | None:
    """(p, q) with p < q if T is the permutation matrix of a transposition."""
    n = len(T)
    moved = [j for j in range(n) if not T[j][j]]
    if len(moved) != 2:
        return None
    p, q = moved
    if T[p][q] == 1 and T[q][p] == 1 and all(T[j][j] == 1 for j in range(n) if j not in moved):
        return p, q
    return None


@dataclass
class Quiver:
    n: int
    T: list[IntMatrix]
    b: list[IntMatrix]
    phi_dims: list[int]
    u: list[IntMatrix]  # each 1 x n
    v: list[IntMatrix]  # each n x 1

    def check(self) -> None:
        """Verify u b = 0, v u = 1 - T and that 1 - u v is invertible, exactly."""
        one = identity(self.n)
        for i in range(len(self.T)):
            ub = matmul(self.u[i], self.b[i])
            if any(x for row in ub for x in row):
                raise InconsistentTopology(f"u_{i + 1} b_{i + 1} != 0")
            vu = matmul(self.v[i], self.u[i])
            target = [[one[r][c] - self.T[i][r][c] for c in range(self.n)] for r in range(self.n)]
            if vu != target:
                raise InconsistentTopology(f"v_{i + 1} u_{i + 1} != 1 - T_{i + 1}")
            uv = matmul(self.u[i], self.v[i])
            k = len(uv)
            if rank([[int(r == c) - uv[r][c] for c in range(k)] for r in range(k)]) != k:
                raise InconsistentTopology(f"1 - u_{i + 1} v_{i + 1} is not invertible")

    def to_json(self) -> dict:
        return {"n": self.n, "T": self.T, "b": self.b, "phi_dims": self.phi_dims,
                "u": [row[0] for row in self.u], "v": [[r[0] for r in col] for col in self.v]}


def extract_quiver(T: Sequence[IntMatrix], b: Sequence[IntMatrix]) -> Quiver:
    """Cokernel data for Morse critical values: each T_i a transposition (p, q).

    coker b_i is spanned by the class of e_p - e_q; the sign is fixed so that
    the first nonzero coordinate is +1, and v_i = u_i^t is forced by
    v_i u_i = 1 - T_i.
    """
    if len(T) != len(b):
        raise ValueError("need one b_i per T_i")
    if not T:
        raise UnsupportedDegeneracy("no critical values")
    n = len(T[0])
    us, vs, dims = [], [], []
    for i, (Ti, bi) in enumerate(zip(T, b)):
        pq = transposition_of(Ti)
        if pq is None:
            raise UnsupportedDegeneracy(f"T_{i + 1} is not a transposition")
        dim = n - rank(bi)
        if dim != 1:
            raise UnsupportedDegeneracy(f"dim Phi_{i + 1} = {dim}, only 1 is supported")
        p, q = pq
        u = [0] * n
        u[p], u[q] = 1, -1
        us.append([u])
        vs.append([[x] for x in u])
        dims.append(dim)
    quiver = Quiver(n, [list(map(list, t)) for t in T], [list(map(list, x)) for x in b], dims, us, vs)
    quiver.check()
    return quiver


@dataclass
class StokesPair:
    S_beta: IntMatrix
    S_minus_beta: IntMatrix
    block_sizes: list[int]
    sector_alpha: tuple[Fraction, Fraction] | None = None
    sector_minus_alpha: tuple[Fraction, Fraction] | None = None

    def to_json(self) -> dict:
        d = {"S_beta": self.S_beta, "S_minus_beta": self.S_minus_beta,
             "block_sizes": self.block_sizes}
        if self.sector_alpha is not None:
            d["sectors"] = {
                "H_alpha": [format_phase(p) for p in self.sector_alpha],
                "H_minus_alpha": [format_phase(p) for p in self.sector_minus_alpha],
            }
        return d


def assemble_stokes(q: Quiver, frame: DirectionFrame | None = None) -> StokesPair:
    """S_beta[i][j] = u_i v_j above the diagonal; S_-beta has 1 - u_i v_i on the
    diagonal and -u_i v_j below it.  Blocks are 1x1 here (Morse case)."""
    q.check()
    m = len(q.u)

    def uv(i, j):
        return matmul(q.u[i], q.v[j])[0][0]

    S_plus = [[1 if i == j else (uv(i, j) if i < j else 0) for j in range(m)] for i in range(m)]
    S_minus = [[(1 - uv(i, i)) if i == j else (-uv(i, j) if i > j else 0) for j in range(m)]
               for i in range(m)]
    return StokesPair(
        S_plus, S_minus, list(q.phi_dims),
        frame.sector_alpha if frame else None,
        frame.sector_minus_alpha if frame else None,
    )
