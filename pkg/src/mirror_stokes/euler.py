"""Twisting-sheaf cohomology on P(a, b) and the Gram matrix of the Euler pairing
on the exceptional collection O, O(1), ..., O(a+b-1)."""

from __future__ import annotations


def twist_cohomology(a: int, b: int, k: int) -> tuple[int, int]:
    """(h0, h1) of O(k): lattice points (m, n) with a*m + b*n = k, both >= 0
    for h0 and both < 0 for h1."""
    if a < 1 or b < 1:
        raise ValueError(f"weights must be positive, got ({a}, {b})")
    h0 = sum(1 for m in range(0, k // a + 1) if k >= 0 and (k - a * m) % b == 0)
    # m, n <= -1 forces k <= -(a+b); m ranges over -1 .. (k+b)/a
    h1 = 0
    if k <= -(a + b):
        for m in range(-1, (k + b) // a - 1, -1):
            rest = k - a * m
            if rest % b == 0 and rest // b <= -1:
                h1 += 1
    return h0, h1


def gram_matrix(a: int, b: int) -> list[list[int]]:
    """chi(O(i), O(j)) = h0(j - i) - h1(j - i) for i <= j, zero below the diagonal."""
    n = a + b
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            h0, h1 = twist_cohomology(a, b, j - i)
            G[i][j] = h0 - h1
    return G
