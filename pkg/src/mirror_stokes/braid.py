"""Braid group action on unipotent upper-triangular integer matrices.

The generator beta_i acts by S -> A S A^t, where A is the identity except for
the block [[0, 1], [1, -s]] on rows/columns (i, i+1), s = S[i][i+1] (1-based
i).  The inverse generator uses the block [[-s, 1], [1, 0]].
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import NotFound, NotUnipotent

Matrix = tuple[tuple[int, ...], ...]
Letter = tuple[int, int]  # (generator index, +1 or -1)


def _freeze(S: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in S)


def check_unipotent(S: Sequence[Sequence[int]]) -> None:
    n = len(S)
    for i in range(n):
        if len(S[i]) != n:
            raise NotUnipotent("matrix is not square")
        if S[i][i] != 1:
            raise NotUnipotent(f"diagonal entry ({i + 1},{i + 1}) is {S[i][i]}, expected 1")
        if any(S[i][j] for j in range(i)):
            raise NotUnipotent(f"row {i + 1} has entries below the diagonal")


def generator_matrix(S: Sequence[Sequence[int]], i: int, inverse: bool = False) -> list[list[int]]:
    """A^{beta_i}(S) (or the matrix of the inverse generator), 1-based i."""
    n = len(S)
    if not 1 <= i < n:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    s = S[i - 1][i]
    A = [[int(r == c) for c in range(n)] for r in range(n)]
    p, q = i - 1, i
    if inverse:
        A[p][p], A[p][q], A[q][p], A[q][q] = -s, 1, 1, 0
    else:
        A[p][p], A[p][q], A[q][p], A[q][q] = 0, 1, 1, -s
    return A


def _conjugate(A, S) -> Matrix:
    n = len(S)
    AS = [[sum(A[r][k] * S[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
    return tuple(tuple(sum(AS[r][k] * A[c][k] for k in range(n)) for c in range(n)) for r in range(n))


def act_generator(S: Sequence[Sequence[int]], i: int, inverse: bool = False) -> Matrix:
    check_unipotent(S)
    return _conjugate(generator_matrix(S, i, inverse), S)


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[Letter, ...] = ()

    @classmethod
    def parse(cls, items: Sequence[str]) -> "BraidWord":
        out = []
        for tok in items:
            tok = tok.strip().lower().replace("β", "b")
            inv = tok.endswith("^-1")
            core = tok[:-3] if inv else tok
            if not core.startswith("b") or not core[1:].isdigit():
                raise ValueError(f"bad braid letter {tok!r}")
            out.append((int(core[1:]), -1 if inv else 1))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.letters)

    def to_json(self) -> list[str]:
        return [f"b{i}" + ("^-1" if e < 0 else "") for i, e in self.letters]

    def __str__(self) -> str:
        return " ".join(self.to_json()) or "(empty)"


def act_word(S: Sequence[Sequence[int]], word: BraidWord | Sequence[Letter]) -> Matrix:
    letters = word.letters if isinstance(word, BraidWord) else tuple(word)
    out = _freeze(S)
    check_unipotent(out)
    for i, e in letters:
        out = act_generator(out, i, inverse=e < 0)
    return out


def sign_conjugate(S: Sequence[Sequence[int]], signs: Sequence[int]) -> Matrix:
    n = len(S)
    return tuple(tuple(signs[r] * S[r][c] * signs[c] for c in range(n)) for r in range(n))


@dataclass(frozen=True)
class EquivalenceCertificate:
    word: BraidWord
    signs: tuple[int, ...]
    matrix: Matrix

    def to_json(self) -> dict:
        return {"word": self.word.to_json(), "signs": list(self.signs),
                "matrix": [list(r) for r in self.matrix]}


def _letters(n: int) -> list[Letter]:
    return [(i, e) for i in range(1, n) for e in (1, -1)]


def search_equivalence(source, target, max_depth: int = 6, node_cap: int = 10**6) -> EquivalenceCertificate:
    """Shortest braid word w and signs D with D (w . source) D = target.

    Breadth-first in lexicographic letter order (b1 < b1^-1 < b2 < ...), so
    the first hit is the lexicographically smallest shortest word.
    """
    src, tgt = _freeze(source), _freeze(target)
    check_unipotent(src)
    check_unipotent(tgt)
    n = len(src)
    if len(tgt) != n:
        raise ValueError("source and target sizes differ")
    sign_list = list(itertools.product((1, -1), repeat=n))
    letters = _letters(n)
    seen = {src}
    frontier = deque([(src, ())])
    nodes = 0
    while frontier:
        S, word = frontier.popleft()
        nodes += 1
        for signs in sign_list:
            if sign_conjugate(S, signs) == tgt:
                return EquivalenceCertificate(BraidWord(word), signs, S)
        if len(word) >= max_depth or nodes >= node_cap:
            continue
        for letter in letters:
            nxt = act_generator(S, letter[0], inverse=letter[1] < 0)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, word + (letter,)))
    raise NotFound(f"no braid word of length <= {max_depth} relates the matrices")
