"""Generalised Cartan matrices: parsing, validation, type classification."""

from __future__ import annotations

import enum
import itertools
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm

from . import linalg
from .errors import DecomposableMatrix, InvalidGCM, MalformedInput

RANK_CAP = 10


class MatrixType(enum.Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class GCM:
    """A validated generalised Cartan matrix.

    ``entries[i][j]`` is a_ij with 0-based indices; everything user-facing
    (reflections, generators, words) is 1-based.
    """

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in row) for row in self.entries))
        _validate(self.entries)
        if self.rank > RANK_CAP:
            warnings.warn(f"rank {self.rank} exceeds the desk-scale cap of {RANK_CAP}", stacklevel=3)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def pairing(self, v, i: int) -> int:
        """<v, alpha_i^vee> for 0-based i."""
        row = self.entries[i]
        return sum(c * a for c, a in zip(v, row))

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.entries)

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __str__(self):
        return self.to_text()

    @cached_property
    def symmetrizer(self) -> tuple[int, ...] | None:
        """Minimal positive integers d with d_i a_ij = d_j a_ji, or None."""
        return _symmetrizer(self.entries)

    @property
    def max_offdiag(self) -> int:
        n = self.rank
        return max((abs(self.entries[i][j]) for i in range(n) for j in range(n) if i != j), default=0)


def _validate(entries) -> None:
    n = len(entries)
    if n == 0:
        raise MalformedInput("empty matrix")
    for row in entries:
        if len(row) != n:
            raise MalformedInput(f"matrix is not square: row of length {len(row)} in a {n}-row matrix")
    for i in range(n):
        if entries[i][i] != 2:
            raise InvalidGCM("diagonal", (i + 1, i + 1), f"a_{i + 1}{i + 1} = {entries[i][i]}, expected 2")
    for i, j in itertools.permutations(range(n), 2):
        if entries[i][j] > 0:
            raise InvalidGCM("nonpositive", (i + 1, j + 1), f"a_{i + 1}{j + 1} = {entries[i][j]} is positive")
        if (entries[i][j] == 0) != (entries[j][i] == 0):
            raise InvalidGCM(
                "zero-pattern",
                (i + 1, j + 1),
                f"a_{i + 1}{j + 1} = {entries[i][j]} but a_{j + 1}{i + 1} = {entries[j][i]}",
            )


_TOKEN = re.compile(r"^[+-]?\d+$")


def parse_gcm(text: str) -> GCM:
    """Parse ``"2,-3;-3,2"`` (rows split by ';', entries by ',')."""
    rows = [r for r in text.strip().split(";")]
    if rows and rows[-1].strip() == "":
        rows = rows[:-1]
    parsed = []
    for r in rows:
        toks = [t.strip() for t in r.split(",")]
        for t in toks:
            if not _TOKEN.match(t):
                raise MalformedInput(f"not an integer: {t!r}")
        parsed.append(tuple(int(t) for t in toks))
    return GCM(tuple(parsed))


def gcm_from_rank2(m: int, n: int) -> GCM:
    """The matrix [[2, -m], [-n, 2]]."""
    return GCM(((2, -m), (-n, 2)))


def components(a: GCM) -> list[list[int]]:
    """Connected components (0-based) of the graph i ~ j iff a_ij != 0."""
    n = a.rank
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j != i and a.entries[i][j] != 0 and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def is_indecomposable(a: GCM) -> bool:
    return len(components(a)) == 1


def principal_minor(a: GCM, subset) -> int:
    sub = [[a.entries[i][j] for j in subset] for i in subset]
    return linalg.det(sub)


def classify_type(a: GCM) -> MatrixType:
    """Kac trichotomy via principal minors.

    All principal minors are used (not just leading ones) so the answer does
    not depend on how the simple roots are numbered.
    """
    if not is_indecomposable(a):
        raise DecomposableMatrix(f"{a} is decomposable")
    n = a.rank
    proper_ok = all(
        principal_minor(a, s) > 0 for k in range(1, n) for s in itertools.combinations(range(n), k)
    )
    d = linalg.det(a.entries)
    if proper_ok and d > 0:
        return MatrixType.FINITE
    if proper_ok and d == 0:
        return MatrixType.AFFINE
    return MatrixType.INDEFINITE


def triangular_split(a: GCM) -> tuple[list[list[int]], list[list[int]]]:
    """A = A1 + A2, A1 unipotent upper triangular, A2 unipotent lower triangular."""
    n = a.rank
    a1 = [[1 if i == j else (a.entries[i][j] if j > i else 0) for j in range(n)] for i in range(n)]
    a2 = [[1 if i == j else (a.entries[i][j] if j < i else 0) for j in range(n)] for i in range(n)]
    return a1, a2


def _symmetrizer(entries) -> tuple[int, ...] | None:
    n = len(entries)
    d: list[Fraction | None] = [None] * n
    for s in range(n):
        if d[s] is not None:
            continue
        d[s] = Fraction(1)
        stack = [s]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or entries[i][j] == 0:
                    continue
                want = d[i] * entries[i][j] / entries[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return None
    den = 1
    for x in d:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in d]
    from math import gcd

    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def report(a: GCM) -> dict:
    indec = is_indecomposable(a)
    return {
        "matrix": a.to_list(),
        "indecomposable": indec,
        "type": classify_type(a).value if indec else None,
    }
