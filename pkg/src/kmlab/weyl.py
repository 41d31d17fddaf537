"""Weyl group elements as words and integer matrices on the root lattice.

Matrices act on column vectors of simple-root coordinates.  The word
(i1, ..., ik) denotes s_i1 ... s_ik, so s_ik is applied first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .errors import InvariantViolation, NonReducedWord, PreconditionError
from .gcm import GCM, triangular_split
from .rootsys import Root, reflect, sign, simple_root

Word = tuple[int, ...]


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(t) for t in text.split(","))


def _check_index(a: GCM, i: int) -> None:
    if not 1 <= i <= a.rank:
        raise PreconditionError(f"reflection index {i} outside 1..{a.rank}")


def apply_reflection(a: GCM, i: int, alpha: Sequence[int]) -> Root:
    """s_i(alpha) = alpha - <alpha, alpha_i^vee> alpha_i, 1-based i."""
    _check_index(a, i)
    return reflect(a, i - 1, tuple(alpha))


def reflection_matrix(a: GCM, i: int) -> list[list[int]]:
    _check_index(a, i)
    n = a.rank
    r = i - 1
    m = linalg.identity(n)
    for j in range(n):
        m[r][j] -= a.entries[r][j]
    return m


def word_to_matrix(a: GCM, word: Iterable[int]) -> list[list[int]]:
    m = linalg.identity(a.rank)
    for i in word:
        m = linalg.matmul(m, reflection_matrix(a, i))
    return m


def coxeter_matrix_closed_form(a: GCM) -> list[list[int]]:
    """I - A1^{-1} A for the unipotent upper part A1 of A."""
    a1, _ = triangular_split(a)
    a1inv = linalg.integer_inverse(a1)
    prod = linalg.matmul(a1inv, a.entries)
    n = a.rank
    return [[int(i == j) - prod[i][j] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class WeylElement:
    gcm: GCM
    word: Word

    @classmethod
    def from_word(cls, a: GCM, word: Iterable[int]) -> "WeylElement":
        word = tuple(int(i) for i in word)
        for i in word:
            _check_index(a, i)
        return cls(a, word)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        return linalg.freeze(word_to_matrix(self.gcm, self.word))

    @cached_property
    def inverse_matrix(self) -> tuple[tuple[int, ...], ...]:
        return linalg.freeze(word_to_matrix(self.gcm, reversed(self.word)))

    def inverse(self) -> "WeylElement":
        return WeylElement(self.gcm, tuple(reversed(self.word)))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.gcm, self.word + other.word)

    def __pow__(self, k: int) -> "WeylElement":
        if k < 0:
            return self.inverse() ** (-k)
        return WeylElement(self.gcm, self.word * k)

    def act(self, v: Sequence[int]) -> Root:
        return linalg.matvec(self.matrix, v)

    def act_inverse(self, v: Sequence[int]) -> Root:
        return linalg.matvec(self.inverse_matrix, v)

    def power_act(self, v: Sequence[int], l: int) -> Root:
        """omega^l v for any integer l, by repeated matrix application."""
        m = self.matrix if l >= 0 else self.inverse_matrix
        v = tuple(v)
        for _ in range(abs(l)):
            v = linalg.matvec(m, v)
        return v

    def word_text(self) -> str:
        return ",".join(str(i) for i in self.word)


def coxeter_element(a: GCM) -> WeylElement:
    return WeylElement(a, tuple(range(1, a.rank + 1)))


@dataclass(frozen=True)
class InversionSet:
    roots: tuple[Root, ...]

    def __len__(self):
        return len(self.roots)

    def as_set(self) -> frozenset:
        return frozenset(self.roots)


def suffix_roots(a: GCM, word: Sequence[int]) -> list[Root]:
    """beta_i = t_k t_{k-1} ... t_{i+1} alpha_{t_i} for the word t_1 ... t_k."""
    n = a.rank
    out = []
    k = len(word)
    for i in range(k):
        v = simple_root(n, word[i])
        for t in word[i + 1 :]:
            v = reflect(a, t - 1, v)
        out.append(v)
    return out


def inversion_set(a: GCM, w: WeylElement | Sequence[int]) -> InversionSet:
    """Positive roots sent negative by w, from a reduced word of w."""
    word = w.word if isinstance(w, WeylElement) else tuple(w)
    roots = suffix_roots(a, word)
    seen: dict[Root, int] = {}
    for pos, r in enumerate(roots):
        if sign(r) < 0:
            raise NonReducedWord(word, (pos + 1, pos + 1), f"suffix root {r} at position {pos + 1} is negative")
        if r in seen:
            raise NonReducedWord(word, (seen[r] + 1, pos + 1), f"suffix root {r} repeats at positions {seen[r] + 1}, {pos + 1}")
        seen[r] = pos
    return InversionSet(tuple(roots))


def inversions_of_word(a: GCM, word: Sequence[int]) -> frozenset[Root]:
    """Inversion set of the element represented by any word (reduced or not).

    Uses N(w s) = s(N(w) minus {alpha_s}) plus {alpha_s} when alpha_s is not in N(w).
    """
    n = a.rank
    inv: set[Root] = set()
    for s in word:
        al = simple_root(n, s)
        had = al in inv
        inv.discard(al)
        inv = {reflect(a, s - 1, b) for b in inv}
        if not had:
            inv.add(al)
    return frozenset(inv)


def length(a: GCM, word: Sequence[int]) -> int:
    return len(inversions_of_word(a, word))


@dataclass(frozen=True)
class PowerLengthTable:
    ok: bool
    table: tuple[tuple[int, int], ...]
    offending: int | None = None

    def __bool__(self):
        return self.ok


def check_power_reduced(a: GCM, lmax: int, w: WeylElement | None = None) -> PowerLengthTable:
    """Check l(w^l) = l * l(w) for 1 <= l <= lmax (w defaults to the Coxeter element)."""
    w = w or coxeter_element(a)
    base = length(a, w.word)
    table = []
    offending = None
    for l in range(1, lmax + 1):
        ln = length(a, w.word * l)
        table.append((l, ln))
        if ln != l * base and offending is None:
            offending = l
    return PowerLengthTable(offending is None, tuple(table), offending)


def is_identity(m) -> bool:
    n = len(m)
    return all(m[i][j] == int(i == j) for i in range(n) for j in range(n))


def coxeter_report(a: GCM) -> dict:
    closed = coxeter_matrix_closed_form(a)
    composed = word_to_matrix(a, range(1, a.rank + 1))
    if closed != composed:
        raise InvariantViolation(f"closed-form Coxeter matrix {closed} differs from composed {composed}")
    return {"word": list(range(1, a.rank + 1)), "closed_form": closed, "composed": composed, "equal": True}
