"""Roots of a Kac-Moody root system up to a height bound.

Roots are plain integer tuples in the simple-root basis.  Real/imaginary
classification is decided exactly by Weyl descent: a positive vector is
pushed down by any simple reflection that lowers its height until it
becomes a simple root (real), leaves the positive cone (not a root) or
lands in the fundamental set K (imaginary, provided its support is
connected).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import (
    FiniteTypeHasNoImaginaryRoots,
    HeightBudgetExceeded,
    NotSymmetrizable,
    PreconditionError,
)
from .gcm import GCM, MatrixType, classify_type, is_indecomposable

Root = tuple[int, ...]


def height(v: Iterable[int]) -> int:
    return sum(v)


def sign(v: Root) -> int:
    """+1 on Q+ minus 0, -1 on its negative, 0 otherwise (zero or mixed)."""
    if all(c >= 0 for c in v) and any(v):
        return 1
    if all(c <= 0 for c in v) and any(v):
        return -1
    return 0


def simple_root(n: int, i: int) -> Root:
    """alpha_i for 1-based i."""
    return tuple(int(k == i - 1) for k in range(n))


def root_key(v: Root):
    """Sort key: height first, then larger alpha_1 coefficient first, and so on."""
    return (height(v), tuple(-c for c in v))


def reflect(a: GCM, i: int, v: Root) -> Root:
    """s_i(v) for 0-based i."""
    c = a.pairing(v, i)
    if c == 0:
        return tuple(v)
    out = list(v)
    out[i] -= c
    return tuple(out)


class RootTag(enum.Enum):
    REAL = "real"
    IMAGINARY = "imaginary"
    NOT_ROOT = "not-root"


@dataclass(frozen=True)
class RootClass:
    tag: RootTag
    multiplicity: int


@dataclass(frozen=True)
class RootSet:
    """A finite set of positive roots, complete up to ``height_bound``."""

    elements: tuple[Root, ...]
    height_bound: int

    def __post_init__(self):
        elems = tuple(sorted({tuple(e) for e in self.elements}, key=root_key))
        object.__setattr__(self, "elements", elems)

    def __contains__(self, v) -> bool:
        return tuple(v) in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", s)
        return s

    def as_set(self) -> frozenset:
        return self._set


def _connected_support(a: GCM, v: Root) -> bool:
    supp = [i for i, c in enumerate(v) if c != 0]
    if not supp:
        return False
    seen = {supp[0]}
    stack = [supp[0]]
    sset = set(supp)
    while stack:
        i = stack.pop()
        for j in sset:
            if j not in seen and a.entries[i][j] != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(sset)


def descend(a: GCM, v: Root) -> tuple[str, Root, list[int]]:
    """Weyl descent of a positive vector.

    Returns (outcome, final vector, 0-based reflections applied), with
    outcome one of "simple", "fundamental", "escaped".
    """
    v = tuple(v)
    path: list[int] = []
    n = a.rank
    while True:
        if height(v) == 1 and all(c >= 0 for c in v):
            return "simple", v, path
        for i in range(n):
            if a.pairing(v, i) > 0:
                v = reflect(a, i, v)
                path.append(i)
                break
        else:
            return "fundamental", v, path
        if any(c < 0 for c in v):
            return "escaped", v, path


def _tag(a: GCM, v: Root) -> RootTag:
    s = sign(v)
    if s == 0:
        return RootTag.NOT_ROOT
    if s < 0:
        v = tuple(-c for c in v)
    outcome, final, _ = descend(a, v)
    if outcome == "simple":
        return RootTag.REAL
    if outcome == "fundamental" and _connected_support(a, final):
        return RootTag.IMAGINARY
    return RootTag.NOT_ROOT


def is_root(a: GCM, v: Root) -> bool:
    return _tag(a, tuple(v)) is not RootTag.NOT_ROOT


def is_real_root(a: GCM, v: Root) -> bool:
    return _tag(a, tuple(v)) is RootTag.REAL


def classify_root(a: GCM, v, height_cap: int | None = None) -> RootClass:
    v = tuple(int(c) for c in v)
    if len(v) != a.rank:
        raise PreconditionError(f"vector {v} has wrong length for rank {a.rank}")
    if height_cap is not None and abs(height(v)) > height_cap:
        raise HeightBudgetExceeded(f"|ht({v})| = {abs(height(v))} exceeds the cap {height_cap}")
    tag = _tag(a, v)
    if tag is RootTag.NOT_ROOT:
        return RootClass(tag, 0)
    if tag is RootTag.REAL:
        return RootClass(tag, 1)
    pos = v if sign(v) > 0 else tuple(-c for c in v)
    return RootClass(tag, root_multiplicity(a, pos))


def _ascending_closure(a: GCM, seeds: Iterable[Root], h: int) -> set[Root]:
    """All vectors reachable from ``seeds`` by height-raising reflections, ht <= h."""
    out = set()
    frontier = [tuple(s) for s in seeds if height(s) <= h]
    out.update(frontier)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(a.rank):
                c = a.pairing(v, i)
                if c < 0:
                    w = reflect(a, i, v)
                    if height(w) <= h and w not in out:
                        out.add(w)
                        nxt.append(w)
        frontier = nxt
    return out


def real_roots_up_to_height(a: GCM, h: int) -> RootSet:
    """Positive real roots of height <= h.

    Every positive real root other than a simple root has a simple reflection
    that lowers its height and keeps it positive, so growing the orbit of the
    simple roots by height-raising reflections alone is complete.
    """
    if h < 1:
        raise PreconditionError("height bound must be >= 1")
    seeds = [simple_root(a.rank, i) for i in range(1, a.rank + 1)]
    return RootSet(tuple(_ascending_closure(a, seeds, h)), h)


def positive_lattice_vectors(n: int, h: int) -> Iterable[Root]:
    """All v in Q+ minus 0 with ht(v) <= h, in (height, lex) order."""
    for total in range(1, h + 1):
        for v in sorted(_compositions(total, n)):
            yield v


def _compositions(total: int, n: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def fundamental_set(a: GCM, h: int) -> list[Root]:
    """K intersected with ht <= h."""
    return [
        v
        for v in positive_lattice_vectors(a.rank, h)
        if _connected_support(a, v) and all(a.pairing(v, i) <= 0 for i in range(a.rank))
    ]


def _require_nonfinite(a: GCM) -> None:
    if is_indecomposable(a) and classify_type(a) is MatrixType.FINITE:
        raise FiniteTypeHasNoImaginaryRoots(f"{a} is of finite type")


def imaginary_root_set(a: GCM, h: int) -> RootSet:
    _require_nonfinite(a)
    return RootSet(tuple(_ascending_closure(a, fundamental_set(a, h), h)), h)


def imaginary_roots_up_to_height(a: GCM, h: int) -> list[tuple[Root, int]]:
    """Positive imaginary roots of height <= h with their multiplicities."""
    return [(v, root_multiplicity(a, v)) for v in imaginary_root_set(a, h)]


def positive_roots_up_to_height(a: GCM, h: int) -> RootSet:
    roots = set(real_roots_up_to_height(a, h).elements)
    if not (is_indecomposable(a) and classify_type(a) is MatrixType.FINITE):
        roots |= set(_ascending_closure(a, fundamental_set(a, h), h))
    return RootSet(tuple(roots), h)


# --- multiplicities -------------------------------------------------------


_PETERSON: dict[GCM, dict[Root, Fraction]] = {}


def _form(a: GCM, d, x: Root, y: Root) -> int:
    # (alpha_i | alpha_j) = d_i a_ij
    n = a.rank
    return sum(x[i] * y[j] * d[i] * a.entries[i][j] for i in range(n) for j in range(n) if x[i] and y[j])


def _box(v: Root):
    return itertools.product(*(range(c + 1) for c in v))


def _peterson_c(a: GCM, v: Root) -> Fraction:
    cache = _PETERSON.setdefault(a, {})
    if v in cache:
        return cache[v]
    d = a.symmetrizer
    # fill the box below v in height order so recursion stays shallow
    for beta in sorted((b for b in _box(v) if any(b)), key=root_key):
        if beta in cache:
            continue
        cache[beta] = _peterson_step(a, d, beta, cache)
    return cache[v]


def _peterson_step(a: GCM, d, beta: Root, cache) -> Fraction:
    rho_pair = sum(c * di for c, di in zip(beta, d))  # (rho | beta)
    coeff = _form(a, d, beta, beta) - 2 * rho_pair
    rhs = Fraction(0)
    for b1 in _box(beta):
        if not any(b1) or b1 == beta:
            continue
        b2 = tuple(x - y for x, y in zip(beta, b1))
        f = _form(a, d, b1, b2)
        if f:
            c1, c2 = cache[b1], cache[b2]
            if c1 and c2:
                rhs += f * c1 * c2
    lower = _divisor_part(beta, cache, a)
    if coeff != 0:
        return rhs / coeff
    # (beta | beta - 2 rho) = 0: beta has positive norm, so it is a real root
    # or not a root; the recursion carries no information here.
    if rhs != 0:
        from .errors import InvariantViolation

        raise InvariantViolation(f"Peterson recurrence inconsistent at {beta}")
    return lower + (1 if _tag(a, beta) is RootTag.REAL else 0)


def _divisor_part(beta: Root, cache, a: GCM) -> Fraction:
    """sum_{k >= 2, k | beta} mult(beta / k) / k."""
    from math import gcd

    g = 0
    for c in beta:
        g = gcd(g, c)
    total = Fraction(0)
    for k in range(2, g + 1):
        if g % k == 0:
            sub = tuple(c // k for c in beta)
            total += Fraction(_mult_from_cache(sub, cache, a), k)
    return total


def _mult_from_cache(beta: Root, cache, a: GCM) -> int:
    m = cache[beta] - _divisor_part(beta, cache, a)
    if m.denominator != 1 or m < 0:
        from .errors import InvariantViolation

        raise InvariantViolation(f"non-integral multiplicity {m} at {beta}")
    return int(m)


def peterson_multiplicity(a: GCM, v: Root) -> int:
    """dim g_v by the Peterson recurrence (symmetrizable A only)."""
    if a.symmetrizer is None:
        raise NotSymmetrizable(f"{a} is not symmetrizable")
    v = tuple(v)
    _peterson_c(a, v)
    return _mult_from_cache(v, _PETERSON[a], a)


def root_multiplicity(a: GCM, v) -> int:
    """dim g_v for v in Q+ (0 for non-roots)."""
    v = tuple(int(c) for c in v)
    if sign(v) < 0:
        v = tuple(-c for c in v)
    tag = _tag(a, v)
    if tag is RootTag.NOT_ROOT:
        return 0
    if tag is RootTag.REAL:
        return 1
    if a.symmetrizer is None:
        from .liealg import contragredient_dimension

        return contragredient_dimension(a, v)
    return peterson_multiplicity(a, v)


# --- closed sets ----------------------------------------------------------


@dataclass(frozen=True)
class ClosednessResult:
    closed: bool
    witness: tuple[Root, Root, Root] | None = None

    def __bool__(self):
        return self.closed


def is_closed(a: GCM, s: RootSet) -> ClosednessResult:
    """Is ``s`` closed inside the window ht <= s.height_bound?"""
    for e in s:
        if height(e) > s.height_bound or sign(e) <= 0:
            raise HeightBudgetExceeded(f"{e} is not a positive root of height <= {s.height_bound}")
    elems = s.elements
    for x, y in itertools.combinations_with_replacement(elems, 2):
        z = tuple(p + q for p, q in zip(x, y))
        if height(z) > s.height_bound:
            continue
        if z not in s and is_root(a, z):
            return ClosednessResult(False, (x, y, z))
    return ClosednessResult(True)


def closure(a: GCM, s: Iterable[Root], h: int) -> RootSet:
    """Smallest closed subset of the positive roots of height <= h containing s."""
    cur = {tuple(x) for x in s}
    for x in cur:
        if height(x) > h:
            raise PreconditionError(f"{x} has height above {h}")
    frontier = set(cur)
    while frontier:
        new = set()
        for x in frontier:
            for y in cur:
                z = tuple(p + q for p, q in zip(x, y))
                if height(z) <= h and z not in cur and z not in new and is_root(a, z):
                    new.add(z)
        cur |= new
        frontier = new
    return RootSet(tuple(cur), h)


def roots_to_records(a: GCM, roots: Iterable[Root]) -> list[dict]:
    out = []
    for r in sorted(roots, key=root_key):
        rc = classify_root(a, r)
        out.append({"coords": list(r), "height": height(r), "class": rc.tag.value, "mult": rc.multiplicity})
    return out
