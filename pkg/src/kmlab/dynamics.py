"""Coxeter-element dynamics on positive roots.

Sign functions l -> sign(omega^l alpha), aperiodicity, height growth, the
split of the positive roots into those whose forward Coxeter orbit stays
positive (psi) and the rest, and the height schedules n_l that control
contraction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .errors import DigitBudgetExceeded, ImageEscapedPositive, PreconditionError
from .gcm import GCM, MatrixType, classify_type
from .rootsys import (
    Root,
    RootSet,
    closure,
    height,
    imaginary_root_set,
    is_closed,
    real_roots_up_to_height,
    root_key,
    sign,
)
from .weyl import WeylElement, coxeter_element, inversion_set

DEFAULT_HEIGHT = 12
DEFAULT_LMAX = 60


def max_digits() -> int:
    return int(os.environ.get("KMLAB_MAX_DIGITS", "10000"))


def _guard(v: Root, cap: int) -> Root:
    for c in v:
        if c and len(str(abs(c))) > cap:
            raise DigitBudgetExceeded(f"orbit coordinate exceeds {cap} digits")
    return v


def orbit(omega: WeylElement, alpha: Sequence[int], lmax: int, direction: int = 1) -> list[Root]:
    """[omega^(direction*l) alpha for l = 0..lmax]."""
    m = omega.matrix if direction > 0 else omega.inverse_matrix
    cap = max_digits()
    v = tuple(alpha)
    out = [v]
    for _ in range(lmax):
        v = _guard(linalg.matvec(m, v), cap)
        out.append(v)
    return out


@dataclass(frozen=True)
class SignTrace:
    alpha: Root
    word: tuple[int, ...]
    values: dict[int, int]

    def sequence(self) -> list[int]:
        return [self.values[l] for l in sorted(self.values)]


def sign_orbit(a: GCM, omega: WeylElement, alpha: Sequence[int], L: int) -> SignTrace:
    alpha = tuple(alpha)
    if sign(alpha) == 0:
        raise PreconditionError(f"{alpha} is not a nonzero root")
    fwd = orbit(omega, alpha, L, 1)
    bwd = orbit(omega, alpha, L, -1)
    values = {0: sign(alpha)}
    for l in range(1, L + 1):
        values[l] = sign(fwd[l])
        values[-l] = sign(bwd[l])
    return SignTrace(alpha, omega.word, values)


@dataclass(frozen=True)
class MonotoneResult:
    monotone: bool
    witness: tuple[int, int] | None = None

    def __bool__(self):
        return self.monotone


def check_monotone(trace: SignTrace | dict[int, int]) -> MonotoneResult:
    """At most one sign change over the window; witness is the second change."""
    values = trace.values if isinstance(trace, SignTrace) else trace
    ls = sorted(values)
    changes = 0
    for l0, l1 in zip(ls, ls[1:]):
        if values[l0] not in (1, -1) or values[l1] not in (1, -1):
            return MonotoneResult(False, (l0, l1))
        if values[l0] != values[l1]:
            changes += 1
            if changes > 1:
                return MonotoneResult(False, (l0, l1))
    return MonotoneResult(True)


def detect_period(a: GCM, omega: WeylElement, alpha: Sequence[int], lmax: int) -> int | None:
    """Smallest 1 <= l <= lmax with omega^l alpha = alpha."""
    alpha = tuple(alpha)
    m = omega.matrix
    v = alpha
    for l in range(1, lmax + 1):
        v = linalg.matvec(m, v)
        if v == alpha:
            return l
    return None


@dataclass(frozen=True)
class HeightSchedule:
    heights: tuple[int, ...]
    positive: tuple[bool, ...]

    def __iter__(self):
        return iter(self.heights)

    def __getitem__(self, k):
        return self.heights[k]

    def __len__(self):
        return len(self.heights)


def height_schedule(a: GCM, omega: WeylElement, alpha: Sequence[int], lmax: int, direction: int = 1) -> HeightSchedule:
    """ht(omega^(direction*l) alpha), l = 0..lmax, with explicit sign flags."""
    vs = orbit(omega, alpha, lmax, direction)
    return HeightSchedule(tuple(height(v) for v in vs), tuple(sign(v) > 0 for v in vs))


# --- Psi partition --------------------------------------------------------


@dataclass(frozen=True)
class PsiPartition:
    psi: RootSet
    complement: RootSet
    undecided: RootSet
    height_bound: int
    lmax: int
    certificates: dict
    closedness: dict
    psi_chain: tuple[RootSet, ...] = field(default=())
    phi_chain: tuple[RootSet, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "height": self.height_bound,
            "lmax": self.lmax,
            "psi": [list(r) for r in self.psi],
            "complement": [list(r) for r in self.complement],
            "undecided": [list(r) for r in self.undecided],
            "certificates": {",".join(map(str, k)): v for k, v in sorted(self.certificates.items(), key=lambda kv: root_key(kv[0]))},
            "closedness": dict(self.closedness),
        }


def _require_indefinite(a: GCM) -> None:
    t = classify_type(a)
    if t is not MatrixType.INDEFINITE:
        raise PreconditionError(f"{a} is of {t.value} type; the partition requires indefinite type")


def _cone_certificate(vs: list[Root], n: int) -> bool:
    tail = vs[-(n + 1) :]
    for u, v in zip(tail, tail[1:]):
        if not height(v) > height(u):
            return False
        if not all(y > x for x, y in zip(u, v)):
            return False
    return True


def classify_forward(omega: WeylElement, alpha: Root, lmax: int, n: int) -> tuple[str, dict]:
    """'complement' (escaped), 'psi' (cone heuristic) or 'undecided' for a real root."""
    m = omega.matrix
    cap = max_digits()
    v = alpha
    vs = [v]
    for l in range(1, lmax + 1):
        v = _guard(linalg.matvec(m, v), cap)
        if sign(v) < 0:
            return "complement", {"kind": "escaped", "l": l}
        vs.append(v)
    if _cone_certificate(vs, n):
        return "psi", {"kind": "cone-heuristic", "lmax": lmax}
    return "undecided", {"kind": "undecided", "lmax": lmax}


def _prefix_closures(a: GCM, roots: Sequence[Root], h: int) -> tuple[RootSet, ...]:
    out = []
    for i in range(1, len(roots) + 1):
        out.append(closure(a, roots[:i], h))
    return tuple(out)


def partition_psi(a: GCM, h: int = DEFAULT_HEIGHT, lmax: int = DEFAULT_LMAX, chains: bool = True) -> PsiPartition:
    _require_indefinite(a)
    w = coxeter_element(a)
    psi, comp, und = [], [], []
    certs: dict[Root, dict] = {}
    for r in imaginary_root_set(a, h):
        psi.append(r)
        certs[r] = {"kind": "imaginary"}
    for r in real_roots_up_to_height(a, h):
        where, cert = classify_forward(w, r, lmax, a.rank)
        {"psi": psi, "complement": comp, "undecided": und}[where].append(r)
        certs[r] = cert
    psi_s = RootSet(tuple(psi), h)
    comp_s = RootSet(tuple(comp), h)
    und_s = RootSet(tuple(und), h)
    closedness = {"psi": is_closed(a, psi_s).closed, "complement": is_closed(a, comp_s).closed}
    psi_chain = _prefix_closures(a, psi_s.elements, h) if chains else ()
    phi_chain = _prefix_closures(a, comp_s.elements, h) if chains else ()
    return PsiPartition(psi_s, comp_s, und_s, h, lmax, certs, closedness, psi_chain, phi_chain)


def complement_via_inversions(a: GCM, h: int, jmax: int) -> RootSet:
    """Real part of the complement as the union of w^{-j} inv(w), 0 <= j <= jmax."""
    w = coxeter_element(a)
    inv = inversion_set(a, w)
    out = set()
    for beta in inv.roots:
        v = beta
        for j in range(jmax + 1):
            if sign(v) > 0 and height(v) <= h:
                out.add(v)
            v = linalg.matvec(w.inverse_matrix, v)
    return RootSet(tuple(out), h)


# --- contraction schedules -------------------------------------------------


@dataclass(frozen=True)
class ContractionSchedule:
    n: tuple[int, ...]
    argmin: tuple[Root, ...]
    generator_set: tuple[Root, ...]
    direction: int

    def rows(self) -> list[tuple[int, int, Root]]:
        return [(l, nl, r) for l, (nl, r) in enumerate(zip(self.n, self.argmin))]

    def first_exceeding(self, h: int) -> int | None:
        return next((l for l, nl in enumerate(self.n) if nl > h), None)


def contraction_schedule(
    a: GCM,
    s: Iterable[Root],
    direction: int,
    lmax: int,
    omega: WeylElement | None = None,
) -> ContractionSchedule:
    """n_l = min over beta in s of ht(w^(direction*l) beta)."""
    if direction not in (1, -1):
        raise PreconditionError("direction must be +1 or -1")
    w = omega or coxeter_element(a)
    gens = tuple(sorted({tuple(r) for r in s}, key=root_key))
    if not gens:
        raise PreconditionError("empty generator set")
    orbits = {r: orbit(w, r, lmax, direction) for r in gens}
    ns, args = [], []
    for l in range(lmax + 1):
        best = None
        for r in gens:
            v = orbits[r][l]
            if sign(v) < 0:
                raise ImageEscapedPositive(f"w^{direction * l} {r} = {v} is negative")
            if best is None or height(v) < best[0]:
                best = (height(v), r)
        ns.append(best[0])
        args.append(best[1])
    return ContractionSchedule(tuple(ns), tuple(args), gens, direction)
