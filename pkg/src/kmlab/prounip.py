"""The pro-unipotent group U^{ma+}(F_q) modulo the elements of height > h.

The completed enveloping algebra is modelled in the ordered divided-power
PBW basis: a monomial is a nondecreasing tuple of basis ids, and the tuple
(a, a, b) stands for x_a^(2) x_b.  Products are computed over Q by
commutator straightening of ordinary PBW words and then rewritten in the
divided-power basis, so every structure constant is checked to be
p-integral before it is reduced into F_p.

A group element is stored as its normal-form coefficients (lambda_x) over
the ordered basis; its envelope expansion is the ordered product of the
series sum_k lambda^k x^(k).  Because the monomials of that product are
already ordered, the coefficient of the one-letter monomial (x,) recovers
lambda_x, which is how normal forms are read off.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Iterator, Sequence

from . import linalg
from .errors import (
    HeightBudgetExceeded,
    LeavesPositiveModel,
    NotClosed,
    NotGroupLike,
    PreconditionError,
    UnsupportedCharacteristic,
)
from .fields import GF, field
from .gcm import GCM, gcm_from_rank2, is_indecomposable
from .liealg import AlgebraElement, GradedLieAlgebra
from .rootsys import Root, RootSet, height, is_closed, positive_roots_up_to_height, reflect, root_key, sign
from .weyl import WeylElement

Monomial = tuple[int, ...]
EnvElement = dict  # Monomial -> F_q element


@dataclass(frozen=True)
class BasisVector:
    id: int
    weight: Root
    index: int

    @property
    def height(self) -> int:
        return height(self.weight)


def default_order(weight: Root, index: int):
    """(height, root order, basis index): e_1 < e_2 < [e_1, e_2] < ..."""
    return (root_key(weight), index)


class TruncatedEnvelope:
    """Envelope of n+ over F_q in degrees <= h, with its lazy product table."""

    def __init__(
        self,
        gcm: GCM,
        h: int,
        q: int,
        order: Callable[[Root, int], object] | None = None,
        algebra: GradedLieAlgebra | None = None,
    ):
        if not is_indecomposable(gcm):
            raise PreconditionError(f"{gcm} is decomposable")
        if h < 1:
            raise PreconditionError("height bound must be >= 1")
        self.gcm = gcm
        self.h = h
        self.field: GF = field(q)
        self.p = self.field.p
        # conjugation chains may pass above h, so the algebra keeps slack
        self.algebra = algebra or GradedLieAlgebra(gcm, 2 * h, "QQ")
        key = order or default_order
        pairs = []
        for w in positive_roots_up_to_height(gcm, h):
            for k in range(self.algebra.dim(w)):
                pairs.append((w, k))
        pairs.sort(key=lambda wk: key(*wk))
        self.basis: tuple[BasisVector, ...] = tuple(BasisVector(i, w, k) for i, (w, k) in enumerate(pairs))
        self.id_of = {(b.weight, b.index): b.id for b in self.basis}
        self.heights = tuple(b.height for b in self.basis)
        self._bracket: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
        self._straight: dict[tuple[int, ...], dict[Monomial, int]] = {}
        self._prod: dict[tuple[Monomial, Monomial], dict[Monomial, int]] = {}

    def __len__(self) -> int:
        return len(self.basis)

    def describe(self) -> dict:
        return {"gcm": self.gcm.to_list(), "height": self.h, "field": self.field.describe(), "basis_size": len(self.basis)}

    def mono_height(self, m: Monomial) -> int:
        return sum(self.heights[i] for i in m)

    def mono_weight(self, m: Monomial) -> Root:
        w = [0] * self.gcm.rank
        for i in m:
            for t, c in enumerate(self.basis[i].weight):
                w[t] += c
        return tuple(w)

    # --- structure constants -------------------------------------------------

    def bracket_ids(self, a: int, b: int) -> tuple[tuple[int, int], ...]:
        """[x_a, x_b] as ((id, integer coefficient), ...), truncated above h."""
        key = (a, b)
        if key not in self._bracket:
            xa, xb = self.basis[a], self.basis[b]
            t = tuple(x + y for x, y in zip(xa.weight, xb.weight))
            out = []
            if height(t) <= self.h:
                coords = self.algebra._bb_coords(xa.weight, xa.index, xb.weight, xb.index)
                for k, c in enumerate(coords):
                    if c:
                        if c.denominator != 1:
                            raise UnsupportedCharacteristic(f"non-integral bracket constant {c}")
                        out.append((self.id_of[(t, k)], int(c)))
            self._bracket[key] = tuple(out)
        return self._bracket[key]

    def straighten(self, word: tuple[int, ...]) -> dict[Monomial, int]:
        """Ordinary PBW normal ordering of the product x_w1 ... x_wk over Z."""
        if self.mono_height(word) > self.h:
            return {}
        if word in self._straight:
            return self._straight[word]
        pos = next((i for i in range(len(word) - 1) if word[i] > word[i + 1]), None)
        if pos is None:
            res = {word: 1}
        else:
            res: dict[Monomial, int] = {}
            swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2 :]
            _acc(res, self.straighten(swapped), 1)
            for k, c in self.bracket_ids(word[pos], word[pos + 1]):
                _acc(res, self.straighten(word[:pos] + (k,) + word[pos + 2 :]), c)
        self._straight[word] = res
        return res

    def product(self, m1: Monomial, m2: Monomial) -> dict[Monomial, int]:
        """Product of two divided-power monomials, coefficients in F_p."""
        key = (m1, m2)
        if key in self._prod:
            return self._prod[key]
        out: dict[Monomial, int] = {}
        if self.mono_height(m1) + self.mono_height(m2) <= self.h:
            if not m1 or not m2 or m1[-1] <= m2[0]:
                merged = tuple(sorted(m1 + m2))
                num = _divided_factor(merged)
                den = _divided_factor(m1) * _divided_factor(m2)
                out[merged] = self._reduce(Fraction(num, den))
            else:
                den = _divided_factor(m1) * _divided_factor(m2)
                for n, c in self.straighten(m1 + m2).items():
                    v = self._reduce(Fraction(c * _divided_factor(n), den))
                    if v:
                        out[n] = v
                out = {k: v for k, v in out.items() if v}
        self._prod[key] = out
        return out

    def _reduce(self, c: Fraction) -> int:
        p = self.p
        if c.denominator % p == 0:
            raise UnsupportedCharacteristic(
                f"structure constant {c} is not {p}-integral in the divided-power basis at height <= {self.h}"
            )
        return c.numerator * pow(c.denominator, -1, p) % p

    # --- envelope arithmetic -------------------------------------------------

    def mul(self, u: EnvElement, v: EnvElement) -> EnvElement:
        F = self.field
        out: EnvElement = {}
        for m1, c1 in u.items():
            h1 = self.mono_height(m1)
            for m2, c2 in v.items():
                if h1 + self.mono_height(m2) > self.h:
                    continue
                c = F.mul(c1, c2)
                for n, k in self.product(m1, m2).items():
                    out[n] = F.add(out.get(n, 0), F.scale(k, c))
        return {m: c for m, c in out.items() if c}

    def expand(self, g: "TruncatedGroupElement") -> EnvElement:
        """The ordered product of [exp] lambda_x x, as an envelope element."""
        F = self.field
        cur: EnvElement = {(): 1}
        for x, lam in enumerate(g.coeffs):
            if not lam:
                continue
            hx = self.heights[x]
            nxt: EnvElement = {}
            for m, c in cur.items():
                hm = self.mono_height(m)
                k, pw = 0, 1
                while hm + k * hx <= self.h:
                    nm = m + (x,) * k
                    nxt[nm] = F.add(nxt.get(nm, 0), F.mul(c, pw))
                    k += 1
                    pw = F.mul(pw, lam)
            cur = {m: c for m, c in nxt.items() if c}
        return cur

    def identity(self) -> "TruncatedGroupElement":
        return TruncatedGroupElement(self, (0,) * len(self.basis))

    def element(self, coeffs: dict | Sequence[int]) -> "TruncatedGroupElement":
        if isinstance(coeffs, dict):
            vals = [0] * len(self.basis)
            for key, lam in coeffs.items():
                i = key if isinstance(key, int) else self.id_of[(tuple(key[0]), key[1])]
                vals[i] = lam % self.field.q if self.field.e == 1 else lam
            return TruncatedGroupElement(self, tuple(vals))
        if len(coeffs) != len(self.basis):
            raise PreconditionError(f"expected {len(self.basis)} coefficients")
        return TruncatedGroupElement(self, tuple(coeffs))

    def component_dimension(self, weight: Sequence[int]) -> int:
        """Number of PBW monomials of the given weight."""
        weight = tuple(weight)
        ids = [b.id for b in self.basis if all(x <= y for x, y in zip(b.weight, weight))]
        count = 0

        def rec(start: int, rest: Root):
            nonlocal count
            if not any(rest):
                count += 1
                return
            for j in range(start, len(ids)):
                w = self.basis[ids[j]].weight
                nr = tuple(x - y for x, y in zip(rest, w))
                if all(c >= 0 for c in nr):
                    rec(j, nr)

        if any(weight):
            rec(0, weight)
        return count

    def all_elements(self, ids: Iterable[int] | None = None) -> Iterator["TruncatedGroupElement"]:
        ids = list(range(len(self.basis))) if ids is None else sorted(ids)
        n = len(self.basis)
        for vals in itertools.product(self.field.elements(), repeat=len(ids)):
            c = [0] * n
            for i, v in zip(ids, vals):
                c[i] = v
            yield TruncatedGroupElement(self, tuple(c))


def _acc(target: dict, src: dict, c: int) -> None:
    for k, v in src.items():
        nv = target.get(k, 0) + c * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _divided_factor(m: Monomial) -> int:
    out = 1
    for _, grp in itertools.groupby(m):
        out *= factorial(len(list(grp)))
    return out


@dataclass(frozen=True)
class TruncatedGroupElement:
    envelope: TruncatedEnvelope
    coeffs: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, TruncatedGroupElement) and self.coeffs == other.coeffs and self.envelope is other.envelope

    def __hash__(self):
        return hash(self.coeffs)

    def __mul__(self, other: "TruncatedGroupElement") -> "TruncatedGroupElement":
        return multiply(self.envelope, self, other)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def is_identity(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        E = self.envelope
        return {
            "coeffs": [
                {"root": list(E.basis[i].weight), "basisIndex": E.basis[i].index, "lambda": E.field.to_str(c)}
                for i, c in enumerate(self.coeffs)
                if c
            ]
        }


def build_truncated_envelope(a: GCM, h: int, q: int, order=None) -> TruncatedEnvelope:
    return TruncatedEnvelope(a, h, q, order)


def normal_form(E: TruncatedEnvelope, u: EnvElement) -> TruncatedGroupElement:
    """Recover (lambda_x) from a group-like envelope element."""
    if u.get((), 0) != 1:
        raise NotGroupLike("constant term is not 1")
    g = TruncatedGroupElement(E, tuple(u.get((i,), 0) for i in range(len(E.basis))))
    if E.expand(g) != u:
        raise NotGroupLike("envelope element is not an ordered product of twisted exponentials")
    return g


def multiply(E: TruncatedEnvelope, g1: TruncatedGroupElement, g2: TruncatedGroupElement) -> TruncatedGroupElement:
    if g1.is_identity():
        return g2
    if g2.is_identity():
        return g1
    s1, s2 = g1.support(), g2.support()
    if s1[-1] < s2[0]:
        return TruncatedGroupElement(E, tuple(a + b for a, b in zip(g1.coeffs, g2.coeffs)))
    return normal_form(E, E.mul(E.expand(g1), E.expand(g2)))


def product(E: TruncatedEnvelope, elements: Iterable[TruncatedGroupElement]) -> TruncatedGroupElement:
    out = E.identity()
    for g in elements:
        out = multiply(E, out, g)
    return out


def single_factor(E: TruncatedEnvelope, i: int, lam: int) -> TruncatedGroupElement:
    c = [0] * len(E.basis)
    c[i] = lam
    return TruncatedGroupElement(E, tuple(c))


def inverse(E: TruncatedEnvelope, g: TruncatedGroupElement) -> TruncatedGroupElement:
    F = E.field
    factors = [single_factor(E, i, F.neg(c)) for i, c in reversed(list(enumerate(g.coeffs))) if c]
    return product(E, factors)


def twisted_exp(E: TruncatedEnvelope, x: AlgebraElement | tuple[Root, Sequence[int]], lam: int) -> TruncatedGroupElement:
    """[exp] lam x for x homogeneous of weight alpha with ht(alpha) <= h."""
    if isinstance(x, AlgebraElement):
        w, coords = x.weight(), x.coords()
    else:
        w, coords = tuple(x[0]), tuple(x[1])
    if height(w) > E.h:
        return E.identity()
    if not lam or not any(coords):
        return E.identity()
    F = E.field
    nz = [(k, c) for k, c in enumerate(coords) if c]
    ints = [Fraction(c) for c in coords]
    if any(c.denominator != 1 for c in ints):
        raise PreconditionError("twisted_exp expects integral coordinates")
    if len(nz) == 1:
        k, c = nz[0]
        return single_factor(E, E.id_of[(w, k)], F.mul(F.from_int(int(c)), lam))
    return normal_form(E, _exp_series(E, w, [int(c) for c in ints], lam))


def _exp_series(E: TruncatedEnvelope, w: Root, coords: list[int], lam: int) -> EnvElement:
    """sum_n lam^n y^n / n! with y = sum coords_k x_(w,k), computed over Q."""
    F = E.field
    letters = [(E.id_of[(w, k)], c) for k, c in enumerate(coords) if c]
    out: EnvElement = {(): 1}
    hw = height(w)
    n = 1
    pw = lam
    while n * hw <= E.h:
        acc: dict[Monomial, Fraction] = {}
        for combo in itertools.product(letters, repeat=n):
            word = tuple(i for i, _ in combo)
            coef = 1
            for _, c in combo:
                coef *= c
            for m, v in E.straighten(word).items():
                acc[m] = acc.get(m, 0) + coef * v
        for m, v in acc.items():
            r = E._reduce(Fraction(v * _divided_factor(m), factorial(n)))
            if r:
                out[m] = F.add(out.get(m, 0), F.scale(r, pw))
        n += 1
        pw = F.mul(pw, lam)
    return {m: c for m, c in out.items() if c}


# --- subgroups -------------------------------------------------------------


class Subgroup:
    """The truncated U_Psi for a closed Psi: elements supported on B_Psi."""

    def __init__(self, E: TruncatedEnvelope, roots: Iterable[Root], check: bool = True):
        self.envelope = E
        roots = {tuple(r) for r in roots if height(r) <= E.h}
        self.roots = RootSet(tuple(roots), E.h)
        if check:
            res = is_closed(E.gcm, self.roots)
            if not res.closed:
                raise NotClosed(f"root set is not closed: witness {res.witness}")
        self.ids = tuple(b.id for b in E.basis if b.weight in roots)

    def __contains__(self, g: TruncatedGroupElement) -> bool:
        allowed = set(self.ids)
        return all(i in allowed for i in g.support())

    @property
    def order(self) -> int:
        return self.envelope.field.q ** len(self.ids)

    def elements(self) -> Iterator[TruncatedGroupElement]:
        return self.envelope.all_elements(self.ids)


def subgroup_elements(E: TruncatedEnvelope, psi: Iterable[Root]) -> Subgroup:
    return Subgroup(E, psi)


def factor(E: TruncatedEnvelope, g: TruncatedGroupElement, first: Subgroup, second: Subgroup):
    """g = g1 * g2 with g1 in ``first`` and g2 in ``second`` (both closed, disjoint)."""
    F = E.field
    allowed = set(first.ids)
    g1 = E.identity()
    r = g
    for _ in range(E.h + 1):
        bad = [i for i in r.support() if i in allowed]
        if not bad:
            break
        k = min(E.heights[i] for i in bad)
        step = [0] * len(E.basis)
        for i in bad:
            if E.heights[i] == k:
                step[i] = r.coeffs[i]
        y = TruncatedGroupElement(E, tuple(step))
        g1 = multiply(E, g1, y)
        r = multiply(E, inverse(E, y), r)
    if r not in second:
        raise NotGroupLike("factorization did not terminate in the second subgroup")
    return g1, r


# --- filtration and conjugations ----------------------------------------------


def filtration_level(E: TruncatedEnvelope, g: TruncatedGroupElement) -> int:
    """Least height in the support; h + 1 (beyond truncation) for the identity."""
    sup = g.support()
    if not sup:
        return E.h + 1
    return min(E.heights[i] for i in sup)


@dataclass(frozen=True)
class TorusElement:
    units: tuple[int, ...]

    def evaluate(self, a: GCM, F: GF, weight: Sequence[int]) -> int:
        """prod_i r_i^(sum_j c_j a_ij)."""
        out = 1
        for i, r in enumerate(self.units):
            if r == 0:
                raise PreconditionError("torus entries must be units")
            e = sum(c * a.entries[i][j] for j, c in enumerate(weight))
            out = F.mul(out, F.pow(r, e))
        return out


def torus_conjugate(E: TruncatedEnvelope, t: TorusElement, g: TruncatedGroupElement) -> TruncatedGroupElement:
    F = E.field
    return TruncatedGroupElement(
        E, tuple(F.mul(t.evaluate(E.gcm, F, E.basis[i].weight), c) if c else 0 for i, c in enumerate(g.coeffs))
    )


def _letters(word, inverse: bool) -> list[tuple[int, bool]]:
    """(index, use inverse) in application order for Int(w) or Int(w^{-1})."""
    word = (word,) if isinstance(word, int) else tuple(word)
    if inverse:
        return [(i, True) for i in word]
    return [(i, False) for i in reversed(word)]


def _transport(E: TruncatedEnvelope, steps, weight: Root, coords: tuple) -> tuple[Root, tuple] | None:
    """Push a root vector through s^* steps; None once it leaves the height bound."""
    from .liealg import s_star

    L = E.algebra
    a = E.gcm
    # final weight first, so factors that end above h are never computed
    w = weight
    for i, _ in steps:
        w = reflect(a, i - 1, w)
        if sign(w) < 0:
            raise LeavesPositiveModel(weight, f"the support root {list(weight)} is sent to the negative root {list(w)}")
    if height(w) > E.h:
        return None
    x = L.element(weight, coords)
    for i, inv in steps:
        nxt = reflect(a, i - 1, x.weight())
        if height(nxt) > L.h:
            raise HeightBudgetExceeded(f"conjugation passes through {nxt}, above the algebra budget {L.h}")
        x = s_star(L, i, x, inverse=inv)
    return x.weight(), x.coords()


def weyl_conjugate(E: TruncatedEnvelope, word, g: TruncatedGroupElement, inverse: bool = False) -> TruncatedGroupElement:
    """w g w^{-1} (or w^{-1} g w) for the lift of ``word``, truncated above h.

    The normal form of g is taken as its canonical lift, every factor
    [exp] lambda x is sent to [exp] lambda s^*x, factors that land above h
    are dropped, and the product is renormalised.
    """
    steps = _letters(word, inverse)
    for i, _ in steps:
        if not 1 <= i <= E.gcm.rank:
            raise PreconditionError(f"reflection index {i} outside 1..{E.gcm.rank}")
    factors = []
    for x, lam in enumerate(g.coeffs):
        if not lam:
            continue
        b = E.basis[x]
        moved = _transport(E, steps, b.weight, tuple(Fraction(int(k == b.index)) for k in range(E.algebra.dim(b.weight))))
        if moved is None:
            continue
        factors.append(twisted_exp(E, moved, lam))
    return product(E, factors)


@dataclass(frozen=True)
class ContractionRecord:
    levels: tuple[int, ...]
    escaped: tuple[bool, ...]
    first_flag: int | None
    predicted: tuple[int, ...]
    predicted_first: int | None

    def rows(self) -> list[tuple[int, int, bool]]:
        return [(l, lv, esc) for l, (lv, esc) in enumerate(zip(self.levels, self.escaped))]

    def consistent(self) -> bool:
        """Levels dominate the height schedule and flag no later than predicted."""
        cap = max(self.levels)
        dom = all(lv >= min(n, cap) for lv, n in zip(self.levels, self.predicted))
        if self.predicted_first is None:
            return dom
        return dom and self.first_flag is not None and self.first_flag <= self.predicted_first

    def to_csv(self) -> str:
        lines = ["l,level,escaped"]
        lines += [f"{l},{lv},{str(esc).lower()}" for l, lv, esc in self.rows()]
        return "\n".join(lines) + "\n"


def contract_experiment(E: TruncatedEnvelope, word, g: TruncatedGroupElement, lmax: int, inverse: bool = False) -> ContractionRecord:
    """Filtration levels of a^l g a^{-l} (or a^{-l} g a^l) for l = 0..lmax."""
    word = (word,) if isinstance(word, int) else tuple(word)
    w = WeylElement.from_word(E.gcm, word)
    m = w.inverse_matrix if inverse else w.matrix
    sup = [E.basis[i].weight for i in g.support()]
    levels, esc, predicted = [], [], []
    orbit = list(sup)
    for l in range(lmax + 1):
        if l == 0:
            conj = g
        else:
            conj = weyl_conjugate(E, word * l, g, inverse)
        lv = filtration_level(E, conj)
        levels.append(lv)
        esc.append(lv > E.h)
        predicted.append(min((height(v) for v in orbit), default=E.h + 1))
        orbit = [linalg.matvec(m, v) for v in orbit]
    first = next((l for l, e in enumerate(esc) if e), None)
    pfirst = next((l for l, n in enumerate(predicted) if n > E.h), None)
    return ContractionRecord(tuple(levels), tuple(esc), first, tuple(predicted), pfirst)


# --- torus relations ---------------------------------------------------------


def torus_relation_check(a: GCM, b: GCM, q: int) -> dict:
    """Do the torus characters of A and A' agree on every unit of F_q?"""
    for g in (a, b):
        if g.rank != 2 or min(-g.entries[0][1], -g.entries[1][0]) < 2:
            raise PreconditionError(f"{g} must be [[2,-m],[-n,2]] with m, n >= 2")
    F = field(q)
    roots = []
    ok = True
    for i, j in ((0, 1), (1, 0)):
        e, e2 = a.entries[i][j], b.entries[i][j]
        witness = None
        for r in F.units():
            if F.pow(r, e) != F.pow(r, e2):
                witness = r
                break
        match = witness is None
        ok = ok and match
        roots.append(
            {
                "root": j + 1,
                "exponents": [-e, -e2],
                "congruent_mod_q_minus_1": (e - e2) % (q - 1) == 0,
                "match": match,
                "witness": None if witness is None else F.to_str(witness),
            }
        )
    return {"q": q, "result": ok, "roots": roots}


def torus_relation_check_mn(m: int, n: int, m2: int, n2: int, q: int) -> dict:
    return torus_relation_check(gcm_from_rank2(m, n), gcm_from_rank2(m2, n2), q)
