"""The positive part n+ of a Kac-Moody algebra, truncated at a height bound.

Realisation.  For a weight alpha of height >= 2 an element x of g_alpha is
zero exactly when ad(f_j) x = 0 for every j, so x is stored through its
image (ad f_1 x, ..., ad f_n x) in the lower root spaces.  Root spaces are
built degree by degree from below: the integral lattice at alpha is the
Z-span of

* divided powers ad(e_i)^k / k! applied to lattice vectors of g_{alpha - k alpha_i},
* brackets of lattice vectors of lower weights,

reduced to Hermite normal form.  The weight-0 images of ad(f_i) on
g_{alpha_i} are formal coroot markers h_1..h_n acting on g_beta by
<beta, alpha_k^vee>.  Conventions: [e_i, f_j] = delta_ij h_i, so
ad(f_i) e_i = -h_i.

Exact rationals are used throughout; a prime-field algebra reduces the
integral structure constants modulo p at the very end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    HeightBudgetExceeded,
    InvariantViolation,
    PreconditionError,
    PreconditionViolated,
    UnsupportedCharacteristic,
)
from .gcm import GCM, gcm_from_rank2
from .rootsys import Root, descend, height, is_real_root, reflect, root_key, sign, simple_root, _tag, RootTag

Coeff = str | int


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def _normalize_coeff(coeff: Coeff) -> Coeff:
    if isinstance(coeff, str):
        c = coeff.upper()
        if c in ("ZZ", "QQ"):
            return c
        if c.startswith("GF"):
            return int(c[2:].strip("()"))
        raise PreconditionError(f"unknown coefficient domain {coeff!r}")
    if not _is_prime(int(coeff)):
        raise PreconditionError(f"{coeff} is not prime")
    return int(coeff)


class GradedLieAlgebra:
    """n+ up to height ``height_bound`` over ZZ, QQ or a prime field GF(p)."""

    def __init__(self, gcm: GCM, height_bound: int, coeff: Coeff = "QQ"):
        if height_bound < 1:
            raise PreconditionError("height bound must be >= 1")
        self.gcm = gcm
        self.h = height_bound
        self.n = gcm.rank
        self.coeff = _normalize_coeff(coeff)
        if isinstance(self.coeff, int) and self.h >= self.coeff:
            raise UnsupportedCharacteristic(f"height bound {self.h} must stay below p = {self.coeff}")
        self.zero_weight: Root = (0,) * self.n
        self._basis: dict[Root, list[list[Fraction]]] = {}
        self._layout: dict[Root, list[tuple[int, int, int]]] = {}
        self._image_memo: dict[tuple, list[Fraction]] = {}
        self._bb: dict[tuple, tuple[Fraction, ...]] = {}
        self._sstar: dict[tuple, tuple[Fraction, ...]] = {}

    # --- weights and lattices ---------------------------------------------

    def _valid(self, w: Root) -> bool:
        return all(c >= 0 for c in w) and any(w)

    def dim(self, w: Sequence[int]) -> int:
        w = tuple(w)
        if not self._valid(w):
            return 0
        if height(w) > self.h:
            raise HeightBudgetExceeded(f"weight {w} lies above the height bound {self.h}")
        return len(self.basis(w))

    def _space_dim(self, w: Root) -> int:
        return self.n if w == self.zero_weight else self.dim(w)

    def layout(self, w: Root) -> list[tuple[int, int, int]]:
        """Segments (j, offset, length) of the ad(f)-image space of g_w."""
        if w not in self._layout:
            if height(w) == 1:
                i = w.index(1)
                self._layout[w] = [(i, 0, self.n)]
            else:
                segs, off = [], 0
                for j in range(self.n):
                    lw = _sub(w, j)
                    if lw is None:
                        continue
                    d = self.dim(lw)
                    if d:
                        segs.append((j, off, d))
                        off += d
                self._layout[w] = segs
        return self._layout[w]

    def _image_len(self, w: Root) -> int:
        return sum(s[2] for s in self.layout(w))

    def basis(self, w: Sequence[int]) -> list[list[Fraction]]:
        """Hermite basis of the integral lattice of g_w, as ad(f)-image rows."""
        w = tuple(w)
        if w in self._basis:
            return self._basis[w]
        if not self._valid(w):
            return []
        if height(w) > self.h:
            raise HeightBudgetExceeded(f"weight {w} lies above the height bound {self.h}")
        if height(w) == 1:
            i = w.index(1)
            vec = [Fraction(0)] * self.n
            vec[i] = Fraction(-1)
            self._basis[w] = [vec]
            return self._basis[w]
        self.layout(w)
        if self._image_len(w) == 0:
            self._basis[w] = []
            return []
        gens: list[list[Fraction]] = []
        for i in range(self.n):
            for k in range(1, w[i] + 1):
                lw = tuple(c - k * (t == i) for t, c in enumerate(w))
                if not self._valid(lw):
                    continue
                for u in range(self.dim(lw)):
                    z: tuple = _unit(self.dim(lw), u)
                    cur = lw
                    for _ in range(k - 1):
                        z = self._ad_e_coords(i, cur, z)
                        cur = _add(cur, i)
                        if not any(z):
                            break
                    if not any(z):
                        continue
                    img = self._ad_e_image(i, cur, z)
                    gens.append([x / factorial(k) for x in img])
        for beta in _sub_weights(w):
            gamma = tuple(x - y for x, y in zip(w, beta))
            if root_key(beta) > root_key(gamma):
                continue
            db, dg = self.dim(beta), self.dim(gamma)
            for a_ in range(db):
                for b_ in range(dg):
                    if beta == gamma and a_ >= b_:
                        continue
                    gens.append(self._bracket_image(beta, a_, gamma, b_))
        self._basis[w] = linalg.rational_lattice_basis(gens)
        return self._basis[w]

    def image(self, w: Root, coords: Sequence) -> list[Fraction]:
        b = self.basis(w)
        out = [Fraction(0)] * (len(b[0]) if b else 0)
        for c, row in zip(coords, b):
            if c:
                out = [x + c * y for x, y in zip(out, row)]
        return out

    def coords(self, w: Root, vec: Sequence) -> tuple[Fraction, ...]:
        b = self.basis(w)
        if not b:
            if any(vec):
                raise InvariantViolation(f"nonzero image at weight {w}, which has dimension 0")
            return ()
        c = linalg.echelon_coordinates(b, vec)
        if c is None:
            raise InvariantViolation(f"vector outside g_{w}")
        return tuple(c)

    # --- the three basic operators ------------------------------------------

    def _pair(self, w: Root, k: int) -> int:
        return self.gcm.pairing(w, k)

    def _ad_f_coords(self, j: int, w: Root, y: Sequence) -> tuple:
        """ad(f_j) y for y at weight w; coroot markers when w = alpha_j."""
        lw = _sub(w, j)
        if lw is None:
            return ()
        target_dim = self._space_dim(lw)
        if not any(y):
            return (Fraction(0),) * target_dim
        for jj, off, d in self.layout(w):
            if jj == j:
                img = self.image(w, y)
                return tuple(img[off : off + d])
        return (Fraction(0),) * target_dim

    def _marker_on(self, hcoords: Sequence, w: Root) -> Fraction:
        """Scalar by which sum_k hcoords_k h_k acts on g_w."""
        return sum((c * self._pair(w, k) for k, c in enumerate(hcoords) if c), Fraction(0))

    def _ad_e_image(self, i: int, w: Root, y: Sequence) -> list[Fraction]:
        """ad(f)-image of [e_i, y], y at nonzero weight w."""
        t = _add(w, i)
        if height(t) > self.h:
            raise HeightBudgetExceeded(f"[e_{i + 1}, g_{w}] lies above the height bound {self.h}")
        segs = self.layout(t)
        out: list[Fraction] = []
        for j, off, d in segs:
            comp = [Fraction(0)] * d
            if j == i:
                s = self._pair(w, i)
                if s:
                    comp = [x - s * Fraction(yy) for x, yy in zip(comp, y)]
            lw = _sub(w, j)
            if lw is not None and any(y):
                fy = self._ad_f_coords(j, w, y)
                if any(fy):
                    add = self._ad_e_coords(i, lw, fy)
                    comp = [x + z for x, z in zip(comp, add)]
            out.extend(comp)
        return out

    def _ad_e_coords(self, i: int, w: Root, y: Sequence) -> tuple:
        t = _add(w, i)
        if w == self.zero_weight:
            # [e_i, sum y_k h_k] = -sum_k y_k a_ki e_i
            return (-sum((c * self.gcm.entries[k][i] for k, c in enumerate(y) if c), Fraction(0)),)
        if not any(y):
            return (Fraction(0),) * self.dim(t)
        return self.coords(t, self._ad_e_image(i, w, y))

    def _bracket_image(self, beta: Root, a: int, gamma: Root, b: int) -> list[Fraction]:
        key = (beta, a, gamma, b)
        if key in self._image_memo:
            return self._image_memo[key]
        t = tuple(x + y for x, y in zip(beta, gamma))
        ua = _unit(self.dim(beta), a)
        ub = _unit(self.dim(gamma), b)
        out: list[Fraction] = []
        for j, off, d in self.layout(t):
            comp = [Fraction(0)] * d
            lb = _sub(beta, j)
            if lb is not None:
                fx = self._ad_f_coords(j, beta, ua)
                if lb == self.zero_weight:
                    s = self._marker_on(fx, gamma)
                    comp = [x + s * y for x, y in zip(comp, ub)]
                elif any(fx):
                    comp = [x + y for x, y in zip(comp, self._bracket_coords(lb, fx, gamma, ub))]
            lg = _sub(gamma, j)
            if lg is not None:
                fy = self._ad_f_coords(j, gamma, ub)
                if lg == self.zero_weight:
                    s = self._marker_on(fy, beta)
                    comp = [x - s * y for x, y in zip(comp, ua)]
                elif any(fy):
                    comp = [x + y for x, y in zip(comp, self._bracket_coords(beta, ua, lg, fy))]
            out.extend(comp)
        self._image_memo[key] = out
        return out

    def _bb_coords(self, beta: Root, a: int, gamma: Root, b: int) -> tuple:
        if (root_key(beta), a) > (root_key(gamma), b):
            return tuple(-x for x in self._bb_coords(gamma, b, beta, a))
        key = (beta, a, gamma, b)
        if key not in self._bb:
            if beta == gamma and a == b:
                t = tuple(x + y for x, y in zip(beta, gamma))
                self._bb[key] = (Fraction(0),) * self.dim(t)
            else:
                t = tuple(x + y for x, y in zip(beta, gamma))
                self._bb[key] = self.coords(t, self._bracket_image(beta, a, gamma, b))
        return self._bb[key]

    def _bracket_coords(self, beta: Root, x: Sequence, gamma: Root, y: Sequence) -> tuple:
        t = tuple(p + q for p, q in zip(beta, gamma))
        z = self.zero_weight
        if beta == z and gamma == z:
            return (Fraction(0),) * self.n
        if beta == z:
            s = self._marker_on(x, gamma)
            return tuple(s * Fraction(c) for c in y)
        if gamma == z:
            s = self._marker_on(y, beta)
            return tuple(-s * Fraction(c) for c in x)
        if height(t) > self.h:
            raise HeightBudgetExceeded(f"[g_{beta}, g_{gamma}] lies above the height bound {self.h}")
        out = [Fraction(0)] * self.dim(t)
        if not out:
            return ()
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                bb = self._bb_coords(beta, a, gamma, b)
                f = xa * yb
                out = [o + f * c for o, c in zip(out, bb)]
        return tuple(out)

    # --- Weyl automorphisms s_i^* --------------------------------------------

    def _s_star_basis(self, i: int, w: Root, k: int) -> tuple[Fraction, ...]:
        """s_i^* of the k-th basis vector of g_w, via lowest-weight sl2 decomposition."""
        key = (i, w, k)
        if key in self._sstar:
            return self._sstar[key]
        tw = reflect(self.gcm, i, w)
        if sign(tw) <= 0:
            raise PreconditionError(f"s_{i + 1} sends {w} out of the positive cone")
        if height(tw) > self.h:
            raise HeightBudgetExceeded(f"s_{i + 1}({w}) = {tw} lies above the height bound {self.h}")
        lam = self._pair(w, i)
        pieces = []  # (e^(j) u at w, (-1)^j e^(j - lam) u at s_i w)
        j = 0
        cur = w
        while self._valid(cur):
            d = self.dim(cur)
            if d:
                lower = _sub(cur, i)
                if lower is None or not self._valid(lower) or self.dim(lower) == 0:
                    kernel = [[Fraction(int(r == c)) for c in range(d)] for r in range(d)]
                else:
                    rows = [self._ad_f_coords(i, cur, _unit(d, r)) for r in range(d)]
                    kernel = linalg.left_nullspace(rows, d)
                for u in kernel:
                    if lam - 2 * j > 0:
                        raise InvariantViolation(f"lowest-weight vector of positive weight at {cur}")
                    up = self._raise(i, cur, u, j)
                    if j - lam < 0:
                        # string of u stops below w
                        if any(up):
                            raise InvariantViolation(f"sl2 string overruns at {cur}")
                        continue
                    top = self._raise(i, cur, u, j - lam)
                    if j % 2:
                        top = tuple(-x for x in top)
                    pieces.append((up, top))
            j += 1
            nxt = _sub(cur, i)
            if nxt is None:
                break
            cur = nxt
        target = _unit(self.dim(w), k)
        sol = linalg.solve_combination([p[0] for p in pieces], target)
        if sol is None:
            raise InvariantViolation(f"sl2 decomposition failed at {w}")
        out = [Fraction(0)] * self.dim(tw)
        for c, (_, top) in zip(sol, pieces):
            if c:
                out = [o + c * t for o, t in zip(out, top)]
        res = tuple(out)
        if any(x.denominator != 1 for x in res):
            raise InvariantViolation(f"s_{i + 1}^* is not integral on g_{w}")
        self._sstar[key] = res
        return res

    def _raise(self, i: int, w: Root, u: Sequence, k: int) -> tuple:
        """ad(e_i)^k u / k! for u at weight w."""
        z = tuple(u)
        cur = w
        for _ in range(k):
            z = self._ad_e_coords(i, cur, z)
            cur = _add(cur, i)
        f = factorial(k)
        return tuple(Fraction(x) / f for x in z)

    # --- reduction to the coefficient domain -------------------------------

    def reduce(self, c) -> Fraction:
        c = Fraction(c)
        if self.coeff == "QQ":
            return c
        if self.coeff == "ZZ":
            if c.denominator != 1:
                raise InvariantViolation(f"non-integral coefficient {c} over ZZ")
            return c
        p = self.coeff
        if c.denominator % p == 0:
            raise UnsupportedCharacteristic(f"denominator of {c} divisible by p = {p}")
        return Fraction(c.numerator * pow(c.denominator, -1, p) % p)

    # --- element constructors -----------------------------------------------

    def element(self, w: Sequence[int], coords: Sequence) -> "AlgebraElement":
        w = tuple(w)
        if len(coords) != self._space_dim(w):
            raise PreconditionError(f"g_{w} has dimension {self._space_dim(w)}, got {len(coords)} coordinates")
        return AlgebraElement(self, {w: tuple(coords)})

    def basis_element(self, w: Sequence[int], k: int) -> "AlgebraElement":
        w = tuple(w)
        return self.element(w, _unit(self.dim(w), k))

    def generator(self, i: int) -> "AlgebraElement":
        """e_i for 1-based i."""
        return self.basis_element(simple_root(self.n, i), 0)

    def coroot(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {self.zero_weight: _unit(self.n, i - 1)})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def weights(self) -> list[Root]:
        from .rootsys import positive_lattice_vectors

        return [w for w in positive_lattice_vectors(self.n, self.h) if self.dim(w)]

    def dimension_table(self) -> dict[Root, int]:
        from .rootsys import positive_lattice_vectors

        return {w: self.dim(w) for w in positive_lattice_vectors(self.n, self.h)}

    def to_json(self) -> dict:
        table = self.dimension_table()
        consts = []
        ws = [w for w, d in table.items() if d]
        for beta, gamma in itertools.combinations_with_replacement(ws, 2):
            t = tuple(x + y for x, y in zip(beta, gamma))
            if height(t) > self.h or not table.get(t):
                continue
            for a in range(table[beta]):
                for b in range(table[gamma]):
                    if beta == gamma and a >= b:
                        continue
                    c = self._bb_coords(beta, a, gamma, b)
                    c = [self.reduce(x) for x in c]
                    if any(c):
                        consts.append({"x": [list(beta), a], "y": [list(gamma), b], "bracket": [list(t), [_fmt(x) for x in c]]})
        return {
            "gcm": self.gcm.to_list(),
            "height": self.h,
            "coeff": self.coeff if isinstance(self.coeff, str) else f"GF({self.coeff})",
            "dimensions": [{"weight": list(w), "dim": d} for w, d in table.items()],
            "structure_constants": consts,
        }


def build_positive_algebra(a: GCM, h: int, coeff: Coeff = "QQ") -> GradedLieAlgebra:
    """n+ up to height h; root spaces are built lazily on first use."""
    return GradedLieAlgebra(a, h, coeff)


def _fmt(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def _unit(d: int, k: int) -> tuple:
    return tuple(Fraction(int(r == k)) for r in range(d))


def _add(w: Root, i: int) -> Root:
    return tuple(c + (t == i) for t, c in enumerate(w))


def _sub(w: Root, j: int) -> Root | None:
    if w[j] == 0:
        return None
    return tuple(c - (t == j) for t, c in enumerate(w))


def _sub_weights(w: Root):
    for b in itertools.product(*(range(c + 1) for c in w)):
        if any(b) and b != w:
            yield b


class AlgebraElement:
    """A finite sum of homogeneous components, weight -> coordinates."""

    __slots__ = ("algebra", "components")

    def __init__(self, algebra: GradedLieAlgebra, components: dict):
        self.algebra = algebra
        comps = {}
        for w, c in components.items():
            c = tuple(algebra.reduce(x) for x in c)
            if any(c):
                comps[tuple(w)] = c
        self.components = comps

    def is_zero(self) -> bool:
        return not self.components

    def weight(self) -> Root:
        if len(self.components) != 1:
            raise PreconditionError("element is not homogeneous")
        return next(iter(self.components))

    def coords(self) -> tuple:
        return self.components[self.weight()]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        comps = dict(self.components)
        for w, c in other.components.items():
            if w in comps:
                comps[w] = tuple(x + y for x, y in zip(comps[w], c))
            else:
                comps[w] = c
        return AlgebraElement(self.algebra, comps)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {w: tuple(-x for x in c) for w, c in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, s) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {w: tuple(s * x for x in c) for w, c in self.components.items()})

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components.items())))

    def __repr__(self):
        parts = [f"{list(w)}:{[_fmt(x) for x in c]}" for w, c in sorted(self.components.items(), key=lambda kv: root_key(kv[0]))]
        return "AlgebraElement(" + ", ".join(parts) + ")"


def bracket(L: GradedLieAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    out: dict[Root, tuple] = {}
    for bw, bc in x.components.items():
        for gw, gc in y.components.items():
            t = tuple(p + q for p, q in zip(bw, gw))
            c = L._bracket_coords(bw, bc, gw, gc)
            if t in out:
                out[t] = tuple(p + q for p, q in zip(out[t], c))
            else:
                out[t] = c
    return AlgebraElement(L, out)


def ad_f(L: GradedLieAlgebra, i: int, x: AlgebraElement) -> AlgebraElement:
    """ad(f_i) x for 1-based i; weight alpha_i components land on coroot markers."""
    j = i - 1
    out = {}
    for w, c in x.components.items():
        if w == L.zero_weight:
            # [f_j, h] = <-alpha_j, h>... f_j has weight -alpha_j: [f_j, h_k] = a_kj f_j, outside n+
            raise PreconditionError("ad(f_i) on coroot markers leaves the positive part")
        lw = _sub(w, j)
        if lw is None:
            continue
        out[lw] = L._ad_f_coords(j, w, c)
    return AlgebraElement(L, out)


def ad_e(L: GradedLieAlgebra, i: int, x: AlgebraElement) -> AlgebraElement:
    j = i - 1
    out = {}
    for w, c in x.components.items():
        out[_add(w, j)] = L._ad_e_coords(j, w, c)
    return AlgebraElement(L, out)


def s_star(L: GradedLieAlgebra, i: int, x: AlgebraElement, inverse: bool = False) -> AlgebraElement:
    """The automorphism s_i^* = exp(ad e_i) exp(-ad f_i) exp(ad e_i) (or its inverse)."""
    j = i - 1
    out: dict[Root, tuple] = {}
    for w, c in x.components.items():
        tw = reflect(L.gcm, j, w)
        acc = [Fraction(0)] * L.dim(tw)
        for k, ck in enumerate(c):
            if ck:
                img = L._s_star_basis(j, w, k)
                acc = [a + ck * v for a, v in zip(acc, img)]
        if inverse and L._pair(w, j) % 2:
            acc = [-a for a in acc]
        out[tw] = tuple(acc)
    return AlgebraElement(L, out)


def weyl_path(a: GCM, gamma: Root) -> tuple[int, tuple[int, ...]]:
    """(j, word) with gamma = s_word alpha_j, each letter raising height (1-based)."""
    outcome, final, path = descend(a, gamma)
    if outcome != "simple":
        raise PreconditionError(f"{gamma} is not a positive real root")
    return final.index(1) + 1, tuple(i + 1 for i in path)


def real_root_vector(L: GradedLieAlgebra, gamma: Sequence[int]) -> AlgebraElement:
    """e_gamma = s_{i1}^* ... s_{ik}^* e_j along the height-raising path to gamma."""
    gamma = tuple(gamma)
    if height(gamma) > L.h:
        raise HeightBudgetExceeded(f"{gamma} lies above the height bound {L.h}")
    j, word = weyl_path(L.gcm, gamma)
    x = L.generator(j)
    for i in reversed(word):
        x = s_star(L, i, x)
    return x


def content(x: AlgebraElement) -> Fraction:
    """gcd of the integral coordinates (1 means primitive in the lattice)."""
    from math import gcd

    g = 0
    for c in x.components.values():
        for v in c:
            if v.denominator != 1:
                return Fraction(0)
            g = gcd(g, int(v))
    return Fraction(g)


@lru_cache(maxsize=None)
def _cached_algebra(a: GCM, h: int) -> GradedLieAlgebra:
    return GradedLieAlgebra(a, h, "QQ")


def contragredient_dimension(a: GCM, v: Sequence[int]) -> int:
    v = tuple(v)
    return _cached_algebra(a, max(height(v), 1)).dim(v)


# --- independent oracle: free Lie algebra modulo the Serre ideal ----------


def _multiset_words(v: Root) -> list[tuple[int, ...]]:
    letters = [i for i, c in enumerate(v) for _ in range(c)]
    return sorted(set(itertools.permutations(letters)))


def _tensor_bracket(x: dict, y: dict) -> dict:
    out: dict = {}
    for u, a in x.items():
        for w, b in y.items():
            out[u + w] = out.get(u + w, 0) + a * b
            out[w + u] = out.get(w + u, 0) - a * b
    return {k: c for k, c in out.items() if c}


def _right_normed(word: tuple[int, ...]) -> dict:
    cur = {(word[-1],): 1}
    for letter in reversed(word[:-1]):
        cur = _tensor_bracket({(letter,): 1}, cur)
    return cur


def serre_quotient_dimension(a: GCM, v: Sequence[int]) -> int:
    """dim of the degree-v part of Free-Lie(e_1..e_n) / Serre ideal."""
    v = tuple(v)
    if not any(v) or any(c < 0 for c in v):
        return 0
    words = _multiset_words(v)
    index = {w: k for k, w in enumerate(words)}

    def dense(d: dict) -> list[int]:
        row = [0] * len(words)
        for w, c in d.items():
            row[index[w]] = c
        return row

    free_rows = [dense(_right_normed(w)) for w in words]
    free_rank = linalg.rank(free_rows)
    n = a.rank
    ideal_rows = []
    for i, j in itertools.permutations(range(n), 2):
        deg = 1 - a.entries[i][j]
        r = [0] * n
        r[i] += deg
        r[j] += 1
        rest = tuple(x - y for x, y in zip(v, r))
        if any(c < 0 for c in rest):
            continue
        rel = {(j,): 1}
        for _ in range(deg):
            rel = _tensor_bracket({(i,): 1}, rel)
        if not rel:
            continue
        prefixes = _multiset_words(rest) if any(rest) else [()]
        for u in prefixes:
            cur = rel
            for letter in reversed(u):
                cur = _tensor_bracket({(letter,): 1}, cur)
            if cur:
                ideal_rows.append(dense(cur))
    ideal_rank = linalg.rank(ideal_rows) if ideal_rows else 0
    return free_rank - ideal_rank


# --- the non-normality witness ------------------------------------------------


def lemma54_witness(m: int, n: int, p: int) -> dict:
    """An imaginary root delta, an index i and x in g_delta with ad(f_i) x != 0 mod p.

    For A = [[2, -m], [-n, 2]], m, n > 2 and p an odd prime.
    """
    if p == 2 or not _is_prime(p):
        raise PreconditionViolated(f"p = {p} must be an odd prime")
    if m <= 2 or n <= 2:
        raise PreconditionViolated(f"m = {m}, n = {n} must both exceed 2")
    a = gcm_from_rank2(m, n)
    checks: dict[str, bool] = {}
    if m % p:
        L = GradedLieAlgebra(a, 2, "ZZ")
        delta = (1, 1)
        i = 1
        x = bracket(L, L.generator(1), L.generator(2))
        fx = ad_f(L, 1, x)
        e2 = L.generator(2)
        coeff = _proportionality(fx, e2)
        checks["delta_imaginary"] = _tag(a, delta) is RootTag.IMAGINARY
        checks["delta_minus_alpha_i_real"] = is_real_root(a, (0, 1))
        checks["x_nonzero"] = not x.is_zero()
        checks["coefficient_equals_m"] = coeff == m
        branch = "p∤m"
        expected = m
        eta = None
    else:
        gamma = (m, 1)
        delta = (m, 2)
        L = GradedLieAlgebra(a, height(delta), "ZZ")
        i = 2
        eg = real_root_vector(L, gamma)
        x = bracket(L, L.generator(2), eg)
        fx = ad_f(L, 2, x)
        coeff = _proportionality(fx, eg)
        expected = 2 - m * n
        checks["gamma_is_s1_alpha2"] = reflect(a, 0, (0, 1)) == gamma
        checks["pairing_alpha1_zero"] = a.pairing(delta, 0) == 0
        checks["pairing_alpha2_negative"] = a.pairing(delta, 1) == 4 - m * n < 0
        checks["delta_imaginary"] = _tag(a, delta) is RootTag.IMAGINARY
        checks["delta_minus_alpha_i_real"] = is_real_root(a, gamma)
        checks["ad_f2_e_gamma_zero"] = ad_f(L, 2, eg).is_zero()
        checks["x_nonzero"] = not x.is_zero()
        checks["coefficient_is_pm_2_minus_mn"] = coeff is not None and abs(coeff) == abs(expected)
        branch = "p|m"
        eta = list(gamma)
    nonzero = coeff is not None and coeff % p != 0
    checks["nonzero_mod_p"] = nonzero
    return {
        "m": m,
        "n": n,
        "p": p,
        "branch": branch,
        "delta": list(delta),
        "i": i,
        "gamma": eta,
        "x": repr(x),
        "coefficient": None if coeff is None else int(coeff),
        "expected_up_to_sign": expected,
        "nonzero_mod_p": nonzero,
        "checks": checks,
        "ok": all(checks.values()),
    }


def _proportionality(x: AlgebraElement, y: AlgebraElement) -> Fraction | None:
    """c with x = c * y, or None."""
    if y.is_zero():
        return None
    if x.is_zero():
        return Fraction(0)
    if set(x.components) != set(y.components):
        return None
    c = None
    for w in y.components:
        for a, b in zip(x.components[w], y.components[w]):
            if b:
                r = a / b
                if c is None:
                    c = r
                elif c != r:
                    return None
            elif a:
                return None
    return c
