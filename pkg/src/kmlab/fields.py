"""Finite fields GF(p^e) with elements encoded as small integers.

An element is the integer whose base-p digits are the coefficients of its
residue polynomial (constant term first).  The modulus is the
lexicographically least monic primitive polynomial of degree e, so x is a
generator of the unit group and multiplication runs on log/exp tables.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import PreconditionError


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def factor_prime_power(q: int) -> tuple[int, int]:
    """(p, e) with q = p^e, or PreconditionError."""
    if q < 2:
        raise PreconditionError(f"q = {q} is not a prime power")
    p = next(k for k in range(2, q + 1) if q % k == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1 or not _is_prime(p):
        raise PreconditionError(f"q = {q} is not a prime power")
    return p, e


def _polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    e = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, e - 1, -1):
        c = out[k]
        if c:
            for t in range(e + 1):
                out[k - e + t] = (out[k - e + t] - c * mod[t]) % p
    return (out + [0] * e)[:e]


def _is_primitive(mod: list[int], p: int) -> bool:
    e = len(mod) - 1
    order = p**e - 1
    x = [0, 1] if e > 1 else [(-mod[0]) % p]
    cur = [1] + [0] * (e - 1)
    for k in range(1, order + 1):
        cur = _polymulmod(cur, x, mod, p)
        if cur == [1] + [0] * (e - 1):
            return k == order
    return False


def least_primitive_polynomial(p: int, e: int) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_{e-1}, 1) of the least monic primitive polynomial."""
    for tail in itertools.product(range(p), repeat=e):
        # lexicographic in (c_{e-1}, ..., c_0)
        mod = list(reversed(tail)) + [1]
        if mod[0] == 0:
            continue
        if _is_primitive(mod, p):
            return tuple(mod)
    raise PreconditionError(f"no primitive polynomial of degree {e} over F_{p}")


class GF:
    """GF(q); elements are ints in range(q)."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.e = factor_prime_power(q)
        self.modulus = least_primitive_polynomial(self.p, self.e)
        p, e = self.p, self.e
        self._exp = [0] * (2 * q)
        self._log = [None] * q
        x = [0, 1] if e > 1 else [(-self.modulus[0]) % p]
        cur = [1] + [0] * (e - 1)
        for k in range(q - 1):
            v = self._encode(cur)
            self._exp[k] = v
            self._log[v] = k
            cur = _polymulmod(cur, x, list(self.modulus), p)
        for k in range(q - 1, 2 * q):
            self._exp[k] = self._exp[k - (q - 1)]

    def _encode(self, digits: list[int]) -> int:
        return sum(d * self.p**k for k, d in enumerate(digits))

    def _digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self._encode([(-x) % self.p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, k: int) -> int:
        """Image of an integer in the prime field."""
        return k % self.p

    def scale(self, k: int, a: int) -> int:
        """k * a for an integer k."""
        return self.mul(self.from_int(k), a)

    # enumeration and display

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def generator(self) -> int:
        return self._exp[1]

    def to_str(self, a: int) -> str:
        if self.e == 1:
            return str(a)
        terms = []
        for k, d in reversed(list(enumerate(self._digits(a)))):
            if not d:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(d) if (d != 1 or k == 0) else ""
            terms.append(coef + mono)
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        text = text.replace(" ", "")
        if self.e == 1:
            return int(text) % self.p
        digits = [0] * self.e
        if text == "0":
            return 0
        for term in text.split("+"):
            if "x" in term:
                coef, _, power = term.partition("x")
                c = int(coef) if coef else 1
                k = int(power[1:]) if power.startswith("^") else 1
            else:
                c, k = int(term), 0
            digits[k] = (digits[k] + c) % self.p
        return self._encode(digits)

    def describe(self) -> dict:
        return {"q": self.q, "p": self.p, "e": self.e, "modulus": list(self.modulus)}


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
