"""Small finite fields GF(q), q = p^k <= 128, as lookup tables.

Elements are the integers ``0..q-1``; the base-``p`` digits of an integer
are the coefficients of a polynomial reduced modulo a fixed irreducible
polynomial of degree ``k``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

MAX_FIELD_ORDER = 128


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, k)`` with ``q = p**k``, or None when q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def _poly_mulmod(a, b, modulus, p):
    k = len(modulus) - 1
    res = [0] * (2 * k)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    for d in range(len(res) - 1, k - 1, -1):
        c = res[d]
        if c:
            for t in range(k + 1):
                res[d - k + t] = (res[d - k + t] - c * modulus[t]) % p
    return res[:k]


def _is_irreducible(coeffs, p):
    # monic polynomial of degree k; irreducible iff no roots/factors of degree <= k/2
    k = len(coeffs) - 1
    for d in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = list(tail) + [1]
            rem = list(coeffs)
            for i in range(k, d - 1, -1):
                c = rem[i]
                if c:
                    for t in range(d + 1):
                        rem[i - d + t] = (rem[i - d + t] - c * divisor[t]) % p
            if not any(rem[:d]):
                return False
    return True


class GF:
    """Addition, multiplication and inversion tables for GF(q)."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None or q > MAX_FIELD_ORDER:
            raise ValueError(f"{q} is not a supported prime power (<= {MAX_FIELD_ORDER})")
        self.q = q
        self.p, self.k = pk
        p, k = pk
        if k == 1:
            self.modulus = (0, 1)
            elems = np.arange(q)
            self.add = (elems[:, None] + elems[None, :]) % q
            self.mul = (elems[:, None] * elems[None, :]) % q
        else:
            modulus = next(list(t) + [1] for t in product(range(p), repeat=k)
                           if t[0] and _is_irreducible(list(t) + [1], p))
            self.modulus = tuple(modulus)
            digits = [[(x // p**i) % p for i in range(k)] for x in range(q)]
            weights = [p**i for i in range(k)]
            self.add = np.array([[sum(((a + b) % p) * w for a, b, w in zip(da, db, weights))
                                  for db in digits] for da in digits])
            self.mul = np.array([[sum(c * w for c, w in
                                      zip(_poly_mulmod(da, db, modulus, p), weights))
                                  for db in digits] for da in digits])
        self.neg = np.argmin(self.add, axis=1)  # the unique b with a + b = 0
        self.inv = np.zeros(q, dtype=int)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        self.primitive = next(a for a in range(2, q) if self._order(a) == q - 1) if q > 2 else 1

    def _order(self, a: int) -> int:
        x, n = a, 1
        while x != 1:
            x = int(self.mul[x, a])
            n += 1
        return n

    def frobenius(self, a: int) -> int:
        x = 1
        for _ in range(self.p):
            x = int(self.mul[x, a])
        return x

    def power(self, a: int, e: int) -> int:
        x = 1
        for _ in range(e):
            x = int(self.mul[x, a])
        return x

    def basis(self) -> list[int]:
        """An additive basis of GF(q) over GF(p)."""
        return [self.p**i for i in range(self.k)]


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
