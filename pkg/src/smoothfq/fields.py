"""Finite fields F_q, q = p^k, with integer-encoded elements.

An element is an integer in range(q): its base-p digits are the coordinates
with respect to the power basis of the defining modulus. For prime q the
encoding is plain residue arithmetic. The same encoding drives the vectorized
sieves, so contexts expose q x q add/mul tables on demand.

Contexts are interned: field_make returns the same object for the same
(p, k, modulus), which makes context identity checks cheap and lets caches
hang off the context.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

MAX_PRIME = 1 << 20

# Small irreducible moduli over F_p, low-to-high coefficients, used when the
# caller asks for a built-in prime power. Verified irreducible at build time.
_BUILTIN_MODULI = {
    (2, 2): (1, 1, 1),        # y^2 + y + 1
    (2, 3): (1, 1, 0, 1),     # y^3 + y + 1
    (2, 4): (1, 1, 0, 0, 1),  # y^4 + y + 1
    (3, 2): (1, 0, 1),        # y^2 + 1
    (3, 3): (1, 2, 0, 1),     # y^3 + 2y + 1
    (5, 2): (1, 1, 1),        # y^2 + y + 1
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FieldCtx:
    """Arithmetic context for F_q. Do not construct directly; use field_make."""

    def __init__(self, p: int, k: int, modulus: Optional[tuple]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus  # None for prime fields
        self._tables: Optional[tuple] = None
        self._trace: Optional[tuple] = None
        self.cache: dict = {}  # scratch space for poly-level caches
        if k > 1:
            self._check_modulus()

    def __repr__(self):
        if self.k == 1:
            return f"FieldCtx(q={self.q})"
        return f"FieldCtx(q={self.p}^{self.k})"

    # -- encoding ----------------------------------------------------------

    def vector(self, a: int) -> tuple:
        """Base-p digits of a, length k: coordinates in the power basis."""
        return tuple((a // self.p**i) % self.p for i in range(self.k))

    def scalar(self, digits: Sequence[int]) -> int:
        return sum((d % self.p) * self.p**i for i, d in enumerate(digits))

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, pw = 0, 1
        for _ in range(self.k):
            out += ((a + b) % p) * pw
            a //= p
            b //= p
            pw *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.scalar(tuple(-d for d in self.vector(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        va, vb = self.vector(a), self.vector(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.scalar(self._reduce(prod))

    def _reduce(self, prod: list) -> list:
        # divide by the monic modulus, keep the remainder
        m = self.modulus
        k = self.k
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(k):
                    prod[i - k + j] = (prod[i - k + j] - c * m[j]) % self.p
        return prod[:k]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an int in range(p)."""
        if self.k == 1:
            return a % self.p
        if self._trace is None:
            tr = []
            for x in range(self.q):
                s, y = 0, x
                for _ in range(self.k):
                    s = self.add(s, y)
                    y = self.pow(y, self.p)
                tr.append(s)  # lies in the prime subfield, encoded as itself
            self._trace = tuple(tr)
        return self._trace[a]

    def pth_root(self, a: int) -> int:
        """The unique x with x^p = a (Frobenius is bijective)."""
        return self.pow(a, self.p ** (self.k - 1)) if self.k > 1 else a % self.p

    # -- vectorized tables ---------------------------------------------------

    def tables(self):
        """(add, mul, neg) numpy lookup tables for vectorized coefficients."""
        if self._tables is None:
            q = self.q
            add = np.empty((q, q), dtype=np.uint8)
            mul = np.empty((q, q), dtype=np.uint8)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add(a, b)
                    mul[a, b] = self.mul(a, b)
            neg = np.array([self.neg(a) for a in range(q)], dtype=np.uint8)
            self._tables = (add, mul, neg)
        return self._tables

    def _check_modulus(self):
        m = self.modulus
        if len(m) != self.k + 1 or m[-1] != 1:
            raise ValueError("modulus must be monic of degree k over F_p")
        if any(not 0 <= c < self.p for c in m):
            raise ValueError("modulus coefficients must lie in range(p)")
        # trial division by monic polynomials over F_p of degree <= k/2
        p, k = self.p, self.k

        def polmod(f, g):
            f = list(f)
            dg = len(g) - 1
            for i in range(len(f) - 1, dg - 1, -1):
                c = f[i]
                if c:
                    for j in range(dg + 1):
                        f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
            while f and f[-1] == 0:
                f.pop()
            return f

        for d in range(1, k // 2 + 1):
            for idx in range(p**d):
                g = [(idx // p**i) % p for i in range(d)] + [1]
                if not polmod(m, g):
                    raise ValueError("modulus is reducible over F_p")


@lru_cache(maxsize=None)
def _make(p: int, k: int, modulus: Optional[tuple]) -> FieldCtx:
    return FieldCtx(p, k, modulus)


def field_make(p: int, k: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """Build (or fetch the interned) F_{p^k} context.

    For k > 1 a monic irreducible modulus of degree k over F_p is required;
    built-in choices exist for q in {4, 8, 9, 16, 25, 27}.
    """
    if not _is_prime(p) or p >= MAX_PRIME:
        raise ValueError(f"p must be a prime below 2^20, got {p}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return _make(p, 1, None)
    if modulus is None:
        if (p, k) not in _BUILTIN_MODULI:
            raise ValueError(f"no built-in modulus for q = {p}^{k}; pass one")
        modulus = _BUILTIN_MODULI[(p, k)]
    return _make(p, k, tuple(int(c) % p for c in modulus))


def parse_field_spec(spec: str) -> FieldCtx:
    """Parse "q", "p^k", or "p^k:c0,c1,...,ck" into a context.

    A bare integer q is factored as p^k and uses the built-in modulus.
    """
    spec = spec.strip()
    modulus = None
    if ":" in spec:
        spec, mod_part = spec.split(":", 1)
        modulus = tuple(int(c) for c in mod_part.split(","))
    if "^" in spec:
        p_s, k_s = spec.split("^", 1)
        p, k = int(p_s), int(k_s)
    else:
        q = int(spec)
        p = 2
        while p * p <= q and q % p:
            p += 1
        if q % p:
            p = q
        k = 0
        qq = q
        while qq > 1:
            if qq % p:
                raise ValueError(f"{q} is not a prime power")
            qq //= p
            k += 1
        if k == 0:
            raise ValueError(f"bad field spec {spec!r}")
    return field_make(p, k, modulus)
