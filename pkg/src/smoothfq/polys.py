"""Polynomials over F_q[t]: arithmetic, factorization, smoothness.

A Poly is an immutable coefficient tuple (low-to-high, trailing zeros
stripped) bound to a field context. The zero polynomial has empty coeffs and
degree -1 by convention; its norm is 0. Monic polynomials of degree n are in
bijection with range(q^n) via the radix-q integer of their n low coefficients,
and that encoding is what the vectorized sieve (sieve.py) works with.

The text format is low-to-high comma-separated element encodings: over F_2,
"1,1,0,1" is 1 + t + t^3.
"""

from __future__ import annotations

import math
import random
from typing import Iterator, Optional, Sequence

from .fields import FieldCtx


class Poly:
    """Immutable polynomial over a FieldCtx."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[int] = ()):
        n = len(coeffs)
        while n and coeffs[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs[:n]))
        if any(not 0 <= c < ctx.q for c in self.coeffs):
            raise ValueError("coefficients must be encoded in range(q)")

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- basics --------------------------------------------------------------

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def norm(self) -> int:
        """|f| = q^deg f, with |0| = 0."""
        return 0 if self.is_zero else self.ctx.q ** self.deg

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i <= self.deg else 0

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly(q={self.ctx.q}, '{self.to_string()}')"

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (1,))

    @classmethod
    def t(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, (0, 1))

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int) -> "Poly":
        return cls(ctx, (c,))

    @classmethod
    def from_string(cls, ctx: FieldCtx, s: str) -> "Poly":
        s = s.strip()
        if not s:
            return cls.zero(ctx)
        return cls(ctx, tuple(int(c) for c in s.split(",")))

    def to_string(self) -> str:
        if self.is_zero:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def monic_from_index(cls, ctx: FieldCtx, n: int, idx: int) -> "Poly":
        """The monic degree-n polynomial whose low coefficients encode idx."""
        if not 0 <= idx < ctx.q**n:
            raise ValueError("index out of range")
        digits = [(idx // ctx.q**i) % ctx.q for i in range(n)]
        return cls(ctx, (*digits, 1))

    def monic_index(self) -> int:
        if not self.is_monic:
            raise ValueError("index is defined for monic polynomials")
        return sum(c * self.ctx.q**i for i, c in enumerate(self.coeffs[:-1]))

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ctx is not other.ctx:
            raise ValueError("mixed field contexts")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        K = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return Poly(K, out)

    def __neg__(self) -> "Poly":
        K = self.ctx
        return Poly(K, tuple(K.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.ctx)
        K = self.ctx
        a, b = self.coeffs, other.coeffs
        if K.k == 1:
            p = K.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(K, tuple(c % p for c in out))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = K.add(out[i + j], K.mul(x, y))
        return Poly(K, out)

    def scale(self, c: int) -> "Poly":
        K = self.ctx
        return Poly(K, tuple(K.mul(x, c) for x in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k."""
        if self.is_zero or k == 0:
            return self if k >= 0 else Poly(self.ctx, self.coeffs[-k:])
        if k > 0:
            return Poly(self.ctx, (0,) * k + self.coeffs)
        return Poly(self.ctx, self.coeffs[-k:])

    def __divmod__(self, other: "Poly"):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        K = self.ctx
        dv, dr = other.deg, self.deg
        if dr < dv:
            return Poly.zero(K), self
        inv_lead = K.inv(other.lead)
        rem = list(self.coeffs)
        quo = [0] * (dr - dv + 1)
        for i in range(dr, dv - 1, -1):
            c = rem[i]
            if c:
                c = K.mul(c, inv_lead)
                quo[i - dv] = c
                for j in range(dv + 1):
                    rem[i - dv + j] = K.sub(rem[i - dv + j], K.mul(c, other.coeffs[j]))
        return Poly(K, quo), Poly(K, rem[:dv])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        """The monic associate."""
        if self.is_zero or self.is_monic:
            return self
        return self.scale(self.ctx.inv(self.lead))

    def reverse(self) -> "Poly":
        """t^deg * f(1/t); drops any t-power factor of f."""
        if self.is_zero:
            raise ValueError("reverse of the zero polynomial")
        return Poly(self.ctx, tuple(reversed(self.coeffs)))

    def derivative(self) -> "Poly":
        K = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            mult = i % K.p
            c = self.coeffs[i]
            x = 0
            for _ in range(mult):
                x = K.add(x, c)
            out.append(x)
        return Poly(K, out)

    def evaluate(self, a: int) -> int:
        K = self.ctx
        out = 0
        for c in reversed(self.coeffs):
            out = K.add(K.mul(out, a), c)
        return out


# -- gcd family ----------------------------------------------------------------


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """(d, u, v) with u*a + v*b = d, d the monic gcd."""
    K = a.ctx
    r0, r1 = a, b
    s0, s1 = Poly.one(K), Poly.zero(K)
    t0, t1 = Poly.zero(K), Poly.one(K)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    c = K.inv(r0.lead)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def invmod(a: Poly, mod: Poly) -> Poly:
    d, u, _ = xgcd(a, mod)
    if d.deg != 0:
        raise ZeroDivisionError("element is not invertible modulo the given modulus")
    return u % mod


def pow_mod(base: Poly, e: int, mod: Poly) -> Poly:
    if e < 0:
        raise ValueError("negative exponent")
    out = Poly.one(base.ctx) % mod
    base = base % mod
    while e:
        if e & 1:
            out = out * base % mod
        base = base * base % mod
        e >>= 1
    return out


# -- integer helpers -----------------------------------------------------------


def int_factor(n: int) -> dict:
    """Prime factorization of a small positive integer by trial division."""
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def int_mobius(n: int) -> int:
    fac = int_factor(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def int_divisors(n: int) -> list:
    divs = [1]
    for p, e in int_factor(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


# -- irreducibles ----------------------------------------------------------------


def count_irreducibles(ctx: FieldCtx, n: int) -> int:
    """pi_q(n) = (1/n) sum_{d|n} mu(d) q^(n/d)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = sum(int_mobius(d) * ctx.q ** (n // d) for d in int_divisors(n))
    assert total % n == 0
    return total // n


def frobenius_power(ctx: FieldCtx, j: int, mod: Poly, start: Optional[Poly] = None) -> Poly:
    """t^(q^j) mod `mod` (or start^(q^j) if start is given)."""
    x = (start if start is not None else Poly.t(ctx)) % mod
    for _ in range(j):
        x = pow_mod(x, ctx.q, mod)
    return x


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: t^(q^n) = t mod f and gcd(t^(q^(n/r)) - t, f) = 1."""
    n = f.deg
    if n <= 0:
        return False
    if n == 1:
        return True
    f = f.monic()
    ctx = f.ctx
    t = Poly.t(ctx)
    x = t % f
    powers = {}
    for j in range(1, n + 1):
        x = pow_mod(x, ctx.q, f)
        powers[j] = x
    if powers[n] != t % f:
        return False
    for r in int_factor(n):
        if gcd(powers[n // r] - t, f).deg != 0:
            return False
    return True


def enumerate_irreducibles(ctx: FieldCtx, n: int, budget: Optional[int] = None) -> list:
    """All monic irreducibles of degree n, ordered by monic index.

    Uses the vectorized sieve; q^n must fit the enumeration budget.
    """
    from . import sieve
    from .config import DEFAULT, BudgetError

    limit = budget if budget is not None else DEFAULT.poly_enum_budget
    if ctx.q**n > limit:
        raise BudgetError(f"q^n = {ctx.q**n} exceeds the enumeration budget {limit}")
    return [
        Poly.monic_from_index(ctx, n, int(i)) for i in sieve.irreducible_indices(ctx, n)
    ]


def monic_polys(ctx: FieldCtx, n: int) -> Iterator[Poly]:
    """All monic polynomials of degree n, in index order."""
    for idx in range(ctx.q**n):
        yield Poly.monic_from_index(ctx, n, idx)


# -- factorization -----------------------------------------------------------------


def _pth_root(f: Poly) -> Poly:
    """For f with f' = 0: the g with g^p = f."""
    K = f.ctx
    p = K.p
    out = []
    for i in range(0, f.deg + 1, p):
        out.append(K.pth_root(f[i]))
    return Poly(K, out)


def _edf(h: Poly, d: int) -> list:
    """Equal-degree splitting of a squarefree product of degree-d irreducibles."""
    K = h.ctx
    if h.deg == d:
        return [h]
    rng = random.Random(f"edf:{K.q}:{h.to_string()}:{d}")
    q = K.q
    while True:
        r = Poly(K, [rng.randrange(q) for _ in range(h.deg)])
        if r.deg < 1:
            continue
        g = gcd(r, h)
        if 0 < g.deg < h.deg:
            break
        if K.p == 2:
            # absolute trace map splits in characteristic 2
            s = Poly.zero(K)
            x = r % h
            for _ in range(K.k * d):
                s = (s + x) % h
                x = pow_mod(x, 2, h)
            g = gcd(s, h)
        else:
            s = pow_mod(r, (q**d - 1) // 2, h)
            g = gcd(s - Poly.one(K), h)
        if 0 < g.deg < h.deg:
            break
    return _edf(g, d) + _edf(h // g, d)


def _factor_squarefree(f: Poly) -> list:
    """Distinct-degree then equal-degree factorization of squarefree monic f."""
    K = f.ctx
    t = Poly.t(K)
    out = []
    x = t % f
    d = 0
    while f.deg > 0:
        d += 1
        if 2 * d > f.deg:
            out.append(f)
            break
        x = pow_mod(x, K.q, f)
        h = gcd(x - t, f)
        if h.deg > 0:
            out.extend(_edf(h, d))
            f = f // h
            x = x % f
    return out


def factor(f: Poly) -> list:
    """Factor into [(irreducible monic, exponent)], sorted by (deg, index).

    The unit lead coefficient is dropped; f must be nonzero.
    """
    if f.is_zero:
        raise ValueError("cannot factor 0")
    f = f.monic()
    fac: dict = {}

    def rec(g: Poly, mult: int):
        if g.deg <= 0:
            return
        gp = g.derivative()
        if gp.is_zero:
            rec(_pth_root(g), mult * g.ctx.p)
            return
        d = gcd(g, gp)
        if d.deg == 0:
            for w in _factor_squarefree(g):
                fac[w] = fac.get(w, 0) + mult
            return
        rec(d, mult)
        rec(g // d, mult)

    rec(f, 1)
    return sorted(fac.items(), key=lambda we: (we[0].deg, we[0].monic_index()))


def is_squarefree(f: Poly) -> bool:
    """gcd(f, f') test, with the derivative-zero case handled as a p-th power."""
    if f.is_zero:
        return False
    if f.deg == 0:
        return True
    fp = f.derivative()
    if fp.is_zero:
        return False
    return gcd(f, fp).deg == 0


def mobius(f: Poly) -> int:
    """mu(f): 0 unless squarefree, else (-1)^(number of irreducible factors)."""
    if f.is_zero:
        raise ValueError("mu(0) undefined")
    if f.deg == 0:
        return 1
    if not is_squarefree(f):
        return 0
    return -1 if len(factor(f)) % 2 else 1


def euler_phi(g: Poly) -> int:
    """Phi(g) = #(F_q[t]/g)^x = |g| prod_{w | g} (1 - |w|^-1)."""
    if g.is_zero:
        raise ValueError("Phi(0) undefined")
    q = g.ctx.q
    out = 1
    for w, e in factor(g):
        d = w.deg
        out *= q ** (d * e) - q ** (d * (e - 1))
    return out


def euler_phi_envelope(g: Poly) -> tuple:
    """Diagnostic only: (Phi(g), (1/2) |g| / (log_q(deg g) + 1)).

    The lower envelope is recorded, never asserted; the constant 1/2 is an
    explicit desk-scale choice.
    """
    phi = euler_phi(g)
    if g.deg < 1:
        return phi, 0.5
    bound = 0.5 * g.norm / (math.log(g.deg, g.ctx.q) + 1) if g.deg > 1 else 0.5 * g.norm
    return phi, bound


def divisors(g: Poly) -> list:
    """All monic divisors of monic g, sorted by (deg, index)."""
    if not g.is_monic:
        raise ValueError("divisors are defined for monic g")
    divs = [Poly.one(g.ctx)]
    for w, e in factor(g):
        pw = [Poly.one(g.ctx)]
        for _ in range(e):
            pw.append(pw[-1] * w)
        divs = [d * x for d in divs for x in pw]
    return sorted(divs, key=lambda d: (d.deg, d.monic_index() if d.deg >= 0 else 0))


def tau(g: Poly) -> int:
    """Number of monic divisors."""
    return math.prod(e + 1 for _, e in factor(g)) if g.deg > 0 else 1


# -- smoothness ----------------------------------------------------------------


def is_m_smooth(f: Poly, m: int) -> bool:
    """True iff every irreducible factor of f has degree <= m.

    Strips gcd(f, t^(q^r) - t) for r = 1..m with multiplicity and checks that
    the residue is constant.
    """
    if f.is_zero:
        raise ValueError("smoothness of 0 undefined")
    if m < 1:
        raise ValueError("m must be >= 1")
    f = f.monic()
    if f.deg <= 0:
        return True
    K = f.ctx
    t = Poly.t(K)
    x = t % f
    for _ in range(m):
        if f.deg <= 0:
            return True
        x = pow_mod(x, K.q, f)
        d = gcd(x - t, f)
        while d.deg > 0:
            f = f // d
            d = gcd(f, d)
        if f.deg > 0:
            x = x % f
    return f.deg <= 0


def max_factor_degree(f: Poly) -> int:
    """Largest irreducible factor degree; 0 for constants."""
    if f.is_zero:
        raise ValueError("undefined for 0")
    if f.deg <= 0:
        return 0
    return max(w.deg for w, _ in factor(f))
