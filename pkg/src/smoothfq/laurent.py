"""The torus of Laurent series at infinity and the additive character e.

A rational point of the torus T = {|xi| < 1} is a reduced fraction a/g with
g monic and deg a < deg g; arithmetic is exact. Laurent coefficients x_i of
a/g come from polynomial long division, e(xi) = exp(2 pi i tr(x_-1) / p), and
the distance to the nearest polynomial is the exact rational q^-j where x_-j
is the first nonzero coefficient.

dirichlet_approx produces the convergents of a/g by the extended Euclidean
algorithm and returns the best approximation a'/g' with |a'| < |g'| <= q^(n/2)
and |xi - a'/g'| < 1/(|g'| q^(n/2)); one always exists.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Optional, Tuple

from .fields import FieldCtx
from .polys import Poly, gcd


class TorusPoint:
    """Reduced rational point a/g of the torus, g monic, deg a < deg g."""

    __slots__ = ("a", "g")

    def __init__(self, a: Poly, g: Poly):
        if g.is_zero:
            raise ZeroDivisionError("torus point with zero denominator")
        if a.ctx is not g.ctx:
            raise ValueError("mixed field contexts")
        a = a % g
        d = gcd(a, g)
        if d.deg > 0:
            a, g = a // d, g // d
        if not g.is_monic:
            c = g.ctx.inv(g.lead)
            a, g = a.scale(c), g.scale(c)
        if a.is_zero:
            g = Poly.one(g.ctx)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "g", g)

    def __setattr__(self, *_):
        raise AttributeError("TorusPoint is immutable")

    @property
    def ctx(self) -> FieldCtx:
        return self.g.ctx

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero

    def norm_exponent(self) -> Optional[int]:
        """j with |xi| = q^j (negative), or None for xi = 0."""
        if self.is_zero:
            return None
        return self.a.deg - self.g.deg

    def norm(self) -> Fraction:
        """|xi| as an exact rational."""
        e = self.norm_exponent()
        return Fraction(0) if e is None else Fraction(1, self.ctx.q**-e)

    def coeff(self, i: int) -> int:
        """Laurent coefficient x_i of the expansion at infinity."""
        return laurent_coeff(self.a, self.g, i)

    def __eq__(self, other):
        return (
            isinstance(other, TorusPoint)
            and self.ctx is other.ctx
            and self.a == other.a
            and self.g == other.g
        )

    def __hash__(self):
        return hash((id(self.ctx), self.a.coeffs, self.g.coeffs))

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        if self.ctx is not other.ctx:
            raise ValueError("mixed field contexts")
        return TorusPoint(self.a * other.g + other.a * self.g, self.g * other.g)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(-self.a, self.g)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + (-other)

    def times_poly(self, f: Poly) -> "TorusPoint":
        """Fractional part of f * xi."""
        return TorusPoint(self.a * f, self.g)

    def __repr__(self):
        return f"TorusPoint(q={self.ctx.q}, '{self.to_string()}')"

    def to_string(self) -> str:
        return f"{self.a.to_string()}/{self.g.to_string()}"

    @classmethod
    def from_string(cls, ctx: FieldCtx, s: str) -> "TorusPoint":
        num, _, den = s.partition("/")
        if not den:
            raise ValueError(f"torus point must look like 'a/g', got {s!r}")
        return cls(Poly.from_string(ctx, num), Poly.from_string(ctx, den))

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "TorusPoint":
        return cls(Poly.zero(ctx), Poly.one(ctx))


def laurent_coeff(a: Poly, g: Poly, i: int) -> int:
    """Coefficient x_i of the expansion of a/g at infinity (encoded element).

    Valid for any i; for i above deg a - deg g the coefficient is 0.
    """
    if g.is_zero:
        raise ZeroDivisionError("expansion of a/0")
    if a.is_zero:
        return 0
    n = max(1, -i)
    quo = a.shift(n) // g
    return quo[n + i]


def e_char(xi: TorusPoint, shift: Optional[Poly] = None) -> complex:
    """e(xi + shift) = exp(2 pi i tr(x_-1)/p); a polynomial shift is invisible."""
    if shift is not None and shift.ctx is not xi.ctx:
        raise ValueError("mixed field contexts")
    K = xi.ctx
    c = K.trace(xi.coeff(-1))
    if c == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * math.pi * c / K.p)


def e_frac(a: Poly, g: Poly) -> complex:
    """e(a/g) without building a TorusPoint; a is reduced mod g internally."""
    K = a.ctx
    if g.deg == 0:
        return 1.0 + 0.0j  # a/g is a polynomial, invisible to e
    r = a % g
    if not g.is_monic:
        c = K.inv(g.lead)
        r, g = r.scale(c), g.scale(c)
    # for reduced monic g the t^-1 coefficient is the top coefficient of r
    c = K.trace(r[g.deg - 1])
    if c == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * math.pi * c / K.p)


def distance_to_poly(xi: TorusPoint) -> Fraction:
    """||xi|| = min over polynomials f of |xi - f|, exact."""
    return xi.norm()


def dirichlet_approx(xi: TorusPoint, n: int) -> Tuple[TorusPoint, dict]:
    """Best rational approximation with |g| <= q^(n/2).

    Returns (a'/g', info) with g' monic, |a'| < |g'| <= q^(n/2), and
    |xi - a'/g'| < 1/(|g'| q^(n/2)). info carries the exact error exponent
    (None when the approximation is exact) and the convergent count.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    K = xi.ctx
    if xi.is_zero:
        return TorusPoint.zero(K), {"error_exponent": None, "convergents": 0}
    a0, g0 = xi.a, xi.g
    # convergent recurrences driven by the Euclidean quotients of g0, a0
    num_prev, num = Poly.one(K), Poly.zero(K)
    den_prev, den = Poly.zero(K), Poly.one(K)
    r_prev, r = g0, a0
    best = (num, den)
    count = 0
    while not r.is_zero:
        q_, r_next = divmod(r_prev, r)
        num_prev, num = num, q_ * num + num_prev
        den_prev, den = den, q_ * den + den_prev
        r_prev, r = r, r_next
        count += 1
        if 2 * den.deg > n:
            break
        best = (num, den)
    num_b, den_b = best
    err = a0 * den_b - g0 * num_b
    if err.is_zero:
        err_exp = None
    else:
        err_exp = err.deg - g0.deg - den_b.deg
        # the lemma's bound, in exponents: err_exp < -n/2 - deg g'
        assert 2 * (err.deg - g0.deg) < -n, "Dirichlet bound violated"
    point = TorusPoint(num_b, den_b)
    assert 2 * point.g.deg <= n
    return point, {"error_exponent": err_exp, "convergents": count}
