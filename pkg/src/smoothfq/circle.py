"""Exponential sums over smooth polynomials and exact circle-method averages.

Every integrand used here is a finite combination of e(f xi) with deg f <= n,
so integrals over the torus equal finite averages over xi = a/t^(n+1),
deg a <= n: orthogonality of the q^(n+1) phase vectors makes the average an
identity, not an approximation. The full vector of S(a/t^(n+1); n, m) over
all a comes from contracting the smooth-indicator tensor with the q x q
phase matrix psi(tr(xy)) one coefficient axis at a time.

Arc classification uses continued-fraction convergents; with the default
kappa and ell every approximation tight enough to be major satisfies
|xi - a/g| < |g|^-2 and is therefore a convergent, so the scan is complete.
An exhaustive search over all small denominators backs this up when the
parameters leave the guaranteed regime.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import DEFAULT, BudgetError, RunConfig
from .counting import Prescription, psi_coprime, psi_exact
from .fields import FieldCtx
from .laurent import TorusPoint, e_char, e_frac
from .polys import Poly, divisors, euler_phi, gcd, mobius
from . import sieve


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class ArcParams:
    n: int
    m: int
    kappa: Optional[int] = None
    ell: Optional[int] = None

    def __post_init__(self):
        if self.kappa is None:
            object.__setattr__(self, "kappa", max(0, _ceil_div(self.n - self.m - 2, 4)))
        if self.ell is None:
            object.__setattr__(self, "ell", max(0, _ceil_div(self.n - self.m, 4)))
        if self.kappa < 0 or self.ell < 0:
            raise ValueError("arc parameters must be nonnegative")
        if self.ell + self.kappa >= self.n:
            raise ValueError("need ell + kappa < n")


def _phase_matrix(ctx: FieldCtx) -> np.ndarray:
    """M[x, y] = e of the residue x*y, i.e. exp(2 pi i tr(xy)/p)."""
    key = "phase_matrix"
    if key not in ctx.cache:
        q, p = ctx.q, ctx.p
        M = np.empty((q, q), dtype=complex)
        for x in range(q):
            for y in range(q):
                M[x, y] = cmath.exp(2j * math.pi * ctx.trace(ctx.mul(x, y)) / p)
        ctx.cache[key] = M
    return ctx.cache[key]


def s_vector(ctx: FieldCtx, n: int, m: int, config: RunConfig = DEFAULT) -> np.ndarray:
    """S(a/t^(n+1); n, m) for every a with deg a <= n, indexed by digit encoding.

    The t^-1 coefficient of f a / t^(n+1) is sum_{i+j=n} f_i a_j, so the sum
    over S(n, m) factors through one phase-matrix contraction per coefficient.
    """
    q = ctx.q
    if q ** (n + 1) > config.table_budget:
        raise BudgetError(f"{q ** (n + 1)} grid points exceed table budget")
    tab = sieve.factor_degree_table(ctx, n, budget=config.table_budget)
    M = _phase_matrix(ctx)
    # axes: [f_{n-1}, ..., f_0]; each contraction pairs f_i with a_{n-i}
    T = (tab <= m).astype(complex).reshape((q,) * n) if n else np.array(1.0 + 0j)
    for _ in range(n):
        T = np.tensordot(T, M, axes=([0], [0]))
    # T axes now [a_1, ..., a_n]; the monic leading 1 pairs with a_0
    S = np.multiply.outer(M[1 % q], T)  # axes [a_0, a_1, ..., a_n]
    S = S.transpose(tuple(range(n, -1, -1)))  # flat index = sum a_j q^j
    return S.reshape(-1)


def s_smooth(xi: TorusPoint, n: int, m: int, config: RunConfig = DEFAULT) -> complex:
    """S(xi; n, m) = sum over m-smooth monic degree-n f of e(f xi)."""
    ctx = xi.ctx
    if xi.is_zero:
        return complex(psi_exact(ctx.q, n, m))
    total = 0.0 + 0.0j
    for idx in sieve.smooth_indices(ctx, n, m, budget=config.table_budget):
        f = Poly.monic_from_index(ctx, n, int(idx))
        total += e_frac(f * xi.a, xi.g)
    return total


def monic_sum_closed(xi: TorusPoint, n: int) -> complex:
    """Sum of e(f xi) over all monic degree-n f, in closed form.

    Equals q^n e(t^n xi) when |xi| < q^(-n) and 0 otherwise (|xi| < 1 is
    forced by canonical reduction). Coincides with s_smooth(xi, n, n).
    """
    e = xi.norm_exponent()
    if e is not None and e >= -n:
        return 0.0 + 0.0j
    ctx = xi.ctx
    return ctx.q**n * e_char(xi.times_poly(Poly(ctx, (0,) * n + (1,))))


def orthogonality_average(f: Poly, d: Optional[int] = None) -> complex:
    """Average of e(f a / t^(d+1)) over all a with deg a <= d; equals [f = 0].

    d defaults to deg f; any d >= deg f gives the same value.
    """
    ctx = f.ctx
    if d is None:
        d = max(f.deg, 0)
    if f.deg > d:
        raise ValueError("need d >= deg f")
    den = Poly(ctx, (0,) * (d + 1) + (1,))
    total = 0.0 + 0.0j
    for enc in range(ctx.q ** (d + 1)):
        a = Poly(ctx, tuple((enc // ctx.q**j) % ctx.q for j in range(d + 1)))
        total += e_frac(f * a, den)
    return total / ctx.q ** (d + 1)


def s_J(
    xi: TorusPoint,
    pres: Prescription,
    verify: bool = True,
    config: RunConfig = DEFAULT,
) -> complex:
    """S_J(xi): q^(n-#I) e(xi t^n) prod e(alpha_i t^i xi), or 0.

    The closed form applies iff xi_{-i-1} = 0 for every free index i; with
    verify=True a direct summation over the free coefficients cross-checks
    the value when the budget allows.
    """
    ctx = pres.ctx
    q = ctx.q
    n = pres.n
    fixed = dict(pres.pairs)
    vanish = any(i not in fixed and xi.coeff(-i - 1) != 0 for i in range(n))
    if vanish:
        closed = 0.0 + 0.0j
    else:
        closed = complex(q ** (n - pres.size))
        closed *= e_char(xi.times_poly(Poly(ctx, (0,) * n + (1,))))
        for i, a in pres.pairs:
            if a:
                closed *= e_char(xi.times_poly(Poly(ctx, (0,) * i + (a,))))
    if verify and q ** (n - pres.size) <= config.poly_enum_budget:
        direct = 0.0 + 0.0j
        free = [i for i in range(n) if i not in fixed]
        base = [0] * (n + 1)
        base[n] = 1
        for i, a in fixed.items():
            base[i] = a
        for enc in range(q ** len(free)):
            rem = enc
            for i in free:
                base[i] = rem % q
                rem //= q
            direct += e_frac(Poly(ctx, tuple(base)) * xi.a, xi.g)
        if abs(direct - closed) > 1e-9 * max(1.0, abs(closed)):
            raise AssertionError(f"closed form {closed} != direct sum {direct}")
    return closed


def _surviving_grid(pres: Prescription) -> List[int]:
    """Encodings of a (deg a <= n) with a_{n-i} = 0 for every free index i."""
    q = pres.ctx.q
    n = pres.n
    positions = [0] + [n - i for i in pres.indices]
    encs = []
    for assign in range(q ** len(positions)):
        enc, rem = 0, assign
        for pos in positions:
            enc += (rem % q) * q**pos
            rem //= q
        encs.append(enc)
    return encs


def _point_at(ctx: FieldCtx, enc: int, n: int) -> TorusPoint:
    a = Poly(ctx, tuple((enc // ctx.q**j) % ctx.q for j in range(n + 1)))
    return TorusPoint(a, Poly(ctx, (0,) * (n + 1) + (1,)))


def parseval_count(
    n: int, m: int, pres: Prescription, config: RunConfig = DEFAULT
) -> int:
    """#(S(n,m) intersect J) as the exact finite average of S * conj(S_J)."""
    ctx = pres.ctx
    q = ctx.q
    S = s_vector(ctx, n, m, config)
    total = 0.0 + 0.0j
    for enc in _surviving_grid(pres):
        sj = s_J(_point_at(ctx, enc, n), pres, verify=False)
        if sj:
            total += S[enc] * sj.conjugate()
    value = total / q ** (n + 1)
    if abs(value.imag) > 1e-6 or abs(value.real - round(value.real)) > 1e-6:
        raise AssertionError(f"average {value} is not an integer")
    return int(round(value.real))


def s_J_l1_norm(pres: Prescription, config: RunConfig = DEFAULT) -> float:
    """Finite average of |S_J| over a/t^(n+1); equals 1."""
    ctx = pres.ctx
    q = ctx.q
    n = pres.n
    total = 0.0
    for enc in _surviving_grid(pres):
        total += abs(s_J(_point_at(ctx, enc, n), pres, verify=False))
    return total / q ** (n + 1)


def vanishing_applies(xi: TorusPoint, pres: Prescription) -> bool:
    """True when the denominator shape forces S_J(xi) = 0.

    Write g = g0 t^k with t not dividing g0; the criterion is
    1 < |g0| <= q^ceil(n/(#I+1)) - 1.
    """
    g = xi.g
    while g.deg > 0 and g[0] == 0:
        g = g.shift(-1)
    K = _ceil_div(pres.n, pres.size + 1)
    return 0 < g.deg and xi.ctx.q**g.deg <= xi.ctx.q**K - 1


def classify_arc(
    xi: TorusPoint, params: ArcParams, exhaustive: bool = False
) -> Tuple[str, Optional[TorusPoint]]:
    """"major" with a witness a/g (|a| < |g| <= q^kappa, |xi - a/g| < q^(ell-n))
    or "minor" with None.

    The convergent scan is complete when n - ell > 2 kappa (any major witness
    then approximates better than |g|^-2, hence is a convergent); otherwise
    the exhaustive denominator search runs.
    """
    ctx = xi.ctx
    n, kap, ell = params.n, params.kappa, params.ell
    if not exhaustive and n - ell <= 2 * kap:
        exhaustive = True
    if exhaustive:
        q = ctx.q
        for d in range(0, kap + 1):
            for genc in range(q**d):
                g = Poly.monic_from_index(ctx, d, genc)
                a = (xi.a * g) // xi.g  # nearest polynomial to xi g
                e = (xi - TorusPoint(a, g)).norm_exponent()
                if e is None or e < ell - n:
                    return "major", TorusPoint(a, g)
        return "minor", None
    # walk convergents of xi.a / xi.g
    num_prev, num = Poly.one(ctx), Poly.zero(ctx)
    den_prev, den = Poly.zero(ctx), Poly.one(ctx)
    r_prev, r = xi.g, xi.a
    while True:
        if den.deg <= kap:
            err = xi.a * den - xi.g * num
            if err.is_zero or err.deg - xi.g.deg - den.deg < ell - n:
                return "major", TorusPoint(num, den)
        else:
            break
        if r.is_zero:
            break
        quo, r_next = divmod(r_prev, r)
        num_prev, num = num, quo * num + num_prev
        den_prev, den = den, quo * den + den_prev
        r_prev, r = r, r_next
    return "minor", None


def bourgain_exponent(x: float, y: float, delta: float, tol: float = 1e-9) -> float:
    """Piecewise exponent: 1 when y | x; 2/(delta+1) when 1 < x/y < 2;
    2v/((v+1) delta + v - 1) when v-1 < x/y < v. Not clamped at 2.

    Divisibility is tested to `tol`, so every integral ratio >= 1 lands in
    the first case and the remaining cases see a genuinely fractional ratio.
    """
    if x <= 0 or y <= 0:
        raise ValueError("x and y must be positive")
    ratio = x / y
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) <= tol:
        return 1.0
    if ratio < 1.0:
        raise ValueError("x/y < 1 is outside the stated range")
    if ratio < 2.0:
        return 2.0 / (delta + 1.0)
    v = math.ceil(ratio)
    return 2.0 * v / ((v + 1) * delta + v - 1)


@dataclass(frozen=True)
class TwistReport:
    lhs: complex
    main: float
    difference: float
    envelope: float
    within_envelope: bool


def twisted_class_sum(
    a: Poly,
    g: Poly,
    b: Poly,
    ell: int,
    n: int,
    m: int,
    eps: float = 0.25,
    constant: float = 8.0,
    config: RunConfig = DEFAULT,
) -> TwistReport:
    """Exact sum of e(af/g) over m-smooth f of degree n in b's top-class,
    compared against the divisor-sum main term.

    Main term: sum over monic d | g of mu(g/d) Psi_{g/d}(n - deg d, m)
    / (q^ell Phi(g/d)). The envelope constant * q^((1/2+eps)n) e^(eps(ell
    + deg g)) |g|^(1/2) is diagnostic (its true constant is unspecified).
    """
    ctx = g.ctx
    q = ctx.q
    if gcd(a, g).deg != 0:
        raise ValueError("a and g must be coprime")
    if ell + g.deg >= n:
        raise ValueError("need ell + deg g < n")
    tmod = Poly(ctx, (0,) * (ell + 1) + (1,))
    bstar = b.reverse() % tmod
    lhs = 0.0 + 0.0j
    for idx in sieve.smooth_indices(ctx, n, m, budget=config.table_budget):
        f = Poly.monic_from_index(ctx, n, int(idx))
        if f.reverse() % tmod == bstar:
            lhs += e_frac(f * a, g)
    main = Fraction(0)
    for d in divisors(g):
        mu = mobius(g // d)
        if mu:
            main += Fraction(mu * psi_coprime(n - d.deg, m, g // d), q**ell * euler_phi(g // d))
    main_f = float(main)
    envelope = constant * q ** ((0.5 + eps) * n) * math.exp(eps * (ell + g.deg)) * q ** (g.deg / 2)
    diff = abs(lhs - main_f)
    return TwistReport(lhs, main_f, diff, envelope, diff <= envelope)


def minor_arc_diagnostic(
    ctx: FieldCtx, n: int, m: int, params: Optional[ArcParams] = None, config: RunConfig = DEFAULT
) -> Dict[str, float]:
    """Scan all xi = a/t^(n+1): max |S| over minor arcs vs the stated envelope.

    Recorded, not asserted; the envelope m^2 n^(1/2) q^((7n+m+4)/8) carries an
    unspecified constant.
    """
    params = params or ArcParams(n, m)
    q = ctx.q
    S = s_vector(ctx, n, m, config)
    max_minor = 0.0
    majors = 0
    for enc in range(q ** (n + 1)):
        xi = _point_at(ctx, enc, n)
        label, _ = classify_arc(xi, params)
        if label == "major":
            majors += 1
        else:
            max_minor = max(max_minor, abs(S[enc]))
    envelope = m**2 * math.sqrt(n) * q ** ((7 * n + m + 4) / 8)
    return {
        "max_minor_abs": max_minor,
        "major_count": float(majors),
        "grid": float(q ** (n + 1)),
        "envelope": envelope,
        "ratio": max_minor / envelope if envelope else math.inf,
    }
