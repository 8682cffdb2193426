"""Exact counts of m-smooth monic polynomials, with and without constraints.

Psi(n, m) comes from the Euler product prod_{r<=m} (1 - z^r)^(-pi_q(r))
expanded over big integers. Constrained counts (prescribed coefficients,
residue classes of the top coefficients) run one of three exact engines:

* table enumeration: the vectorized factor-degree table when q^n fits;
* group dp: an Euler product in the group ring of units mod t^r (for low
  prescribed coefficients) or of truncated reversals mod t^(ell+1) (for top
  coefficients); handles q^n far beyond enumeration reach as long as the
  class group stays small;
* parseval: the exact finite orthogonality average (see the circle module).

All engines return the same integers; tests cross-check them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .config import DEFAULT, BudgetError, RunConfig
from .fields import FieldCtx
from .polys import Poly, factor, int_divisors, int_mobius, is_m_smooth
from . import sieve


def pi_q(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q."""
    if n < 1:
        raise ValueError("degree must be positive")
    total = sum(int_mobius(d) * q ** (n // d) for d in int_divisors(n))
    assert total % n == 0
    return total // n


def _as_q(q_or_ctx: Union[int, FieldCtx]) -> int:
    return q_or_ctx.q if isinstance(q_or_ctx, FieldCtx) else int(q_or_ctx)


def _digits(q: int, enc: int, length: int) -> Tuple[int, ...]:
    """Radix-q digits of a residue encoding, low position first."""
    return tuple((enc // q**i) % q for i in range(length))


@lru_cache(maxsize=None)
def _psi_series(q: int, n: int, m: int) -> Tuple[int, ...]:
    """Coefficients 0..n of prod_{r=1}^{m} (1 - z^r)^(-pi_q(r))."""
    coeffs = [1] + [0] * n
    for r in range(1, min(m, n) + 1):
        p = pi_q(q, r)
        out = coeffs[:]
        for j in range(r, n + 1):
            acc = 0
            e = 1
            while j - e * r >= 0:
                acc += math.comb(p + e - 1, e) * coeffs[j - e * r]
                e += 1
            out[j] += acc
        coeffs = out
    return tuple(coeffs)


def psi_exact(q_or_ctx: Union[int, FieldCtx], n: int, m: int) -> int:
    """Psi(n, m): m-smooth monic polynomials of degree n; m is capped at n."""
    q = _as_q(q_or_ctx)
    if m < 1:
        raise ValueError("smoothness bound must be >= 1")
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n == 0:
        return 1
    return _psi_series(q, n, min(m, n))[n]


def psi_coprime(n: int, m: int, g: Poly) -> int:
    """Psi_g(n, m): m-smooth monic degree-n polynomials coprime to g."""
    if g.is_zero:
        raise ValueError("g must be nonzero")
    if m < 1:
        raise ValueError("smoothness bound must be >= 1")
    if n < 0:
        raise ValueError("degree must be >= 0")
    q = g.ctx.q
    coeffs = list(_psi_series(q, n, min(m, n))) if n else [1]
    # strike the factors of g: multiply by (1 - z^{deg w}) per distinct w | g
    for w, _ in factor(g.monic()):
        if w.deg <= min(m, n):
            for j in range(n, w.deg - 1, -1):
                coeffs[j] -= coeffs[j - w.deg]
    return coeffs[n]


@dataclass(frozen=True)
class Prescription:
    """Prescribed coefficients: pairs (i, alpha_i) with 0 <= i < n, i distinct."""

    ctx: FieldCtx
    n: int
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, a in self.pairs:
            if not 0 <= i < self.n:
                raise ValueError(f"index {i} outside 0..{self.n - 1}")
            if i in seen:
                raise ValueError(f"duplicate index {i}")
            if not 0 <= a < self.ctx.q:
                raise ValueError(f"value {a} not a field element")
            seen.add(i)
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @classmethod
    def make(cls, ctx: FieldCtx, n: int, assignments: Union[Dict[int, int], Iterable[Tuple[int, int]]]) -> "Prescription":
        items = assignments.items() if isinstance(assignments, dict) else assignments
        return cls(ctx, n, tuple((int(i), int(a)) for i, a in items))

    @classmethod
    def from_string(cls, ctx: FieldCtx, n: int, s: str) -> "Prescription":
        """Parse "i=v,i=v,..."; empty string means no constraint."""
        pairs = []
        for item in filter(None, (p.strip() for p in s.split(","))):
            i, _, v = item.partition("=")
            if not v:
                raise ValueError(f"expected i=v, got {item!r}")
            pairs.append((int(i), int(v)))
        return cls(ctx, n, tuple(pairs))

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.pairs)

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(a for _, a in self.pairs)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def delta(self) -> float:
        return len(self.pairs) / self.n

    def to_string(self) -> str:
        return ",".join(f"{i}={a}" for i, a in self.pairs)

    def matches(self, f: Poly) -> bool:
        return all(f[i] == a for i, a in self.pairs)


@dataclass(frozen=True)
class CountReport:
    exact: int
    q: int
    n: int
    m: int
    prescription: Prescription
    method: str
    seconds: float

    def __post_init__(self):
        if self.exact < 0:
            raise ValueError("count cannot be negative")


def _count_table(n: int, m: int, pres: Prescription, config: RunConfig) -> int:
    ctx = pres.ctx
    tab = sieve.factor_degree_table(ctx, n, budget=config.table_budget)
    mask = tab <= m
    if pres.pairs:
        coeffs = sieve.coeff_matrix(ctx, n)
        for i, a in pres.pairs:
            mask &= coeffs[:, i] == a
    return int(mask.sum())


def _count_free_enum(n: int, m: int, pres: Prescription, config: RunConfig) -> int:
    ctx = pres.ctx
    q = ctx.q
    fixed = dict(pres.pairs)
    free = [i for i in range(n) if i not in fixed]
    total_assignments = q ** len(free)
    if total_assignments > config.enumeration_budget:
        raise BudgetError(
            f"{total_assignments} assignments exceed enumeration budget {config.enumeration_budget}"
        )
    base = [0] * (n + 1)
    base[n] = 1
    for i, a in fixed.items():
        base[i] = a
    count = 0
    for idx in range(total_assignments):
        rem = idx
        for i in free:
            base[i] = rem % q
            rem //= q
        if is_m_smooth(Poly(ctx, tuple(base)), m):
            count += 1
    return count


class _UnitRing:
    """Units of F_q[t]/t^r with precomputed multiplication permutations."""

    def __init__(self, ctx: FieldCtx, r: int, budget: float):
        q = ctx.q
        size = q ** (r - 1) * (q - 1)
        if size > budget:
            raise BudgetError(f"class group of size {size} exceeds budget {budget}")
        self.ctx = ctx
        self.r = r
        self.elements = [e for e in range(q**r) if e % q != 0]
        self.pos = {e: i for i, e in enumerate(self.elements)}
        self.size = len(self.elements)
        self._mod = Poly(ctx, (0,) * r + (1,))

    def poly_of(self, enc: int) -> Poly:
        return Poly(self.ctx, _digits(self.ctx.q, enc, self.r))

    def enc_of(self, f: Poly) -> int:
        return self._enc(f % self._mod)

    def _enc(self, res: Poly) -> int:
        q = self.ctx.q
        return sum(res[i] * q**i for i in range(self.r))

    def mult_perm(self, enc: int) -> List[int]:
        """Permutation i -> pos(elements[i] * enc)."""
        c = self.poly_of(enc)
        out = []
        for e in self.elements:
            prod = (self.poly_of(e) * c) % self._mod
            out.append(self.pos[self._enc(prod)])
        return out


def _irreducible_class_counts(
    ctx: FieldCtx, max_d: int, enc_fn, config: RunConfig
) -> Dict[int, Dict[int, int]]:
    """Per degree d <= max_d: {class encoding: number of irreducibles}, t skipped."""
    out: Dict[int, Dict[int, int]] = {}
    t = Poly.t(ctx)
    for d in range(1, max_d + 1):
        counts: Dict[int, int] = {}
        for idx in sieve.irreducible_indices(ctx, d, budget=config.table_budget):
            w = Poly.monic_from_index(ctx, d, int(idx))
            if w == t:
                continue
            enc = enc_fn(w)
            counts[enc] = counts.get(enc, 0) + 1
        out[d] = counts
    return out


def _group_dp(
    n: int,
    m: int,
    ring_size: int,
    identity_pos: int,
    class_counts: Dict[int, Dict[int, int]],
    perm_of_enc,
) -> List[List[int]]:
    """A[d][x] = number of m-smooth monic h, coprime to t, deg h = d, class x.

    Euler product over irreducibles w != t in the group ring Z[G][[z]],
    truncated at degree n.
    """
    A = [[0] * ring_size for _ in range(n + 1)]
    A[0][identity_pos] = 1
    for d in sorted(class_counts):
        if d > min(m, n):
            continue
        for enc, p in sorted(class_counts[d].items()):
            perm = perm_of_enc(enc)
            # B = A * (1 - z^d [c])^(-p), expanded with multichoose weights
            B = [row[:] for row in A]
            power = list(range(ring_size))  # perm^e, starting at e=1 after update below
            e = 1
            while e * d <= n:
                power = [perm[x] for x in power]
                w = math.comb(p + e - 1, e)
                for j in range(e * d, n + 1):
                    src = A[j - e * d]
                    dst = B[j]
                    for x in range(ring_size):
                        v = src[x]
                        if v:
                            dst[power[x]] += w * v
                e += 1
            A = B
    return A


def _count_dp_low(n: int, m: int, pres: Prescription, config: RunConfig) -> int:
    """Group-ring dp over units mod t^r, r = max prescribed index + 1."""
    ctx = pres.ctx
    q = ctx.q
    r = max(pres.indices) + 1
    ring = _UnitRing(ctx, r, config.dp_class_budget)
    if q ** min(m, n) > config.table_budget:
        raise BudgetError("irreducible tables for the dp exceed the table budget")
    class_counts = _irreducible_class_counts(ctx, min(m, n), ring.enc_of, config)
    A = _group_dp(n, m, ring.size, ring.pos[1], class_counts, ring.mult_perm)
    fixed = dict(pres.pairs)
    total = 0
    for a in range(n + 1):
        D = n - a
        if a >= r:
            # f = t^a h with t^r | f: every prescribed coefficient reads 0
            if all(v == 0 for v in fixed.values()):
                total += sum(A[D])
            continue
        # prescribed indices below a must read 0; the rest read digits of h
        if any(i < a and v != 0 for i, v in fixed.items()):
            continue
        checks = [(i - a, v) for i, v in fixed.items() if i >= a]
        for x, enc in enumerate(ring.elements):
            digits = _digits(q, enc, r)
            if all(digits[j] == v for j, v in checks):
                total += A[D][x]
    return total


class _StarRing:
    """Truncated reversals 1 + a_1 t + ... + a_ell t^ell mod t^(ell+1)."""

    def __init__(self, ctx: FieldCtx, ell: int, budget: float):
        q = ctx.q
        size = q**ell
        if size > budget:
            raise BudgetError(f"class group of size {size} exceeds budget {budget}")
        self.ctx = ctx
        self.ell = ell
        self.size = size
        self._mod = Poly(ctx, (0,) * (ell + 1) + (1,))

    def enc_of_star(self, f: Poly) -> int:
        """Encoding of f* mod t^(ell+1); f monic, so the class is a unit."""
        star = f.reverse() % self._mod
        assert star[0] == 1
        q = self.ctx.q
        return sum(star[i + 1] * q**i for i in range(self.ell))

    def poly_of(self, enc: int) -> Poly:
        return Poly(self.ctx, (1,) + _digits(self.ctx.q, enc, self.ell))

    def mult_perm(self, enc: int) -> List[int]:
        c = self.poly_of(enc)
        q = self.ctx.q
        out = []
        for e in range(self.size):
            prod = (self.poly_of(e) * c) % self._mod
            out.append(sum(prod[i + 1] * q**i for i in range(self.ell)))
        return out


def count_in_class(n: int, m: int, b: Poly, ell: int, config: RunConfig = DEFAULT) -> int:
    """#{f in S(n, m): the top ell coefficients of f match b}.

    b's coefficient of t^j is the prescribed coefficient of t^(n-1-j), so
    deg b < ell <= n. Equivalent to f* = b* mod t^(ell+1) with b* = 1 + sum
    b_j t^(j+1).
    """
    ctx = b.ctx
    if not 1 <= ell <= n:
        raise ValueError("ell out of range")
    if b.deg >= ell:
        raise ValueError("b has more than ell coefficients")
    if m < 1:
        raise ValueError("smoothness bound must be >= 1")
    pres = Prescription.make(ctx, n, [(n - 1 - j, b[j]) for j in range(ell)])
    q = ctx.q
    if q**n <= config.table_budget:
        return _count_table(n, m, pres, config)
    # reversal dp: classes of h* mod t^(ell+1); f = t^a h shares h's class
    ring = _StarRing(ctx, ell, config.dp_class_budget)
    if q ** min(m, n) > config.table_budget:
        raise BudgetError("irreducible tables for the dp exceed the table budget")
    class_counts = _irreducible_class_counts(ctx, min(m, n), ring.enc_of_star, config)
    A = _group_dp(n, m, ring.size, 0, class_counts, ring.mult_perm)
    target = sum(b[j] * q**j for j in range(ell))
    return sum(A[D][target] for D in range(n + 1))


def count_prescribed(
    n: int,
    m: int,
    pres: Prescription,
    method: str = "auto",
    config: RunConfig = DEFAULT,
) -> CountReport:
    """Exact #(S(n, m) intersect J) for the prescription J."""
    ctx = pres.ctx
    q = ctx.q
    if pres.n != n:
        raise ValueError("prescription degree mismatch")
    if m < 1:
        raise ValueError("smoothness bound must be >= 1")
    t0 = time.perf_counter()
    chosen = method
    if method == "auto":
        if q**n <= config.table_budget:
            chosen = "enumeration"
        elif pres.pairs and (
            q ** max(pres.indices) * (q - 1) <= config.dp_class_budget
            and q ** min(m, n) <= config.table_budget
        ):
            chosen = "dp"
        else:
            chosen = "enumeration"
    if chosen in ("enum", "enumeration"):
        if q**n <= config.table_budget:
            exact = _count_table(n, m, pres, config)
        else:
            exact = _count_free_enum(n, m, pres, config)
        chosen = "enumeration"
    elif chosen == "dp":
        if not pres.pairs:
            exact = psi_exact(q, n, m)
        else:
            exact = _count_dp_low(n, m, pres, config)
    elif chosen == "parseval":
        from .circle import parseval_count

        exact = parseval_count(n, m, pres, config=config)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CountReport(
        exact=exact,
        q=q,
        n=n,
        m=m,
        prescription=pres,
        method=chosen,
        seconds=time.perf_counter() - t0,
    )
