"""Characters modulo the combined relation (top coefficients, residue mod g).

Two monic polynomials are related when they agree mod g and their reversals
agree mod t^(ell+1); the unit classes form an abelian group of order
q^ell * Phi(g), represented here as pairs (star part, residue part). The
group is decomposed into cyclic factors by a generic algorithm (Sylow split,
maximal-order extraction, quotient recursion), which also yields a full
discrete-log table, so characters are exponent vectors and evaluation is a
table lookup.

L-polynomials, the Gauss-sum identity, and Ramanujan sums are computed by
direct enumeration at desk scale; root reports use companion-matrix roots.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT, BudgetError, RunConfig
from .fields import FieldCtx
from .polys import Poly, divisors, euler_phi, gcd, int_factor
from . import sieve


@dataclass(frozen=True)
class Relation:
    """f ~ h iff f = h mod g and f* = h* mod t^(ell+1)."""

    ell: int
    g: Poly

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be >= 0")
        if self.g.is_zero or not self.g.is_monic:
            raise ValueError("g must be monic and nonzero")

    @property
    def ctx(self) -> FieldCtx:
        return self.g.ctx

    def equivalent(self, f: Poly, h: Poly) -> bool:
        if f.is_zero or h.is_zero:
            raise ValueError("relation defined on nonzero polynomials")
        tmod = Poly(self.ctx, (0,) * (self.ell + 1) + (1,))
        if (f - h) % self.g != Poly.zero(self.ctx):
            return False
        return (f.reverse() - h.reverse()) % tmod == Poly.zero(self.ctx)


# -- generic abelian decomposition ------------------------------------------


def _pow(mult, identity, a, e: int):
    out, base = identity, a
    while e:
        if e & 1:
            out = mult(out, base)
        base = mult(base, base)
        e >>= 1
    return out


def _p_basis(elems: List, p: int, mult, identity) -> List[Tuple[object, int]]:
    """Cyclic basis [(gen, p^k), ...] of an abelian p-group given its elements."""
    if len(elems) == 1:
        return []
    best, best_ord = identity, 1
    for x in elems:
        y, o = x, 1
        while y != identity:
            y = _pow(mult, identity, y, p)
            o *= p
        if o > best_ord:
            best, best_ord = x, o
    a, pk = best, best_ord
    apow: Dict[object, int] = {}
    y = identity
    for j in range(pk):
        apow[y] = j
        y = mult(y, a)
    # quotient by <a>: canonical rep = minimal encoding in the coset
    rep: Dict[object, object] = {}
    for x in elems:
        if x in rep:
            continue
        coset = []
        y = x
        for _ in range(pk):
            coset.append(y)
            y = mult(y, a)
        r = min(coset)
        for c in coset:
            rep[c] = r
    qelems = sorted(set(rep.values()))
    qmult = lambda u, v: rep[mult(u, v)]
    out: List[Tuple[object, int]] = [(a, pk)]
    for b_bar, ps in _p_basis(qelems, p, qmult, rep[identity]):
        c = apow[_pow(mult, identity, b_bar, ps)]
        # c is divisible by ps because a has maximal order in the p-group
        assert c % ps == 0
        lift = mult(b_bar, _pow(mult, identity, a, (pk - c // ps) % pk))
        assert _pow(mult, identity, lift, ps) == identity
        out.append((lift, ps))
    return out


def _decompose(elements: List, mult, identity) -> Tuple[List, List[int]]:
    """Invariant-factor generators and orders d_1 | d_2 | ... for the group."""
    n = len(elements)
    if n == 1:
        return [], []
    per_prime: Dict[int, List[Tuple[object, int]]] = {}
    for p, e in int_factor(n).items():
        co = n // p**e
        sylow = sorted({_pow(mult, identity, x, co) for x in elements})
        basis = _p_basis(sylow, p, mult, identity)
        basis.sort(key=lambda t: -t[1])
        per_prime[p] = basis
    width = max(len(b) for b in per_prime.values())
    gens, orders = [], []
    for j in range(width):
        gen, order = identity, 1
        for p, basis in per_prime.items():
            if j < len(basis):
                gen = mult(gen, basis[j][0])
                order *= basis[j][1]
        gens.append(gen)
        orders.append(order)
    gens.reverse()
    orders.reverse()
    assert math.prod(orders) == n
    return gens, orders


# -- the unit group -----------------------------------------------------------


class UnitGroup:
    """Classes of monic polynomials coprime to g under the relation."""

    def __init__(self, relation: Relation, config: RunConfig = DEFAULT):
        ctx = relation.ctx
        q = ctx.q
        ell, g = relation.ell, relation.g
        phi = euler_phi(g)
        size = q**ell * phi
        if size > config.group_budget:
            raise BudgetError(f"group of order {size} exceeds budget {config.group_budget}")
        self.relation = relation
        self.ctx = ctx
        self.order = size
        self._tmod = Poly(ctx, (0,) * (ell + 1) + (1,))
        self._gdeg = max(g.deg, 0)
        res_encs = []
        for enc in range(q**self._gdeg):
            r = self._res_poly(enc)
            if gcd(r, g).deg == 0:
                res_encs.append(enc)
        self._res_encs = res_encs
        assert len(res_encs) == phi
        self.elements: List[Tuple[int, int]] = [
            (s, r) for s in range(q**ell) for r in res_encs
        ]
        self.gens, self.orders = _decompose(self.elements, self._mult, self.identity)
        self.dlog: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        for vec in itertools.product(*(range(d) for d in self.orders)):
            el = self.identity
            for gen, e in zip(self.gens, vec):
                el = self._mult(el, _pow(self._mult, self.identity, gen, e))
            self.dlog[el] = vec
        if len(self.dlog) != self.order:
            raise AssertionError("generator set does not span the group")

    # pair encodings: star part = digits of a_1..a_ell, residue part mod g
    @property
    def identity(self) -> Tuple[int, int]:
        return (0, 0 if self.relation.g.deg == 0 else 1)

    def _star_poly(self, enc: int) -> Poly:
        q = self.ctx.q
        ell = self.relation.ell
        return Poly(self.ctx, (1,) + tuple((enc // q**i) % q for i in range(ell)))

    def _res_poly(self, enc: int) -> Poly:
        q = self.ctx.q
        return Poly(self.ctx, tuple((enc // q**i) % q for i in range(self._gdeg)))

    def _star_enc(self, f: Poly) -> int:
        star = f.reverse() % self._tmod
        if star[0] != 1:
            raise ValueError("reversal is not a principal unit; f must be monic")
        q = self.ctx.q
        return sum(star[i + 1] * q**i for i in range(self.relation.ell))

    def _res_enc(self, f: Poly) -> int:
        r = f % self.relation.g
        q = self.ctx.q
        return sum(r[i] * q**i for i in range(self._gdeg))

    def _mult(self, x: Tuple[int, int], y: Tuple[int, int]) -> Tuple[int, int]:
        sx, rx = x
        sy, ry = y
        s = self._star_enc_prod(sx, sy)
        r = self._res_enc(self._res_poly(rx) * self._res_poly(ry))
        return (s, r)

    def _star_enc_prod(self, ex: int, ey: int) -> int:
        prod = (self._star_poly(ex) * self._star_poly(ey)) % self._tmod
        q = self.ctx.q
        return sum(prod[i + 1] * q**i for i in range(self.relation.ell))

    def class_of(self, f: Poly) -> Tuple[int, int]:
        """Class encoding of monic f coprime to g."""
        if f.is_zero:
            raise ValueError("zero polynomial has no class")
        if not f.is_monic:
            f = f.monic()
        if gcd(f, self.relation.g).deg != 0:
            raise ValueError("f shares a factor with g")
        return (self._star_enc(f), self._res_enc(f))

    def dlog_of(self, f: Poly) -> Tuple[int, ...]:
        return self.dlog[self.class_of(f)]

    def characters(self) -> Iterator["Character"]:
        for vec in itertools.product(*(range(d) for d in self.orders)):
            yield Character(self, vec)

    def principal_character(self) -> "Character":
        return Character(self, tuple(0 for _ in self.orders))


def unit_group(ell: int, g: Poly, config: RunConfig = DEFAULT) -> UnitGroup:
    key = ("ugroup", ell, g.coeffs)
    cache = g.ctx.cache
    if key not in cache:
        cache[key] = UnitGroup(Relation(ell, g), config)
    return cache[key]


# -- characters ---------------------------------------------------------------


class Character:
    """Exponent vector against the group's invariant-factor generators."""

    __slots__ = ("group", "exponents")

    def __init__(self, group: UnitGroup, exponents: Sequence[int]):
        if len(exponents) != len(group.orders):
            raise ValueError("exponent vector length mismatch")
        exps = tuple(int(e) % d for e, d in zip(exponents, group.orders))
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "exponents", exps)

    def __setattr__(self, *_):
        raise AttributeError("Character is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.group is other.group
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((id(self.group), self.exponents))

    def __repr__(self):
        return f"Character(exponents={self.exponents})"

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def value_on_class(self, enc: Tuple[int, int]) -> complex:
        vec = self.group.dlog[enc]
        phase = Fraction(0)
        for e, v, d in zip(self.exponents, vec, self.group.orders):
            phase += Fraction(e * v, d)
        phase %= 1
        if phase == 0:
            return 1.0 + 0.0j
        return cmath.exp(2j * math.pi * float(phase))

    def conj(self) -> "Character":
        return Character(self.group, tuple(-e for e in self.exponents))


def char_eval(chi: Character, f: Poly) -> complex:
    """chi(f): 0 off units; non-monic f is read as its monic associate."""
    if f.is_zero:
        raise ValueError("chi(0) undefined")
    if not f.is_monic:
        f = f.monic()
    if gcd(f, chi.group.relation.g).deg != 0:
        return 0.0 + 0.0j
    return chi.value_on_class(chi.group.class_of(f))


def is_primitive(chi: Character) -> bool:
    """True when chi factors through no proper sub-relation (ell', g' | g)."""
    group = chi.group
    rel = group.relation
    ctx = group.ctx
    for gp in divisors(rel.g):
        for ellp in range(rel.ell + 1):
            if ellp == rel.ell and gp == rel.g:
                continue
            q = ctx.q
            trivial = True
            for s, r in group.elements:
                if s % q**ellp != 0:
                    continue
                rpoly = group._res_poly(r)
                if gp.deg > 0 and (rpoly - Poly.one(ctx)) % gp != Poly.zero(ctx):
                    continue
                if abs(chi.value_on_class((s, r)) - 1) > 1e-9:
                    trivial = False
                    break
            if trivial:
                return False
    return True


# -- character sums -----------------------------------------------------------


def _class_value_cache(chi: Character) -> Dict[Tuple[int, int], complex]:
    rel = chi.group.relation
    key = ("chivals", rel.ell, rel.g.coeffs, chi.exponents)
    cache = chi.group.ctx.cache
    if key not in cache:
        cache[key] = {enc: chi.value_on_class(enc) for enc in chi.group.elements}
    return cache[key]


def _class_histogram(group: UnitGroup, n: int, indices, tag, config: RunConfig) -> Dict[Tuple[int, int], int]:
    """Class-encoding counts over the monic degree-n polynomials in indices.

    Cached per (relation, n, tag) so sums over many characters of the same
    group pay the polynomial walk once. Prime fields take a vectorized path:
    both the star digits (top coefficients) and the residue mod g are linear
    in the coefficient rows, so the whole stratum reduces with matrix ops.
    """
    ctx = group.ctx
    g = group.relation.g
    ell = group.relation.ell
    key = ("class_hist", ell, g.coeffs, n, tag)
    if key in ctx.cache:
        return ctx.cache[key]
    if ctx.k == 1 and n >= 1:
        hist = _class_histogram_prime(group, n, np.asarray(indices, dtype=np.int64))
    else:
        hist = {}
        for idx in indices:
            f = Poly.monic_from_index(ctx, n, int(idx))
            if gcd(f, g).deg == 0:
                enc = group.class_of(f)
                hist[enc] = hist.get(enc, 0) + 1
    ctx.cache[key] = hist
    return hist


def _class_histogram_prime(group: UnitGroup, n: int, indices: np.ndarray) -> Dict[Tuple[int, int], int]:
    ctx = group.ctx
    q = ctx.q
    g = group.relation.g
    ell = group.relation.ell
    dg = g.deg
    C = sieve.coeff_matrix(ctx, n)[indices].astype(np.int64)
    star = np.zeros(len(indices), dtype=np.int64)
    for j in range(1, ell + 1):
        if n - j >= 0:
            star += C[:, n - j] * q ** (j - 1)
    if dg == 0:
        res = np.zeros(len(indices), dtype=np.int64)
        mask = np.ones(len(indices), dtype=bool)
    else:
        t = Poly.t(ctx)
        R = np.zeros((n + 1, dg), dtype=np.int64)
        r = Poly.one(ctx)
        for k in range(n + 1):
            if not r.is_zero:
                R[k, : r.deg + 1] = r.coeffs
            r = (r * t) % g
        res = ((C @ R) % q) @ (q ** np.arange(dg, dtype=np.int64))
        unit = np.zeros(q**dg, dtype=bool)
        for renc in {r for _, r in group.elements}:
            unit[renc] = True
        mask = unit[res]
    code = star[mask] * q**max(dg, 1) + res[mask]
    vals, counts = np.unique(code, return_counts=True)
    Q = q**max(dg, 1)
    return {(int(c) // Q, int(c) % Q): int(k) for c, k in zip(vals, counts)}


def char_sum_irreducibles(chi: Character, n: int, config: RunConfig = DEFAULT) -> complex:
    """Sum of chi over monic irreducibles of degree n."""
    ctx = chi.group.ctx
    hist = _class_histogram(
        chi.group, n, sieve.irreducible_indices(ctx, n, budget=config.table_budget),
        "irr", config)
    vals = _class_value_cache(chi)
    return sum(count * vals[enc] for enc, count in hist.items()) + 0.0j


def char_sum_smooth(chi: Character, n: int, m: int, config: RunConfig = DEFAULT) -> complex:
    """Sum of chi over m-smooth monic polynomials of degree n."""
    ctx = chi.group.ctx
    hist = _class_histogram(
        chi.group, n, sieve.smooth_indices(ctx, n, m, budget=config.table_budget),
        ("smooth", m), config)
    vals = _class_value_cache(chi)
    return sum(count * vals[enc] for enc, count in hist.items()) + 0.0j


def char_sum_monic(chi: Character, n: int, config: RunConfig = DEFAULT) -> complex:
    """Sum of chi over all monic polynomials of degree n (L-coefficient c_n)."""
    ctx = chi.group.ctx
    q = ctx.q
    if q**n > config.poly_enum_budget:
        raise BudgetError(f"{q**n} polynomials exceed budget")
    hist = _class_histogram(chi.group, n, np.arange(q**n, dtype=np.int64), "monic", config)
    vals = _class_value_cache(chi)
    return sum(count * vals[enc] for enc, count in hist.items()) + 0.0j


# -- L-polynomials ------------------------------------------------------------


@dataclass(frozen=True)
class LPolyReport:
    coefficients: Tuple[complex, ...]
    inverse_roots: Tuple[complex, ...]
    moduli: Tuple[float, ...]
    labels: Tuple[str, ...]  # "unit" | "sqrt_q" | "other" per inverse root
    unit_root_count: int
    at_most_one_unit_root: bool
    max_label_error: float


def l_poly(chi: Character, config: RunConfig = DEFAULT, tol: float = 1e-6) -> LPolyReport:
    """Coefficients c_n = sum over M(n) of chi, for n = 0..ell + deg g.

    The degree is at most ell - 1 + deg g; the computed c_{ell + deg g} is
    asserted to vanish. Inverse roots are classified by modulus against 1 and
    sqrt(q).
    """
    if chi.is_principal:
        raise ValueError("L-polynomial is for non-principal characters")
    group = chi.group
    q = group.ctx.q
    N = group.relation.ell + max(group.relation.g.deg, 0)
    coeffs = [char_sum_monic(chi, n, config) for n in range(N + 1)]
    if abs(coeffs[N]) > 1e-9:
        raise AssertionError(f"coefficient at degree {N} should vanish, got {coeffs[N]}")
    trimmed = coeffs[:-1]
    while trimmed and abs(trimmed[-1]) < 1e-9:
        trimmed.pop()
    if len(trimmed) <= 1:
        inverse_roots: Tuple[complex, ...] = ()
    else:
        roots = np.roots(np.array(trimmed[::-1], dtype=complex))
        inverse_roots = tuple(1.0 / z for z in roots)
    moduli = tuple(abs(a) for a in inverse_roots)
    labels = []
    errs = [0.0]
    for mod in moduli:
        if abs(mod - 1.0) <= tol:
            labels.append("unit")
            errs.append(abs(mod - 1.0))
        elif abs(mod - math.sqrt(q)) <= tol:
            labels.append("sqrt_q")
            errs.append(abs(mod - math.sqrt(q)))
        else:
            labels.append("other")
            errs.append(min(abs(mod - 1.0), abs(mod - math.sqrt(q))))
    unit_count = sum(1 for lab in labels if lab == "unit")
    return LPolyReport(
        coefficients=tuple(coeffs),
        inverse_roots=inverse_roots,
        moduli=moduli,
        labels=tuple(labels),
        unit_root_count=unit_count,
        at_most_one_unit_root=unit_count <= 1,
        max_label_error=max(errs),
    )


# -- Gauss and Ramanujan identities -------------------------------------------


def gauss_identity_check(
    ell: int, g: Poly, b: Poly, config: RunConfig = DEFAULT
) -> Tuple[bool, float, float]:
    """Sum over all chi of |sum chi(a) e(a/g)|^2 with a's star part fixed by b.

    Returns (within 1e-6, lhs, rhs) where rhs = q^ell * Phi(g)^2.
    """
    from .laurent import e_frac

    ctx = g.ctx
    group = unit_group(ell, g, config)
    if b.is_zero:
        raise ValueError("b must be nonzero")
    sb = group._star_enc(b if b.is_monic else b.monic())
    pairs = [(s, r) for s, r in group.elements if s == sb]
    phases = [e_frac(group._res_poly(r), g) for _, r in pairs]
    lhs = 0.0
    for chi in group.characters():
        vals = _class_value_cache(chi)
        inner = sum(vals[enc] * ph for enc, ph in zip(pairs, phases))
        lhs += abs(inner) ** 2
    rhs = float(ctx.q**ell * euler_phi(g) ** 2)
    return (abs(lhs - rhs) <= 1e-6 * max(1.0, rhs), lhs, rhs)


def ramanujan_sum(f: Poly, g: Poly, verify: bool = True) -> int:
    """Sum over unit residues a mod g of e(af/g); exact divisor-sum value.

    With verify=True the direct complex sum is also computed and compared.
    """
    from .laurent import e_frac
    from .polys import mobius

    if g.is_zero:
        raise ValueError("g must be nonzero")
    if not g.is_monic:
        g = g.monic()
    ctx = g.ctx
    q = ctx.q
    d0 = g if f.is_zero else gcd(f, g)
    total = sum(q**d.deg * mobius(g // d) for d in divisors(d0))
    if verify:
        direct = 0.0 + 0.0j
        for enc in range(q**g.deg):
            a = Poly(ctx, tuple((enc // q**i) % q for i in range(g.deg)))
            if gcd(a, g).deg == 0:
                direct += e_frac(a * f, g)
        if abs(direct - total) > 1e-6:
            raise AssertionError(f"direct sum {direct} != divisor formula {total}")
    return total
