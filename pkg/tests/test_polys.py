"""Polynomial ring, factorization, and arithmetic-function tests.

Factorization is checked against reconstruction (product of factors with
multiplicity equals the input) and irreducibility against a brute-force
trial division oracle, so no result here leans on the code under test.
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from smoothfq.fields import parse_field_spec
from smoothfq.polys import (
    Poly,
    count_irreducibles,
    divisors,
    enumerate_irreducibles,
    euler_phi,
    factor,
    gcd,
    int_mobius,
    invmod,
    is_irreducible,
    is_m_smooth,
    is_squarefree,
    max_factor_degree,
    mobius,
    monic_polys,
    pow_mod,
    tau,
    xgcd,
)


def rand_poly(rng, ctx, max_deg):
    d = rng.randint(0, max_deg)
    coeffs = [rng.randrange(ctx.q) for _ in range(d + 1)]
    return Poly(ctx, coeffs)


@st.composite
def poly_pair(draw):
    ctx = parse_field_spec(draw(st.sampled_from(["2", "3", "5", "2^2"])))
    mk = lambda d: Poly(ctx, draw(st.lists(st.integers(0, ctx.q - 1), min_size=0, max_size=d)))
    return ctx, mk(8), mk(8)


@given(poly_pair())
def test_ring_axioms(args):
    ctx, f, g = args
    assert f + g == g + f
    assert f * g == g * f
    assert (f - g) + g == f
    assert f * (f + g) == f * f + f * g
    assert (f * g).deg == (f.deg + g.deg if f and g else -1)


@given(poly_pair())
def test_divmod_invariant(args):
    ctx, f, g = args
    if g.is_zero:
        with pytest.raises(ZeroDivisionError):
            divmod(f, g)
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.deg < g.deg


@given(poly_pair())
@settings(max_examples=60)
def test_gcd_divides_and_bezout(args):
    ctx, f, g = args
    d = gcd(f, g)
    if d.is_zero:
        assert f.is_zero and g.is_zero
        return
    assert (f % d).is_zero and (g % d).is_zero
    d2, u, v = xgcd(f, g)
    assert d2 == d
    assert u * f + v * g == d


def test_string_roundtrip(f3):
    f = Poly(f3, (1, 0, 2, 1))
    assert Poly.from_string(f3, f.to_string()) == f
    assert Poly.from_string(f3, "1, 0, 2, 1") == f
    with pytest.raises(ValueError):
        Poly.from_string(f3, "1,x")
    with pytest.raises(ValueError):
        Poly.from_string(f3, "1,5")  # coefficient out of range


def test_monic_index_roundtrip(f3):
    for idx in range(3**3):
        f = Poly.monic_from_index(f3, 3, idx)
        assert f.is_monic and f.deg == 3
        assert f.monic_index() == idx


def test_irreducible_matches_trial_division(f2, f3):
    for ctx, max_deg in ((f2, 8), (f3, 5)):
        for n in range(1, max_deg + 1):
            for f in monic_polys(ctx, n):
                has_factor = any(
                    (f % g).is_zero
                    for d in range(1, n // 2 + 1)
                    for g in monic_polys(ctx, d)
                )
                assert is_irreducible(f) == (not has_factor), f.to_string()


def test_count_irreducibles_necklace(f2, f3, f4):
    # pi_q(n) = (1/n) sum_{d|n} mu(d) q^(n/d), checked against enumeration
    for ctx in (f2, f3, f4):
        for n in range(1, 5):
            listed = enumerate_irreducibles(ctx, n)
            assert len(listed) == count_irreducibles(ctx, n)
            assert all(is_irreducible(f) and f.deg == n for f in listed)
    assert count_irreducibles(f2, 12) == 335


def test_factor_reconstructs(f2, f3, f4):
    rng = random.Random(7)
    for ctx in (f2, f3, f4):
        for _ in range(120):
            f = rand_poly(rng, ctx, 9)
            if f.is_zero or f.deg < 1:
                continue
            fac = factor(f)
            prod = Poly.constant(ctx, f.lead)
            for p, e in fac:
                assert is_irreducible(p) and p.is_monic
                for _ in range(e):
                    prod = prod * p
            assert prod == f
            # pairwise distinct irreducible parts
            assert len({p.coeffs for p, _ in fac}) == len(fac)


def test_squarefree_and_mobius(f2, f3):
    for ctx in (f2, f3):
        for n in range(1, 5):
            for f in monic_polys(ctx, n):
                fac = factor(f)
                sf = all(e == 1 for _, e in fac)
                assert is_squarefree(f) == sf
                assert mobius(f) == ((-1) ** len(fac) if sf else 0)


def test_euler_phi_counts_units(f2, f3):
    for ctx in (f2, f3):
        for n in range(1, 4):
            for g in monic_polys(ctx, n):
                total = sum(
                    1
                    for enc in range(ctx.q**n)
                    if gcd(Poly(ctx, [(enc // ctx.q**i) % ctx.q for i in range(n)]), g).deg
                    == 0
                )
                assert euler_phi(g) == total


def test_divisors_and_tau(f2):
    f = Poly.from_string(f2, "0,1") * Poly.from_string(f2, "1,1")  # t(t+1)
    ds = divisors(f)
    assert len(ds) == tau(f) == 4
    assert all((f % d).is_zero for d in ds)
    assert len(set(d.coeffs for d in ds)) == 4


def test_int_mobius():
    assert [int_mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_smoothness_against_factorization(f2, f3):
    rng = random.Random(3)
    for ctx in (f2, f3):
        for _ in range(80):
            f = rand_poly(rng, ctx, 8)
            if f.deg < 1:
                continue
            top = max(p.deg for p, _ in factor(f))
            assert max_factor_degree(f) == top
            for m in range(1, 9):
                assert is_m_smooth(f, m) == (top <= m)


def test_modular_helpers(f3):
    mod = Poly.from_string(f3, "1,0,1")  # t^2 + 1, irreducible over F_3
    assert is_irreducible(mod)
    a = Poly.from_string(f3, "2,1")
    assert (invmod(a, mod) * a) % mod == Poly.one(f3)
    assert pow_mod(a, 9 - 1, mod) == Poly.one(f3)  # unit group of F_9 has order 8
