"""Smooth counting: series identities, an independent recurrence oracle,
prescription parsing, and cross-checks between the counting backends."""

import math
import random

import pytest

from smoothfq import sieve
from smoothfq.config import BudgetError, RunConfig
from smoothfq.counting import (
    Prescription,
    count_in_class,
    count_prescribed,
    pi_q,
    psi_coprime,
    psi_exact,
)
from smoothfq.polys import Poly, gcd, is_m_smooth, monic_polys


def psi_oracle(q, n, m, _memo={}):
    """Independent recurrence on the largest factor degree.

    Psi(n, m) = Psi(n, m-1) + sum_j multichoose(pi_q(m), j) Psi(n - j m, m - 1):
    split on the multiset of degree-m irreducible factors.
    """
    if n == 0:
        return 1
    if n < 0 or m <= 0:
        return 0
    key = (q, n, m)
    if key not in _memo:
        total = psi_oracle(q, n, m - 1)
        pk = pi_q(q, m)
        j = 1
        while j * m <= n:
            total += math.comb(pk + j - 1, j) * psi_oracle(q, n - j * m, m - 1)
            j += 1
        _memo[key] = total
    return _memo[key]


def test_pi_q_small_values():
    assert [pi_q(2, n) for n in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert [pi_q(3, n) for n in range(1, 5)] == [3, 3, 8, 18]
    assert pi_q(4, 3) == 20


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_psi_against_recurrence_oracle(q):
    for n in range(0, 16):
        for m in range(1, n + 1):
            assert psi_exact(q, n, m) == psi_oracle(q, n, m)


@pytest.mark.parametrize("q", [2, 3, 7])
def test_psi_boundary_cases(q):
    for n in range(1, 10):
        assert psi_exact(q, n, n) == q**n
        assert psi_exact(q, n, max(n - 1, 1)) == q**n - (pi_q(q, n) if n > 1 else 0)
        # m = 1: multisets of the q monic linears, stars and bars
        assert psi_exact(q, n, 1) == math.comb(n + q - 1, q - 1)
    assert psi_exact(q, 0, 3) == 1


def test_psi_accepts_context(f3):
    assert psi_exact(f3, 9, 3) == psi_exact(3, 9, 3)


def test_psi_matches_sieve_enumeration(f2, f3):
    for ctx, nmax in ((f2, 11), (f3, 7)):
        for n in range(1, nmax + 1):
            counts = sieve.smooth_count_by_m(ctx, n)
            for m in range(1, n + 1):
                assert counts[m] == psi_exact(ctx, n, m)


def test_smooth_indices_match_predicate(f3):
    n, m = 5, 2
    idx = set(sieve.smooth_indices(f3, n, m).tolist())
    for k, f in enumerate(monic_polys(f3, n)):
        assert (k in idx) == is_m_smooth(f, m)


def test_prescription_parsing(f3):
    p = Prescription.from_string(f3, 6, "2=1, 0=2")
    assert p.indices == (0, 2) and p.values == (2, 1)
    assert p.size == 2 and p.delta == pytest.approx(2 / 6)
    assert Prescription.from_string(f3, 6, p.to_string()) == p
    assert Prescription.from_string(f3, 6, "").pairs == ()
    for bad in ("7=0", "0=3", "0=1,0=2", "1", "a=1"):
        with pytest.raises(ValueError):
            Prescription.from_string(f3, 6, bad)


def test_prescription_matches(f2):
    p = Prescription.make(f2, 4, {0: 1, 2: 0})
    hits = [f for f in monic_polys(f2, 4) if p.matches(f)]
    assert len(hits) == 2**2
    assert all(f[0] == 1 and f[2] == 0 for f in hits)


def brute_count(ctx, n, m, pres):
    return sum(1 for f in monic_polys(ctx, n) if pres.matches(f) and is_m_smooth(f, m))


def test_count_prescribed_matches_brute_force(f2, f3):
    rng = random.Random(17)
    for ctx, n in ((f2, 8), (f3, 5)):
        for _ in range(12):
            k = rng.randint(0, 3)
            idx = rng.sample(range(n), k)
            pres = Prescription.make(ctx, n, {i: rng.randrange(ctx.q) for i in idx})
            for m in (1, 2, 3):
                want = brute_count(ctx, n, m, pres)
                got = count_prescribed(n, m, pres).exact
                assert got == want, (ctx.q, n, m, pres.to_string())


def test_methods_agree(f2, f3):
    # enumeration, residue-class DP, and Parseval must produce identical counts
    rng = random.Random(23)
    for ctx, n in ((f2, 9), (f3, 6)):
        for _ in range(8):
            i = rng.randrange(0, min(3, n))
            pres = Prescription.make(ctx, n, {i: rng.randrange(ctx.q)})
            m = rng.randint(2, 4)
            a = count_prescribed(n, m, pres, method="enumeration").exact
            b = count_prescribed(n, m, pres, method="dp").exact
            c = count_prescribed(n, m, pres, method="parseval").exact
            assert a == b == c


def test_dp_handles_large_q_n(f5):
    # 5^12 monic completions: far beyond per-polynomial enumeration budgets,
    # exact through the unit-ring DP
    pres = Prescription.make(f5, 12, {1: 0})
    r = count_prescribed(12, 4, pres, method="dp")
    assert r.method == "dp"
    assert r.exact == 4338725
    assert psi_exact(5, 12, 4) == 18864625  # whole stratum for comparison


def test_auto_dispatch_and_budget(f2):
    small = RunConfig(table_budget=4, enumeration_budget=10, dp_class_budget=2)
    pres = Prescription.make(f2, 6, {0: 1})
    with pytest.raises(BudgetError):
        count_prescribed(6, 2, pres, method="enumeration", config=small)
    with pytest.raises(ValueError):
        count_prescribed(6, 0, pres)
    with pytest.raises(ValueError):
        count_prescribed(5, 2, pres)  # degree mismatch
    rep = count_prescribed(6, 2, pres)
    assert rep.method == "enumeration"


def test_psi_coprime(f2):
    # coprime-to-g smooth count matches filtering the enumeration
    t = Poly.t(f2)
    g = t * (t + Poly.one(f2))
    for n in range(1, 8):
        for m in (1, 2, 3):
            want = sum(
                1
                for f in monic_polys(f2, n)
                if is_m_smooth(f, m) and gcd(f, g).deg == 0
            )
            assert psi_coprime(n, m, g) == want


def test_count_in_class(f3):
    # short-interval class: top ell coefficients fixed, f_(n-1-j) = b_j
    ell, n, m = 2, 5, 2
    b = Poly.from_string(f3, "1,2")
    want = sum(
        1
        for f in monic_polys(f3, n)
        if is_m_smooth(f, m) and f[n - 1] == 1 and f[n - 2] == 2
    )
    assert count_in_class(n, m, b, ell) == want
    pres = Prescription.make(f3, n, {n - 1: 1, n - 2: 2})
    assert count_prescribed(n, m, pres).exact == want
    with pytest.raises(ValueError):
        count_in_class(n, m, b, 1)  # b has more coefficients than ell
