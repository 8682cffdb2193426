"""Vectorized classification of whole monic strata.

For each degree n (up to a budget) a uint8 table over range(q^n) records the
maximum irreducible-factor degree of every monic polynomial of degree n,
indexed by the radix-q encoding of the low coefficients. Tables are built by
an Eratosthenes-style sieve: for ascending d, every product (irreducible of
degree d) * (monic of degree n-d) is marked d; ascending order makes the last
mark the maximum, and the unmarked residue is exactly the degree-n
irreducibles. Products are formed as numpy convolutions over coefficient
blocks, with field arithmetic done modulo p for prime fields and through
lookup tables otherwise.

Everything downstream (exhaustive Psi counts, smooth-set lists for
exponential sums, character binning) reads these tables.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .config import DEFAULT, BudgetError
from .fields import FieldCtx

_CHUNK_ELEMS = 8 * 10**6


def coeff_matrix(ctx: FieldCtx, n: int) -> np.ndarray:
    """(q^n, n+1) uint8 coefficients of all monic degree-n polynomials."""
    key = ("coeffs", n)
    if key not in ctx.cache:
        q = ctx.q
        idx = np.arange(q**n, dtype=np.int64)
        out = np.empty((q**n, n + 1), dtype=np.uint8)
        for i in range(n):
            out[:, i] = (idx // q**i) % q
        out[:, n] = 1
        ctx.cache[key] = out
    return ctx.cache[key]


def _mark_products(ctx: FieldCtx, tab: np.ndarray, W: np.ndarray, d: int, n: int):
    """tab[index of w*h] = d for every irreducible row w and monic h of deg n-d."""
    q = ctx.q
    e = n - d
    H = coeff_matrix(ctx, e)
    n_w = W.shape[0]
    chunk = max(1, _CHUNK_ELEMS // max(1, n_w * (n + 1)))
    qpow = q ** np.arange(n, dtype=np.int64)
    if ctx.k == 1:
        p = ctx.p
        W64 = W.astype(np.int64)
        for lo in range(0, H.shape[0], chunk):
            Hc = H[lo : lo + chunk].astype(np.int64)
            prod = np.zeros((n_w, Hc.shape[0], n + 1), dtype=np.int64)
            for j in range(d + 1):
                prod[:, :, j : j + e + 1] += W64[:, j, None, None] * Hc[None, :, :]
            prod %= p
            flat = prod[:, :, :n].reshape(-1, n) @ qpow
            tab[flat] = d
    else:
        add_t, mul_t, _ = ctx.tables()
        for lo in range(0, H.shape[0], chunk):
            Hc = H[lo : lo + chunk]
            prod = np.zeros((n_w, Hc.shape[0], n + 1), dtype=np.uint8)
            for j in range(d + 1):
                col = W[:, j]
                if not col.any():
                    continue
                for i in range(e + 1):
                    term = mul_t[col[:, None], Hc[None, :, i]]
                    prod[:, :, i + j] = add_t[prod[:, :, i + j], term]
            flat = prod[:, :, :n].astype(np.int64).reshape(-1, n) @ qpow
            tab[flat] = d


def _sieve_cache(ctx: FieldCtx) -> dict:
    return ctx.cache.setdefault(
        "sieve", {"tables": [np.zeros(1, dtype=np.uint8)], "irr": {}}
    )


def ensure_tables(ctx: FieldCtx, n: int, budget: Optional[int] = None):
    cache = _sieve_cache(ctx)
    tables = cache["tables"]
    limit = budget if budget is not None else DEFAULT.table_budget
    if ctx.q**n > limit:
        raise BudgetError(
            f"stratum size q^n = {ctx.q**n} exceeds the sieve budget {limit}"
        )
    while len(tables) <= n:
        k = len(tables)
        tab = np.zeros(ctx.q**k, dtype=np.uint8)
        for d in range(1, k):
            _mark_products(ctx, tab, cache["irr"][d], d, k)
        irr_idx = np.nonzero(tab == 0)[0]
        tab[irr_idx] = k
        cache["irr"][k] = coeff_matrix(ctx, k)[irr_idx]
        tables.append(tab)


def factor_degree_table(ctx: FieldCtx, n: int, budget: Optional[int] = None) -> np.ndarray:
    """uint8 table over range(q^n): max irreducible-factor degree by index."""
    ensure_tables(ctx, n, budget)
    return _sieve_cache(ctx)["tables"][n]


def irreducible_indices(ctx: FieldCtx, n: int, budget: Optional[int] = None) -> np.ndarray:
    tab = factor_degree_table(ctx, n, budget)
    return np.nonzero(tab == n)[0] if n >= 1 else np.empty(0, dtype=np.int64)


def smooth_indices(ctx: FieldCtx, n: int, m: int, budget: Optional[int] = None) -> np.ndarray:
    """Indices of m-smooth monic degree-n polynomials."""
    tab = factor_degree_table(ctx, n, budget)
    return np.nonzero(tab <= m)[0]


def smooth_count_by_m(ctx: FieldCtx, n: int, budget: Optional[int] = None) -> np.ndarray:
    """counts[m] = #m-smooth monic degree-n polynomials, m = 0..n, by sieve."""
    tab = factor_degree_table(ctx, n, budget)
    binned = np.bincount(tab, minlength=n + 1)
    return np.cumsum(binned)
