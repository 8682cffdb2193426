"""Predictors for smooth counts with prescribed coefficients.

The main term is Psi(n, m) / q^#I. When some prescribed values vanish the
count deviates from that frequency by q^(n-#I) (Lambda_0 + Lambda_1), built
from the Dickman derivative at shifted arguments; the "thm1" variant covers
the classical case 0 in I with alpha_0 != 0, where both corrections are
folded into the error term, while "thm2" applies them explicitly.

Envelope components render each error term with every implied constant set
to 1 and C = 1/2. They describe the shape of the error, not a bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .config import DEFAULT, RunConfig
from .counting import Prescription, count_prescribed, psi_exact
from .dickman import default_table

# beyond this series degree the display main term falls back to q^n rho(u)
_EXACT_PSI_LIMIT = 4096

ENVELOPE_NOTE = "envelope, not bound: implied constants set to 1, C = 1/2"


def _table_for(u: float):
    return default_table(max(40.0, float(math.ceil(u)) + 2.0))


def nu_index(pres: Prescription) -> Tuple[int, Tuple[int, ...]]:
    """nu and the sorted prescribed indices i_0 < i_1 < ...

    nu counts the leading zero-prescribed values. When every value is zero
    nu = #I by convention and no i_nu exists, so Lambda_1 drops out.
    """
    if not pres.pairs:
        raise ValueError("prescription must be nonempty")
    idx = pres.indices
    nu = 0
    for val in pres.values:
        if val != 0:
            break
        nu += 1
    return nu, idx


def lambda0(n: int, m: int, pres: Prescription) -> float:
    """(-1/m) sum over zero-prescribed i_j with 8 i_j < m of q^(j-i_j) rho'((n-i_j)/m)."""
    nu, idx = nu_index(pres)
    q = pres.ctx.q
    tab = _table_for(n / m)
    total = 0.0
    for j in range(nu):
        i = idx[j]
        if 8 * i < m:
            total += q ** (j - i) * float(tab.rho_deriv((n - i) / m))
    return -total / m


def lambda1(n: int, m: int, pres: Prescription) -> float:
    """-(1/m) q^(nu-i_nu)/(q-1) rho'((n-i_nu)/m) when 8 i_nu < m, else 0."""
    nu, idx = nu_index(pres)
    if nu >= len(idx):
        return 0.0
    i = idx[nu]
    if 8 * i >= m:
        return 0.0
    q = pres.ctx.q
    tab = _table_for(n / m)
    return -(q ** (nu - i) / (q - 1)) * float(tab.rho_deriv((n - i) / m)) / m


@dataclass(frozen=True)
class PredictionReport:
    q: int
    n: int
    m: int
    prescription: Prescription
    variant: str
    u: float
    delta: float
    nu: Optional[int]
    main: float
    lambda0: float
    lambda1: float
    corrected: float
    exact: Optional[int]
    rel_err_main: Optional[float]
    rel_err_corrected: Optional[float]
    envelope: Dict[str, float]
    envelope_note: str
    in_range: bool
    extrapolation: bool

    def as_dict(self) -> Dict:
        d = {
            "q": self.q,
            "n": self.n,
            "m": self.m,
            "prescription": self.prescription.to_string(),
            "variant": self.variant,
            "u": self.u,
            "delta": self.delta,
            "nu": self.nu,
            "main": self.main,
            "lambda0": self.lambda0,
            "lambda1": self.lambda1,
            "corrected": self.corrected,
            "exact": self.exact,
            "rel_err_main": self.rel_err_main,
            "rel_err_corrected": self.rel_err_corrected,
            "envelope": dict(self.envelope),
            "envelope_note": self.envelope_note,
            "in_range": self.in_range,
            "extrapolation": self.extrapolation,
        }
        return d


def _envelope(
    variant: str, q: int, n: int, m: int, size: int, i0: int, main: float, eps: float
) -> Dict[str, float]:
    if size == 0:
        return {k: 0.0 for k in ("rel_delta_term", "rel_smooth_term", "abs_major_term", "abs_minor_term", "total_absolute")}
    u = n / m
    delta = size / n
    lu = math.log(u) if u > 1 else 0.0
    rel1 = (u * lu) ** 0.125 * abs(math.log(delta)) / (delta * q ** (0.5 / delta))
    saving = 1 if variant == "thm1" else i0 + 1
    rel2 = u**0.5 * lu**2.5 / (m * q**saving)
    abs1 = q ** (n - size) * q ** (-((1 - eps) * n + 2 * m) / 8 + 2)
    if variant == "thm2":
        abs1 *= math.exp(eps * (n - m))
    abs2 = m**2 * math.sqrt(n) * q ** ((7 * n + m + 4) / 8)
    return {
        "rel_delta_term": rel1,
        "rel_smooth_term": rel2,
        "abs_major_term": abs1,
        "abs_minor_term": abs2,
        "total_absolute": main * (rel1 + rel2) + abs1 + abs2,
    }


def predict(
    n: int,
    m: int,
    pres: Prescription,
    variant: str = "thm2",
    with_exact: bool = False,
    eps: float = 0.125,
    config: RunConfig = DEFAULT,
) -> PredictionReport:
    """Main and corrected predictors for #(S(n, m) with prescribed coefficients).

    variant "thm1" requires 0 in I with alpha_0 != 0 and reports
    corrected = main (corrections live in the envelope); "thm2" adds
    q^(n-#I) (Lambda_0 + Lambda_1). Both require delta = #I/n < 1/10.
    Outside n >= m >= sqrt(n log n) the report is flagged as extrapolation.
    """
    if variant not in ("thm1", "thm2"):
        raise ValueError(f"unknown variant {variant!r}")
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if pres.n != n:
        raise ValueError("prescription degree does not match n")
    if not 0 < eps < 0.25:
        raise ValueError("need 0 < eps < 1/4")
    q = pres.ctx.q
    size = pres.size
    if Fraction(size, n) >= Fraction(1, 10):
        raise ValueError("need #I < n/10")
    if variant == "thm1":
        vals = dict(pres.pairs)
        if vals.get(0, 0) == 0:
            raise ValueError("thm1 needs 0 in I with a nonzero prescribed value")
    u = n / m
    if n <= _EXACT_PSI_LIMIT:
        main = psi_exact(q, n, m) / q**size
    else:
        main = q**n * float(_table_for(u).rho(u)) / q**size
    if size and variant == "thm2":
        nu, idx = nu_index(pres)
        l0 = lambda0(n, m, pres)
        l1 = lambda1(n, m, pres)
        corrected = main + q ** (n - size) * (l0 + l1)
    else:
        nu = nu_index(pres)[0] if size else None
        l0 = l1 = 0.0
        corrected = main
    exact = None
    rem = rec = None
    if with_exact:
        exact = count_prescribed(n, m, pres, config=config).exact
        if exact:
            rem = abs(exact - main) / exact
            rec = abs(exact - corrected) / exact
    i0 = pres.indices[0] if size else 0
    env = _envelope(variant, q, n, m, size, i0, main, eps)
    in_range = n >= m and m * m >= n * math.log(n)
    return PredictionReport(
        q=q,
        n=n,
        m=m,
        prescription=pres,
        variant=variant,
        u=u,
        delta=size / n,
        nu=nu,
        main=main,
        lambda0=l0,
        lambda1=l1,
        corrected=corrected,
        exact=exact,
        rel_err_main=rem,
        rel_err_corrected=rec,
        envelope=env,
        envelope_note=ENVELOPE_NOTE,
        in_range=in_range,
        extrapolation=not in_range,
    )


def zero_prefix_exact(q_or_ctx, n: int, m: int, r: int) -> int:
    """#(S(n,m) with coefficients 0..r-1 all zero) = Psi(n-r, m), exactly.

    Such f factor as t^r h with h monic of degree n - r and the same
    smoothness bound (r < n keeps t's contribution within any m >= 1).
    """
    if not 1 <= r < n:
        raise ValueError("need 1 <= r < n")
    return psi_exact(q_or_ctx, n - r, m)


def prediction_grid(
    ctx,
    ns,
    ms,
    prescriptions,
    variant: str = "thm2",
    with_exact: bool = True,
    config: RunConfig = DEFAULT,
):
    """Reports for the cartesian grid; rows ordered (n, m, prescription)."""
    out = []
    for n in ns:
        for m in ms:
            for desc in prescriptions:
                pres = desc if isinstance(desc, Prescription) else Prescription.from_string(ctx, n, desc)
                out.append(predict(n, m, pres, variant, with_exact, config=config))
    return out
