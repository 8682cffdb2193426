"""Counting m-smooth monic polynomials over F_q with prescribed coefficients.

Core layers:

    fields / polys / sieve   F_q arithmetic, F_q[t] scalar ops, vectorized
                             stratum classification
    laurent                  the torus of Laurent series at infinity, e(xi),
                             Dirichlet approximation
    dickman                  the Dickman rho function and derivatives
    counting                 exact smooth counts (Euler product, sieve, DP)
    characters               Hayes characters, L-polynomials, Gauss/Ramanujan
    circle                   exponential sums over smooth sets, Parseval
                             counting, arc classification
    predict                  rho-based predictions with correction terms
    verify                   the named verification suites

The FastAPI service (smoothfq.service) wraps these, and the CLI
(smoothfq.cli) is a thin client for the service.
"""

from .config import DEFAULT, BudgetError, RunConfig
from .fields import FieldCtx, field_make, parse_field_spec
from .polys import Poly

__all__ = [
    "DEFAULT",
    "BudgetError",
    "RunConfig",
    "FieldCtx",
    "field_make",
    "parse_field_spec",
    "Poly",
]

__version__ = "0.1.0"
