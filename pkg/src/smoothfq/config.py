"""Run-wide configuration: budgets, tolerances, determinism knobs.

Every expensive operation checks a budget before starting so a typo in a CLI
argument fails fast instead of grinding. Budgets can be overridden per call,
per RunConfig, or globally through the SMOOTHFQ_BUDGET environment variable
(which scales the enumeration budget only).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field


def _env_budget(default: int) -> int:
    raw = os.environ.get("SMOOTHFQ_BUDGET", "")
    if not raw:
        return default
    try:
        return int(float(raw))
    except ValueError:
        return default


@dataclass
class RunConfig:
    """Knobs shared by counting, character, and verification code.

    enumeration_budget   max completions / smoothness tests a brute-force
                         count may perform (spec of the count operations)
    table_budget         max q^n for which a whole degree-n stratum is
                         classified by the vectorized sieve
    poly_enum_budget     max q^n for enumerate_irreducibles
    group_budget         max unit-group order q^l * Phi(g)
    dp_class_budget      max residue classes q^r in the prescribed-count DP
    tolerance            absolute tolerance for complex identity checks
    seed                 seed for every sampled check; fixed seed means
                         byte-identical output
    workers              parallelism width for enumeration chunks; totals are
                         reduced in block order, so results do not depend on it
    """

    enumeration_budget: int = field(default_factory=lambda: _env_budget(10**8))
    table_budget: int = 3 * 10**7
    poly_enum_budget: int = 10**7
    group_budget: int = 10**5
    dp_class_budget: int = 10**5
    tolerance: float = 1e-9
    seed: int = 0
    workers: int = 1


DEFAULT = RunConfig()


class BudgetError(ValueError):
    """Raised when an operation would exceed its configured budget."""
