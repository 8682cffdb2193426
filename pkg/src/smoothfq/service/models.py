"""Request and response bodies for the HTTP surface.

Every response carries "schema": 1 (serialization alias of schema_version)
so scan outputs stay diffable across releases. Field elements are integers
in their base-p digit encoding; polynomials are comma-separated coefficient
strings, low degree first.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1


class _Response(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")


class ConfigOverrides(BaseModel):
    enumeration_budget: Optional[int] = None
    table_budget: Optional[int] = None
    poly_enum_budget: Optional[int] = None
    group_budget: Optional[int] = None
    dp_class_budget: Optional[int] = None
    tolerance: Optional[float] = None
    seed: Optional[int] = None
    workers: Optional[int] = None

    def apply(self, base):
        given = {k: v for k, v in self.model_dump().items() if v is not None}
        return replace(base, **given) if given else base


class CountRequest(BaseModel):
    field: str = "2"
    n: int
    m: int
    prescribe: str = ""
    method: str = "auto"  # auto | enumeration | dp | parseval | both
    config: Optional[ConfigOverrides] = None


class CountResponse(_Response):
    field: str
    n: int
    m: int
    prescription: str
    exact: int
    method: str
    seconds: float
    parseval: Optional[int] = None
    agree: Optional[bool] = None


class PredictRequest(BaseModel):
    field: str = "2"
    n: int
    m: int
    prescribe: str = ""
    variant: str = "thm2"
    with_exact: bool = False
    config: Optional[ConfigOverrides] = None


class PredictResponse(_Response):
    q: int
    n: int
    m: int
    prescription: str
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


class RhoRequest(BaseModel):
    u: float
    deriv: int = 0  # 0, 1, or 2


class RhoResponse(_Response):
    u: float
    deriv: int
    value: float
    error_estimate: float


class CharSumRequest(BaseModel):
    field: str = "2"
    ell: int
    g: str  # coefficients, low degree first
    exponents: List[int]
    kind: str = "irreducibles"  # irreducibles | smooth | monic
    n: int
    m: Optional[int] = None
    config: Optional[ConfigOverrides] = None


class CharSumResponse(_Response):
    kind: str
    n: int
    m: Optional[int]
    real: float
    imag: float
    magnitude: float


class LPolyRequest(BaseModel):
    field: str = "2"
    ell: int
    g: str
    exponents: List[int]
    config: Optional[ConfigOverrides] = None


class LPolyResponse(_Response):
    coefficients: List[List[float]]  # [re, im] pairs
    inverse_roots: List[List[float]]
    moduli: List[float]
    labels: List[str]
    unit_root_count: int
    at_most_one_unit_root: bool
    max_label_error: float


class VerifyRequest(BaseModel):
    suites: List[str] = []  # empty runs every suite
    small: bool = True
    seed: int = 0
    config: Optional[ConfigOverrides] = None


class CheckOut(BaseModel):
    name: str
    passed: bool
    details: str
    seconds: float


class VerifyResponse(_Response):
    passed: bool
    results: List[CheckOut]


class GaussRequest(BaseModel):
    field: str = "2"
    ell: int
    g: str
    b: str = "1"
    config: Optional[ConfigOverrides] = None


class GaussResponse(_Response):
    passed: bool
    lhs: float
    rhs: float


class ScanRequest(BaseModel):
    field: str = "2"
    ns: List[int]
    ms: List[int]
    prescriptions: List[str]
    variant: str = "thm2"
    with_exact: bool = True
    config: Optional[ConfigOverrides] = None


SCAN_COLUMNS = [
    "q", "n", "m", "prescription", "exact", "main", "corrected",
    "rel_err_main", "rel_err_corrected",
]


class ScanResponse(_Response):
    columns: List[str]
    rows: List[List[Any]]


class HealthResponse(_Response):
    status: str
    version: str
