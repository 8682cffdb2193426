"""HTTP surface over counting, prediction, characters, and verification.

All numeric work happens in the core modules; handlers only parse wire
formats and translate domain errors to 400s. The CLI mounts this app
in-process through an ASGI transport, so command behavior and server
behavior cannot drift apart.
"""

from __future__ import annotations

import functools

from fastapi import FastAPI, HTTPException

from .. import __version__
from .. import characters as ch
from .. import circle, verify
from ..config import DEFAULT, BudgetError
from ..counting import Prescription, count_prescribed
from ..dickman import default_table
from ..fields import parse_field_spec
from ..polys import Poly
from ..predict import predict
from . import models as M


def _config(ov):
    return ov.apply(DEFAULT) if ov is not None else DEFAULT


def _poly(ctx, s: str) -> Poly:
    return Poly.from_string(ctx, s)


def _domain_errors(fn):
    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, BudgetError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    return wrapped


def create_app() -> FastAPI:
    app = FastAPI(title="smoothfq", version=__version__)

    @app.get("/health", response_model=M.HealthResponse, response_model_by_alias=True)
    def health():
        return M.HealthResponse(status="ok", version=__version__)

    @app.post("/count", response_model=M.CountResponse, response_model_by_alias=True)
    @_domain_errors
    def count(req: M.CountRequest):
        ctx = parse_field_spec(req.field)
        cfg = _config(req.config)
        pres = Prescription.from_string(ctx, req.n, req.prescribe)
        if req.method == "both":
            rep = count_prescribed(req.n, req.m, pres, method="auto", config=cfg)
            pv = circle.parseval_count(req.n, req.m, pres, config=cfg)
            return M.CountResponse(
                field=req.field, n=req.n, m=req.m, prescription=pres.to_string(),
                exact=rep.exact, method=f"{rep.method}+parseval", seconds=rep.seconds,
                parseval=pv, agree=(pv == rep.exact))
        rep = count_prescribed(req.n, req.m, pres, method=req.method, config=cfg)
        return M.CountResponse(
            field=req.field, n=req.n, m=req.m, prescription=pres.to_string(),
            exact=rep.exact, method=rep.method, seconds=rep.seconds)

    @app.post("/predict", response_model=M.PredictResponse, response_model_by_alias=True)
    @_domain_errors
    def predict_endpoint(req: M.PredictRequest):
        ctx = parse_field_spec(req.field)
        cfg = _config(req.config)
        pres = Prescription.from_string(ctx, req.n, req.prescribe)
        rep = predict(req.n, req.m, pres, variant=req.variant,
                      with_exact=req.with_exact, config=cfg)
        d = rep.as_dict()
        return M.PredictResponse(**d)

    @app.post("/rho", response_model=M.RhoResponse, response_model_by_alias=True)
    @_domain_errors
    def rho(req: M.RhoRequest):
        tab = default_table(max(40.0, req.u + 2.0))
        if req.deriv == 0:
            value = float(tab.rho(req.u))
        elif req.deriv in (1, 2):
            value = float(tab.rho_deriv(req.u, req.deriv))
        else:
            raise ValueError("deriv must be 0, 1, or 2")
        return M.RhoResponse(u=req.u, deriv=req.deriv, value=value,
                             error_estimate=tab.error_estimate)

    @app.post("/charsum", response_model=M.CharSumResponse, response_model_by_alias=True)
    @_domain_errors
    def charsum(req: M.CharSumRequest):
        ctx = parse_field_spec(req.field)
        cfg = _config(req.config)
        group = ch.unit_group(req.ell, _poly(ctx, req.g), cfg)
        chi = ch.Character(group, tuple(req.exponents))
        if req.kind == "irreducibles":
            val = ch.char_sum_irreducibles(chi, req.n, cfg)
        elif req.kind == "smooth":
            if req.m is None:
                raise ValueError("smooth sums need m")
            val = ch.char_sum_smooth(chi, req.n, req.m, cfg)
        elif req.kind == "monic":
            val = ch.char_sum_monic(chi, req.n, cfg)
        else:
            raise ValueError(f"unknown kind {req.kind!r}")
        return M.CharSumResponse(kind=req.kind, n=req.n, m=req.m,
                                 real=val.real, imag=val.imag, magnitude=abs(val))

    @app.post("/lpoly", response_model=M.LPolyResponse, response_model_by_alias=True)
    @_domain_errors
    def lpoly(req: M.LPolyRequest):
        ctx = parse_field_spec(req.field)
        cfg = _config(req.config)
        group = ch.unit_group(req.ell, _poly(ctx, req.g), cfg)
        chi = ch.Character(group, tuple(req.exponents))
        rep = ch.l_poly(chi, cfg)
        return M.LPolyResponse(
            coefficients=[[c.real, c.imag] for c in rep.coefficients],
            inverse_roots=[[z.real, z.imag] for z in rep.inverse_roots],
            moduli=list(rep.moduli),
            labels=list(rep.labels),
            unit_root_count=rep.unit_root_count,
            at_most_one_unit_root=rep.at_most_one_unit_root,
            max_label_error=rep.max_label_error)

    @app.post("/verify", response_model=M.VerifyResponse, response_model_by_alias=True)
    @_domain_errors
    def verify_endpoint(req: M.VerifyRequest):
        cfg = _config(req.config)
        names = req.suites or list(verify.SUITES)
        unknown = [s for s in names if s not in verify.SUITES]
        if unknown:
            raise ValueError(f"unknown suites: {unknown}; known: {sorted(verify.SUITES)}")
        results = [verify.SUITES[s](small=req.small, seed=req.seed, config=cfg)
                   for s in names]
        return M.VerifyResponse(
            passed=all(r.passed for r in results),
            results=[M.CheckOut(name=r.name, passed=r.passed, details=r.details,
                                seconds=r.seconds) for r in results])

    @app.post("/gauss", response_model=M.GaussResponse, response_model_by_alias=True)
    @_domain_errors
    def gauss(req: M.GaussRequest):
        ctx = parse_field_spec(req.field)
        cfg = _config(req.config)
        ok, lhs, rhs = ch.gauss_identity_check(req.ell, _poly(ctx, req.g),
                                               _poly(ctx, req.b), cfg)
        return M.GaussResponse(passed=ok, lhs=lhs, rhs=rhs)

    @app.post("/scan", response_model=M.ScanResponse, response_model_by_alias=True)
    @_domain_errors
    def scan(req: M.ScanRequest):
        ctx = parse_field_spec(req.field)
        cfg = _config(req.config)
        rows = []
        for n in req.ns:
            for m in req.ms:
                for desc in req.prescriptions:
                    pres = Prescription.from_string(ctx, n, desc)
                    rep = predict(n, m, pres, variant=req.variant,
                                  with_exact=req.with_exact, config=cfg)
                    rows.append([ctx.q, n, m, pres.to_string(), rep.exact,
                                 rep.main, rep.corrected,
                                 rep.rel_err_main, rep.rel_err_corrected])
        return M.ScanResponse(columns=M.SCAN_COLUMNS, rows=rows)

    return app
