"""FastAPI service exposing the library; the CLI is a thin client of this app."""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..balance import (balanced_modification, circumcenter, build_h_star,
                       is_balanced, is_locally_balanced, max_set)
from ..critical import MultiplierFn, type_report
from ..density import density_range
from ..errors import IndicatorLabError
from ..fixtures import fixture_multipliers, list_fixtures
from ..indicator import build_indicator, default_resolution
from ..measures import Order
from ..randomsets import (RandomSet, classify, empirical_density_table,
                          power_radii, randomize)
from . import schemas as S


def create_app() -> FastAPI:
    app = FastAPI(title="indicatorlab", version=__version__)

    @app.exception_handler(IndicatorLabError)
    async def _domain_error(request: Request, exc: IndicatorLabError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/fixtures", response_model=S.FixturesResponse)
    def fixtures():
        return S.FixturesResponse(fixtures=list_fixtures())

    @app.post("/indicator", response_model=S.IndicatorResponse)
    def indicator(req: S.IndicatorRequest):
        order = Order(req.rho)
        measure = req.measure.resolve(req.rho)
        h = build_indicator(measure, order, req.grid or default_resolution())
        moment = measure.rho_moment(order)
        return S.IndicatorResponse(
            rho=req.rho, total_mass=measure.total_mass,
            moment=(moment.real, moment.imag),
            theta=h.theta.tolist(), h=h.grid.tolist())

    @app.post("/balance", response_model=S.BalanceResponse)
    def balance(req: S.BalanceRequest):
        order = Order(req.rho)
        measure = req.measure.resolve(req.rho)
        h = build_indicator(measure, order, req.grid or default_resolution())
        h_hat, corr = balanced_modification(h)
        M = max_set(h_hat)
        balanced = is_balanced(M, order)
        loc, witness = is_locally_balanced(M, order)
        if order.is_integer:
            data = circumcenter(build_h_star(h), check=False)
            center = (data.center.real, data.center.imag)
            radius = data.radius
        else:
            center = (0.0, 0.0)
            radius = h_hat.refined_max()[1]
        return S.BalanceResponse(
            sigma_like_max=h_hat.refined_max()[1],
            circumcenter=center, circumradius=radius,
            balanced=balanced, locally_balanced=loc,
            witness=witness, max_set=[(s, e) for s, e in M.arcs])

    @app.post("/sigma", response_model=S.SigmaResponse)
    def sigma(req: S.SigmaRequest):
        order = Order(req.rho)
        measure = req.measure.resolve(req.rho)
        multipliers = []
        token = req.measure.fixture_token
        if token:
            multipliers.extend(fixture_multipliers(token, req.rho))
        if req.multiplier is not None:
            multipliers.append(MultiplierFn.from_dict(
                order, req.multiplier.model_dump()))
        report = type_report(measure, order, multipliers=multipliers,
                             resolution=req.grid or default_resolution())
        return S.SigmaResponse(
            sigma_z=report.sigma_z,
            sigma_u=(report.sigma_u_lower, report.sigma_u_upper),
            equality=report.equality, method_notes=report.method_notes)

    @app.post("/bounds", response_model=S.BoundsResponse)
    def bounds(req: S.BoundsRequest):
        order = Order(req.rho)
        rng = density_range(req.theorem, order, resolution=1024)
        return S.BoundsResponse(
            lower=rng.lower, upper=rng.upper,
            lower_measure=S.MeasureOut.from_measure(rng.lower_measure),
            upper_measure=S.MeasureOut.from_measure(rng.upper_measure),
            nodes=list(rng.nodes.nodes) if rng.nodes is not None else None,
            profile_theta=rng.lower_indicator.theta.tolist(),
            profile_h=rng.lower_indicator.grid.tolist())

    @app.post("/randomize", response_model=S.RandomizeResponse)
    def randomize_endpoint(req: S.RandomizeRequest):
        order = Order(req.rho)
        measure = req.measure.resolve(req.rho).normalized()
        radial = power_radii(order, req.density, req.count)
        rset = randomize(radial, measure, order, req.seed)
        return S.RandomizeResponse(moduli=rset.moduli.tolist(),
                                   arguments=rset.angles.tolist())

    @app.post("/classify", response_model=S.ClassifyResponse)
    def classify_endpoint(req: S.ClassifyRequest):
        order = Order(req.rho)
        measure = req.measure.resolve(req.rho)
        multipliers = []
        token = req.measure.fixture_token
        if token:
            multipliers = fixture_multipliers(token, req.rho)
        if req.normalize:
            mass = measure.total_mass
            measure = measure.normalized()
            multipliers = [k.scaled(1.0 / mass) for k in multipliers]
        result = classify(measure, order, req.density, multipliers=multipliers,
                          resolution=req.grid or default_resolution())
        return S.ClassifyResponse(
            density=result.density, sigma_z=result.sigma_z,
            sigma_u=(result.sigma_u_lower, result.sigma_u_upper),
            zero_verdict=result.zero_verdict,
            uniqueness_verdict=result.uniqueness_verdict,
            label=result.label, notes=result.notes)

    @app.post("/verify-density", response_model=S.VerifyDensityResponse)
    def verify_density(req: S.VerifyDensityRequest):
        order = Order(req.rho)
        measure = req.measure.resolve(req.rho).normalized()
        pts = np.asarray(req.points, dtype=float)
        rset = RandomSet(moduli=pts[:, 0], angles=pts[:, 1], seed=-1,
                         base_measure=measure, order=order, density=req.density)
        cells = empirical_density_table(rset, req.arcs, req.checkpoints)
        rows = [S.DensityRow(R=c.R, alpha=c.alpha, beta=c.beta, ratio=c.ratio,
                             predicted=c.predicted, deviation=c.deviation)
                for c in cells]
        return S.VerifyDensityResponse(rows=rows)

    return app


app = create_app()
