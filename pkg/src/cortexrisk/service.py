"""Stateless JSON-over-HTTP API for scoring, simulation, and catalogue lookups.

Handlers are pure over immutable shared catalogues; no request mutates server
state, so arbitrary concurrency is safe. Every response carries
{engine_version, taxonomy_version}.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import resources
from ._version import ENGINE_VERSION
from .calibration import (
    MODIFIER_LETTERS,
    BandCatalogue,
    ModifierProfile,
)
from .reporting import simulation_to_json_doc
from .scoring import UtilityParams, WeightVector, score_group, score_values
from .simulation import PRESETS, SimulationConfig, run_monte_carlo
from .taxonomy import Taxonomy, VulnerabilityGroup, serialize_taxonomy

DEFAULT_SAMPLE_CEILING = 1_000_000


class ProfileBody(BaseModel):
    C: float
    G: float
    T: float
    E: float
    R: float


class WeightsBody(BaseModel):
    alpha: float
    gamma: float
    delta: float
    theta: float
    lambda_: float = Field(alias="lambda")
    rho: float

    model_config = {"populate_by_name": True}


class ScoreRequest(BaseModel):
    group_id: Optional[str] = None
    L: Optional[int] = None
    I: Optional[int] = None
    profile: Optional[ProfileBody] = None
    system_type: Optional[str] = None
    weights: Optional[WeightsBody] = None
    k: Optional[float] = None


class SimulationConfigBody(BaseModel):
    n_samples: int = 10_000
    seed: int = 0
    preset: str = "demo"
    percentiles: Optional[list[float]] = None


class SimulateRequest(ScoreRequest):
    config: SimulationConfigBody = SimulationConfigBody()


def _resolve_inputs(body: ScoreRequest, taxonomy: Taxonomy, catalogue: BandCatalogue):
    from .calibration import UnknownSystemTypeError, profile_for_system_type
    from .scoring import default_scoring_config

    defaults = default_scoring_config()
    try:
        if body.profile is not None:
            profile = ModifierProfile.from_letters(
                body.profile.model_dump(), provenance="request"
            )
        elif body.system_type:
            profile = profile_for_system_type(body.system_type, catalogue)
        else:
            profile = defaults.profile
        weights = (
            WeightVector.from_dict(body.weights.model_dump(by_alias=True))
            if body.weights is not None
            else defaults.weights
        )
        params = UtilityParams(k=body.k) if body.k is not None else defaults.params
    except UnknownSystemTypeError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))

    group = None
    if body.group_id:
        try:
            group = taxonomy.find_group(body.group_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown group {body.group_id!r}")
    elif body.L is None or body.I is None:
        raise HTTPException(
            status_code=400, detail="provide either group_id or both L and I"
        )
    return group, profile, weights, params


def _adhoc_group(L: int, I: int) -> VulnerabilityGroup:
    return VulnerabilityGroup(
        id=f"adhoc-L{L}-I{I}",
        name="ad hoc",
        domain="",
        incident_count=0,
        avid_refs=(),
        atlas_refs=(),
        oecd_anchor="",
        curated_likelihood=int(L),
        curated_impact=int(I),
        distinct=(),
    )


def create_app(
    taxonomy: Optional[Taxonomy] = None,
    catalogue: Optional[BandCatalogue] = None,
    sample_ceiling: int = DEFAULT_SAMPLE_CEILING,
    static_dir: Optional[str] = None,
) -> FastAPI:
    taxonomy = taxonomy if taxonomy is not None else resources.taxonomy()
    catalogue = catalogue if catalogue is not None else resources.band_catalogue()

    app = FastAPI(title="cortexrisk", version=ENGINE_VERSION)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in e["loc"] if p != "body"), "message": e["msg"]}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": errors})

    def versions() -> dict:
        return {
            "engine_version": ENGINE_VERSION,
            "taxonomy_version": taxonomy.source_version,
        }

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "engine_version": ENGINE_VERSION}

    @app.get("/v1/taxonomy")
    def get_taxonomy():
        doc = serialize_taxonomy(taxonomy)
        return {**versions(), "domains": doc["domains"], "groups": doc["groups"]}

    @app.post("/v1/score")
    def post_score(body: ScoreRequest):
        group, profile, weights, params = _resolve_inputs(body, taxonomy, catalogue)
        try:
            if group is not None:
                b = score_group(group, profile, weights, params)
            else:
                b = score_values(body.L, body.I, profile, weights, params)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            **versions(),
            "group_id": b.group_id,
            "likelihood": b.likelihood,
            "impact": b.impact,
            "severity": b.severity,
            "utility": b.utility,
            "weighted_terms": dict(b.weighted_terms),
            "composite": b.composite,
            "tier": b.tier.label,
        }

    @app.post("/v1/simulate")
    def post_simulate(body: SimulateRequest):
        group, profile, weights, params = _resolve_inputs(body, taxonomy, catalogue)
        cfg = body.config
        if cfg.n_samples > sample_ceiling:
            raise HTTPException(
                status_code=422,
                detail=f"n_samples {cfg.n_samples} exceeds the service ceiling {sample_ceiling}",
            )
        if cfg.preset not in PRESETS:
            raise HTTPException(
                status_code=400, detail=f"unknown preset {cfg.preset!r}; choose from {sorted(PRESETS)}"
            )
        try:
            config = SimulationConfig(
                n_samples=cfg.n_samples,
                seed=cfg.seed,
                percentiles=tuple(cfg.percentiles) if cfg.percentiles else (0.50, 0.90),
                distributions=PRESETS[cfg.preset],
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        target = group if group is not None else _adhoc_group(body.L, body.I)
        try:
            summary = run_monte_carlo(target, profile, weights, params, config)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        doc = simulation_to_json_doc([summary], taxonomy.source_version)
        return {**versions(), **doc["groups"][0]}

    @app.get("/v1/catalogue/bands")
    def get_bands(modifier: Optional[str] = None, framework: Optional[str] = None):
        if modifier is not None and modifier not in MODIFIER_LETTERS:
            raise HTTPException(
                status_code=400,
                detail=f"unknown modifier {modifier!r}; expected one of {list(MODIFIER_LETTERS)}",
            )
        bands = catalogue.bands
        if modifier is not None:
            bands = [b for b in bands if b.modifier == modifier]
        if framework is not None:
            fw = framework.strip().casefold()
            bands = [b for b in bands if b.framework.casefold() == fw]
        return {
            **versions(),
            "bands": [
                {
                    "modifier": b.modifier,
                    "framework": b.framework,
                    "classification": b.classification,
                    "ranges": [list(r) for r in b.ranges],
                    "notes": b.notes,
                }
                for b in bands
            ],
        }

    @app.get("/v1/catalogue/profiles")
    def get_profiles():
        return {
            **versions(),
            "profiles": [
                {
                    "system_type": p.system_type,
                    "display_name": p.display_name,
                    "profile": p.profile.as_letters(),
                    "framework_basis": p.framework_basis,
                }
                for p in catalogue.system_profiles
            ],
        }

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
