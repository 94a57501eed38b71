"""Scorecards, risk registers, and machine-readable exports.

Unrounded values flow through the whole pipeline; rounding to three decimals
(half-up) happens only here, at presentation time. JSON documents keep full
precision so re-importing reproduces the in-memory document; CSV carries the
3-d.p. display rendering and round-trips byte-identically.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import IO, Mapping, Sequence, Union

from ._version import ENGINE_VERSION
from .calibration import ModifierProfile
from .scoring import (
    DEFAULT_UTILITY_PARAMS,
    DEFAULT_WEIGHTS,
    TierLabel,
    UtilityParams,
    WeightVector,
    assign_tier,
    score_group,
)
from .simulation import BoxStats, Histogram, KdeCurve, SimulationSummary
from .taxonomy import Taxonomy

ORDERINGS = ("taxonomy", "composite")


def round_half_up(value: float, places: int = 3) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def display_3dp(value: float) -> str:
    quantum = Decimal("0.001")
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ScorecardRow:
    group_id: str
    name: str
    domain: str
    likelihood: int
    impact: int
    severity_points: int
    utility: float
    composite: float
    tier: TierLabel


@dataclass(frozen=True)
class ScorecardMetadata:
    taxonomy_version: str
    engine_version: str
    profile_name: str
    weights: Mapping[str, float]
    modifiers: Mapping[str, float]
    k: float
    timestamp: str
    ordering: str = "taxonomy"


@dataclass(frozen=True)
class Scorecard:
    metadata: ScorecardMetadata
    rows: tuple[ScorecardRow, ...]


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def generate_scorecard(
    taxonomy: Taxonomy,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
    params: UtilityParams = DEFAULT_UTILITY_PARAMS,
    order: str = "taxonomy",
    profile_name: str = "custom",
    timestamp: "str | None" = None,
) -> Scorecard:
    """Score every group; rows in pack order or by descending composite."""
    if order not in ORDERINGS:
        raise ValueError(f"order must be one of {ORDERINGS}, got {order!r}")
    rows = []
    for g in taxonomy.groups:
        b = score_group(g, profile, weights, params)
        rows.append(
            ScorecardRow(
                group_id=g.id,
                name=g.name,
                domain=taxonomy.domain(g.domain).name,
                likelihood=b.likelihood,
                impact=b.impact,
                severity_points=b.severity_points,
                utility=b.utility,
                composite=b.composite,
                tier=b.tier,
            )
        )
    if order == "composite":
        rows.sort(key=lambda r: -r.composite)
    meta = ScorecardMetadata(
        taxonomy_version=taxonomy.source_version,
        engine_version=ENGINE_VERSION,
        profile_name=profile_name,
        weights=weights.as_dict(),
        modifiers=profile.as_letters(),
        k=params.k,
        timestamp=timestamp if timestamp is not None else _utc_now(),
        ordering=order,
    )
    return Scorecard(metadata=meta, rows=tuple(rows))


def tier_summary(scorecard: Scorecard) -> dict[str, int]:
    """Row counts per tier; counts sum to the number of rows."""
    counts = {tier.label: 0 for tier in TierLabel}
    for row in scorecard.rows:
        counts[row.tier.label] += 1
    return counts


# --- JSON documents ----------------------------------------------------------


def scorecard_to_json_doc(scorecard: Scorecard) -> dict:
    m = scorecard.metadata
    return {
        "document": "scorecard",
        "metadata": {
            "taxonomy_version": m.taxonomy_version,
            "engine_version": m.engine_version,
            "profile_name": m.profile_name,
            "weights": dict(m.weights),
            "modifiers": dict(m.modifiers),
            "k": m.k,
            "timestamp": m.timestamp,
            "ordering": m.ordering,
        },
        "rows": [
            {
                "group_id": r.group_id,
                "name": r.name,
                "domain": r.domain,
                "likelihood": r.likelihood,
                "impact": r.impact,
                "severity_points": r.severity_points,
                "utility": r.utility,
                "composite": r.composite,
                "tier": r.tier.label,
            }
            for r in scorecard.rows
        ],
    }


def scorecard_from_json_doc(doc: Mapping) -> Scorecard:
    m = doc["metadata"]
    meta = ScorecardMetadata(
        taxonomy_version=m["taxonomy_version"],
        engine_version=m["engine_version"],
        profile_name=m["profile_name"],
        weights=dict(m["weights"]),
        modifiers=dict(m["modifiers"]),
        k=float(m["k"]),
        timestamp=m["timestamp"],
        ordering=m.get("ordering", "taxonomy"),
    )
    rows = tuple(
        ScorecardRow(
            group_id=r["group_id"],
            name=r["name"],
            domain=r["domain"],
            likelihood=int(r["likelihood"]),
            impact=int(r["impact"]),
            severity_points=int(r["severity_points"]),
            utility=float(r["utility"]),
            composite=float(r["composite"]),
            tier=TierLabel.from_name(r["tier"]),
        )
        for r in doc["rows"]
    )
    return Scorecard(metadata=meta, rows=rows)


def simulation_to_json_doc(
    summaries: Sequence[SimulationSummary],
    taxonomy_version: str,
    parameters: "Mapping | None" = None,
) -> dict:
    return {
        "document": "simulation",
        "engine_version": ENGINE_VERSION,
        "taxonomy_version": taxonomy_version,
        "parameters": dict(parameters or {}),
        "groups": [
            {
                "group_id": s.group_id,
                "n_samples": s.n_samples,
                "seed": s.seed,
                "mean": s.mean,
                "p50": s.p50,
                "p90": s.p90,
                "std": s.std_dev,
                "histogram": {"edges": list(s.histogram.edges), "counts": list(s.histogram.counts)},
                "box": {
                    "min": s.box.minimum,
                    "q1": s.box.q1,
                    "med": s.box.median,
                    "q3": s.box.q3,
                    "max": s.box.maximum,
                    "outliers": list(s.box.outliers),
                },
                "kde": {"grid": list(s.kde.grid), "density": list(s.kde.density)},
                "tiers": {"p50": s.tier_of_p50.label, "p90": s.tier_of_p90.label},
                "extra_percentiles": {str(q): v for q, v in s.extra_percentiles.items()},
            }
            for s in summaries
        ],
    }


def simulation_from_json_doc(doc: Mapping) -> list[SimulationSummary]:
    out = []
    for g in doc["groups"]:
        out.append(
            SimulationSummary(
                group_id=g["group_id"],
                n_samples=int(g["n_samples"]),
                seed=int(g["seed"]),
                mean=float(g["mean"]),
                p50=float(g["p50"]),
                p90=float(g["p90"]),
                std_dev=float(g["std"]),
                histogram=Histogram(
                    edges=tuple(g["histogram"]["edges"]),
                    counts=tuple(int(c) for c in g["histogram"]["counts"]),
                ),
                box=BoxStats(
                    minimum=float(g["box"]["min"]),
                    q1=float(g["box"]["q1"]),
                    median=float(g["box"]["med"]),
                    q3=float(g["box"]["q3"]),
                    maximum=float(g["box"]["max"]),
                    outliers=tuple(float(x) for x in g["box"].get("outliers", [])),
                ),
                kde=KdeCurve(
                    grid=tuple(g["kde"]["grid"]), density=tuple(g["kde"]["density"])
                ),
                tier_of_p50=TierLabel.from_name(g["tiers"]["p50"]),
                tier_of_p90=TierLabel.from_name(g["tiers"]["p90"]),
                extra_percentiles={
                    float(q): float(v) for q, v in g.get("extra_percentiles", {}).items()
                },
            )
        )
    return out


# --- CSV ---------------------------------------------------------------------

SCORECARD_CSV_COLUMNS = (
    "group_id",
    "name",
    "domain",
    "likelihood",
    "impact",
    "severity_points",
    "utility",
    "composite",
    "tier",
)

SIMULATION_CSV_COLUMNS = (
    "group_id",
    "n_samples",
    "seed",
    "mean",
    "p50",
    "p90",
    "std",
    "tier_p50",
    "tier_p90",
)


def scorecard_to_csv(scorecard: Scorecard) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(SCORECARD_CSV_COLUMNS)
    for r in scorecard.rows:
        writer.writerow(
            [
                r.group_id,
                r.name,
                r.domain,
                r.likelihood,
                r.impact,
                r.severity_points,
                display_3dp(r.utility),
                display_3dp(r.composite),
                r.tier.label,
            ]
        )
    return buf.getvalue()


def scorecard_from_csv(text: str) -> Scorecard:
    """Parse the CSV rendering back into a (display-precision) scorecard."""
    reader = csv.reader(io.StringIO(text))
    rows_in = list(reader)
    if not rows_in or tuple(rows_in[0]) != SCORECARD_CSV_COLUMNS:
        raise ValueError("not a scorecard CSV (bad header)")
    rows = tuple(
        ScorecardRow(
            group_id=r[0],
            name=r[1],
            domain=r[2],
            likelihood=int(r[3]),
            impact=int(r[4]),
            severity_points=int(r[5]),
            utility=float(r[6]),
            composite=float(r[7]),
            tier=TierLabel.from_name(r[8]),
        )
        for r in rows_in[1:]
    )
    meta = ScorecardMetadata(
        taxonomy_version="",
        engine_version=ENGINE_VERSION,
        profile_name="csv-import",
        weights={},
        modifiers={},
        k=float("nan"),
        timestamp="",
    )
    return Scorecard(metadata=meta, rows=rows)


def simulation_to_csv(summaries: Sequence[SimulationSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(SIMULATION_CSV_COLUMNS)
    for s in summaries:
        writer.writerow(
            [
                s.group_id,
                s.n_samples,
                s.seed,
                repr(s.mean),
                repr(s.p50),
                repr(s.p90),
                repr(s.std_dev),
                s.tier_of_p50.label,
                s.tier_of_p90.label,
            ]
        )
    return buf.getvalue()


# --- generic export ----------------------------------------------------------

Sink = Union[str, os.PathLike, IO[str]]


def export(document: Union[dict, str], sink: Sink) -> None:
    """Write a JSON document (dict) or pre-rendered text (CSV) to a path or stream."""
    text = (
        json.dumps(document, ensure_ascii=False, indent=2) + "\n"
        if isinstance(document, dict)
        else document
    )
    if isinstance(sink, (str, os.PathLike)):
        Path(sink).write_text(text, encoding="utf-8", newline="")
    else:
        sink.write(text)


def export_document(
    payload: "Scorecard | Sequence[SimulationSummary]",
    format: str,
    sink: Sink,
    taxonomy_version: str = "",
    parameters: "Mapping | None" = None,
) -> None:
    """Render a scorecard or simulation summaries to CSV/JSON on a sink."""
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    if isinstance(payload, Scorecard):
        rendered = (
            scorecard_to_csv(payload) if format == "csv" else scorecard_to_json_doc(payload)
        )
    else:
        summaries = list(payload)
        rendered = (
            simulation_to_csv(summaries)
            if format == "csv"
            else simulation_to_json_doc(summaries, taxonomy_version, parameters)
        )
    export(rendered, sink)


# --- risk register -----------------------------------------------------------


@dataclass(frozen=True)
class RiskRegisterEntry:
    group_id: str
    composite: float
    tier: TierLabel
    p50: float
    p90: float
    std_dev: float
    classification_note: str = ""

    def __post_init__(self):
        if self.tier is not assign_tier(self.composite):
            raise ValueError(
                f"tier {self.tier.label} inconsistent with composite {self.composite}"
            )


def build_risk_register(
    scorecard: Scorecard,
    summaries: Sequence[SimulationSummary],
    notes: "Mapping[str, str] | None" = None,
) -> list[RiskRegisterEntry]:
    """Join deterministic and simulated results; notes are analyst-supplied text."""
    notes = dict(notes or {})
    by_id = {s.group_id: s for s in summaries}
    entries = []
    for row in scorecard.rows:
        s = by_id.get(row.group_id)
        if s is None:
            raise KeyError(f"no simulation summary for group {row.group_id!r}")
        entries.append(
            RiskRegisterEntry(
                group_id=row.group_id,
                composite=row.composite,
                tier=row.tier,
                p50=s.p50,
                p90=s.p90,
                std_dev=s.std_dev,
                classification_note=notes.get(row.group_id, ""),
            )
        )
    return entries
