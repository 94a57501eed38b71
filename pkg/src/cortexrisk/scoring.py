"""Deterministic scoring pipeline: severity normalization, exponential utility
transform, weighted composite overlay, and tier classification.

All operations are pure functions; ``CompositeRiskScorer`` wraps the pipeline
in an sklearn-style transformer so it plugs into the wider ecosystem.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Mapping, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .calibration import ModifierProfile
from .taxonomy import VulnerabilityGroup
from .validation import (
    PackError,
    check_li_matrix,
    check_positive,
    check_score_scale,
    check_unit_interval,
    check_weight_sum,
)

SEVERITY_DENOMINATOR = 25  # max L*I on the 0-5 scales

#: Composite-term order. Composite is the plain left-to-right sum of these
#: terms, with no re-rounding anywhere in the pipeline.
TERM_ORDER = ("utility", "context", "governance", "technical", "exposure", "residual")


@dataclass(frozen=True)
class UtilityParams:
    """Curvature of the risk-averse utility transform. Higher k amplifies
    high-severity combinations more aggressively."""

    k: float = 3.0

    def __post_init__(self):
        check_positive(self.k, "k")


@dataclass(frozen=True)
class WeightVector:
    """Composite weights on (U, C, G, T, E, R); must lie on the probability simplex."""

    alpha: float = 0.35
    gamma: float = 0.15
    delta: float = 0.15
    theta: float = 0.10
    lambda_: float = 0.10
    rho: float = 0.15

    def __post_init__(self):
        check_weight_sum(self.as_tuple())

    def as_tuple(self) -> tuple[float, ...]:
        return (self.alpha, self.gamma, self.delta, self.theta, self.lambda_, self.rho)

    def as_dict(self) -> dict[str, float]:
        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "delta": self.delta,
            "theta": self.theta,
            "lambda": self.lambda_,
            "rho": self.rho,
        }

    def modifier_weights(self) -> dict[str, float]:
        """Descriptive-name view of the five modifier weights."""
        return {
            "context": self.gamma,
            "governance": self.delta,
            "technical": self.theta,
            "exposure": self.lambda_,
            "residual": self.rho,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "WeightVector":
        kwargs = {}
        for key, value in d.items():
            attr = "lambda_" if key == "lambda" else key
            if attr not in ("alpha", "gamma", "delta", "theta", "lambda_", "rho"):
                raise ValueError(f"unknown weight {key!r}")
            kwargs[attr] = float(value)
        return cls(**kwargs)


DEFAULT_WEIGHTS = WeightVector()
DEFAULT_UTILITY_PARAMS = UtilityParams()


class TierLabel(Enum):
    """Classification bands on the unrounded composite. Boundaries belong to
    the higher tier, closing the gap Table-style rounded bounds would leave."""

    CRITICAL = ("Critical", 0.85, 1.0)
    HIGH = ("High", 0.70, 0.85)
    MODERATE = ("Moderate", 0.50, 0.70)
    LOW = ("Low", 0.30, 0.50)
    MINIMAL = ("Minimal", 0.0, 0.30)

    def __init__(self, label: str, lower: float, upper: float):
        self.label = label
        self.lower = lower
        self.upper = upper

    def __str__(self) -> str:
        return self.label

    @classmethod
    def from_name(cls, label: str) -> "TierLabel":
        for tier in cls:
            if tier.label.casefold() == label.casefold():
                return tier
        raise ValueError(f"unknown tier {label!r}")


def normalize_severity(likelihood: int, impact: int) -> float:
    """(L*I)/25: the unit-scaled severity product."""
    L = check_score_scale(likelihood, "likelihood")
    I = check_score_scale(impact, "impact")
    return (L * I) / SEVERITY_DENOMINATOR


def utility(severity: float, params: UtilityParams = DEFAULT_UTILITY_PARAMS) -> float:
    """Concave bounded amplification 1 - exp(-k*severity); 0 iff severity is 0."""
    severity = check_unit_interval(severity, "severity")
    return 1.0 - math.exp(-params.k * severity)


def _terms(
    utility_value: float, profile: ModifierProfile, weights: WeightVector
) -> dict[str, float]:
    return {
        "utility": weights.alpha * utility_value,
        "context": weights.gamma * profile.context,
        "governance": weights.delta * profile.governance,
        "technical": weights.theta * profile.technical,
        "exposure": weights.lambda_ * profile.exposure,
        "residual": weights.rho * profile.residual,
    }


def composite(
    utility_value: float,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
) -> float:
    """Weighted overlay of the utility core and the five modifiers."""
    check_unit_interval(utility_value, "utility")
    total = 0.0
    for term in _terms(utility_value, profile, weights).values():
        total += term
    return total


def assign_tier(composite_score: float) -> TierLabel:
    """The unique tier band containing the unrounded composite."""
    score = check_unit_interval(composite_score, "composite")
    for tier in (TierLabel.CRITICAL, TierLabel.HIGH, TierLabel.MODERATE, TierLabel.LOW):
        if score >= tier.lower:
            return tier
    return TierLabel.MINIMAL


@dataclass(frozen=True)
class ScoreBreakdown:
    """Every intermediate value of one group's deterministic scoring pass."""

    group_id: str
    likelihood: int
    impact: int
    severity: float
    utility: float
    weighted_terms: dict[str, float] = field(compare=True)
    composite: float = 0.0
    tier: TierLabel = TierLabel.MINIMAL

    @property
    def severity_points(self) -> int:
        return self.likelihood * self.impact


def score_values(
    likelihood: int,
    impact: int,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
    params: UtilityParams = DEFAULT_UTILITY_PARAMS,
    group_id: str = "",
) -> ScoreBreakdown:
    """Chain severity -> utility -> composite -> tier for explicit L/I values."""
    severity = normalize_severity(likelihood, impact)
    u = utility(severity, params)
    terms = _terms(u, profile, weights)
    total = 0.0
    for term in terms.values():
        total += term
    return ScoreBreakdown(
        group_id=group_id,
        likelihood=int(likelihood),
        impact=int(impact),
        severity=severity,
        utility=u,
        weighted_terms=terms,
        composite=total,
        tier=assign_tier(total),
    )


def score_group(
    group: VulnerabilityGroup,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
    params: UtilityParams = DEFAULT_UTILITY_PARAMS,
    likelihood: "int | None" = None,
    impact: "int | None" = None,
) -> ScoreBreakdown:
    """Score one taxonomy group using its curated L/I (or supplied overrides)."""
    L = group.curated_likelihood if likelihood is None else likelihood
    I = group.curated_impact if impact is None else impact
    return score_values(L, I, profile, weights, params, group_id=group.id)


# --- configuration file ({weights, modifiers, k}) ---------------------------

Source = Union[str, os.PathLike, IO[str], IO[bytes]]


@dataclass(frozen=True)
class ScoringConfig:
    weights: WeightVector
    profile: ModifierProfile
    params: UtilityParams


def load_scoring_config(source: Source) -> ScoringConfig:
    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackError(f"scoring config is not valid JSON: {exc}") from exc
    try:
        weights = WeightVector.from_dict(doc["weights"])
        profile = ModifierProfile.from_letters(doc["modifiers"], provenance="config file")
        params = UtilityParams(k=float(doc.get("k", 3.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise PackError(f"scoring config malformed: {exc}") from exc
    return ScoringConfig(weights=weights, profile=profile, params=params)


def default_scoring_config() -> ScoringConfig:
    from . import resources

    return resources.scoring_defaults()


# --- sklearn-style surface ---------------------------------------------------


class CompositeRiskScorer(BaseEstimator, TransformerMixin):
    """Transformer over (likelihood, impact) rows.

    Parameters mirror the scoring configuration: ``modifiers`` is a
    {C,G,T,E,R} mapping, ``weights`` an {alpha..rho} mapping, ``k`` the
    utility curvature. ``transform`` returns columns
    [severity, utility, composite]; ``predict`` returns tier labels.
    """

    def __init__(self, modifiers=None, weights=None, k=3.0):
        self.modifiers = modifiers
        self.weights = weights
        self.k = k

    def fit(self, X=None, y=None):
        if self.modifiers is None:
            self.profile_ = default_scoring_config().profile
        elif isinstance(self.modifiers, ModifierProfile):
            self.profile_ = self.modifiers
        else:
            self.profile_ = ModifierProfile.from_letters(self.modifiers)
        if self.weights is None:
            self.weights_ = DEFAULT_WEIGHTS
        elif isinstance(self.weights, WeightVector):
            self.weights_ = self.weights
        else:
            self.weights_ = WeightVector.from_dict(self.weights)
        self.utility_params_ = UtilityParams(k=float(self.k))
        if X is not None:
            check_li_matrix(X)
        return self

    def _check_fitted(self):
        if not hasattr(self, "profile_"):
            raise RuntimeError("scorer is not fitted; call fit() first")

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        arr = check_li_matrix(X)
        severity = arr[:, 0] * arr[:, 1] / SEVERITY_DENOMINATOR
        u = 1.0 - np.exp(-self.utility_params_.k * severity)
        overlay = sum(
            w * getattr(self.profile_, name)
            for name, w in self.weights_.modifier_weights().items()
        )
        comp = self.weights_.alpha * u + overlay
        return np.column_stack([severity, u, comp])

    def predict(self, X) -> np.ndarray:
        comp = self.transform(X)[:, 2]
        return np.array([assign_tier(float(c)).label for c in comp], dtype=object)
