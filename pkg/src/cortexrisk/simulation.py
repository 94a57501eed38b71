"""Probabilistic propagation: seeded Monte Carlo over the composite pipeline.

Parameter priors (uniform bands on L/I, truncated normals on the modifiers)
are pushed through the deterministic scoring pipeline to produce percentile,
volatility, and per-channel sensitivity statistics.

Determinism contract: every random draw comes from a substream derived by
hashing (master seed, group id, parameter name), so results are a pure
function of (seed, config, inputs) under any worker count or schedule.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .calibration import MODIFIER_FIELDS, MODIFIER_LETTERS, ModifierProfile
from .scoring import (
    DEFAULT_UTILITY_PARAMS,
    DEFAULT_WEIGHTS,
    SEVERITY_DENOMINATOR,
    TierLabel,
    UtilityParams,
    WeightVector,
    assign_tier,
)
from .taxonomy import Taxonomy, VulnerabilityGroup
from .validation import check_positive, check_unit_interval

HISTOGRAM_BINS = 50
KDE_GRID_SIZE = 256
MIN_ACCEPTANCE = 1e-6

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / _SQRT2PI


def _Phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / _SQRT2))


def truncated_normal_std(mean: float, sigma: float, low: float = 0.0, high: float = 1.0) -> float:
    """Exact standard deviation of a normal truncated to [low, high]."""
    check_positive(sigma, "sigma")
    a = (low - mean) / sigma
    b = (high - mean) / sigma
    z = _Phi(b) - _Phi(a)
    if z <= 0.0:
        raise ValueError(f"truncation interval [{low}, {high}] has no mass for N({mean}, {sigma})")
    pa, pb = _phi(a), _phi(b)
    ratio = (pa - pb) / z
    variance = sigma * sigma * (1.0 + (a * pa - b * pb) / z - ratio * ratio)
    return math.sqrt(max(variance, 0.0))


def substream(seed: int, *labels: str) -> np.random.Generator:
    """Independent generator for one (seed, label-path) combination."""
    digest = hashlib.sha256("\x1f".join(labels).encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 8], "little") for i in range(0, 32, 8)]
    ss = np.random.SeedSequence(entropy=[int(seed) & 0xFFFFFFFFFFFFFFFF, *words])
    return np.random.default_rng(ss)


def sample_clamped_uniform(base: float, band: float, rng: np.random.Generator, size=None):
    """Uniform on [max(0, (1-band)*base), min(1, (1+band)*base)].

    A zero base degenerates the interval and the sample is exactly 0.
    """
    base = check_unit_interval(base, "base")
    lo = max(0.0, (1.0 - band) * base)
    hi = min(1.0, (1.0 + band) * base)
    if hi <= lo:
        return lo if size is None else np.full(size, lo)
    return rng.uniform(lo, hi, size)


def sample_relative_uniform(base: float, band: float, rng: np.random.Generator, size=None):
    """Uniform on [max(0, (1-band)*base), (1+band)*base]; no upper clamp.

    Clamping the interval at 1 would bias max-severity groups low and skew
    their upper percentiles; this variant keeps the band symmetric. The severity product may
    transiently exceed 1; the utility transform keeps composites in [0, 1].
    """
    if base < 0:
        raise ValueError(f"base must be non-negative, got {base}")
    lo = max(0.0, (1.0 - band) * base)
    hi = (1.0 + band) * base
    if hi <= lo:
        return lo if size is None else np.full(size, lo)
    return rng.uniform(lo, hi, size)


def sample_truncated_normal(mean: float, sigma: float, rng: np.random.Generator, size=None):
    """Normal(mean, sigma) conditioned on [0, 1] via rejection (exact truncation).

    Rejection, not clipping: clipping would pile point masses on the bounds
    and distort upper percentiles.
    """
    check_positive(sigma, "sigma")
    acceptance = _Phi((1.0 - mean) / sigma) - _Phi((0.0 - mean) / sigma)
    if acceptance < MIN_ACCEPTANCE:
        raise ValueError(
            f"truncated normal N({mean}, {sigma}) keeps only {acceptance:.2e} of its mass "
            f"in [0, 1]; refusing to sample (acceptance floor {MIN_ACCEPTANCE})"
        )
    scalar = size is None
    n = 1 if scalar else int(np.prod(size))
    out = rng.normal(mean, sigma, n)
    bad = (out < 0.0) | (out > 1.0)
    while bad.any():
        out[bad] = rng.normal(mean, sigma, int(bad.sum()))
        bad = (out < 0.0) | (out > 1.0)
    if scalar:
        return float(out[0])
    return out.reshape(size)


def percentile(samples: Sequence[float], q: float) -> float:
    """Linear interpolation between closest ranks (rank h = (n-1)*q)."""
    if not (0.0 < q < 1.0):
        raise ValueError(f"q must be in (0, 1), got {q}")
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("samples must be non-empty")
    return _percentile_sorted(np.sort(arr), q)


def _percentile_sorted(sorted_arr: np.ndarray, q: float) -> float:
    n = sorted_arr.size
    h = (n - 1) * q
    lo = int(math.floor(h))
    g = h - lo
    if lo + 1 >= n:
        return float(sorted_arr[-1])
    return float(sorted_arr[lo] + g * (sorted_arr[lo + 1] - sorted_arr[lo]))


# --- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class ParameterDistributions:
    """Sampling priors: relative band for L/I, (mean, sigma) truncated normals
    for the modifiers.

    Monte Carlo runs center each modifier on the active profile value and take
    the sigma from here; the means below document the distributions under the
    shipped default profile. ``clamp_li_to_unit`` switches the L/I sampler to
    the strict [0,1]-clamped interval variant.
    """

    li_band: float = 0.10
    modifier_dists: Mapping[str, tuple[float, float]] = field(
        default_factory=lambda: dict(DEMO_MODIFIER_DISTS)
    )
    clamp_li_to_unit: bool = False

    def __post_init__(self):
        if not (0.0 <= self.li_band < 1.0):
            raise ValueError(f"li_band must be in [0, 1), got {self.li_band}")
        dists = {}
        for letter in MODIFIER_LETTERS:
            if letter not in self.modifier_dists:
                raise ValueError(f"modifier_dists missing {letter}")
            mean, sigma = self.modifier_dists[letter]
            check_unit_interval(mean, f"{letter} mean")
            check_positive(sigma, f"{letter} sigma")
            dists[letter] = (float(mean), float(sigma))
        object.__setattr__(self, "modifier_dists", dists)

    def sigma(self, letter: str) -> float:
        return self.modifier_dists[letter][1]


DEMO_MODIFIER_DISTS = {
    "C": (0.70, 0.03),
    "G": (0.75, 0.02),
    "T": (0.60, 0.05),
    "E": (0.70, 0.03),
    "R": (0.60, 0.04),
}

LAYER5_MODIFIER_DISTS = dict(DEMO_MODIFIER_DISTS, R=(0.70, 0.05))

PRESETS = {
    "demo": ParameterDistributions(modifier_dists=DEMO_MODIFIER_DISTS),
    "layer5": ParameterDistributions(modifier_dists=LAYER5_MODIFIER_DISTS),
}


@dataclass(frozen=True)
class SimulationConfig:
    n_samples: int = 10_000
    seed: int = 0
    percentiles: tuple[float, ...] = (0.50, 0.90)
    distributions: ParameterDistributions = field(default_factory=lambda: PRESETS["demo"])

    def __post_init__(self):
        if int(self.n_samples) < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "seed", int(self.seed))
        for q in self.percentiles:
            if not (0.0 < q < 1.0):
                raise ValueError(f"percentiles must lie in (0, 1), got {q}")
        object.__setattr__(self, "percentiles", tuple(float(q) for q in self.percentiles))


# --- results -----------------------------------------------------------------


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class BoxStats:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    outliers: tuple[float, ...] = ()


@dataclass(frozen=True)
class KdeCurve:
    grid: tuple[float, ...]
    density: tuple[float, ...]


@dataclass(frozen=True)
class SimulationSummary:
    group_id: str
    n_samples: int
    seed: int
    mean: float
    p50: float
    p90: float
    std_dev: float
    histogram: Histogram
    box: BoxStats
    kde: KdeCurve
    tier_of_p50: TierLabel
    tier_of_p90: TierLabel
    extra_percentiles: Mapping[float, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SensitivityReport:
    """Per-channel volatility attribution over {utility, C, G, T, E, R}.

    ``analytic``: weight * truncated sigma per modifier plus alpha * std(U).
    ``empirical``: composite std with only that channel stochastic.
    ``shares``: empirical variance shares, summing to 1.
    """

    group_id: str
    analytic: Mapping[str, float]
    empirical: Mapping[str, float]
    shares: Mapping[str, float]


# --- engine ------------------------------------------------------------------


def _sample_severity(
    group: VulnerabilityGroup,
    dists: ParameterDistributions,
    seed: int,
    n: int,
) -> np.ndarray:
    sampler = sample_clamped_uniform if dists.clamp_li_to_unit else sample_relative_uniform
    base_l = group.curated_likelihood / 5.0
    base_i = group.curated_impact / 5.0
    l = sampler(base_l, dists.li_band, substream(seed, group.id, "L"), n)
    i = sampler(base_i, dists.li_band, substream(seed, group.id, "I"), n)
    return np.asarray(l) * np.asarray(i)


def _sample_modifiers(
    group_id: str,
    profile: ModifierProfile,
    dists: ParameterDistributions,
    seed: int,
    n: int,
) -> dict[str, np.ndarray]:
    out = {}
    for letter in MODIFIER_LETTERS:
        center = getattr(profile, MODIFIER_FIELDS[letter])
        sigma = dists.sigma(letter)
        rng = substream(seed, group_id, letter)
        out[letter] = sample_truncated_normal(center, sigma, rng, n)
    return out


def _compose(
    severity: np.ndarray,
    modifiers: Mapping[str, np.ndarray],
    weights: WeightVector,
    params: UtilityParams,
) -> tuple[np.ndarray, np.ndarray]:
    u = 1.0 - np.exp(-params.k * severity)
    comp = (
        weights.alpha * u
        + weights.gamma * modifiers["C"]
        + weights.delta * modifiers["G"]
        + weights.theta * modifiers["T"]
        + weights.lambda_ * modifiers["E"]
        + weights.rho * modifiers["R"]
    )
    return u, comp


def _silverman_bandwidth(samples: np.ndarray) -> float:
    n = samples.size
    if n < 2:
        return 0.0
    std = float(samples.std(ddof=1))
    iqr = float(np.subtract(*np.percentile(samples, [75, 25])))
    spread = min(std, iqr / 1.34) if iqr > 0 else std
    return 0.9 * spread * n ** (-0.2)


def _kde(samples: np.ndarray) -> KdeCurve:
    grid = np.linspace(0.0, 1.0, KDE_GRID_SIZE)
    h = _silverman_bandwidth(samples)
    if h <= 0.0:
        # degenerate sample set: represent as a unit spike at the nearest grid point
        density = np.zeros(KDE_GRID_SIZE)
        idx = int(round(float(samples[0]) * (KDE_GRID_SIZE - 1)))
        density[idx] = KDE_GRID_SIZE - 1.0
        return KdeCurve(grid=tuple(grid), density=tuple(density))
    density = np.empty(KDE_GRID_SIZE)
    norm = 1.0 / (samples.size * h * _SQRT2PI)
    for j, x in enumerate(grid):
        z = (x - samples) / h
        density[j] = norm * np.exp(-0.5 * z * z).sum()
    return KdeCurve(grid=tuple(grid), density=tuple(density))


def _box(sorted_comp: np.ndarray) -> BoxStats:
    q1 = _percentile_sorted(sorted_comp, 0.25)
    med = _percentile_sorted(sorted_comp, 0.50)
    q3 = _percentile_sorted(sorted_comp, 0.75)
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    outliers = sorted_comp[(sorted_comp < lo_fence) | (sorted_comp > hi_fence)]
    return BoxStats(
        minimum=float(sorted_comp[0]),
        q1=q1,
        median=med,
        q3=q3,
        maximum=float(sorted_comp[-1]),
        outliers=tuple(float(x) for x in outliers),
    )


def run_monte_carlo(
    group: VulnerabilityGroup,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
    params: UtilityParams = DEFAULT_UTILITY_PARAMS,
    config: SimulationConfig = SimulationConfig(),
) -> SimulationSummary:
    """Sample the composite-score distribution for one group."""
    n = config.n_samples
    severity = _sample_severity(group, config.distributions, config.seed, n)
    modifiers = _sample_modifiers(group.id, profile, config.distributions, config.seed, n)
    _, comp = _compose(severity, modifiers, weights, params)

    sorted_comp = np.sort(comp)
    p50 = _percentile_sorted(sorted_comp, 0.50)
    p90 = _percentile_sorted(sorted_comp, 0.90)
    extras = {
        q: _percentile_sorted(sorted_comp, q)
        for q in config.percentiles
        if q not in (0.50, 0.90)
    }
    counts, edges = np.histogram(comp, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
    return SimulationSummary(
        group_id=group.id,
        n_samples=n,
        seed=config.seed,
        mean=float(comp.mean()),
        p50=p50,
        p90=p90,
        std_dev=float(comp.std(ddof=1)) if n > 1 else 0.0,
        histogram=Histogram(edges=tuple(edges), counts=tuple(int(c) for c in counts)),
        box=_box(sorted_comp),
        kde=_kde(comp),
        tier_of_p50=assign_tier(p50),
        tier_of_p90=assign_tier(p90),
        extra_percentiles=extras,
    )


def sensitivity_analysis(
    group: VulnerabilityGroup,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
    params: UtilityParams = DEFAULT_UTILITY_PARAMS,
    config: SimulationConfig = SimulationConfig(),
) -> SensitivityReport:
    """Per-channel volatility attribution (analytic and one-at-a-time)."""
    n = config.n_samples
    dists = config.distributions
    w_by_letter = dict(
        zip(MODIFIER_LETTERS, (weights.gamma, weights.delta, weights.theta, weights.lambda_, weights.rho))
    )

    severity = _sample_severity(group, dists, config.seed, n)
    modifiers = _sample_modifiers(group.id, profile, dists, config.seed, n)
    u_samples, _ = _compose(severity, modifiers, weights, params)
    u_std = float(u_samples.std(ddof=1)) if n > 1 else 0.0

    analytic = {"utility": weights.alpha * u_std}
    for letter in MODIFIER_LETTERS:
        center = getattr(profile, MODIFIER_FIELDS[letter])
        analytic[letter] = w_by_letter[letter] * truncated_normal_std(center, dists.sigma(letter))

    # one-at-a-time: frozen channels sit at their deterministic centers, so
    # the composite keeps the same substream draws for the live channel
    frozen_overlay = sum(
        w_by_letter[letter] * getattr(profile, MODIFIER_FIELDS[letter])
        for letter in MODIFIER_LETTERS
    )
    base_severity = (group.curated_likelihood * group.curated_impact) / SEVERITY_DENOMINATOR
    base_utility = 1.0 - math.exp(-params.k * base_severity)

    empirical = {}
    comp_u = weights.alpha * u_samples + frozen_overlay
    empirical["utility"] = float(comp_u.std(ddof=1)) if n > 1 else 0.0
    for letter in MODIFIER_LETTERS:
        comp_m = (
            weights.alpha * base_utility
            + frozen_overlay
            + w_by_letter[letter] * (modifiers[letter] - getattr(profile, MODIFIER_FIELDS[letter]))
        )
        empirical[letter] = float(comp_m.std(ddof=1)) if n > 1 else 0.0

    total_var = sum(v * v for v in empirical.values())
    if total_var > 0:
        shares = {ch: (v * v) / total_var for ch, v in empirical.items()}
    else:
        shares = {ch: 0.0 for ch in empirical}
    return SensitivityReport(
        group_id=group.id, analytic=analytic, empirical=empirical, shares=shares
    )


def scorecard_simulation(
    taxonomy: Taxonomy,
    profile: ModifierProfile,
    weights: WeightVector = DEFAULT_WEIGHTS,
    params: UtilityParams = DEFAULT_UTILITY_PARAMS,
    config: SimulationConfig = SimulationConfig(),
    workers: int = 1,
) -> list[SimulationSummary]:
    """Monte Carlo for every taxonomy group, in taxonomy order.

    Group randomness derives from per-group substreams of the master seed, so
    any worker count yields identical output.
    """
    def one(group):
        return run_monte_carlo(group, profile, weights, params, config)

    if workers <= 1:
        return [one(g) for g in taxonomy.groups]
    with ThreadPoolExecutor(max_workers=int(workers)) as pool:
        return list(pool.map(one, taxonomy.groups))


class MonteCarloRiskSimulator(BaseEstimator):
    """sklearn-style wrapper: fit binds a taxonomy, transform returns the
    per-group [mean, p50, p90, std] matrix (taxonomy order).

    BaseEstimator only: TransformerMixin would wrap transform with a
    required X, but the simulator draws from the fitted taxonomy.
    """

    def __init__(self, n_samples=10_000, seed=0, preset="demo", modifiers=None,
                 weights=None, k=3.0, workers=1):
        self.n_samples = n_samples
        self.seed = seed
        self.preset = preset
        self.modifiers = modifiers
        self.weights = weights
        self.k = k
        self.workers = workers

    def fit(self, X: "Taxonomy | None" = None, y=None):
        from . import resources
        from .scoring import default_scoring_config

        self.taxonomy_ = X if X is not None else resources.taxonomy()
        defaults = default_scoring_config()
        if self.modifiers is None:
            self.profile_ = defaults.profile
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
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        self.config_ = SimulationConfig(
            n_samples=self.n_samples, seed=self.seed, distributions=PRESETS[self.preset]
        )
        self.utility_params_ = UtilityParams(k=float(self.k))
        return self

    def transform(self, X=None) -> np.ndarray:
        if not hasattr(self, "taxonomy_"):
            raise RuntimeError("simulator is not fitted; call fit() first")
        taxonomy = X if X is not None else self.taxonomy_
        self.summaries_ = scorecard_simulation(
            taxonomy,
            self.profile_,
            self.weights_,
            self.utility_params_,
            self.config_,
            workers=int(self.workers),
        )
        return np.array(
            [[s.mean, s.p50, s.p90, s.std_dev] for s in self.summaries_], dtype=float
        )
