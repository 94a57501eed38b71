"""cortexrisk: five-layer AI-vulnerability risk scoring and simulation engine.

Library surface:

- taxonomy: load/validate the 7-domain, 29-group vulnerability taxonomy.
- calibration: likelihood thresholds, impact rules, modifier band catalogue.
- scoring: severity -> utility -> weighted composite -> tier (deterministic).
- simulation: seeded Monte Carlo with percentile/volatility/sensitivity stats.
- reporting: scorecards, risk registers, CSV/JSON exports.
- CompositeRiskScorer / MonteCarloRiskSimulator: sklearn-style estimators.
"""

from ._version import ENGINE_VERSION as __version__
from .calibration import (
    BandCatalogue,
    HarmCategory,
    ImpactRules,
    LikelihoodBands,
    ModifierBand,
    ModifierProfile,
    SystemTypeProfile,
    assign_impact,
    band_value,
    calibrate_likelihood,
    default_band_catalogue,
    default_impact_rules,
    default_likelihood_bands,
    likelihood_mismatches,
    profile_for_system_type,
    resolve_band,
)
from .reporting import (
    RiskRegisterEntry,
    Scorecard,
    build_risk_register,
    generate_scorecard,
    tier_summary,
)
from .scoring import (
    CompositeRiskScorer,
    ScoreBreakdown,
    TierLabel,
    UtilityParams,
    WeightVector,
    assign_tier,
    composite,
    normalize_severity,
    score_group,
    score_values,
    utility,
)
from .simulation import (
    MonteCarloRiskSimulator,
    ParameterDistributions,
    SensitivityReport,
    SimulationConfig,
    SimulationSummary,
    percentile,
    run_monte_carlo,
    sample_clamped_uniform,
    sample_relative_uniform,
    sample_truncated_normal,
    scorecard_simulation,
    sensitivity_analysis,
)
from .taxonomy import (
    DistinctVulnerability,
    DomainCategory,
    Taxonomy,
    VulnerabilityGroup,
    groups_by_domain,
    load_taxonomy,
    validate_taxonomy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
