"""Likelihood/impact calibration and the contextual-modifier banding catalogue.

Likelihood scores derive from incident-count thresholds, impact scores from
harm-category rules, and modifier values from per-framework bands or
system-type default profiles. All catalogues are immutable after load and
every operation here is a pure function.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence, Union

from .validation import PackError, check_unit_interval


class HarmCategory(str, Enum):
    PII_LEAKAGE = "pii-leakage"
    PHYSICAL_SAFETY = "physical-safety"
    REGULATORY_BREACH = "regulatory-breach"
    SECURITY_COMPROMISE = "security-compromise"
    REPUTATIONAL_DAMAGE = "reputational-damage"
    SYSTEMIC_MISINFORMATION = "systemic-misinformation"
    HALLUCINATION = "hallucination"
    OVERTRUST = "overtrust"
    QUALITY_DRIFT = "quality-drift"
    PROTOTYPE_ISSUE = "prototype-issue"
    INTERNAL_DRIFT = "internal-drift"
    RESEARCH_ARTIFACT = "research-artifact"


MODIFIER_LETTERS = ("C", "G", "T", "E", "R")

#: Wire/CLI letter -> descriptive field name used throughout the library.
MODIFIER_FIELDS = {
    "C": "context",
    "G": "governance",
    "T": "technical",
    "E": "exposure",
    "R": "residual",
}


@dataclass(frozen=True)
class LikelihoodBands:
    """Five descending incident-count cut points mapping counts to scores 5..1.

    Counts below the lowest cut point score 0.
    """

    t5: int
    t4: int
    t3: int
    t2: int
    t1: int

    def __post_init__(self):
        cuts = (self.t5, self.t4, self.t3, self.t2, self.t1)
        if any(not isinstance(c, int) or isinstance(c, bool) for c in cuts):
            raise ValueError(f"thresholds must be integers, got {cuts}")
        if not (self.t5 > self.t4 > self.t3 > self.t2 > self.t1 >= 1):
            raise ValueError(f"thresholds must be strictly descending with t1 >= 1, got {cuts}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "LikelihoodBands":
        try:
            return cls(*(int(mapping[str(s)]) for s in (5, 4, 3, 2, 1)))
        except KeyError as exc:
            raise PackError(f"likelihood_thresholds missing score {exc}") from exc


@dataclass(frozen=True)
class ImpactRules:
    """Harm-category tag -> impact score 1..5."""

    mapping: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        for tag, score in self.mapping.items():
            if not (1 <= int(score) <= 5):
                raise ValueError(f"impact for tag {tag!r} must be 1..5, got {score}")


@dataclass(frozen=True)
class ModifierBand:
    modifier: str
    framework: str
    classification: str
    ranges: tuple[tuple[float, float], ...]
    notes: str = ""

    def __post_init__(self):
        if self.modifier not in MODIFIER_LETTERS:
            raise ValueError(f"modifier must be one of {MODIFIER_LETTERS}, got {self.modifier!r}")
        ranges = tuple((float(lo), float(hi)) for lo, hi in self.ranges)
        if not ranges:
            raise ValueError("band must carry at least one range")
        for lo, hi in ranges:
            if not (0.0 <= lo < hi <= 1.0):
                raise ValueError(f"band range must satisfy 0 <= low < high <= 1, got ({lo}, {hi})")
        object.__setattr__(self, "ranges", ranges)

    @property
    def hull(self) -> tuple[float, float]:
        return min(r[0] for r in self.ranges), max(r[1] for r in self.ranges)


@dataclass(frozen=True)
class ModifierProfile:
    """The five overlay values, each in [0, 1], with per-field provenance notes."""

    context: float
    governance: float
    technical: float
    exposure: float
    residual: float
    provenance: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in MODIFIER_FIELDS.values():
            check_unit_interval(getattr(self, name), f"modifier {name}")
        object.__setattr__(self, "provenance", dict(self.provenance))

    def as_letters(self) -> dict[str, float]:
        return {letter: getattr(self, attr) for letter, attr in MODIFIER_FIELDS.items()}

    @classmethod
    def from_letters(cls, values: Mapping[str, float], provenance: str = "") -> "ModifierProfile":
        missing = [m for m in MODIFIER_LETTERS if m not in values]
        if missing:
            raise ValueError(f"modifier values missing {missing}")
        prov = {MODIFIER_FIELDS[m]: provenance for m in MODIFIER_LETTERS} if provenance else {}
        return cls(
            **{MODIFIER_FIELDS[m]: float(values[m]) for m in MODIFIER_LETTERS},
            provenance=prov,
        )

    def replace_letters(self, overrides: Mapping[str, float], provenance: str = "manual override"):
        values = self.as_letters()
        prov = dict(self.provenance)
        for letter, value in overrides.items():
            if letter not in MODIFIER_LETTERS:
                raise ValueError(f"unknown modifier {letter!r}, expected one of {MODIFIER_LETTERS}")
            values[letter] = float(value)
            prov[MODIFIER_FIELDS[letter]] = provenance
        out = ModifierProfile.from_letters(values)
        object.__setattr__(out, "provenance", prov)
        return out


@dataclass(frozen=True)
class SystemTypeProfile:
    system_type: str
    display_name: str
    profile: ModifierProfile
    framework_basis: str


@dataclass(frozen=True)
class BandCatalogue:
    bands: tuple[ModifierBand, ...]
    system_profiles: tuple[SystemTypeProfile, ...]
    version: str = ""

    def profiles_by_type(self) -> dict[str, SystemTypeProfile]:
        return {p.system_type: p for p in self.system_profiles}


class BandLookupError(LookupError):
    pass


class UnknownSystemTypeError(LookupError):
    pass


def calibrate_likelihood(incident_count: int, bands: LikelihoodBands) -> int:
    """Map an incident count onto the 0-5 likelihood scale via the cut points."""
    count = int(incident_count)
    if count < 0:
        raise ValueError(f"incident_count must be non-negative, got {count}")
    for score, cut in zip((5, 4, 3, 2, 1), (bands.t5, bands.t4, bands.t3, bands.t2, bands.t1)):
        if count >= cut:
            return score
    return 0


def assign_impact(tags: Sequence[Union[str, HarmCategory]], rules: ImpactRules) -> int:
    """Worst harm dominates: the maximum impact over all mapped tags."""
    if not tags:
        raise ValueError("at least one harm tag is required")
    scores = []
    for tag in tags:
        key = tag.value if isinstance(tag, HarmCategory) else str(tag)
        if key not in rules.mapping:
            known = ", ".join(sorted(rules.mapping))
            raise ValueError(f"unknown harm tag {key!r} (known: {known})")
        scores.append(int(rules.mapping[key]))
    return max(scores)


def resolve_band(
    catalogue: Iterable[ModifierBand], modifier: str, framework: str, classification: str
) -> ModifierBand:
    """The unique band for (modifier, framework, classification).

    Framework and classification match case-insensitively.
    """
    if modifier not in MODIFIER_LETTERS:
        raise ValueError(f"unknown modifier {modifier!r}, expected one of {MODIFIER_LETTERS}")
    fw = framework.strip().casefold()
    cls = classification.strip().casefold()
    matches = [
        b
        for b in catalogue
        if b.modifier == modifier
        and b.framework.casefold() == fw
        and b.classification.casefold() == cls
    ]
    if not matches:
        raise BandLookupError(
            f"no band for modifier {modifier} / framework {framework!r} / "
            f"classification {classification!r}"
        )
    if len(matches) > 1:
        raise BandLookupError(
            f"ambiguous band lookup ({len(matches)} entries) for modifier {modifier} / "
            f"framework {framework!r} / classification {classification!r}"
        )
    return matches[0]


def band_value(band: ModifierBand, strictness: float = 0.5) -> float:
    """Pick a point value from a band.

    With multiple ranges, strictness < 0.5 selects the lower range and
    strictness >= 0.5 the upper; the value then interpolates linearly within
    the chosen range.
    """
    strictness = check_unit_interval(strictness, "strictness")
    chosen = band.ranges[0] if strictness < 0.5 else band.ranges[-1]
    lo, hi = chosen
    return lo + strictness * (hi - lo)


def profile_for_system_type(
    system_type: str, catalogue: "BandCatalogue | None" = None
) -> ModifierProfile:
    """The default modifier profile for a deployment archetype."""
    catalogue = catalogue if catalogue is not None else default_band_catalogue()
    wanted = system_type.strip().casefold()
    for p in catalogue.system_profiles:
        if wanted in (p.system_type.casefold(), p.display_name.casefold()):
            return p.profile
    known = ", ".join(repr(p.system_type) for p in catalogue.system_profiles)
    raise UnknownSystemTypeError(f"unknown system type {system_type!r}; known types: {known}")


def likelihood_mismatches(taxonomy, bands: LikelihoodBands) -> dict[str, tuple[int, int]]:
    """Groups whose threshold-derived likelihood differs from the curated one.

    Returns {group_id: (derived, curated)}. Curated values stay authoritative;
    callers surface these as warnings.
    """
    out = {}
    for g in taxonomy.groups:
        derived = calibrate_likelihood(g.incident_count, bands)
        if derived != g.curated_likelihood:
            out[g.id] = (derived, g.curated_likelihood)
    return out


# --- data-pack loading -----------------------------------------------------

Source = Union[str, os.PathLike, IO[str], IO[bytes]]


def _read_json(source: Source, what: str) -> dict:
    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackError(f"{what} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PackError(f"{what} must be a JSON object")
    return doc


def load_band_catalogue(source: Source) -> BandCatalogue:
    doc = _read_json(source, "band catalogue")
    try:
        bands = tuple(
            ModifierBand(
                modifier=str(b["modifier"]),
                framework=str(b["framework"]),
                classification=str(b["classification"]),
                ranges=tuple((float(lo), float(hi)) for lo, hi in b["ranges"]),
                notes=str(b.get("notes", "")),
            )
            for b in doc.get("bands", [])
        )
        profiles = tuple(
            SystemTypeProfile(
                system_type=str(p["system_type"]),
                display_name=str(p.get("display_name", p["system_type"])),
                profile=ModifierProfile.from_letters(
                    p["profile"], provenance="system-type default"
                ),
                framework_basis=str(p.get("framework_basis", "")),
            )
            for p in doc.get("system_profiles", [])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise PackError(f"band catalogue malformed: {exc}") from exc
    return BandCatalogue(bands=bands, system_profiles=profiles, version=str(doc.get("version", "")))


def load_calibration_defaults(source: Source) -> tuple[LikelihoodBands, ImpactRules, list[dict]]:
    doc = _read_json(source, "calibration defaults")
    try:
        bands = LikelihoodBands.from_mapping(doc["likelihood_thresholds"])
        rules = ImpactRules({str(k): int(v) for k, v in doc["impact_rules"].items()})
    except (KeyError, TypeError, ValueError) as exc:
        raise PackError(f"calibration defaults malformed: {exc}") from exc
    return bands, rules, list(doc.get("default_ranges", []))


def default_band_catalogue() -> BandCatalogue:
    from . import resources

    return resources.band_catalogue()


def default_likelihood_bands() -> LikelihoodBands:
    from . import resources

    return resources.calibration_defaults()[0]


def default_impact_rules() -> ImpactRules:
    from . import resources

    return resources.calibration_defaults()[1]
