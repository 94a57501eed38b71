"""Vulnerability taxonomy: 7 domains, 29 grouped vulnerabilities, 120+ distinct entries.

The taxonomy ships as a versioned JSON data pack (``data/cortex_taxonomy.json``)
so that content revisions never require code changes. Loaded taxonomies are
immutable and safe to share across threads.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

from .validation import PackError

#: The seven canonical domain names. Packs must use exactly this set.
DOMAIN_NAMES = frozenset(
    {
        "Input & Data Layer",
        "Model Behavior",
        "Security & Access Control",
        "Privacy & Compliance",
        "Output & Interface",
        "Infrastructure & Lifecycle",
        "Human Factors & Feedback Loops",
    }
)

EXPECTED_DOMAINS = 7
EXPECTED_GROUPS = 29
MIN_DISTINCT = 120

Source = Union[str, os.PathLike, IO[str], IO[bytes]]


@dataclass(frozen=True)
class DomainCategory:
    id: str
    name: str


@dataclass(frozen=True)
class DistinctVulnerability:
    name: str
    group_id: str


@dataclass(frozen=True)
class VulnerabilityGroup:
    id: str
    name: str
    domain: str
    incident_count: int
    avid_refs: tuple[str, ...]
    atlas_refs: tuple[str, ...]
    oecd_anchor: str
    curated_likelihood: int
    curated_impact: int
    distinct: tuple[DistinctVulnerability, ...]
    aliases: tuple[str, ...] = ()

    @property
    def severity_points(self) -> int:
        return self.curated_likelihood * self.curated_impact


@dataclass(frozen=True)
class Taxonomy:
    domains: tuple[DomainCategory, ...]
    groups: tuple[VulnerabilityGroup, ...]
    source_version: str
    _domain_index: dict = field(default_factory=dict, compare=False, repr=False)
    _group_index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_domain_index", {d.id: d for d in self.domains})
        index = {}
        for g in self.groups:
            index[g.id] = g
        object.__setattr__(self, "_group_index", index)

    def domain(self, domain_id: str) -> DomainCategory:
        try:
            return self._domain_index[domain_id]
        except KeyError:
            known = ", ".join(sorted(self._domain_index))
            raise KeyError(f"unknown domain id {domain_id!r} (known: {known})") from None

    def group(self, group_id: str) -> VulnerabilityGroup:
        try:
            return self._group_index[group_id]
        except KeyError:
            raise KeyError(f"unknown group id {group_id!r}") from None

    def find_group(self, name_or_id: str) -> VulnerabilityGroup:
        """Look up a group by id, name, or recorded alias (case-insensitive)."""
        if name_or_id in self._group_index:
            return self._group_index[name_or_id]
        wanted = name_or_id.strip().casefold()
        for g in self.groups:
            if g.name.casefold() == wanted or any(a.casefold() == wanted for a in g.aliases):
                return g
        raise KeyError(f"no group matching {name_or_id!r}")

    @property
    def total_distinct(self) -> int:
        return sum(len(g.distinct) for g in self.groups)

    @property
    def total_incidents(self) -> int:
        return sum(g.incident_count for g in self.groups)


@dataclass(frozen=True)
class Violation:
    """One broken taxonomy rule, naming the offending entity."""

    entity: str
    rule: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.rule}"


def _read_document(source: Source) -> dict:
    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if text.startswith("﻿"):
        raise PackError("taxonomy document must be UTF-8 without a byte-order mark")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackError(f"taxonomy document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PackError("taxonomy document must be a JSON object")
    return doc


def _build(doc: dict) -> Taxonomy:
    problems = []

    def want(obj, key, kind, where, default=None):
        value = obj.get(key, default)
        if value is None or (kind is not None and not isinstance(value, kind)):
            problems.append(f"{where}: missing or invalid {key!r}")
            return default
        return value

    version = doc.get("version")
    if not isinstance(version, str) or not version:
        problems.append("document: missing or invalid 'version'")
        version = ""

    domains = []
    for i, d in enumerate(doc.get("domains") or []):
        where = f"domains[{i}]"
        if not isinstance(d, dict):
            problems.append(f"{where}: not an object")
            continue
        domains.append(
            DomainCategory(
                id=str(want(d, "id", str, where, "")),
                name=str(want(d, "name", str, where, "")),
            )
        )

    groups = []
    for i, g in enumerate(doc.get("groups") or []):
        where = f"groups[{i}]"
        if not isinstance(g, dict):
            problems.append(f"{where}: not an object")
            continue
        gid = str(want(g, "id", str, where, ""))
        distinct = tuple(
            DistinctVulnerability(name=str(n), group_id=gid)
            for n in (g.get("distinct") or [])
        )
        try:
            incident_count = int(g.get("incident_count"))
            likelihood = int(g.get("likelihood"))
            impact = int(g.get("impact"))
        except (TypeError, ValueError):
            problems.append(f"{where}: incident_count/likelihood/impact must be integers")
            continue
        groups.append(
            VulnerabilityGroup(
                id=gid,
                name=str(want(g, "name", str, where, "")),
                domain=str(want(g, "domain", str, where, "")),
                incident_count=incident_count,
                avid_refs=tuple(str(x) for x in (g.get("avid") or [])),
                atlas_refs=tuple(str(x) for x in (g.get("atlas") or [])),
                oecd_anchor=str(g.get("oecd") or ""),
                curated_likelihood=likelihood,
                curated_impact=impact,
                distinct=distinct,
                aliases=tuple(str(a) for a in (g.get("aliases") or [])),
            )
        )

    if problems:
        raise PackError("taxonomy document malformed: " + "; ".join(problems))
    return Taxonomy(domains=tuple(domains), groups=tuple(groups), source_version=version)


def load_taxonomy(source: Source) -> Taxonomy:
    """Load and validate a taxonomy pack from a path or readable stream.

    Raises PackError listing every violated invariant, not just the first.
    """
    taxonomy = _build(_read_document(source))
    violations = validate_taxonomy(taxonomy)
    if violations:
        raise PackError(
            "taxonomy failed validation:\n  " + "\n  ".join(str(v) for v in violations)
        )
    return taxonomy


def validate_taxonomy(t: Taxonomy) -> list[Violation]:
    """Check every structural invariant; an empty report means valid."""
    out: list[Violation] = []

    if len(t.domains) != EXPECTED_DOMAINS:
        out.append(
            Violation("taxonomy", f"{len(t.domains)} domains, expected {EXPECTED_DOMAINS}")
        )
    domain_ids = [d.id for d in t.domains]
    if len(set(domain_ids)) != len(domain_ids):
        out.append(Violation("taxonomy", "domain ids are not unique"))
    names = {d.name for d in t.domains}
    if names != DOMAIN_NAMES and len(t.domains) == EXPECTED_DOMAINS:
        unexpected = sorted(names - DOMAIN_NAMES)
        missing = sorted(DOMAIN_NAMES - names)
        out.append(
            Violation(
                "taxonomy",
                f"domain names do not match the canonical seven "
                f"(unexpected: {unexpected}, missing: {missing})",
            )
        )

    if len(t.groups) != EXPECTED_GROUPS:
        out.append(
            Violation("taxonomy", f"expected {EXPECTED_GROUPS} groups, found {len(t.groups)}")
        )
    group_ids = [g.id for g in t.groups]
    if len(set(group_ids)) != len(group_ids):
        out.append(Violation("taxonomy", "group ids are not unique"))

    known_domains = set(domain_ids)
    for g in t.groups:
        where = f"group {g.id or g.name!r}"
        if g.domain not in known_domains:
            out.append(Violation(where, f"references unknown domain {g.domain!r}"))
        if g.incident_count < 0:
            out.append(Violation(where, f"incident_count {g.incident_count} is negative"))
        if not (0 <= g.curated_likelihood <= 5):
            out.append(Violation(where, f"likelihood {g.curated_likelihood} outside 0..5"))
        if not (0 <= g.curated_impact <= 5):
            out.append(Violation(where, f"impact {g.curated_impact} outside 0..5"))
        if not g.avid_refs:
            out.append(Violation(where, "no AVID cross-reference"))
        if not g.oecd_anchor:
            out.append(Violation(where, "no OECD anchor"))
        for d in g.distinct:
            if d.group_id != g.id:
                out.append(
                    Violation(where, f"distinct entry {d.name!r} owned by {d.group_id!r}")
                )

    pairs = [(d.group_id, d.name) for g in t.groups for d in g.distinct]
    if len(set(pairs)) != len(pairs):
        seen, dupes = set(), set()
        for p in pairs:
            if p in seen:
                dupes.add(p)
            seen.add(p)
        out.append(Violation("taxonomy", f"duplicate distinct entries: {sorted(dupes)}"))
    if len(pairs) < MIN_DISTINCT:
        out.append(
            Violation(
                "taxonomy",
                f"{len(pairs)} distinct vulnerabilities, expected at least {MIN_DISTINCT}",
            )
        )
    return out


def groups_by_domain(t: Taxonomy, domain_id: str) -> list[VulnerabilityGroup]:
    """All groups of one domain, in pack order. Raises KeyError on unknown ids."""
    t.domain(domain_id)
    return [g for g in t.groups if g.domain == domain_id]


def serialize_taxonomy(t: Taxonomy) -> dict:
    """Dump a taxonomy back to the data-pack document shape (round-trippable)."""
    return {
        "version": t.source_version,
        "domains": [{"id": d.id, "name": d.name} for d in t.domains],
        "groups": [
            {
                "id": g.id,
                "name": g.name,
                "domain": g.domain,
                "incident_count": g.incident_count,
                "avid": list(g.avid_refs),
                "atlas": list(g.atlas_refs),
                "oecd": g.oecd_anchor,
                "likelihood": g.curated_likelihood,
                "impact": g.curated_impact,
                "aliases": list(g.aliases),
                "distinct": [d.name for d in g.distinct],
            }
            for g in t.groups
        ],
    }


def dumps_taxonomy(t: Taxonomy) -> str:
    return json.dumps(serialize_taxonomy(t), ensure_ascii=False, indent=2) + "\n"


def loads_taxonomy(text: str) -> Taxonomy:
    return load_taxonomy(io.StringIO(text))
