import json

import pytest

from cortexrisk.reporting import (
    RiskRegisterEntry,
    Scorecard,
    ScorecardRow,
    build_risk_register,
    display_3dp,
    export,
    generate_scorecard,
    round_half_up,
    scorecard_from_csv,
    scorecard_from_json_doc,
    scorecard_to_csv,
    scorecard_to_json_doc,
    simulation_from_json_doc,
    simulation_to_csv,
    simulation_to_json_doc,
    tier_summary,
)
from cortexrisk.scoring import TierLabel
from cortexrisk.simulation import SimulationConfig, scorecard_simulation
from cortexrisk.taxonomy import Taxonomy

# Bucketing the 29 reference composites through the tier bands, computed once
# by hand before building: six groups sit at 0.7046 which is already High.
EXPECTED_TIER_SUMMARY = {"Critical": 0, "High": 14, "Moderate": 13, "Low": 2, "Minimal": 0}


class TestRounding:
    def test_half_up(self):
        assert round_half_up(0.4375, 3) == 0.438
        assert round_half_up(0.7045749, 3) == 0.705
        assert round_half_up(0.8347011, 3) == 0.835

    def test_display(self):
        assert display_3dp(0.4375) == "0.438"
        assert display_3dp(0.0) == "0.000"
        assert display_3dp(1.0) == "1.000"


class TestGenerateScorecard:
    def test_row_count_and_prompt_injection(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        assert len(card.rows) == 29
        row = next(r for r in card.rows if r.group_id == "prompt-injection")
        assert row.severity_points == 20
        assert display_3dp(row.utility) == "0.909"
        assert display_3dp(row.composite) == "0.756"

    def test_descending_order_starts_with_top_score(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile, order="composite")
        assert card.rows[0].group_id == "discriminatory-outcomes"
        assert display_3dp(card.rows[0].composite) == "0.770"
        comps = [r.composite for r in card.rows]
        assert comps == sorted(comps, reverse=True)

    def test_single_domain_taxonomy(self, taxonomy, default_profile):
        sub = Taxonomy(
            domains=tuple(d for d in taxonomy.domains if d.id == "input-data-layer"),
            groups=tuple(g for g in taxonomy.groups if g.domain == "input-data-layer"),
            source_version=taxonomy.source_version,
        )
        card = generate_scorecard(sub, default_profile)
        assert {r.domain for r in card.rows} == {"Input & Data Layer"}
        assert len(card.rows) == 4

    def test_repeat_generation_identical_except_timestamp(self, taxonomy, default_profile):
        a = generate_scorecard(taxonomy, default_profile, timestamp="t0")
        b = generate_scorecard(taxonomy, default_profile, timestamp="t1")
        assert a.rows == b.rows
        assert a.metadata.timestamp != b.metadata.timestamp

    def test_invalid_order(self, taxonomy, default_profile):
        with pytest.raises(ValueError):
            generate_scorecard(taxonomy, default_profile, order="alphabetical")

    def test_metadata_provenance(self, taxonomy, default_profile, default_weights):
        card = generate_scorecard(taxonomy, default_profile, profile_name="defaults")
        assert card.metadata.taxonomy_version == taxonomy.source_version
        assert card.metadata.weights["alpha"] == 0.35
        assert card.metadata.modifiers["C"] == 0.70
        assert card.metadata.k == 3.0


class TestTierSummary:
    def test_default_scorecard(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        summary = tier_summary(card)
        assert summary == EXPECTED_TIER_SUMMARY
        assert sum(summary.values()) == len(card.rows)

    def test_empty(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        empty = Scorecard(metadata=card.metadata, rows=())
        assert tier_summary(empty) == {t.label: 0 for t in TierLabel}

    def test_single_critical(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        row = ScorecardRow(
            group_id="x", name="X", domain="D", likelihood=5, impact=5,
            severity_points=25, utility=0.95, composite=0.9, tier=TierLabel.CRITICAL,
        )
        assert tier_summary(Scorecard(metadata=card.metadata, rows=(row,)))["Critical"] == 1


class TestCsv:
    def test_scorecard_csv_shape(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        text = scorecard_to_csv(card)
        lines = text.split("\r\n")
        assert lines[-1] == ""
        assert len(lines) == 31  # header + 29 rows + trailing terminator
        assert lines[0].startswith("group_id,")

    def test_header_only_for_empty(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        empty = Scorecard(metadata=card.metadata, rows=())
        lines = scorecard_to_csv(empty).split("\r\n")
        assert len(lines) == 2 and lines[1] == ""

    def test_round_trip_is_byte_identical(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        text = scorecard_to_csv(card)
        again = scorecard_to_csv(scorecard_from_csv(text))
        assert again == text

    def test_fields_needing_quotes_round_trip(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        row = card.rows[0]
        tricky = ScorecardRow(
            group_id=row.group_id, name='Name, with "comma"', domain=row.domain,
            likelihood=row.likelihood, impact=row.impact,
            severity_points=row.severity_points, utility=row.utility,
            composite=row.composite, tier=row.tier,
        )
        doc = Scorecard(metadata=card.metadata, rows=(tricky,))
        text = scorecard_to_csv(doc)
        assert scorecard_to_csv(scorecard_from_csv(text)) == text

    def test_simulation_csv(self, taxonomy, default_profile):
        summaries = scorecard_simulation(
            taxonomy, default_profile, config=SimulationConfig(n_samples=200, seed=4)
        )
        lines = simulation_to_csv(summaries).split("\r\n")
        assert len(lines) == 31
        assert lines[0].split(",")[0] == "group_id"


class TestJsonDocs:
    def test_scorecard_round_trip(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile, timestamp="2025-01-01T00:00:00+00:00")
        doc = scorecard_to_json_doc(card)
        again = scorecard_from_json_doc(json.loads(json.dumps(doc)))
        assert again == card

    def test_simulation_round_trip(self, taxonomy, default_profile):
        summaries = scorecard_simulation(
            taxonomy, default_profile, config=SimulationConfig(n_samples=300, seed=6)
        )
        doc = simulation_to_json_doc(summaries, taxonomy.source_version, {"seed": 6})
        again = simulation_from_json_doc(json.loads(json.dumps(doc)))
        assert again == summaries

    def test_documents_embed_versions(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        doc = scorecard_to_json_doc(card)
        assert doc["metadata"]["taxonomy_version"] == taxonomy.source_version
        assert doc["metadata"]["engine_version"]
        sim_doc = simulation_to_json_doc([], taxonomy.source_version)
        assert sim_doc["taxonomy_version"] == taxonomy.source_version

    def test_export_to_path_and_stream(self, tmp_path, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        doc = scorecard_to_json_doc(card)
        path = tmp_path / "card.json"
        export(doc, path)
        assert json.loads(path.read_text(encoding="utf-8")) == doc
        import io

        buf = io.StringIO()
        export(scorecard_to_csv(card), buf)
        assert buf.getvalue() == scorecard_to_csv(card)

    def test_export_document_dispatch(self, tmp_path, taxonomy, default_profile):
        from cortexrisk.reporting import export_document

        card = generate_scorecard(taxonomy, default_profile)
        csv_path = tmp_path / "card.csv"
        export_document(card, "csv", csv_path)
        # raw bytes: read_text would translate the RFC-4180 CRLF terminators
        assert csv_path.read_bytes().decode("utf-8") == scorecard_to_csv(card)

        summaries = scorecard_simulation(
            taxonomy, default_profile, config=SimulationConfig(n_samples=100, seed=2)
        )
        json_path = tmp_path / "sim.json"
        export_document(summaries, "json", json_path, taxonomy_version=taxonomy.source_version)
        doc = json.loads(json_path.read_text(encoding="utf-8"))
        assert len(doc["groups"]) == 29

        with pytest.raises(ValueError, match="format"):
            export_document(card, "xml", tmp_path / "x")


class TestRiskRegister:
    def test_join_and_notes(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        summaries = scorecard_simulation(
            taxonomy, default_profile, config=SimulationConfig(n_samples=500, seed=12)
        )
        register = build_risk_register(
            card, summaries, notes={"discriminatory-outcomes": "score-stable and modifier-insensitive"}
        )
        assert len(register) == 29
        entry = next(e for e in register if e.group_id == "discriminatory-outcomes")
        assert entry.classification_note == "score-stable and modifier-insensitive"
        assert entry.tier is TierLabel.HIGH
        assert entry.p50 > 0

    def test_tier_consistency_enforced(self):
        with pytest.raises(ValueError, match="inconsistent"):
            RiskRegisterEntry(
                group_id="x", composite=0.2, tier=TierLabel.HIGH,
                p50=0.2, p90=0.3, std_dev=0.01,
            )

    def test_missing_summary(self, taxonomy, default_profile):
        card = generate_scorecard(taxonomy, default_profile)
        with pytest.raises(KeyError):
            build_risk_register(card, [], notes=None)
