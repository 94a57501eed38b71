import json

import pytest

from cortexrisk.cli import main
from cortexrisk.reporting import display_3dp


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_default_pack(self, capsys):
        code, out, err = run(capsys, "validate")
        assert code == 0
        assert "29 groups" in out

    def test_broken_pack(self, capsys, tmp_path, taxonomy):
        from cortexrisk.taxonomy import serialize_taxonomy

        doc = serialize_taxonomy(taxonomy)
        doc["groups"] = doc["groups"][:-1]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        code, out, err = run(capsys, "validate", "--taxonomy", str(path))
        assert code == 1
        assert "expected 29 groups, found 28" in err

    def test_unparseable_pack(self, capsys, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{", encoding="utf-8")
        code, out, err = run(capsys, "validate", "--taxonomy", str(path))
        assert code == 1


class TestScore:
    def test_csv_output(self, capsys):
        code, out, err = run(capsys, "score", "--format", "csv")
        assert code == 0
        lines = out.split("\r\n")
        assert len([l for l in lines if l]) == 30  # header + 29 rows

    def test_json_output_values(self, capsys):
        code, out, err = run(capsys, "score")
        assert code == 0
        doc = json.loads(out)
        rows = {r["group_id"]: r for r in doc["rows"]}
        assert display_3dp(rows["prompt-injection"]["composite"]) == "0.756"
        assert rows["prompt-injection"]["tier"] == "High"

    def test_missing_taxonomy_file(self, capsys):
        code, out, err = run(capsys, "score", "--taxonomy", "missing.json")
        assert code == 1
        assert "cannot load taxonomy" in err

    def test_surveillance_profile_overrides(self, capsys):
        code, out, err = run(
            capsys, "score",
            "--set", "C=0.95", "--set", "G=1.0", "--set", "T=0.85",
            "--set", "E=0.9", "--set", "R=0.85",
        )
        assert code == 0
        rows = {r["group_id"]: r for r in json.loads(out)["rows"]}
        row = rows["discriminatory-outcomes"]
        assert display_3dp(row["composite"]) == "0.928"
        assert row["tier"] == "Critical"

    def test_system_type_profile_flag(self, capsys):
        code, out, err = run(capsys, "score", "--profile", "facial recognition in public surveillance")
        assert code == 0
        rows = {r["group_id"]: r for r in json.loads(out)["rows"]}
        assert display_3dp(rows["discriminatory-outcomes"]["composite"]) == "0.928"

    def test_descending_order(self, capsys):
        code, out, err = run(capsys, "score", "--order", "composite")
        rows = json.loads(out)["rows"]
        assert rows[0]["group_id"] == "discriminatory-outcomes"

    def test_likelihood_mismatch_warning_on_stderr(self, capsys):
        code, out, err = run(capsys, "score")
        assert code == 0
        assert "reinforcement-misalignment" in err
        assert "lack-of-monitoring" in err
        assert "warning" in err

    def test_unknown_set_key_is_usage_error(self, capsys):
        code, out, err = run(capsys, "score", "--set", "Q=1")
        assert code == 2

    def test_weight_override_breaking_simplex(self, capsys):
        code, out, err = run(capsys, "score", "--set", "alpha=0.5")
        assert code == 1
        assert "sum to 1" in err

    def test_unknown_flag_is_usage_error(self, capsys):
        assert run(capsys, "score", "--bogus")[0] == 2

    @pytest.mark.parametrize("sub", ["validate", "score", "simulate", "whatif", "serve"])
    def test_help_exits_zero_and_documents_flags(self, capsys, sub):
        code, out, err = run(capsys, sub, "--help")
        assert code == 0
        assert "--taxonomy" in out and "--out" in out

    def test_top_level_help(self, capsys):
        assert run(capsys, "--help")[0] == 0

    @pytest.mark.parametrize("sub", ["validate", "score", "simulate", "serve"])
    def test_unknown_flags_rejected_everywhere(self, capsys, sub):
        assert run(capsys, sub, "--definitely-not-a-flag")[0] == 2

    def test_malformed_input_corpus_exits_one(self, capsys, tmp_path):
        cases = {
            "truncated.json": '{"version": "x", "domains": [',
            "not_json.json": "hello world",
            "wrong_shape.json": '["a", "b"]',
            "empty.json": "",
        }
        for name, content in cases.items():
            path = tmp_path / name
            path.write_text(content, encoding="utf-8")
            code, out, err = run(capsys, "score", "--taxonomy", str(path))
            assert code == 1, name


class TestSimulate:
    def test_single_group_single_sample(self, capsys):
        code, out, err = run(
            capsys, "simulate", "--samples", "1", "--seed", "7", "--group", "prompt-injection"
        )
        assert code == 0
        doc = json.loads(out)
        g = doc["groups"][0]
        assert g["group_id"] == "prompt-injection"
        assert g["std"] == 0.0
        assert g["p50"] == g["p90"]
        assert "low" in err  # sparse-sample warning on the diagnostic stream

    def test_repeat_runs_byte_identical(self, capsys, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        args = ["simulate", "--samples", "2000", "--seed", "42", "--out"]
        assert main(args + [str(out1)]) == 0
        assert main(args + [str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_worker_count_invariance(self, capsys, tmp_path):
        base = ["simulate", "--samples", "2000", "--seed", "42"]
        one = tmp_path / "w1.json"
        eight = tmp_path / "w8.json"
        assert main(base + ["--workers", "1", "--out", str(one)]) == 0
        assert main(base + ["--workers", "8", "--out", str(eight)]) == 0
        assert one.read_bytes() == eight.read_bytes()

    def test_csv_format(self, capsys):
        code, out, err = run(
            capsys, "simulate", "--samples", "1500", "--seed", "1", "--format", "csv"
        )
        assert code == 0
        assert out.startswith("group_id,")

    def test_bad_group(self, capsys):
        code, out, err = run(capsys, "simulate", "--group", "nope", "--samples", "1000")
        assert code == 1

    def test_bad_samples(self, capsys):
        code, out, err = run(capsys, "simulate", "--samples", "0")
        assert code == 1

    def test_layer5_preset_changes_residual_sigma(self, capsys):
        code1, out1, _ = run(capsys, "simulate", "--samples", "4000", "--seed", "3",
                             "--group", "feedback-loop-abuse", "--preset", "demo")
        code2, out2, _ = run(capsys, "simulate", "--samples", "4000", "--seed", "3",
                             "--group", "feedback-loop-abuse", "--preset", "layer5")
        s1 = json.loads(out1)["groups"][0]["std"]
        s2 = json.loads(out2)["groups"][0]["std"]
        assert code1 == code2 == 0
        assert s2 > s1  # layer5 widens the residual-risk prior


class TestWhatif:
    def test_residual_shift_delta(self, capsys):
        code, out, err = run(
            capsys, "whatif", "--group", "lack-of-monitoring", "--set", "R=0.55",
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["composite_delta"] == pytest.approx(-0.0075, abs=1e-12)
        assert doc["tier_transition"] is None

    def test_noop_override(self, capsys):
        code, out, err = run(
            capsys, "whatif", "--group", "lack-of-monitoring", "--set", "C=0.70",
            "--format", "json",
        )
        doc = json.loads(out)
        assert doc["composite_delta"] == pytest.approx(0.0, abs=1e-12)

    def test_overtrust_context_bump(self, capsys):
        code, out, err = run(
            capsys, "whatif", "--group", "ui-induced-overtrust", "--set", "C=0.75",
            "--format", "json",
        )
        doc = json.loads(out)
        assert doc["composite_delta"] == pytest.approx(0.0075, abs=1e-12)
        assert doc["baseline"]["tier"] == "Low"
        assert doc["modified"]["tier"] == "Low"
        assert doc["tier_transition"] is None

    def test_li_override_and_tier_transition(self, capsys):
        code, out, err = run(
            capsys, "whatif", "--group", "ui-induced-overtrust",
            "--set", "L=5", "--set", "I=5", "--format", "json",
        )
        doc = json.loads(out)
        assert doc["modified"]["tier"] == "High"
        assert doc["tier_transition"] == "Low -> High"

    def test_text_output_with_compare(self, capsys):
        code, out, err = run(
            capsys, "whatif", "--group", "lack-of-monitoring",
            "--set", "R=0.55", "--compare",
        )
        assert code == 0
        assert "composite delta: -0.007500" in out
        assert "residual" in out

    def test_requires_group(self, capsys):
        assert run(capsys, "whatif", "--set", "R=0.5")[0] == 2

    def test_k_must_stay_positive(self, capsys):
        code, out, err = run(
            capsys, "whatif", "--group", "pii-leakage", "--set", "k=-1", "--format", "json"
        )
        assert code == 1
