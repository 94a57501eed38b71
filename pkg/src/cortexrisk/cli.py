"""Command-line interface: validate, score, simulate, whatif, serve.

Exit codes: 0 success, 1 data/validation error, 2 usage error. Data documents
go to stdout (or --out); diagnostics and warnings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import resources
from ._version import ENGINE_VERSION
from .calibration import (
    UnknownSystemTypeError,
    likelihood_mismatches,
    profile_for_system_type,
)
from .reporting import (
    display_3dp,
    export,
    generate_scorecard,
    scorecard_to_csv,
    scorecard_to_json_doc,
    simulation_to_csv,
    simulation_to_json_doc,
)
from .scoring import ScoringConfig, UtilityParams, WeightVector, score_group
from .simulation import PRESETS, SimulationConfig, run_monte_carlo, scorecard_simulation
from .taxonomy import load_taxonomy, validate_taxonomy
from .validation import PackError

MODIFIER_KEYS = ("C", "G", "T", "E", "R")
WEIGHT_KEYS = ("alpha", "gamma", "delta", "theta", "lambda", "rho")


class DataError(Exception):
    """Invalid data or configuration; maps to exit code 1."""


def _warn(msg: str) -> None:
    print(f"cortex: warning: {msg}", file=sys.stderr)


def _fail(msg: str) -> None:
    raise DataError(msg)


def _load_taxonomy(args):
    path = args.taxonomy if getattr(args, "taxonomy", None) else None
    try:
        if path:
            return load_taxonomy(path)
        return resources.taxonomy()
    except (OSError, PackError) as exc:
        _fail(f"cannot load taxonomy: {exc}")


def _load_config(args) -> ScoringConfig:
    path = getattr(args, "config", None)
    try:
        if path:
            from .scoring import load_scoring_config

            return load_scoring_config(path)
        return resources.scoring_defaults()
    except (OSError, PackError) as exc:
        _fail(f"cannot load scoring config: {exc}")


def _parse_sets(pairs, allowed) -> dict[str, float]:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise UsageError(f"--set expects KEY=VALUE, got {pair!r}")
        key, _, raw = pair.partition("=")
        key = key.strip()
        if key not in allowed:
            raise UsageError(f"--set key {key!r} not allowed; choose from {', '.join(allowed)}")
        try:
            out[key] = float(raw)
        except ValueError:
            raise UsageError(f"--set {key} expects a number, got {raw!r}")
    return out


class UsageError(Exception):
    """Bad flags or values; maps to exit code 2."""


def _resolve_profile_weights_k(args, config: ScoringConfig, allow_li=False):
    allowed = MODIFIER_KEYS + WEIGHT_KEYS + ("k",) + (("L", "I") if allow_li else ())
    overrides = _parse_sets(getattr(args, "set", None), allowed)

    profile = config.profile
    if getattr(args, "profile", None):
        try:
            profile = profile_for_system_type(args.profile)
        except UnknownSystemTypeError as exc:
            _fail(str(exc))
    mod_overrides = {k: v for k, v in overrides.items() if k in MODIFIER_KEYS}
    try:
        if mod_overrides:
            profile = profile.replace_letters(mod_overrides)
        weights = config.weights
        w_overrides = {k: v for k, v in overrides.items() if k in WEIGHT_KEYS}
        if w_overrides:
            merged = dict(weights.as_dict())
            merged.update(w_overrides)
            weights = WeightVector.from_dict(merged)
        params = config.params
        if "k" in overrides:
            params = UtilityParams(k=overrides["k"])
    except ValueError as exc:
        _fail(str(exc))
    li = {k: overrides[k] for k in ("L", "I") if k in overrides}
    return profile, weights, params, li


def _emit(args, json_doc, csv_text) -> None:
    payload = csv_text if args.format == "csv" else json_doc
    if getattr(args, "out", None):
        export(payload, args.out)
    else:
        text = (
            payload
            if isinstance(payload, str)
            else json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
        )
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        path = args.taxonomy or str(resources.data_path(resources.TAXONOMY_FILE))
        from .taxonomy import _build, _read_document

        taxonomy = _build(_read_document(path))
    except (OSError, PackError) as exc:
        print(f"cortex: {exc}", file=sys.stderr)
        return 1
    violations = validate_taxonomy(taxonomy)
    if violations:
        for v in violations:
            print(str(v), file=sys.stderr)
        print(f"cortex: taxonomy invalid ({len(violations)} violation(s))", file=sys.stderr)
        return 1
    print(
        f"taxonomy ok: {len(taxonomy.domains)} domains, {len(taxonomy.groups)} groups, "
        f"{taxonomy.total_distinct} distinct vulnerabilities (version {taxonomy.source_version})"
    )
    return 0


def cmd_score(args) -> int:
    taxonomy = _load_taxonomy(args)
    config = _load_config(args)
    profile, weights, params, _ = _resolve_profile_weights_k(args, config)

    mismatches = likelihood_mismatches(taxonomy, resources.calibration_defaults()[0])
    if mismatches:
        pretty = ", ".join(f"{gid} (derived {d}, curated {c})" for gid, (d, c) in mismatches.items())
        _warn(f"curated likelihood differs from threshold-derived for: {pretty}")

    card = generate_scorecard(
        taxonomy,
        profile,
        weights,
        params,
        order=args.order,
        profile_name=args.profile or "defaults",
    )
    _emit(args, scorecard_to_json_doc(card), scorecard_to_csv(card))
    return 0


def cmd_simulate(args) -> int:
    taxonomy = _load_taxonomy(args)
    config = _load_config(args)
    profile, weights, params, _ = _resolve_profile_weights_k(args, config)
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
    if args.samples < 1000:
        _warn(f"n_samples={args.samples} is low; percentile estimates will be imprecise")
    try:
        sim_config = SimulationConfig(
            n_samples=args.samples, seed=args.seed, distributions=PRESETS[args.preset]
        )
    except ValueError as exc:
        _fail(str(exc))

    if args.group:
        try:
            group = taxonomy.find_group(args.group)
        except KeyError as exc:
            _fail(str(exc))
        summaries = [run_monte_carlo(group, profile, weights, params, sim_config)]
    else:
        summaries = scorecard_simulation(
            taxonomy, profile, weights, params, sim_config, workers=args.workers
        )

    parameters = {
        "weights": weights.as_dict(),
        "modifiers": profile.as_letters(),
        "k": params.k,
        "preset": args.preset,
        "n_samples": sim_config.n_samples,
        "seed": sim_config.seed,
        "li_band": sim_config.distributions.li_band,
    }
    doc = simulation_to_json_doc(summaries, taxonomy.source_version, parameters)
    _emit(args, doc, simulation_to_csv(summaries))
    return 0


def cmd_whatif(args) -> int:
    taxonomy = _load_taxonomy(args)
    config = _load_config(args)
    try:
        group = taxonomy.find_group(args.group)
    except KeyError as exc:
        _fail(str(exc))

    base_profile = config.profile
    if args.profile:
        try:
            base_profile = profile_for_system_type(args.profile)
        except UnknownSystemTypeError as exc:
            _fail(str(exc))
    baseline = score_group(group, base_profile, config.weights, config.params)

    profile, weights, params, li = _resolve_profile_weights_k(args, config, allow_li=True)
    try:
        kwargs = {}
        if "L" in li:
            kwargs["likelihood"] = int(li["L"])
        if "I" in li:
            kwargs["impact"] = int(li["I"])
        modified = score_group(group, profile, weights, params, **kwargs)
    except ValueError as exc:
        _fail(str(exc))

    delta = modified.composite - baseline.composite
    transition = (
        None
        if modified.tier is baseline.tier
        else f"{baseline.tier.label} -> {modified.tier.label}"
    )
    doc = {
        "group_id": group.id,
        "baseline": _breakdown_doc(baseline),
        "modified": _breakdown_doc(modified),
        "composite_delta": delta,
        "tier_transition": transition,
    }
    if args.format == "json" or args.out:
        _emit(args, doc, json.dumps(doc, ensure_ascii=False, indent=2) + "\n")
    else:
        _print_whatif_table(group, baseline, modified, delta, transition, args.compare)
    return 0


def _breakdown_doc(b) -> dict:
    return {
        "likelihood": b.likelihood,
        "impact": b.impact,
        "severity": b.severity,
        "utility": b.utility,
        "weighted_terms": dict(b.weighted_terms),
        "composite": b.composite,
        "tier": b.tier.label,
    }


def _print_whatif_table(group, baseline, modified, delta, transition, compare) -> None:
    print(f"group: {group.name} ({group.id})")
    print(f"{'':14s}{'baseline':>12s}{'modified':>12s}")
    print(f"{'composite':14s}{display_3dp(baseline.composite):>12s}{display_3dp(modified.composite):>12s}")
    print(f"{'tier':14s}{baseline.tier.label:>12s}{modified.tier.label:>12s}")
    if compare:
        print(f"{'L x I':14s}{baseline.severity_points:>12d}{modified.severity_points:>12d}")
        print(f"{'utility':14s}{display_3dp(baseline.utility):>12s}{display_3dp(modified.utility):>12s}")
        for term in baseline.weighted_terms:
            print(
                f"{term:14s}{display_3dp(baseline.weighted_terms[term]):>12s}"
                f"{display_3dp(modified.weighted_terms[term]):>12s}"
            )
    sign = "+" if delta >= 0 else ""
    print(f"composite delta: {sign}{delta:.6f}")
    print(f"tier transition: {transition or 'none'}")


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    taxonomy = _load_taxonomy(args)
    app = create_app(taxonomy=taxonomy, sample_ceiling=args.ceiling, static_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cortex",
        description="Five-layer AI-vulnerability risk scoring and simulation engine.",
    )
    parser.add_argument("--version", action="version", version=f"cortex {ENGINE_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--taxonomy", metavar="PATH", help="taxonomy data-pack file")
    common.add_argument("--config", metavar="PATH", help="weights/modifiers/k config file")
    common.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")

    p = sub.add_parser("validate", parents=[common], help="validate a taxonomy data pack")
    p.set_defaults(func=cmd_validate, format="json")

    p = sub.add_parser("score", parents=[common], help="deterministic scorecard for all groups")
    p.add_argument("--format", choices=("csv", "json"), default="json",
                   help="output document format (default: json)")
    p.add_argument("--profile", metavar="SYSTEM_TYPE", help="system-type default profile")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override C,G,T,E,R, k, or a weight (repeatable)")
    p.add_argument("--order", choices=("taxonomy", "composite"), default="taxonomy")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo simulation")
    p.add_argument("--format", choices=("csv", "json"), default="json",
                   help="output document format (default: json)")
    p.add_argument("--samples", type=int, default=10_000, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--preset", choices=sorted(PRESETS), default="demo")
    p.add_argument("--group", metavar="ID", help="simulate a single group")
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.add_argument("--profile", metavar="SYSTEM_TYPE")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("whatif", parents=[common], help="before/after single-group comparison")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="output format (default: text)")
    p.add_argument("--group", required=True, metavar="ID")
    p.add_argument("--profile", metavar="SYSTEM_TYPE")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override C,G,T,E,R, k, weights, L, or I (repeatable)")
    p.add_argument("--compare", action="store_true", help="show the full per-term comparison")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("serve", parents=[common], help="run the JSON HTTP service")
    p.add_argument("--port", type=int, default=8437)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ceiling", type=int, default=1_000_000,
                   help="maximum n_samples accepted by /v1/simulate")
    p.add_argument("--ui-dir", metavar="PATH", help="serve a static UI bundle at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors, 0 for --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cortex: usage error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"cortex: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
