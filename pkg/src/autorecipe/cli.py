"""Command-line entry point wiring the pipeline stages together.

Subcommands mirror the stages so fixtures can target any of them in
isolation: plan, generate, score, metrics, verify-refs.

Exit codes: 0 success, 2 input or validation error, 3 gateway or
client error, 4 internal error.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

import yaml

from .errors import (
    AutoRecipeError,
    GatewayError,
    NliClientError,
    SearchClientError,
    StageError,
)
from .execution import STRATEGIES, ManualClock, execute, split_parts
from .gateway import (
    HttpGateway,
    RecordingGateway,
    ReplayGateway,
    ScriptedGateway,
    load_gateway_config,
)
from .metrics import coverage, similarity, tokenize, type_token_ratio
from .planning import (
    Goal,
    bind_goal,
    build_planning_context,
    generate_sequence_deterministic,
    materialize_sequence,
    parse_plan,
    resolve_code_steps,
    serialize_sequence,
)
from .presets import COMPONENT_HEALTH_DEMONSTRATION
from .prompts import RoleProfile, default_registry, instantiate
from .recipe import (
    AGGREGATION_CONFIG_FILE,
    DATASET_FILE,
    INDICATOR_CONFIG_FILE,
    SYNTHETIC_TIMESTAMP,
    ModelDescriptor,
    Recipe,
    RunMetadata,
    WrapperManifest,
    bundle,
    dataset_from_csv,
    default_aggregation_config,
    default_indicator_config,
    format_rfc3339,
    generate_synthetic,
    load_aggregation_config,
    load_indicator_config,
)
from .references import (
    ScriptedNliClient,
    ScriptedSearchClient,
    build_references,
    render_cited,
)
from .refinement import refine
from .scoring import HealthScoreEstimator
from .taxonomy import parse_taxonomy, traverse_top_down

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GATEWAY = 3
EXIT_INTERNAL = 4

DEFAULT_OUTPUT_FILE = "health_scores.csv"


def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_out(out, text: str, label: str) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {label} to {out}")
    else:
        sys.stdout.write(text)


def _load_taxonomies(paths) -> list:
    return [parse_taxonomy(_read_text(p)) for p in paths]


def _goal_from_args(args) -> Goal:
    return Goal(
        kpi=args.kpi,
        target_node=args.target or args.kpi,
        method_phrase=args.method_phrase,
        text=args.goal_text,
    )


def _build_gateway(args):
    if getattr(args, "script", None):
        gateway = ScriptedGateway.from_file(args.script)
    elif getattr(args, "replay", None):
        gateway = ReplayGateway(args.replay)
    elif getattr(args, "gateway_config", None):
        gateway = HttpGateway(load_gateway_config(args.gateway_config))
    else:
        return None
    if getattr(args, "record", None):
        gateway = RecordingGateway(gateway, args.record)
    return gateway


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


# --- subcommands -----------------------------------------------------------------

def cmd_plan(args) -> int:
    taxonomies = _load_taxonomies(args.taxonomy)
    goal = _goal_from_args(args)
    tax = bind_goal(taxonomies, goal)
    gateway = _build_gateway(args)
    if args.plan_text:
        seq = parse_plan(_read_text(args.plan_text), goal=goal)
    elif gateway is not None:
        session = build_planning_context(taxonomies, COMPONENT_HEALTH_DEMONSTRATION, goal)
        seq = parse_plan(gateway.complete(session), goal=goal)
    else:
        seq = generate_sequence_deterministic(tax, goal)
    seq = resolve_code_steps(seq, tax)
    _write_out(args.out, serialize_sequence(seq), f"{len(seq.steps)}-step plan")
    return EXIT_OK


def _plan_stage(args, tax, goal, registry):
    if args.plan_text:
        seq = parse_plan(_read_text(args.plan_text), goal=goal)
    else:
        seq = generate_sequence_deterministic(tax, goal, registry=registry)
    return resolve_code_steps(seq, tax, registry=registry)


def cmd_generate(args) -> int:
    taxonomies = _load_taxonomies(args.taxonomy)
    goal = _goal_from_args(args)
    tax = bind_goal(taxonomies, goal)
    gateway = _build_gateway(args)
    if gateway is None:
        raise ValueError("generate needs one of --script, --replay, or --gateway-config")
    registry = default_registry()
    # Scripted and replay runs use a logical clock and a pinned creation
    # time so rerunning yields byte-identical bundles.
    deterministic = bool(args.script or args.replay)
    clock = ManualClock() if deterministic else None

    seq = _stage("plan", _plan_stage, args, tax, goal, registry)

    description = args.asset_description
    if not description:
        question = instantiate(
            registry.get("refinement.initial"), {"asset_class": args.asset_class}
        )
        result = _stage(
            "refine",
            refine,
            gateway,
            RoleProfile("domain-expert", "refinement.system"),
            question,
            max_rounds=args.max_rounds,
            confidence_threshold=args.confidence_threshold,
            registry=registry,
        )
        description = result.final_answer
        if not description:
            raise StageError(
                "refine", ValueError("no accepted answer to use as the asset description")
            )

    materialized = _stage("materialize", materialize_sequence, seq, args.asset_class, description)
    doc, _transcript = _stage(
        "execute",
        execute,
        materialized,
        args.strategy,
        registry.role("domain-expert"),
        gateway,
        registry=registry,
        clock=clock,
    )

    if args.search_script and args.nli_script:
        search = ScriptedSearchClient.from_file(args.search_script)
        nli = ScriptedNliClient.from_file(args.nli_script)
        doc = _stage(
            "references", build_references, doc, gateway, search, nli, registry=registry
        )

    target_label = tax.nodes[tax.node_id(goal.target_node)].label
    sensors = [
        label
        for label in traverse_top_down(tax, goal.target_node)[1:]
        if tax.kind(label) == "measurement"
    ] or [target_label]
    indicator = default_indicator_config(sensors)
    aggregation = default_aggregation_config(sensors)
    dataset = _stage("dataset", generate_synthetic, indicator, args.num_assets, args.seed)

    created_at = (
        SYNTHETIC_TIMESTAMP if deterministic else format_rfc3339(datetime.now(timezone.utc))
    )
    wrapper = WrapperManifest(
        indicator_config=INDICATOR_CONFIG_FILE,
        aggregation_config=AGGREGATION_CONFIG_FILE,
        dataset=DATASET_FILE,
        output=DEFAULT_OUTPUT_FILE,
        model=ModelDescriptor(name="health-score-estimator", method=aggregation.method),
        run=RunMetadata(seed=args.seed, created_at=created_at),
    )
    recipe = Recipe(
        kpi=goal.kpi,
        asset_class=args.asset_class,
        knowledge_doc=doc,
        indicator=indicator,
        aggregation=aggregation,
        dataset=dataset,
        wrapper=wrapper,
    )
    written = _stage("bundle", bundle, recipe, args.out)
    print(f"wrote {len(written)} recipe files to {args.out}")
    return EXIT_OK


def cmd_score(args) -> int:
    indicator = load_indicator_config(args.indicator_config)
    aggregation = load_aggregation_config(args.aggregation_config)
    dataset = dataset_from_csv(_read_text(args.dataset))
    estimator = HealthScoreEstimator().fit(indicator, aggregation)
    lines = ["asset_id,score"]
    lines += [f"{s.asset_id},{s.score:.6f}" for s in estimator.predict(dataset)]
    _write_out(args.out, "\n".join(lines) + "\n", "scores")
    return EXIT_OK


def cmd_metrics(args) -> int:
    texts = [_read_text(p) for p in args.doc]
    base = texts[0]
    lines = ["doc,tokens,unique,ttr,coverage_vs_first,similarity_vs_first"]
    for path, text in zip(args.doc, texts):
        profile = tokenize(text)
        lines.append(
            f"{path},{profile.total},{profile.unique},{type_token_ratio(text):.6f},"
            f"{coverage(base, text, weighted=args.weighted):.2f},"
            f"{similarity(base, text):.6f}"
        )
    _write_out(args.out, "\n".join(lines) + "\n", "metrics table")
    return EXIT_OK


def cmd_verify_refs(args) -> int:
    document = split_parts(_read_text(args.doc))
    gateway = _build_gateway(args)
    if gateway is None:
        raise ValueError("verify-refs needs one of --script, --replay, or --gateway-config")
    search = ScriptedSearchClient.from_file(args.search_script)
    nli = ScriptedNliClient.from_file(args.nli_script)
    cited = build_references(document, gateway, search, nli, k=args.claims_per_part)
    print(f"claims per part: {cited.counts.claims}")
    print(f"urls identified per part: {cited.counts.urls_identified}")
    print(f"urls validated per part: {cited.counts.urls_validated}")
    if args.out:
        Path(args.out).write_text(render_cited(cited), encoding="utf-8")
        print(f"wrote cited document to {args.out}")
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _add_goal_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--taxonomy", action="append", required=True,
        help="taxonomy YAML file; repeat for multiple taxonomies",
    )
    parser.add_argument("--kpi", required=True, help="KPI name; must match a taxonomy root")
    parser.add_argument("--target", default="", help="target node (defaults to the KPI root)")
    parser.add_argument("--method-phrase", default="", help="phrase appended to the default goal text")
    parser.add_argument("--goal-text", default="", help="full goal text, overriding the default")
    parser.add_argument("--plan-text", default="", help="parse this plan text file instead of generating")


def _add_gateway_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--script", default="", help="scripted gateway replies (YAML)")
    source.add_argument("--replay", default="", help="replay store written by --record (JSONL)")
    source.add_argument("--gateway-config", default="", help="HTTP gateway config (YAML)")
    parser.add_argument("--record", default="", help="append every exchange to this JSONL store")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autorecipe",
        description="Generate, execute, and validate KPI solution recipes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="build a prompt sequence for a KPI goal")
    _add_goal_arguments(plan)
    _add_gateway_arguments(plan)
    plan.add_argument("--out", default="", help="sequence YAML path (stdout when omitted)")
    plan.set_defaults(func=cmd_plan)

    generate = sub.add_parser("generate", help="produce a full recipe bundle")
    _add_goal_arguments(generate)
    _add_gateway_arguments(generate)
    generate.add_argument("--asset-class", required=True, help="asset class the recipe targets")
    generate.add_argument(
        "--asset-description", default="",
        help="asset description; generated through refinement when omitted",
    )
    generate.add_argument("--strategy", choices=STRATEGIES, default="gitq")
    generate.add_argument("--max-rounds", type=int, default=10, help="refinement round cap")
    generate.add_argument(
        "--confidence-threshold", type=float, default=50.0,
        help="minimum confidence percentage for accepting a refinement answer",
    )
    generate.add_argument("--seed", type=int, default=0, help="synthetic dataset seed")
    generate.add_argument("--num-assets", type=int, default=5, help="assets in the sample dataset")
    generate.add_argument("--search-script", default="", help="scripted search results (YAML)")
    generate.add_argument("--nli-script", default="", help="scripted entailment verdicts (YAML)")
    generate.add_argument("--out", required=True, help="bundle output directory")
    generate.set_defaults(func=cmd_generate)

    score = sub.add_parser("score", help="score a dataset with the two configs")
    score.add_argument("--indicator-config", required=True)
    score.add_argument("--aggregation-config", required=True)
    score.add_argument("--dataset", required=True, help="dataset CSV path")
    score.add_argument("--out", default="", help="scores CSV path (stdout when omitted)")
    score.set_defaults(func=cmd_score)

    metrics = sub.add_parser("metrics", help="lexical metrics for one or more documents")
    metrics.add_argument("--doc", action="append", required=True, help="document path; repeatable")
    metrics.add_argument(
        "--weighted", action="store_true",
        help="weight coverage by token counts instead of unique words",
    )
    metrics.add_argument("--out", default="", help="metrics CSV path (stdout when omitted)")
    metrics.set_defaults(func=cmd_metrics)

    verify = sub.add_parser("verify-refs", help="attach citations to a knowledge document")
    verify.add_argument("--doc", required=True, help="knowledge document markdown path")
    _add_gateway_arguments(verify)
    verify.add_argument("--search-script", required=True, help="scripted search results (YAML)")
    verify.add_argument("--nli-script", required=True, help="scripted entailment verdicts (YAML)")
    verify.add_argument("--claims-per-part", type=int, default=3)
    verify.add_argument("--out", default="", help="write the cited markdown here")
    verify.set_defaults(func=cmd_verify_refs)

    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (GatewayError, SearchClientError, NliClientError)):
        return EXIT_GATEWAY
    if isinstance(exc, (AutoRecipeError, ValueError, OSError, yaml.YAMLError)):
        return EXIT_INPUT
    return EXIT_INTERNAL


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc.cause)
    except Exception as exc:
        code = _exit_code(exc)
        prefix = "internal error" if code == EXIT_INTERNAL else "error"
        print(f"{prefix}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
