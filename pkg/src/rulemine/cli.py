"""Command line interface: train, predict, evaluate, synth.

Exit codes: 0 success, 1 schema/parse/data problems, 2 configuration
problems, 3 training finished without emitting any rules (the model file is
still written, carrying only the default class).

Every command that uses randomness takes --seed; when absent, the
RULEMINE_SEED environment variable is used, then 0.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, DataError, RulemineError, SchemaError
from .evaluation import evaluate, mine_greedy_baseline
from .miner import MinerConfig, mine
from .model_io import ModelArtifact, load_model, save_model
from .rules import classify, render_rule, render_rule_list
from .schema import (
    coerce_row,
    encode,
    encode_row,
    layout_for,
    load_schema,
    parse_csv,
    read_header,
    save_schema,
    stratified_split,
)
from .synth import generate

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2
EXIT_NO_RULES = 3


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("RULEMINE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"RULEMINE_SEED must be an integer, got {env!r}") from None
    return 0


def _load_miner_config(path: str | None, seed: int) -> MinerConfig:
    doc: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
    doc["seed"] = seed
    return MinerConfig.from_dict(doc)


def _report_path(out: str, explicit: str | None) -> Path:
    if explicit is not None:
        return Path(explicit)
    base = out[: -len(".json")] if out.endswith(".json") else out
    return Path(base + ".report.json")


def cmd_train(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    config = _load_miner_config(args.config, seed)
    schema = load_schema(args.schema)
    raw = parse_csv(args.data, schema)
    data = encode(raw)

    test_data = None
    train_data = data
    if args.test_fraction > 0.0:
        train_data, test_data = stratified_split(data, args.test_fraction, seed)

    rule_list, report = mine(train_data, config)
    artifact = ModelArtifact(
        schema=schema,
        numeric_ranges=data.numeric_ranges,
        network=report.network,
        rule_list=rule_list,
        miner_config=config,
        seed=seed,
    )
    save_model(artifact, args.out)

    report_doc = {"mining": report.to_dict(schema), "evaluation": None}
    print(render_rule_list(rule_list, schema, data.numeric_ranges))
    if test_data is not None:
        eval_report = evaluate(rule_list, test_data)
        report_doc["evaluation"] = eval_report.to_dict()
        print()
        print(eval_report.format_table())
    with open(_report_path(args.out, args.report), "w", encoding="utf-8") as fh:
        json.dump(report_doc, fh, indent=2)
        fh.write("\n")

    if not rule_list.rules:
        print("warning: no rules were emitted; model falls back to the default class",
              file=sys.stderr)
        return EXIT_NO_RULES
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    artifact = load_model(args.model)
    schema = artifact.schema
    layout = layout_for(schema)

    try:
        fh = open(args.input, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read input file: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("input CSV is empty (no header row)") from None
        predictor_pos, _ = read_header(header, schema, require_class=False)
        width = len(header)

        out_fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
        writer = csv.writer(out_fh, lineterminator="\n")
        writer.writerow(["prediction", "fired_rule", "rule"])
        scored = 0
        total = 0
        try:
            for row_number, fields in enumerate(reader, start=1):
                if not fields:
                    continue
                total += 1
                try:
                    if len(fields) != width:
                        raise DataError(
                            f"row {row_number}: expected {width} fields, "
                            f"found {len(fields)}"
                        )
                    record = {name: fields[pos] for name, pos in predictor_pos.items()}
                    row = coerce_row(schema, record, row_number)
                    x = encode_row(schema, artifact.numeric_ranges, row)
                    class_index, fired = classify(artifact.rule_list, x, layout)
                    label = schema.class_labels[class_index]
                    if fired is None:
                        writer.writerow([label, "default", "-"])
                    else:
                        rule = artifact.rule_list.rules[fired - 1]
                        writer.writerow(
                            [label, fired, render_rule(rule, schema, artifact.numeric_ranges)]
                        )
                    scored += 1
                except DataError as exc:
                    writer.writerow(["ERROR", "-", str(exc)])
        finally:
            if args.out:
                out_fh.close()

    if total == 0:
        print("error: input contains no data rows", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK if scored > 0 else EXIT_DATA


def cmd_evaluate(args: argparse.Namespace) -> int:
    artifact = load_model(args.model)
    schema = artifact.schema
    raw = parse_csv(args.data, schema)
    data = encode(raw, ranges_from=artifact.numeric_ranges)
    report = evaluate(artifact.rule_list, data)
    doc = {"model": report.to_dict(), "baseline": None}
    print(report.format_table())

    if args.baseline:
        baseline_rules = mine_greedy_baseline(
            data, min_confidence=artifact.miner_config.min_confidence
        )
        baseline_report = evaluate(baseline_rules, data)
        doc["baseline"] = baseline_report.to_dict()
        print()
        print("rule count comparison (lower is simpler):")
        print(f"{'  miner':<12}{report.rule_count:>6}  "
              f"accuracy {report.accuracy_percent:6.2f}%")
        print(f"{'  baseline':<12}{baseline_report.rule_count:>6}  "
              f"accuracy {baseline_report.accuracy_percent:6.2f}%")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    data = generate(args.profile, args.rows, seed)
    csv_path = Path(args.out + ".csv")
    schema_path = Path(args.out + ".schema.json")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(data.csv_text())
    save_schema(data.schema, schema_path)
    counts = {label: data.classes.count(label) for label in data.schema.class_labels}
    summary = ", ".join(f"{label}: {count}" for label, count in counts.items())
    print(f"wrote {csv_path} and {schema_path} ({args.rows} rows; {summary})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rulemine",
        description="Mine ordered classification rules from mixed tabular data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="mine a rule list and save a model")
    train.add_argument("--data", required=True, help="training CSV (header row first)")
    train.add_argument("--schema", required=True, help="attribute schema JSON")
    train.add_argument("--out", required=True, help="model JSON destination")
    train.add_argument("--report", default=None,
                       help="report JSON destination (default: <out>.report.json)")
    train.add_argument("--seed", type=int, default=None)
    train.add_argument("--config", default=None, help="JSON file of config overrides")
    train.add_argument("--test-fraction", type=float, default=0.0,
                       help="hold out this fraction for evaluation (default 0)")
    train.set_defaults(func=cmd_train)

    predict = sub.add_parser("predict", help="score rows with a saved model")
    predict.add_argument("--model", required=True)
    predict.add_argument("--input", required=True,
                         help="CSV of rows to score (class column optional)")
    predict.add_argument("--out", default=None, help="write CSV here instead of stdout")
    predict.set_defaults(func=cmd_predict)

    ev = sub.add_parser("evaluate", help="score a saved model on labeled data")
    ev.add_argument("--model", required=True)
    ev.add_argument("--data", required=True, help="labeled CSV")
    ev.add_argument("--baseline", action="store_true",
                    help="also fit the greedy baseline on the same data and compare")
    ev.add_argument("--out", default=None, help="write the JSON report here")
    ev.set_defaults(func=cmd_evaluate)

    synth = sub.add_parser("synth", help="generate a synthetic dataset")
    synth.add_argument("--rows", type=int, required=True)
    synth.add_argument("--seed", type=int, default=None)
    synth.add_argument("--profile", required=True,
                       choices=["separable", "credit3", "fragmented"])
    synth.add_argument("--out", required=True,
                       help="path prefix; writes <out>.csv and <out>.schema.json")
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SchemaError, DataError, RulemineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
