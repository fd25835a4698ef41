"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
The optional solver hook is configured through the PATCHCHECK_SOLVER_CMD
environment variable (or the `solver_cmd` key of --config).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .corpus import parse_invariant_file, serialize_point_map, split_method_ref
from .embeddings import hashing_embed, load_embeddings, write_embeddings
from .equivalence import SolverHook
from .errors import MissingCodeFile, PatchCheckError
from .harness import PatchRecord, load_manifest, tune_threshold
from .labels import Correctness
from .pipeline import (
    EmbedderMode,
    Granularity,
    PipelineConfig,
    render_table,
    report_to_json,
    run_batch,
    threshold_sweep,
)
from .syntactic import (
    TrainingConfig,
    feature_vector,
    load_model,
    lr_predict,
    lr_train,
    save_model,
)

SOLVER_ENV_VAR = "PATCHCHECK_SOLVER_CMD"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _config_layer(args) -> dict:
    if getattr(args, "config", None):
        try:
            payload = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise UsageError(f"bad config file {args.config}: {exc}") from exc
        if not isinstance(payload, dict):
            raise UsageError("config file must hold a JSON object")
        return payload
    return {}


def _setting(args, layer: dict, name: str, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in layer:
        return layer[name]
    return default


def _pipeline_config(args) -> PipelineConfig:
    layer = _config_layer(args)
    embeddings = _setting(args, layer, "embeddings", None)
    solver_cmd = layer.get("solver_cmd") or os.environ.get(SOLVER_ENV_VAR)
    no_semantic = bool(_setting(args, layer, "no_semantic", False))
    no_syntactic = bool(_setting(args, layer, "no_syntactic", False))
    if no_semantic and no_syntactic:
        raise UsageError("--no-semantic and --no-syntactic cannot be combined")
    try:
        return PipelineConfig(
            granularity=Granularity(_setting(args, layer, "granularity", "executed")),
            threshold=float(_setting(args, layer, "threshold", 0.975)),
            semantic_enabled=not no_semantic,
            syntactic_enabled=not no_syntactic,
            embedder=EmbedderMode.EXTERNAL_FILE if embeddings else EmbedderMode.HASHING_FALLBACK,
            embedding_path=embeddings,
            solver=SolverHook(solver_cmd) if solver_cmd else None,
            seed=int(_setting(args, layer, "seed", 42)),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read_code(record: PatchRecord, role: str) -> str:
    path = record.code_paths.get(role)
    if not path or not Path(path).is_file():
        raise MissingCodeFile(record.id, str(path))
    return Path(path).read_text(encoding="utf-8")


def _features_and_labels(records, dim: int, embedding_path):
    exchange = load_embeddings(embedding_path) if embedding_path else None
    features = []
    labels = []
    for record in records:
        if exchange is not None:
            ids = record.embedding_ids or {
                role: f"{record.id}:{role}" for role in ("buggy", "patched", "groundtruth")
            }
            try:
                e_b, e_p, e_g = (exchange[ids[r]] for r in ("buggy", "patched", "groundtruth"))
            except KeyError as exc:
                raise PatchCheckError(f"record {record.id}: embedding id {exc} not in file") from exc
        else:
            e_b = hashing_embed(_read_code(record, "buggy"), dim, id=f"{record.id}:buggy")
            e_p = hashing_embed(_read_code(record, "patched"), dim, id=f"{record.id}:patched")
            e_g = hashing_embed(_read_code(record, "groundtruth"), dim, id=f"{record.id}:groundtruth")
        features.append(feature_vector(e_b, e_p, e_g))
        labels.append(record.label)
    return features, labels


def _require_labels(records):
    unlabeled = [r.id for r in records if r.label is None]
    if unlabeled:
        raise PatchCheckError(f"records without labels: {', '.join(unlabeled)}")


def cmd_parse_invariants(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    point_map = parse_invariant_file(text)
    sys.stdout.write(serialize_point_map(point_map))
    total = sum(len(invs) for invs in point_map.values())
    print(f"# {len(point_map)} program point(s), {total} invariant(s)", file=sys.stderr)
    return 0


def cmd_select_tests(args) -> int:
    from .test_selection import load_coverage, select_related_tests

    coverage = load_coverage(args.coverage)
    try:
        methods = {split_method_ref(m.strip()) for m in args.methods.split(";") if m.strip()}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for test_id in select_related_tests(coverage, methods):
        print(test_id)
    return 0


def cmd_embed(args) -> int:
    if args.mode == "file":
        if not args.input:
            raise UsageError("--mode file needs --in")
        vectors = load_embeddings(args.input)
        dims = {v.dim for v in vectors.values()}
        print(f"{len(vectors)} embedding(s), dim {sorted(dims)[0] if dims else '-'}: ok")
        return 0
    if not args.manifest or not args.out:
        raise UsageError("--mode hashing needs --manifest and --out")
    records = load_manifest(args.manifest)
    vectors = []
    for record in records:
        for role in ("buggy", "patched", "groundtruth"):
            vectors.append(
                hashing_embed(_read_code(record, role), args.dim, id=f"{record.id}:{role}")
            )
    write_embeddings(args.out, vectors)
    print(f"wrote {len(vectors)} embedding(s) to {args.out}")
    return 0


def cmd_train(args) -> int:
    records = load_manifest(args.manifest)
    _require_labels(records)
    features, labels = _features_and_labels(records, args.dim, args.embeddings)
    config = TrainingConfig(
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        l2_penalty=args.l2_penalty,
        seed=args.seed,
    )
    model = lr_train(features, labels, config)
    model.threshold = args.threshold
    save_model(model, args.out)
    print(f"trained on {len(records)} patches (k={model.k}); model written to {args.out}")
    return 0


def cmd_tune_threshold(args) -> int:
    records = load_manifest(args.manifest)
    _require_labels(records)
    model = load_model(args.model)
    features, labels = _features_and_labels(records, model.k, args.embeddings)
    scores = [(lr_predict(model, f), lab) for f, lab in zip(features, labels)]
    threshold = tune_threshold(scores)
    misses = sum(
        1 for s, lab in scores if lab is Correctness.OVERFITTING and s <= threshold
    )
    print(json.dumps({"threshold": threshold, "validation_overfitting_missed": misses}))
    if args.update_model:
        model.threshold = threshold
        save_model(model, args.model)
    return 0


def _run_report(args, require_labels: bool):
    config = _pipeline_config(args)
    records = load_manifest(args.manifest)
    if require_labels:
        _require_labels(records)
    model = load_model(args.model) if args.model else None
    report = run_batch(records, model, config)
    sys.stdout.write(render_table(report))
    if args.out:
        Path(args.out).write_text(report_to_json(report), encoding="utf-8")
    return report


def cmd_assess(args) -> int:
    report = _run_report(args, require_labels=False)
    return 0 if report.errors == 0 else 2


def cmd_evaluate(args) -> int:
    report = _run_report(args, require_labels=True)
    if args.sweep:
        with open(args.sweep, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["threshold", "recall", "precision", "accuracy", "f1"])
            for row in threshold_sweep(report):
                writer.writerow(
                    [
                        row["threshold"],
                        *(
                            "" if row[name] is None else row[name]
                            for name in ("recall", "precision", "accuracy", "f1")
                        ),
                    ]
                )
    return 0 if report.errors == 0 else 2


def _add_report_flags(sub, require_model: bool):
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--model", required=require_model, default=None)
    sub.add_argument("--embeddings", default=None, help="embedding exchange file (enables file mode)")
    sub.add_argument("--granularity", choices=["executed", "buggy"], default=None)
    sub.add_argument("--threshold", type=float, default=None)
    sub.add_argument("--no-semantic", action="store_true", default=None, dest="no_semantic")
    sub.add_argument("--no-syntactic", action="store_true", default=None, dest="no_syntactic")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--config", default=None, help="JSON file mirroring these flags")
    sub.add_argument("--out", default=None, help="write the JSON report here")


def build_parser() -> _Parser:
    parser = _Parser(prog="patchcheck", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("parse-invariants", help="parse a dump and print it normalized")
    sub.add_argument("file")
    sub.set_defaults(func=cmd_parse_invariants)

    sub = commands.add_parser("select-tests", help="tests related to the modified methods")
    sub.add_argument("--coverage", required=True)
    sub.add_argument("--methods", required=True, help="';'-separated Class.method(params) refs")
    sub.set_defaults(func=cmd_select_tests)

    sub = commands.add_parser("embed", help="produce or validate an embedding exchange file")
    sub.add_argument("--mode", choices=["hashing", "file"], required=True)
    sub.add_argument("--manifest")
    sub.add_argument("--out")
    sub.add_argument("--in", dest="input")
    sub.add_argument("--dim", type=int, default=768)
    sub.set_defaults(func=cmd_embed)

    sub = commands.add_parser("train", help="train the syntactic predictor")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--embeddings", default=None)
    sub.add_argument("--dim", type=int, default=768)
    sub.add_argument("--epochs", type=int, default=2000)
    sub.add_argument("--learning-rate", type=float, default=0.1)
    sub.add_argument("--l2-penalty", type=float, default=1e-4)
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--threshold", type=float, default=0.975)
    sub.set_defaults(func=cmd_train)

    sub = commands.add_parser("tune-threshold", help="pick the no-false-positive threshold")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--model", required=True)
    sub.add_argument("--embeddings", default=None)
    sub.add_argument("--update-model", action="store_true")
    sub.set_defaults(func=cmd_tune_threshold)

    sub = commands.add_parser("assess", help="assess patches (labels optional)")
    _add_report_flags(sub, require_model=False)
    sub.set_defaults(func=cmd_assess)

    sub = commands.add_parser("evaluate", help="assess labeled patches and report metrics")
    _add_report_flags(sub, require_model=False)
    sub.add_argument("--sweep", default=None, help="write a threshold sweep CSV here")
    sub.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (PatchCheckError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
