#!/usr/bin/env python3
"""Regenerate the bundled mini dataset under tests/data/mini.

Produces code triples, invariant dumps, manifests, the fixture predictor
model, and the golden report derived from the stage oracles. Deterministic:
running twice leaves the tree byte-identical.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import oracle_expected_report  # noqa: E402

from patchcheck.harness import load_manifest  # noqa: E402
from patchcheck.labels import Correctness  # noqa: E402
from patchcheck.pipeline import PipelineConfig, report_to_json, run_batch  # noqa: E402
from patchcheck.syntactic import (  # noqa: E402
    TrainingConfig,
    feature_vector,
    load_model,
    lr_predict,
    lr_train,
    save_model,
)
from patchcheck.embeddings import hashing_embed  # noqa: E402

MINI = ROOT / "tests" / "data" / "mini"
SEP = "=" * 75
DIM = 768
THRESHOLD = 0.975

SIMPLEX_EXIT = "org.opt.MultiDirectional.iterateSimplex(java.util.Comparator):::EXIT"
SIMPLEX_ENTER = "org.opt.MultiDirectional.iterateSimplex(java.util.Comparator):::ENTER"
FIT3_ENTER = "org.fit.GaussianFitter.fit3(double[]):::ENTER"


def dump(mapping: dict[str, list[str]]) -> str:
    lines = []
    for header, invs in mapping.items():
        lines.append(SEP)
        lines.append(header)
        lines.extend(invs)
    return "\n".join(lines) + "\n"


def base_invariants(record: str) -> dict[str, dict[str, list[str]]]:
    """Shared backbone: C holds three invariants, E holds the class-equality
    error behavior; flipped comparison forms exercise equivalence matching."""
    return {
        "buggy_passing": {
            SIMPLEX_EXIT: ["iterations > orig(iterations)", "x >= 0"],
            SIMPLEX_ENTER: ["maxIterations >= 1"],
        },
        "groundtruth_passing": {
            SIMPLEX_EXIT: ["orig(iterations) < iterations", "0 <= x"],
            SIMPLEX_ENTER: ["1 <= maxIterations"],
        },
        "buggy_failing": {
            FIT3_ENTER: ["f.getClass() == Gaussian$Parametric.class", "observations >= 1"],
        },
        "groundtruth_failing": {
            FIT3_ENTER: ["f.getClass() == GaussianFitter$1.class", "observations >= 1"],
        },
    }


def inconclusive_invariants() -> dict[str, dict[str, list[str]]]:
    """No error spec (failing sides agree) and a fully maintained correct spec."""
    files = base_invariants("")
    files["buggy_failing"] = {FIT3_ENTER: ["observations >= 1"]}
    files["groundtruth_failing"] = {FIT3_ENTER: ["observations >= 1"]}
    files["patched_passing"] = {
        SIMPLEX_EXIT: ["orig(iterations) < iterations", "0 <= x"],
        SIMPLEX_ENTER: ["maxIterations >= 1"],
    }
    files["patched_failing"] = {FIT3_ENTER: ["observations >= 1"]}
    return files


def semantic_fixture(kind: str) -> dict[str, dict[str, list[str]]]:
    files = base_invariants("")
    maintained_passing = {
        SIMPLEX_EXIT: ["iterations > orig(iterations)", "x >= 0"],
        SIMPLEX_ENTER: ["maxIterations >= 1"],
    }
    clean_failing = {FIT3_ENTER: ["f.getClass() == GaussianFitter$1.class", "observations >= 1"]}
    if kind == "rule2-class":
        # maintains the buggy class-equality error behavior at fit3 entry
        files["patched_passing"] = maintained_passing
        files["patched_failing"] = {
            FIT3_ENTER: ["f.getClass() == Gaussian$Parametric.class", "observations >= 1"]
        }
    elif kind == "rule1-lost":
        # the always-one-iteration shortcut replaces the progress invariant
        files["patched_passing"] = {
            SIMPLEX_EXIT: ["iterations - orig(iterations) - 1 == 0", "x >= 0"],
            SIMPLEX_ENTER: ["maxIterations >= 1"],
        }
        files["patched_failing"] = clean_failing
    elif kind == "rule1-deleted":
        # the whole simplex exit point disappeared from the patched runs
        files["patched_passing"] = {SIMPLEX_ENTER: ["maxIterations >= 1"]}
        files["patched_failing"] = clean_failing
    elif kind == "rule2-linear":
        files["buggy_failing"] = {
            FIT3_ENTER: [
                "f.getClass() == Gaussian$Parametric.class",
                "observations >= 1",
                "errorCode == 1",
            ]
        }
        files["patched_passing"] = maintained_passing
        # flipped form of the buggy-only linear invariant is still maintained
        files["patched_failing"] = {
            FIT3_ENTER: [
                "f.getClass() == GaussianFitter$1.class",
                "observations >= 1",
                "1 == errorCode",
            ]
        }
    else:
        raise ValueError(kind)
    return files


FULL_METHOD = """public double {name}(double[] values) {{
    double {acc} = 0.0;
    for (int index = 0; index < values.length; index++) {{
        {acc} += values[index] * {weight};
        if ({acc} > {limit}) {{
            notifyProgress{salt}(index, {acc});
        }}
    }}
    return finish{salt}({acc});
}}
"""

SHORTCUT = """public double {name}(double[] values) {{
    if (true) {{
        return {stub};
    }}
}}
"""


def full_method(name: str, salt: str) -> str:
    return FULL_METHOD.format(
        name=name, acc=f"total{salt}", weight=f"scale{salt}", limit=f"bound{salt}", salt=salt
    )


def code_triple(kind: str, salt: str) -> dict[str, str]:
    """buggy / patched / groundtruth method texts for one record."""
    ground = full_method(f"compute{salt}", salt).replace(
        f"finish{salt}", f"finishChecked{salt}"
    )
    buggy = full_method(f"compute{salt}", salt).replace(
        f"notifyProgress{salt}", f"notifyEarly{salt}"
    )
    if kind == "near-ground":
        patched = ground.replace(f"bound{salt}", f"boundary{salt}")
    elif kind == "equal-ground":
        patched = ground
    elif kind == "shortcut":
        patched = SHORTCUT.format(name=f"quick{salt}", stub=f"cachedAnswer{salt}")
    else:
        raise ValueError(kind)
    return {"buggy": buggy, "patched": patched, "groundtruth": ground}


EVAL_PLAN = [
    # id, label, invariant fixture, code kind, project, bug, tool
    ("p01", "overfitting", "rule2-class", "near-ground", "Math", "58", "nopol"),
    ("p02", "overfitting", "rule1-lost", "near-ground", "Math", "84", "kali"),
    ("p03", "overfitting", "rule1-deleted", "near-ground", "Lang", "7", "toolA"),
    ("p04", "overfitting", "rule2-linear", "near-ground", "Chart", "3", "toolB"),
    ("p05", "overfitting", "inconclusive", "shortcut", "Math", "12", "toolA"),
    ("p06", "overfitting", "inconclusive", "shortcut", "Time", "4", "toolB"),
    ("p07", "overfitting", "inconclusive", "shortcut", "Lang", "21", "toolA"),
    ("p08", "overfitting", "inconclusive", "shortcut", "Chart", "9", "toolB"),
    ("p09", "correct", "inconclusive", "equal-ground", "Math", "30", "toolA"),
    ("p10", "correct", None, "equal-ground", "Time", "15", "toolB"),
    ("p11", "correct", "inconclusive", "near-ground", "Lang", "33", "toolA"),
    ("p12", "correct", "inconclusive", "near-ground", "Chart", "18", "toolB"),
]


def write_eval_dataset() -> Path:
    manifest = []
    for rid, label, fixture, code_kind, project, bug, tool in EVAL_PLAN:
        salt = f"Ev{rid[-2:]}"
        code_dir = MINI / "code" / rid
        code_dir.mkdir(parents=True)
        code_paths = {}
        for role, text in code_triple(code_kind, salt).items():
            (code_dir / f"{role}.java").write_text(text, encoding="utf-8")
            code_paths[role] = f"code/{rid}/{role}.java"
        entry = {
            "id": rid,
            "project": project,
            "bug_id": bug,
            "tool": tool,
            "label": label,
            "code_paths": code_paths,
        }
        if fixture is not None:
            files = (
                inconclusive_invariants() if fixture == "inconclusive" else semantic_fixture(fixture)
            )
            inv_dir = MINI / "invariants" / rid
            inv_dir.mkdir(parents=True)
            entry["invariant_paths"] = {}
            for slot, mapping in files.items():
                (inv_dir / f"{slot}.txt").write_text(dump(mapping), encoding="utf-8")
                entry["invariant_paths"][slot] = f"invariants/{rid}/{slot}.txt"
        manifest.append(entry)
    path = MINI / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def write_train_dataset() -> Path:
    manifest = []
    for i in range(8):
        for label, code_kind in (
            ("overfitting", "shortcut"),
            ("correct", "equal-ground" if i % 2 == 0 else "near-ground"),
        ):
            rid = f"tr-{label[:4]}-{i:02d}"
            salt = f"Tr{label[:2].capitalize()}{i:02d}"
            code_dir = MINI / "train-code" / rid
            code_dir.mkdir(parents=True)
            code_paths = {}
            for role, text in code_triple(code_kind, salt).items():
                (code_dir / f"{role}.java").write_text(text, encoding="utf-8")
                code_paths[role] = f"train-code/{rid}/{role}.java"
            manifest.append({"id": rid, "label": label, "code_paths": code_paths})
    path = MINI / "train_manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def train_fixture_model(train_manifest: Path) -> Path:
    records = load_manifest(train_manifest)
    features = []
    labels = []
    for record in records:
        vecs = {
            role: hashing_embed(
                Path(record.code_paths[role]).read_text(encoding="utf-8"), DIM
            )
            for role in ("buggy", "patched", "groundtruth")
        }
        features.append(feature_vector(vecs["buggy"], vecs["patched"], vecs["groundtruth"]))
        labels.append(record.label)
    model = lr_train(features, labels, TrainingConfig(learning_rate=0.5, epochs=4000, seed=42))
    model.threshold = THRESHOLD
    path = MINI / "model.json"
    save_model(model, path)
    return path


def main() -> int:
    if MINI.exists():
        shutil.rmtree(MINI)
    MINI.mkdir(parents=True)

    train_manifest = write_train_dataset()
    eval_manifest = write_eval_dataset()
    model_path = train_fixture_model(train_manifest)

    expected = oracle_expected_report(eval_manifest, model_path, THRESHOLD)
    golden = json.dumps(expected, indent=2) + "\n"
    (MINI / "golden_report.json").write_text(golden, encoding="utf-8")

    # sanity: every record lands on the intended stage with a safe margin
    by_id = {entry["id"]: entry for entry in expected["per_patch"]}
    for rid, label, fixture, code_kind, *_ in EVAL_PLAN:
        entry = by_id[rid]
        if fixture is None:
            assert entry["stage"] == "fallback", entry
        elif fixture != "inconclusive":
            assert entry["stage"] == "semantic", entry
        else:
            assert entry["stage"] == "syntactic", entry
        assert entry["verdict"] == label, entry
        score = entry.get("score")
        if score is not None:
            margin = abs(score - THRESHOLD)
            assert margin > 0.005, (rid, score)

    # sanity: the pipeline reproduces the oracle-derived report byte for byte
    model = load_model(model_path)
    report = run_batch(load_manifest(eval_manifest), model, PipelineConfig())
    produced = report_to_json(report)
    if produced != golden:
        sys.stderr.write(produced)
        sys.stderr.write(golden)
        raise SystemExit("pipeline report differs from the oracle-derived golden")

    scores = {
        e["id"]: e.get("score") for e in expected["per_patch"] if e.get("score") is not None
    }
    print(f"mini dataset written to {MINI}")
    print(json.dumps(scores, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
