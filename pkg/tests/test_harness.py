import json
import random

import pytest

from oracles import pairwise_auc
from patchcheck.errors import (
    ManifestError,
    MissingCodeFile,
    NoCorrectPatches,
    SingleClassData,
    TooFewRecords,
)
from patchcheck.harness import (
    ConfusionMatrix,
    PatchRecord,
    compute_auc,
    compute_metrics,
    dedup_against_eval,
    load_manifest,
    normalize_code_tokens,
    round_half_up,
    split_train_valid,
    tune_threshold,
)
from patchcheck.labels import Correctness

O = Correctness.OVERFITTING
C = Correctness.CORRECT


def test_metrics_full_pipeline_row():
    report = compute_metrics(ConfusionMatrix(tp=86, fn=23, fp=3, tn=27))
    assert round_half_up(report.recall) == 0.79
    assert round_half_up(report.precision) == 0.97
    assert round_half_up(report.accuracy) == 0.81
    assert round_half_up(report.f1) == 0.87
    assert report.recall == pytest.approx(0.789, abs=5e-4)
    assert report.precision == pytest.approx(0.966, abs=5e-4)


def test_metrics_semantic_only_row():
    report = compute_metrics(ConfusionMatrix(tp=56, fn=53, fp=2, tn=28))
    rounded = [round_half_up(x) for x in (report.recall, report.precision, report.accuracy, report.f1)]
    assert rounded == [0.51, 0.97, 0.60, 0.67]


def test_metrics_syntactic_only_row():
    report = compute_metrics(ConfusionMatrix(tp=74, fn=35, fp=3, tn=27))
    assert report.accuracy == pytest.approx(0.727, abs=5e-4)
    assert report.f1 == pytest.approx(0.796, abs=5e-4)
    rounded = [round_half_up(x) for x in (report.recall, report.precision, report.accuracy, report.f1)]
    assert rounded == [0.68, 0.96, 0.73, 0.80]


def test_metrics_degenerate_all_negative():
    report = compute_metrics(ConfusionMatrix(tp=0, fn=0, fp=0, tn=10))
    assert report.recall is None
    assert report.precision is None
    assert report.f1 is None
    assert report.accuracy == 1.0
    assert set(report.undefined) == {"recall", "precision", "f1"}


def test_round_half_up_is_half_up():
    assert round_half_up(0.965) == 0.97
    assert round_half_up(0.785) == 0.79
    assert round_half_up(0.7849) == 0.78


def test_auc_perfect_separation():
    assert compute_auc([(0.9, O), (0.8, O), (0.1, C)]) == 1.0


def test_auc_half_ordered():
    assert compute_auc([(0.9, O), (0.4, O), (0.6, C)]) == 0.5


def test_auc_all_ties():
    assert compute_auc([(0.5, O), (0.5, O), (0.5, C)]) == 0.5


def test_auc_single_class_is_an_error():
    with pytest.raises(SingleClassData):
        compute_auc([(0.5, O), (0.7, O)])


def test_auc_matches_pairwise_oracle_on_random_sets():
    rng = random.Random(77)
    for _ in range(300):
        n = rng.randint(2, 50)
        scores = [
            (rng.choice([rng.random(), round(rng.random(), 1)]), rng.choice([O, C]))
            for _ in range(n)
        ]
        labels = {lab for _, lab in scores}
        if len(labels) < 2:
            scores[0] = (scores[0][0], O)
            scores[1] = (scores[1][0], C)
        assert abs(compute_auc(scores) - pairwise_auc(scores)) <= 1e-12


def _record(tmp_path, rid, patched_text):
    path = tmp_path / f"{rid}.java"
    path.write_text(patched_text, encoding="utf-8")
    return PatchRecord(id=rid, code_paths={"patched": str(path)})


def test_dedup_removes_byte_identical_and_token_equal_patches(tmp_path):
    eval_records = [_record(tmp_path, "e1", "int x = 1; // fix\nreturn x;\n")]
    train = [
        _record(tmp_path, "t1", "int x = 1; // fix\nreturn x;\n"),
        _record(tmp_path, "t2", "int x = 1;\n/* different comment */ return x;\n"),
        _record(tmp_path, "t3", "int x = 2; return x;\n"),
    ]
    kept, removed = dedup_against_eval(train, eval_records)
    assert removed == ["t1", "t2"]
    assert [r.id for r in kept] == ["t3"]
    kept_again, removed_again = dedup_against_eval(kept, eval_records)
    assert [r.id for r in kept_again] == ["t3"] and removed_again == []


def test_dedup_disjoint_corpora_is_identity(tmp_path):
    eval_records = [_record(tmp_path, "e1", "a();")]
    train = [_record(tmp_path, "t1", "b();"), _record(tmp_path, "t2", "c();")]
    kept, removed = dedup_against_eval(train, eval_records)
    assert [r.id for r in kept] == ["t1", "t2"] and removed == []


def test_dedup_missing_code_file(tmp_path):
    record = PatchRecord(id="ghost", code_paths={"patched": str(tmp_path / "nope.java")})
    with pytest.raises(MissingCodeFile):
        dedup_against_eval([record], [])


def test_normalize_code_tokens_strips_comments_and_whitespace():
    a = normalize_code_tokens("int x=1; // note\nreturn /*hm*/ x;")
    b = normalize_code_tokens("int  x = 1 ;\nreturn x ;")
    assert a == b
    assert normalize_code_tokens('s = "a // not comment";') == (
        "s",
        "=",
        '"a // not comment"',
        ";",
    )


def test_split_matches_published_counts():
    records = [PatchRecord(id=f"p{i}") for i in range(746)]
    train, valid = split_train_valid(records, 0.9, seed=1)
    assert (len(train), len(valid)) == (671, 75)


def test_split_small_and_deterministic():
    records = [PatchRecord(id=f"p{i}") for i in range(10)]
    first = split_train_valid(records, 0.9, seed=7)
    second = split_train_valid(records, 0.9, seed=7)
    assert (len(first[0]), len(first[1])) == (9, 1)
    assert [r.id for r in first[0]] == [r.id for r in second[0]]
    other_seed = split_train_valid(records, 0.9, seed=8)
    assert {r.id for r in other_seed[0]} != {r.id for r in first[0]} or [
        r.id for r in other_seed[0]
    ] != [r.id for r in first[0]]


def test_split_preserves_membership():
    records = [PatchRecord(id=f"p{i}") for i in range(17)]
    train, valid = split_train_valid(records, 0.7, seed=3)
    assert {r.id for r in train} | {r.id for r in valid} == {r.id for r in records}
    assert not ({r.id for r in train} & {r.id for r in valid})


def test_split_rejects_degenerate_inputs():
    with pytest.raises(TooFewRecords):
        split_train_valid([PatchRecord(id="only")], 0.9, seed=1)
    with pytest.raises(ValueError):
        split_train_valid([PatchRecord(id="a"), PatchRecord(id="b")], 1.0, seed=1)


def test_tune_threshold_takes_max_correct_score():
    assert tune_threshold([(0.2, C), (0.6, C), (0.9, O)]) == 0.6
    assert tune_threshold([(0.98, C), (0.5, O), (0.7, O)]) == 0.98


def test_tune_threshold_requires_a_correct_score():
    with pytest.raises(NoCorrectPatches):
        tune_threshold([(0.9, O)])


def test_tuned_threshold_never_misclassifies_validation_correct():
    rng = random.Random(55)
    for _ in range(100):
        scores = [
            (rng.random(), rng.choice([O, C]))
            for _ in range(rng.randint(2, 40))
        ]
        if not any(lab is C for _, lab in scores):
            scores.append((rng.random(), C))
        threshold = tune_threshold(scores)
        false_positives = sum(1 for s, lab in scores if lab is C and s > threshold)
        assert false_positives == 0


def test_manifest_round_trip(tmp_path):
    (tmp_path / "code").mkdir()
    (tmp_path / "code" / "b.java").write_text("b", encoding="utf-8")
    manifest = [
        {
            "id": "math84-kali-1",
            "project": "Math",
            "bug_id": "84",
            "tool": "Kali",
            "label": "overfitting",
            "code_paths": {"buggy": "code/b.java"},
            "invariant_paths": {"buggy_passing": "inv/bp.txt"},
            "modified_methods": ["org.Foo.iterateSimplex(Comparator)"],
        },
        {"id": "unlabeled", "code_paths": {}},
    ]
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest), encoding="utf-8")
    records = load_manifest(path)
    assert records[0].label is O
    assert records[0].code_paths["buggy"] == str(tmp_path / "code" / "b.java")
    assert records[0].invariant_paths["buggy_passing"] == str(tmp_path / "inv" / "bp.txt")
    assert records[1].label is None


def test_manifest_rejects_duplicates_and_non_arrays(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"id": "x"}), encoding="utf-8")
    with pytest.raises(ManifestError):
        load_manifest(path)
    path.write_text(json.dumps([{"id": "x"}, {"id": "x"}]), encoding="utf-8")
    with pytest.raises(ManifestError):
        load_manifest(path)
