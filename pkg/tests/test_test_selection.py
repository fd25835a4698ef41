import json
import random

import pytest

from oracles import brute_force_select
from patchcheck.errors import EmptyModifiedSet, ManifestError
from patchcheck.test_selection import CoverageMap, load_coverage, select_related_tests


def cov(mapping):
    return CoverageMap({t: frozenset(ms) for t, ms in mapping.items()})


def test_selects_tests_covering_a_modified_method():
    coverage = cov({"t1": {("A", "f()")}, "t2": {("B", "g()")}})
    assert select_related_tests(coverage, {("A", "f()")}) == ["t1"]


def test_modified_set_covering_everything_selects_all_tests():
    coverage = cov({"t2": {("A", "f()")}, "t1": {("B", "g()")}})
    selected = select_related_tests(coverage, {("A", "f()"), ("B", "g()")})
    assert selected == ["t1", "t2"]


def test_empty_modified_set_is_an_error():
    with pytest.raises(EmptyModifiedSet):
        select_related_tests(cov({"t1": {("A", "f()")}}), set())


def test_result_is_subset_and_irrelevant_tests_change_nothing():
    coverage = cov({"t1": {("A", "f()")}, "t2": {("B", "g()")}})
    selected = select_related_tests(coverage, {("A", "f()")})
    widened = cov({"t1": {("A", "f()")}, "t2": {("B", "g()")}, "t3": {("C", "h()")}})
    assert select_related_tests(widened, {("A", "f()")}) == selected
    assert set(selected) <= set(coverage.tests)


def test_selection_matches_brute_force_on_random_maps():
    rng = random.Random(31)
    methods = [(f"C{i}", f"m{i}()") for i in range(12)]
    for _ in range(200):
        tests = {
            f"t{i:03d}": set(rng.sample(methods, rng.randint(0, 4)))
            for i in range(rng.randint(1, 100))
        }
        modified = set(rng.sample(methods, rng.randint(1, 3)))
        got = select_related_tests(CoverageMap({t: frozenset(m) for t, m in tests.items()}), modified)
        assert got == brute_force_select(tests, modified)


def test_load_coverage_file(tmp_path):
    payload = {"tests": {"TestFoo::one": ["a.b.C.f(int)", "a.b.C.g()"], "TestFoo::two": []}}
    path = tmp_path / "coverage.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    coverage = load_coverage(path)
    assert coverage.tests["TestFoo::one"] == frozenset(
        {("a.b.C", "f(int)"), ("a.b.C", "g()")}
    )
    assert coverage.tests["TestFoo::two"] == frozenset()


def test_load_coverage_rejects_bad_files(tmp_path):
    path = tmp_path / "coverage.json"
    path.write_text("{\"nope\": 1}", encoding="utf-8")
    with pytest.raises(ManifestError):
        load_coverage(path)
    with pytest.raises(ManifestError):
        load_coverage(tmp_path / "missing.json")
