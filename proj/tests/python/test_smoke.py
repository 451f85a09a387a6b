"""Smoke tests for the python module: thin checks that the bindings wire
through to the library, not a second test suite."""

import math

import pytest

import iefsvm


def test_exports():
    for name in ("Model", "auc", "binary_entropy", "enumerate_patterns",
                 "holm_test", "memberships", "train", "wilcoxon_signed_rank"):
        assert hasattr(iefsvm, name)


def test_entropy_anchor():
    assert iefsvm.binary_entropy(1, 11) == pytest.approx(0.3046, abs=5e-5)
    assert iefsvm.binary_entropy(4, 8) == pytest.approx(math.log(2.0), abs=1e-12)
    assert iefsvm.binary_entropy(3, 13) == iefsvm.binary_entropy(10, 13)


def test_pattern_enumeration():
    patterns = iefsvm.enumerate_patterns()
    assert len(patterns) == 4374
    nonzero = [p["nonzero_entropies"] for p in patterns]
    assert nonzero.count(0) == 2
    assert nonzero.count(1) == 4
    assert nonzero.count(2) == 12
    assert patterns[0]["pos_counts"] == [0] * 8


def test_two_point_solution():
    model = iefsvm.train([[0.0], [2.0]], [1, -1], method="svm", c=10.0,
                         kernel="linear")
    assert model.n_support == 2
    assert model.bias == pytest.approx(1.0, abs=1e-6)
    assert model.decision_value([0.0]) == pytest.approx(1.0, abs=1e-6)
    assert model.decision_value([2.0]) == pytest.approx(-1.0, abs=1e-6)
    assert model.predict([[0.0], [2.0], [-5.0]]) == [1, -1, 1]


def test_model_json_round_trip():
    model = iefsvm.train([[0.0, 1.0], [1.0, 0.0], [3.0, 3.0], [4.0, 3.0]],
                         [1, 1, -1, -1], method="cssvm")
    clone = iefsvm.Model.from_json(model.to_json())
    assert clone.bias == model.bias
    assert clone.decision_value([2.0, 2.0]) == model.decision_value([2.0, 2.0])


def test_membership_bounds():
    rows = [[float(i), float(i % 5)] for i in range(24)]
    labels = [1 if i < 6 else -1 for i in range(24)]
    for method in ("svm", "cssvm", "efsvm", "iefsvm"):
        values = iefsvm.memberships(rows, labels, method=method, k=5)
        assert len(values) == 24
        assert all(0.0 <= v <= 1.0 for v in values)
    css = iefsvm.memberships(rows, labels, method="cssvm")
    assert css[0] == 1.0
    assert css[23] == pytest.approx(1.0 / 3.0)


def test_auc_identity():
    predicted = [1, 1, -1, -1, -1]
    truth = [1, -1, 1, -1, -1]
    # TPR 1/2, FPR 1/3: (1 + 1/2 - 1/3) / 2
    assert iefsvm.auc(predicted, truth) == pytest.approx(7.0 / 12.0)


def test_stats_surface():
    res = iefsvm.wilcoxon_signed_rank([1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
                                      [0.5, 1.0, 2.0, 2.5, 4.0, 5.0])
    assert res["n_nonzero"] == 6
    assert 0.0 < res["p"] <= 1.0

    rows = iefsvm.holm_test([("champ", 1.2), ("a", 3.0), ("b", 2.0)],
                            "champ", 10)
    assert [r["method"] for r in rows] == ["a", "b"]
    assert rows[0]["adjusted_alpha"] == pytest.approx(0.025)
    assert rows[1]["adjusted_alpha"] == pytest.approx(0.05)
