import json

import numpy as np
import pytest

from wavefield import run_capacity_eval, run_latency_bench, run_negation_eval
from wavefield.evalbench import hardware_descriptor, pseudo_words

REPORT_KEYS = {"suite", "config", "metrics", "failures", "details"}


def test_pseudo_words_deterministic_and_unique():
    a = pseudo_words(50, seed=7)
    b = pseudo_words(50, seed=7)
    assert a == b
    assert len(set(a)) == 50
    assert pseudo_words(10, seed=8) != pseudo_words(10, seed=7)[:10]
    assert all(w.isalpha() and w.islower() for w in a)


def test_negation_eval_small():
    report = run_negation_eval(dim=64, n_base_words=10, n_distractors=50, seed=7)
    assert set(report.to_dict()) == REPORT_KEYS
    assert report.metrics["precision_at_1_resonance"] == 1.0
    assert report.metrics["precision_at_1_amplitude_cosine"] == 0.0
    assert report.metrics["mean_rank_amplitude_cosine"] == pytest.approx(2.0)
    assert report.failures == []
    assert len(report.config["store_sha256"]) == 64
    assert report.config["seed"] == 7


def test_negation_eval_two_candidate_case():
    # one word, no distractors: both the word and its negation are present,
    # resonance still puts the negated form first
    report = run_negation_eval(dim=64, n_base_words=1, n_distractors=0, seed=3)
    assert report.metrics["precision_at_1_resonance"] == 1.0
    assert report.metrics["precision_at_1_amplitude_cosine"] == 0.0


def test_negation_eval_deterministic():
    a = run_negation_eval(dim=64, n_base_words=5, n_distractors=20, seed=11)
    b = run_negation_eval(dim=64, n_base_words=5, n_distractors=20, seed=11)
    assert a.to_json() == b.to_json()


def test_negation_eval_validation():
    with pytest.raises(ValueError):
        run_negation_eval(dim=64, n_base_words=0, n_distractors=0, seed=1)
    with pytest.raises(ValueError):
        run_negation_eval(dim=64, n_base_words=1, n_distractors=-1, seed=1)


def test_latency_bench_single_record_is_fast():
    report = run_latency_bench(dim=32, n_patterns=1, n_queries=20, seed=5)
    assert report.metrics["p99_query_micros"] < 1000.0  # single comparison
    assert report.metrics["comparisons_per_sec"] > 0
    assert report.details["hardware"] == hardware_descriptor()
    assert report.config["blas_single_thread"] in (True, False)


def test_latency_bench_schema():
    report = run_latency_bench(dim=16, n_patterns=50, n_queries=5, seed=5)
    assert set(report.to_dict()) == REPORT_KEYS
    assert {"mean_query_micros", "median_query_micros", "p99_query_micros",
            "comparisons_per_sec", "n_live"} == set(report.metrics)


@pytest.mark.slow
def test_latency_scales_linearly_with_store_size():
    # doubling n at fixed dim doubles the mean scan time, within +/-30%
    def mean_micros(n):
        trials = [
            run_latency_bench(dim=64, n_patterns=n, n_queries=40,
                              seed=5).metrics["mean_query_micros"]
            for _ in range(3)
        ]
        return float(np.median(trials))

    small, large = mean_micros(20_000), mean_micros(40_000)
    ratio = large / small
    assert 1.4 <= ratio <= 2.6


def test_capacity_eval_report():
    report = run_capacity_eval(dim=256, item_counts=[1, 4], trials=2, seed=9,
                               candidates=10)
    assert report.metrics["recall_accuracy_n1"] == 1.0
    rows = report.details["rows"]
    assert [r["n_items"] for r in rows] == [1, 4]
    again = run_capacity_eval(dim=256, item_counts=[4, 1], trials=2, seed=9,
                              candidates=10)
    assert report.to_json() == again.to_json()


def test_report_json_is_canonical():
    report = run_capacity_eval(dim=64, item_counts=[1], trials=1, seed=2,
                               candidates=4)
    text = report.to_json()
    assert text.endswith("\n")
    assert json.loads(text) == report.to_dict()
    # keys sorted at every level
    parsed = json.loads(text)
    assert list(parsed) == sorted(parsed)
