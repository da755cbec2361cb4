"""Evaluation suites and benchmarks, emitting machine-readable reports.

Every report echoes its full configuration (seed included) so reruns are
reproducible; the negation suite additionally records a checksum of the
store bytes both kernels scanned.
"""

from __future__ import annotations

import json
import os
import platform
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .mapper import Lexicon, default_rules, map_text
from .pattern import Kernel, WavePattern, random_pattern
from .store import SlotStore, capacity_probe

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - ships as a dependency
    threadpool_limits = None

_CONSONANTS = "bdfgklmnprtvz"
_VOWELS = "aeiou"


@dataclass
class EvalReport:
    """A suite's metrics plus the config echo that reproduces them."""

    suite: str
    config: dict
    metrics: dict
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "metrics": self.metrics,
            "failures": self.failures,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def hardware_descriptor() -> str:
    return (
        f"{platform.system()}-{platform.machine()}"
        f" cpus={os.cpu_count()}"
        f" python={platform.python_version()}"
        f" numpy={np.__version__}"
    )


def pseudo_words(count: int, seed: int) -> list[str]:
    """Deterministic pronounceable nonce lexemes (consonant-vowel pairs)."""
    rng = np.random.default_rng([seed, 0xFACE])
    words: list[str] = []
    seen = set()
    while len(words) < count:
        word = "".join(
            rng.choice(list(_CONSONANTS)) + rng.choice(list(_VOWELS))
            for _ in range(3)
        )
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _rank_of(target_id: int, ids: np.ndarray, scores: np.ndarray) -> int:
    """1-based rank under descending score with ascending-id tie-break."""
    order = np.lexsort((ids, -scores))
    return int(np.nonzero(ids[order] == target_id)[0][0]) + 1


def run_negation_eval(dim: int, n_base_words: int, n_distractors: int,
                      seed: int, store_dir=None) -> EvalReport:
    """Store word and negated-word patterns plus distractors, query each
    negated form, and report precision@1 under the coherence kernel versus
    an amplitude-only cosine baseline over the same store bytes.

    Word i lands at id 2i and its negation at 2i+1, so the baseline's exact
    amplitude tie resolves to the un-negated word by the ascending-id rule.
    """
    if n_base_words < 1:
        raise ValueError("n_base_words must be >= 1")
    if n_distractors < 0:
        raise ValueError("n_distractors must be >= 0")
    rules = default_rules()
    lexicon = Lexicon(dim, seed=seed)
    words = pseudo_words(n_base_words, seed)

    with tempfile.TemporaryDirectory() as tmp:
        store = SlotStore.create(Path(store_dir or tmp) / "negation-store", dim,
                                 seed=seed)
        for i, word in enumerate(words):
            store.put(2 * i, map_text(word, lexicon, rules))
            store.put(2 * i + 1, map_text(f"not {word}", lexicon, rules))
        rng = np.random.default_rng([seed, 1])
        for j in range(n_distractors):
            store.put(2 * n_base_words + j, random_pattern(dim, rng, "gaussian"))
        store.flush()
        checksum = store.checksum()

        ids, amp32, _ = store.live_records()
        amp = amp32.astype(np.float64)
        amp_norms = np.linalg.norm(amp, axis=1)

        ranks_resonance, ranks_baseline, failures = [], [], []
        for i, word in enumerate(words):
            target = 2 * i + 1
            probe = map_text(f"not {word}", lexicon, rules)
            hits = store.query_topk(probe, k=store.live_count,
                                    kernel=Kernel.COHERENCE)
            rank_res = next(r.rank for r in hits if r.id == target)
            ranks_resonance.append(rank_res)
            if rank_res != 1:
                failures.append({"word": word, "kernel": "coherence",
                                 "rank": rank_res})
            q = probe.amplitude / np.linalg.norm(probe.amplitude)
            baseline_scores = (amp @ q) / amp_norms
            ranks_baseline.append(_rank_of(target, ids, baseline_scores))
        store.close()

    n = float(n_base_words)
    metrics = {
        "precision_at_1_resonance": sum(r == 1 for r in ranks_resonance) / n,
        "precision_at_1_amplitude_cosine": sum(r == 1 for r in ranks_baseline) / n,
        "mean_rank_resonance": float(np.mean(ranks_resonance)),
        "mean_rank_amplitude_cosine": float(np.mean(ranks_baseline)),
    }
    config = {
        "dim": dim,
        "n_base_words": n_base_words,
        "n_distractors": n_distractors,
        "seed": seed,
        "kernel": "coherence",
        "store_sha256": checksum,
    }
    return EvalReport("negation", config, metrics, failures)


def run_latency_bench(dim: int, n_patterns: int, n_queries: int, seed: int,
                      k: int = 10, workers: int = 1) -> EvalReport:
    """Time exact top-k scans over a freshly built store.

    With workers=1 the BLAS pool is pinned to one thread so the reported
    comparisons_per_sec reflects a single execution context.
    """
    if n_patterns < 1 or n_queries < 1:
        raise ValueError("n_patterns and n_queries must be >= 1")
    rng = np.random.default_rng([seed, 2])
    with tempfile.TemporaryDirectory() as tmp:
        store = SlotStore.create(Path(tmp) / "bench-store", dim, seed=seed)
        for i in range(n_patterns):
            store.put(i, random_pattern(dim, rng, "gaussian"))
        store.flush()
        probes = [random_pattern(dim, rng, "gaussian") for _ in range(n_queries)]

        def _measure() -> np.ndarray:
            store.query_topk(probes[0], k=k, workers=workers)  # warm the cache
            out = np.empty(n_queries)
            for i, probe in enumerate(probes):
                t0 = time.perf_counter()
                store.query_topk(probe, k=k, workers=workers)
                out[i] = time.perf_counter() - t0
            return out

        if workers == 1 and threadpool_limits is not None:
            with threadpool_limits(limits=1):
                times = _measure()
        else:
            times = _measure()
        store.close()

    micros = times * 1e6
    metrics = {
        "mean_query_micros": float(np.mean(micros)),
        "median_query_micros": float(np.median(micros)),
        "p99_query_micros": float(np.percentile(micros, 99)),
        "comparisons_per_sec": float(n_patterns * n_queries / np.sum(times)),
        "n_live": float(n_patterns),
    }
    config = {
        "dim": dim,
        "n_patterns": n_patterns,
        "n_queries": n_queries,
        "seed": seed,
        "k": k,
        "workers": workers,
        "blas_single_thread": bool(workers == 1 and threadpool_limits is not None),
    }
    return EvalReport("latency", config, metrics,
                      details={"hardware": hardware_descriptor()})


def run_capacity_eval(dim: int, item_counts, trials: int, seed: int,
                      candidates: int = 100) -> EvalReport:
    """Superposition-capacity sweep: rank-1 recall accuracy per item count."""
    rows = capacity_probe(dim, item_counts, trials, seed, candidates)
    metrics = {f"recall_accuracy_n{n}": acc for n, acc in rows}
    config = {
        "dim": dim,
        "item_counts": sorted(set(int(n) for n in item_counts)),
        "trials": trials,
        "seed": seed,
        "candidates": candidates,
    }
    details = {"rows": [{"n_items": n, "recall_accuracy": acc} for n, acc in rows]}
    return EvalReport("capacity", config, metrics, details=details)
