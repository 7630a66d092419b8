"""Word Embedding Association Test: association scores, effect size,
permutation significance, and the bundled eight-test battery."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from lyricstats.embeddings import EmbeddingTable

EXACT_PARTITION_BUDGET = 200_000
DEFAULT_MC_SAMPLES = 100_000


class WeatError(Exception):
    pass


class UnderfilledListError(WeatError):
    """A word list dropped below the minimum size after vocabulary filtering."""


class DegenerateStatisticError(WeatError):
    """All association scores equal; the effect-size denominator is zero."""


class ExactBudgetError(WeatError):
    """C(2n, n) partitions exceed the exact-enumeration budget."""


@dataclass(frozen=True)
class WeatTest:
    name: str
    targets_x: tuple[str, ...]
    targets_y: tuple[str, ...]
    attributes_a: tuple[str, ...]
    attributes_b: tuple[str, ...]

    def __post_init__(self) -> None:
        for label, words in (
            ("targets_x", self.targets_x),
            ("targets_y", self.targets_y),
            ("attributes_a", self.attributes_a),
            ("attributes_b", self.attributes_b),
        ):
            if not words:
                raise WeatError(f"{self.name}: {label} is empty")


@dataclass(frozen=True)
class OovPolicy:
    """Drop out-of-vocabulary words, then truncate the longer target list from
    its end to restore |X| = |Y|."""

    min_targets: int = 2
    min_attributes: int = 2


@dataclass(frozen=True)
class WeatResult:
    test_name: str
    effect_size: Optional[float]
    test_statistic: Optional[float]
    p_value: Optional[float]
    p_method: str  # "exact" | "monte_carlo(n=..., seed=...)" | "none"
    coverage: dict  # list label -> (requested, found)
    dropped_words: tuple[str, ...] = ()
    error: Optional[str] = None


def load_battery(path: str) -> list[WeatTest]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    tests = []
    for entry in raw:
        tests.append(
            WeatTest(
                name=entry["name"],
                targets_x=tuple(entry["targets_x"]),
                targets_y=tuple(entry["targets_y"]),
                attributes_a=tuple(entry["attributes_a"]),
                attributes_b=tuple(entry["attributes_b"]),
            )
        )
    return tests


def _usable(words: Sequence[str], emb: EmbeddingTable) -> list[str]:
    return [w for w in words if w in emb and w not in emb.zero_words]


def apply_oov_policy(test: WeatTest, emb: EmbeddingTable, policy: OovPolicy = OovPolicy()):
    """Filter each list to the embedding vocabulary, rebalance targets, and
    report coverage and drops. Raises UnderfilledListError when a list falls
    below its minimum."""
    x = _usable(test.targets_x, emb)
    y = _usable(test.targets_y, emb)
    a = _usable(test.attributes_a, emb)
    b = _usable(test.attributes_b, emb)
    dropped = [w for w in (*test.targets_x, *test.targets_y, *test.attributes_a, *test.attributes_b)
               if w not in emb or w in emb.zero_words]
    # rebalance: truncate the longer target list from its end (file order)
    n = min(len(x), len(y))
    dropped += x[n:] + y[n:]
    x, y = x[:n], y[:n]
    coverage = {
        "targets_x": (len(test.targets_x), len(x)),
        "targets_y": (len(test.targets_y), len(y)),
        "attributes_a": (len(test.attributes_a), len(a)),
        "attributes_b": (len(test.attributes_b), len(b)),
    }
    if n < policy.min_targets:
        raise UnderfilledListError(
            f"{test.name}: target lists under-filled after filtering (|X|=|Y|={n})"
        )
    if len(a) < policy.min_attributes or len(b) < policy.min_attributes:
        raise UnderfilledListError(
            f"{test.name}: attribute lists under-filled after filtering "
            f"(|A|={len(a)}, |B|={len(b)})"
        )
    return x, y, a, b, coverage, tuple(dropped)


def _unit_rows(words: Sequence[str], emb: EmbeddingTable) -> np.ndarray:
    mat = np.vstack([emb.get(w) for w in words])
    return mat / np.linalg.norm(mat, axis=1, keepdims=True)


def association(w: str, attributes_a: Sequence[str], attributes_b: Sequence[str], emb: EmbeddingTable) -> float:
    """Mean cosine of w to the A attributes minus mean cosine to the B attributes."""
    for word in (w, *attributes_a, *attributes_b):
        if word not in emb:
            raise WeatError(f"word {word!r} not in vocabulary; filter before calling")
    scores = _association_scores([w], attributes_a, attributes_b, emb)
    return float(scores[0])


def _association_scores(
    targets: Sequence[str], attributes_a: Sequence[str], attributes_b: Sequence[str], emb: EmbeddingTable
) -> np.ndarray:
    t = _unit_rows(targets, emb)
    a = _unit_rows(attributes_a, emb)
    b = _unit_rows(attributes_b, emb)
    return (t @ a.T).mean(axis=1) - (t @ b.T).mean(axis=1)


def test_statistic(test: WeatTest, emb: EmbeddingTable, policy: OovPolicy = OovPolicy()) -> float:
    """Sum of X association scores minus sum of Y association scores."""
    x, y, a, b, _, _ = apply_oov_policy(test, emb, policy)
    sx = _association_scores(x, a, b, emb)
    sy = _association_scores(y, a, b, emb)
    return float(sx.sum() - sy.sum())


def _effect_size_from_scores(sx: np.ndarray, sy: np.ndarray) -> float:
    pooled = np.concatenate([sx, sy])
    denom = pooled.std()  # population std
    if denom == 0.0:
        raise DegenerateStatisticError("all association scores equal; effect size undefined")
    return float((sx.mean() - sy.mean()) / denom)


def effect_size(test: WeatTest, emb: EmbeddingTable, policy: OovPolicy = OovPolicy()) -> WeatResult:
    x, y, a, b, coverage, dropped = apply_oov_policy(test, emb, policy)
    sx = _association_scores(x, a, b, emb)
    sy = _association_scores(y, a, b, emb)
    return WeatResult(
        test_name=test.name,
        effect_size=_effect_size_from_scores(sx, sy),
        test_statistic=float(sx.sum() - sy.sum()),
        p_value=None,
        p_method="none",
        coverage=coverage,
        dropped_words=dropped,
    )


def _partition_p(scores: np.ndarray, n: int, observed: float, inclusive: bool) -> float:
    """Exact one-sided p over all equal-size partitions of the pooled scores."""
    total_sum = scores.sum()
    count = 0
    n_parts = 0
    for idx in combinations(range(len(scores)), n):
        s_x = scores[list(idx)].sum()
        stat = 2.0 * s_x - total_sum  # sum(X) - sum(Y)
        if stat > observed or (inclusive and stat == observed):
            count += 1
        n_parts += 1
    return count / n_parts


def permutation_p(
    test: WeatTest,
    emb: EmbeddingTable,
    mode: str = "exact",
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
    inclusive: bool = False,
    policy: OovPolicy = OovPolicy(),
) -> float:
    """One-sided permutation p-value: the proportion of equal-size partitions
    of X∪Y whose statistic beats the observed one (strict ">" by default)."""
    x, y, a, b, _, _ = apply_oov_policy(test, emb, policy)
    n = len(x)
    sx = _association_scores(x, a, b, emb)
    sy = _association_scores(y, a, b, emb)
    pooled = np.concatenate([sx, sy])
    total_sum = pooled.sum()
    # observed statistic computed with the same float operations as the
    # partition statistics below, so the identity partition never flips a
    # strict comparison by rounding
    observed = float(2.0 * pooled[np.arange(n)].sum() - total_sum)
    if mode == "exact":
        n_partitions = math.comb(2 * n, n)
        if n_partitions > EXACT_PARTITION_BUDGET:
            raise ExactBudgetError(
                f"C({2 * n},{n}) = {n_partitions} partitions exceed the exact budget "
                f"of {EXACT_PARTITION_BUDGET}; use monte_carlo"
            )
        return _partition_p(pooled, n, observed, inclusive)
    if mode == "monte_carlo":
        if seed is None:
            raise WeatError("monte_carlo mode requires an explicit seed")
        rng = np.random.default_rng(seed)
        hits = 0
        remaining = n_samples
        while remaining > 0:
            chunk = min(remaining, 20_000)
            # a uniform random n-subset per row via argsort of iid uniforms;
            # indices sorted so each subset sums in the same order as exact mode
            order = np.sort(np.argsort(rng.random((chunk, len(pooled))), axis=1)[:, :n], axis=1)
            stats = 2.0 * pooled[order].sum(axis=1) - total_sum
            if inclusive:
                hits += int(np.count_nonzero(stats >= observed))
            else:
                hits += int(np.count_nonzero(stats > observed))
            remaining -= chunk
        return hits / n_samples
    raise WeatError(f"unknown p-value mode {mode!r}")


def run_test(
    test: WeatTest,
    emb: EmbeddingTable,
    policy: OovPolicy = OovPolicy(),
    p_mode: str = "monte_carlo",
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = 0,
    inclusive: bool = False,
) -> WeatResult:
    try:
        x, y, a, b, coverage, dropped = apply_oov_policy(test, emb, policy)
    except WeatError as exc:
        return WeatResult(
            test_name=test.name,
            effect_size=None,
            test_statistic=None,
            p_value=None,
            p_method="none",
            coverage={},
            error=str(exc),
        )
    try:
        sx = _association_scores(x, a, b, emb)
        sy = _association_scores(y, a, b, emb)
        d = _effect_size_from_scores(sx, sy)
        stat = float(sx.sum() - sy.sum())
        p = permutation_p(
            test, emb, mode=p_mode, n_samples=n_samples, seed=seed, inclusive=inclusive, policy=policy
        )
        method = "exact" if p_mode == "exact" else f"monte_carlo(n={n_samples}, seed={seed})"
    except WeatError as exc:
        return WeatResult(
            test_name=test.name,
            effect_size=None,
            test_statistic=None,
            p_value=None,
            p_method="none",
            coverage=coverage,
            dropped_words=dropped,
            error=str(exc),
        )
    return WeatResult(
        test_name=test.name,
        effect_size=d,
        test_statistic=stat,
        p_value=p,
        p_method=method,
        coverage=coverage,
        dropped_words=dropped,
    )


def run_battery(
    tests: Sequence[WeatTest],
    emb: EmbeddingTable,
    policy: OovPolicy = OovPolicy(),
    p_mode: str = "monte_carlo",
    n_samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = 0,
    inclusive: bool = False,
) -> list[WeatResult]:
    """One WeatResult per test, order preserved; per-test failures are
    reported in the result's error field without aborting the battery."""
    return [
        run_test(t, emb, policy=policy, p_mode=p_mode, n_samples=n_samples, seed=seed, inclusive=inclusive)
        for t in tests
    ]


def write_results_csv(results: Sequence[WeatResult], path: str) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "test_name",
                "effect_size",
                "test_statistic",
                "p_value",
                "p_method",
                "coverage_x",
                "coverage_y",
                "coverage_a",
                "coverage_b",
                "dropped_words",
                "error",
            ]
        )
        for r in results:
            cov = {k: f"{v[1]}/{v[0]}" for k, v in r.coverage.items()}
            writer.writerow(
                [
                    r.test_name,
                    "" if r.effect_size is None else f"{r.effect_size:.6f}",
                    "" if r.test_statistic is None else f"{r.test_statistic:.6f}",
                    "" if r.p_value is None else f"{r.p_value:.6g}",
                    r.p_method,
                    cov.get("targets_x", ""),
                    cov.get("targets_y", ""),
                    cov.get("attributes_a", ""),
                    cov.get("attributes_b", ""),
                    " ".join(r.dropped_words),
                    r.error or "",
                ]
            )
