"""Rank tests, agreement, and sample-size machinery.

Both rank tests report the min-tail statistic with a two-sided p-value
obtained by doubling the one-sided tail and capping at 1. Exact null
distributions are used for small tie-free samples (min group size, or
pair count, at most 12); beyond that cutoff, or in the presence of ties,
a normal approximation with tie and continuity corrections applies. The
cutoff keeps exact results desk-verifiable while the approximation error
stays within 0.02 absolute p at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .metrics import ScoreCard

EXACT = "exact"
NORMAL_APPROX = "normal_approx"
EXACT_CUTOFF = 12
SIGNIFICANCE_ALPHA = 0.05

_Z_TABLE = {0.90: 1.645, 0.95: 1.96, 0.99: 2.576}


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    n1: int
    n2: int

    @property
    def significant(self) -> bool:
        return self.p_value < SIGNIFICANCE_ALPHA


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with tied values sharing the mean of their rank block."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def _tie_sizes(values: Sequence[float]) -> list[int]:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def _phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def _u_tail_probability(u: float, n1: int, n2: int) -> float:
    """P(U <= u) under the exact tie-free null distribution.

    Counting recurrence on the largest pooled observation: with i x's and
    j y's, N(v; i, j) = N(v - j; i - 1, j) + N(v; i, j - 1).
    """
    width = n1 * n2 + 1
    f = [[0] * width for _ in range(n1 + 1)]
    for i in range(n1 + 1):
        f[i][0] = 1  # with zero y's, U is always 0
    for j in range(1, n2 + 1):
        g = [[0] * width for _ in range(n1 + 1)]
        g[0][0] = 1
        for i in range(1, n1 + 1):
            for v in range(width):
                ways = g[i - 1][v - j] if v >= j else 0
                g[i][v] = ways + f[i][v]
        f = g
    total = math.comb(n1 + n2, n1)
    return sum(f[n1][v] for v in range(int(u) + 1)) / total


def mann_whitney_u(xs: Sequence[float], ys: Sequence[float]) -> TestResult:
    """Two-sided Mann-Whitney U test; U is the smaller of the two U's."""
    if not xs or not ys:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(xs), len(ys)
    pooled = list(xs) + list(ys)
    ranks = _midranks(pooled)
    rank_sum_x = sum(ranks[:n1])
    u_x = rank_sum_x - n1 * (n1 + 1) / 2
    u_y = n1 * n2 - u_x
    u = min(u_x, u_y)

    ties = _tie_sizes(pooled)
    if min(n1, n2) <= EXACT_CUTOFF and not ties:
        p_one = _u_tail_probability(u, n1, n2)
        return TestResult(u, min(1.0, 2.0 * p_one), EXACT, n1, n2)

    n = n1 + n2
    mu = n1 * n2 / 2.0
    tie_term = sum(t**3 - t for t in ties) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return TestResult(u, 1.0, NORMAL_APPROX, n1, n2)
    z = (u - mu + 0.5) / math.sqrt(var)
    return TestResult(u, min(1.0, 2.0 * _phi(z)), NORMAL_APPROX, n1, n2)


def wilcoxon_signed_rank(pairs: Sequence[tuple[float, float]]) -> TestResult:
    """Two-sided Wilcoxon signed-rank test over paired observations.

    Zero differences are dropped; raises when nothing remains.
    """
    diffs = [a - b for a, b in pairs if a != b]
    if not diffs:
        raise ValueError("all differences are zero; no information")
    n = len(diffs)
    abs_diffs = [abs(d) for d in diffs]
    ranks = _midranks(abs_diffs)
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    w = min(w_plus, w_minus)

    ties = _tie_sizes(abs_diffs)
    if n <= EXACT_CUTOFF and not ties:
        # enumerate sign assignments; tie-free ranks are exactly 1..n
        total = 1 << n
        max_w = n * (n + 1) // 2
        counts = [0] * (max_w + 1)
        counts[0] = 1
        for rank in range(1, n + 1):
            for v in range(max_w, rank - 1, -1):
                counts[v] += counts[v - rank]
        tail = sum(counts[v] for v in range(int(w) + 1))
        return TestResult(w, min(1.0, 2.0 * tail / total), EXACT, n, n)

    mu = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - sum(t**3 - t for t in ties) / 48.0
    if var <= 0:
        return TestResult(w, 1.0, NORMAL_APPROX, n, n)
    z = (w - mu + 0.5) / math.sqrt(var)
    return TestResult(w, min(1.0, 2.0 * _phi(z)), NORMAL_APPROX, n, n)


@dataclass(frozen=True)
class RatingMatrix:
    """Items x categories counts with a constant rater count per item."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) < 2:
            raise ValueError("need at least 2 items")
        widths = {len(r) for r in self.rows}
        if len(widths) != 1 or widths.pop() < 2:
            raise ValueError("rows must share one width of >= 2 categories")
        sums = {sum(r) for r in self.rows}
        if len(sums) != 1:
            raise ValueError("every row must sum to the same rater count")
        if sums.pop() < 2:
            raise ValueError("need at least 2 raters")
        if any(v < 0 for r in self.rows for v in r):
            raise ValueError("counts must be non-negative")

    @property
    def raters(self) -> int:
        return sum(self.rows[0])


def fleiss_kappa(matrix: RatingMatrix) -> float:
    """Chance-corrected agreement for fixed-size rater panels."""
    n = matrix.raters
    n_items = len(matrix.rows)
    p_bar = sum(
        (sum(v * v for v in row) - n) / (n * (n - 1)) for row in matrix.rows
    ) / n_items
    totals = [sum(row[j] for row in matrix.rows) for j in range(len(matrix.rows[0]))]
    grand = n * n_items
    p_e = sum((t / grand) ** 2 for t in totals)
    if p_e >= 1.0:
        raise ValueError("all ratings in one category; kappa undefined")
    return (p_bar - p_e) / (1.0 - p_e)


def cochran_sample_size(population: int, confidence: float, margin: float) -> int:
    """Sample size at maximum variance with finite-population correction.

    n0 = z^2 * 0.25 / margin^2, corrected by n0 / (1 + (n0 - 1) / N),
    rounded up and capped at the population.
    """
    if population < 1:
        raise ValueError("population must be >= 1")
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must lie in (0, 1)")
    z = _Z_TABLE.get(confidence)
    if z is None:
        raise ValueError(f"confidence must be one of {sorted(_Z_TABLE)}")
    n0 = z * z * 0.25 / (margin * margin)
    n = math.ceil(n0 / (1.0 + (n0 - 1.0) / population))
    return min(n, population)


_BASE_METRICS = ("bleu", "meteor", "rouge_l", "cider", "sbert_cos", "usenc_cos", "side")


def _metric_keys(cards: Iterable[ScoreCard]) -> list[str]:
    keys = list(_BASE_METRICS)
    judge_sets = [set(c.llm_scores) for c in cards]
    if judge_sets:
        for judge in sorted(set.intersection(*judge_sets)):
            keys.append(f"llm:{judge}")
    return keys


def _metric_value(card: ScoreCard, key: str) -> float:
    if key.startswith("llm:"):
        return card.llm_scores[key[4:]]
    return getattr(card, key)


def significance_matrix(
    group_a: Sequence[ScoreCard],
    group_b: Sequence[ScoreCard],
    paired: bool,
) -> Mapping[str, Optional[TestResult]]:
    """Per-metric test between two scorecard groups.

    Paired comparisons match cards by method_id and use the signed-rank
    test; unpaired groups use the U test. A metric whose paired
    differences are all zero maps to None (degenerate comparison).
    """
    if not group_a or not group_b:
        raise ValueError("both groups must be non-empty")
    if paired:
        by_id_b = {c.method_id: c for c in group_b}
        if len(group_a) != len(group_b) or set(by_id_b) != {
            c.method_id for c in group_a
        }:
            raise ValueError("paired groups must match method_ids one-to-one")

    keys = _metric_keys(list(group_a) + list(group_b))
    results: dict[str, Optional[TestResult]] = {}
    for key in keys:
        if paired:
            pairs = [
                (_metric_value(a, key), _metric_value(by_id_b[a.method_id], key))
                for a in group_a
            ]
            try:
                results[key] = wilcoxon_signed_rank(pairs)
            except ValueError:
                results[key] = None
        else:
            xs = [_metric_value(c, key) for c in group_a]
            ys = [_metric_value(c, key) for c in group_b]
            results[key] = mann_whitney_u(xs, ys)
    return results
