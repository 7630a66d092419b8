"""Exact vs Monte Carlo permutation p-values for a WEAT statistic.

Builds a tiny embedding by hand, enumerates all equal-size partitions of the
target words exactly, and shows that Monte Carlo sampling converges to the
same value.

Run from the repo root:  python3 demos/permutation_significance.py
"""

import math

import numpy as np

from lyricstats.embeddings import EmbeddingTable
from lyricstats.weat import WeatTest, effect_size, permutation_p

rng = np.random.default_rng(1)

# five target words per side, three attribute words per pole, random vectors
words = [f"x{i}" for i in range(5)] + [f"y{i}" for i in range(5)]
words += [f"a{i}" for i in range(3)] + [f"b{i}" for i in range(3)]
vectors = rng.normal(size=(len(words), 8))
table = EmbeddingTable(dim=8, vocab={w: i for i, w in enumerate(words)}, vectors=vectors)

test = WeatTest(
    name="demo",
    targets_x=tuple(f"x{i}" for i in range(5)),
    targets_y=tuple(f"y{i}" for i in range(5)),
    attributes_a=tuple(f"a{i}" for i in range(3)),
    attributes_b=tuple(f"b{i}" for i in range(3)),
)

result = effect_size(test, table)
print(f"effect size d = {result.effect_size:+.3f}, statistic S = {result.test_statistic:+.3f}")

# exact: C(10,5) = 252 partitions enumerated
p_exact = permutation_p(test, table, mode="exact")
print(f"exact p over {math.comb(10, 5)} partitions: {p_exact:.6f}")

# Monte Carlo converges as the sample count grows
for n in (1_000, 10_000, 100_000):
    p_mc = permutation_p(test, table, mode="monte_carlo", n_samples=n, seed=11)
    stderr = math.sqrt(max(p_exact * (1 - p_exact), 1e-12) / n)
    print(f"monte carlo n={n:>7}: {p_mc:.6f}  (|diff| = {abs(p_mc - p_exact):.6f}, 3se = {3 * stderr:.6f})")

# the strict ">" convention can give p = 0; the inclusive variant cannot
p_incl = permutation_p(test, table, mode="exact", inclusive=True)
print(f"inclusive exact p: {p_incl:.6f} (always >= strict p)")
