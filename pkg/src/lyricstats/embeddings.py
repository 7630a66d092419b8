"""Word vectors: text-format load/save, cosine similarity, and a skip-gram
negative-sampling trainer over a tokenized corpus."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from lyricstats.corpus import Corpus


class EmbeddingError(Exception):
    pass


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vocab: dict  # word -> row index
    vectors: np.ndarray  # (V, dim) float64
    zero_words: frozenset = frozenset()  # flagged at load/train end, rejected in cosine

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def __len__(self) -> int:
        return len(self.vocab)

    def get(self, word: str) -> np.ndarray:
        return self.vectors[self.vocab[word]]


@dataclass(frozen=True)
class SgnsConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    initial_learning_rate: float = 0.025
    min_count: int = 5
    subsample_threshold: float = 1e-3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise EmbeddingError("dim must be >= 2")
        for name in ("window", "negatives", "epochs", "min_count"):
            if getattr(self, name) < 1:
                raise EmbeddingError(f"{name} must be positive")
        if self.initial_learning_rate <= 0 or self.subsample_threshold <= 0:
            raise EmbeddingError("learning rate and subsample threshold must be positive")


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise EmbeddingError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise EmbeddingError("cosine undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))


def load_vectors(path: str) -> EmbeddingTable:
    """Parse the text vector format: optional "V D" header, then one word and
    D space-separated reals per line. Duplicate words: last occurrence wins."""
    words: list[str] = []
    rows: list[np.ndarray] = []
    index: dict = {}
    dim: Optional[int] = None
    duplicates = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if not line.strip():
                continue
            if line_no == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            word = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:] if x != ""], dtype=float)
            except ValueError as exc:
                raise EmbeddingError(f"{path}:{line_no}: unparsable number: {exc}") from exc
            if dim is None:
                dim = len(vec)
                if dim == 0:
                    raise EmbeddingError(f"{path}:{line_no}: row has no vector values")
            elif len(vec) != dim:
                raise EmbeddingError(
                    f"{path}:{line_no}: dimension mismatch, expected {dim} got {len(vec)}"
                )
            if word in index:
                rows[index[word]] = vec
                duplicates += 1
            else:
                index[word] = len(words)
                words.append(word)
                rows.append(vec)
    if dim is None:
        raise EmbeddingError(f"{path}: empty vector file")
    vectors = np.vstack(rows)
    zero = frozenset(w for w, i in index.items() if not np.any(vectors[i]))
    table = EmbeddingTable(dim=dim, vocab=index, vectors=vectors, zero_words=zero)
    if duplicates:
        import warnings

        warnings.warn(f"{path}: {duplicates} duplicate words, last occurrence kept")
    return table


def save_vectors(table: EmbeddingTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vocab)} {table.dim}\n")
        for word, idx in sorted(table.vocab.items(), key=lambda kv: kv[1]):
            values = " ".join(f"{x:.6f}" for x in table.vectors[idx])
            fh.write(f"{word} {values}\n")


# ---------------------------------------------------------------------------
# SGNS training


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def sgns_pair_loss(center: np.ndarray, context: np.ndarray, negatives: np.ndarray) -> float:
    """Negative log-likelihood for one (center, context, negatives) triple:
    -log sigma(c.x) - sum_neg log sigma(-c.n)."""
    loss = -np.log(_sigmoid(np.dot(center, context)))
    if len(negatives):
        loss -= np.sum(np.log(_sigmoid(-negatives @ center)))
    return float(loss)


def sgns_pair_grads(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of sgns_pair_loss w.r.t. center, context, and each
    negative vector."""
    g_pos = _sigmoid(np.dot(center, context)) - 1.0  # in (-1, 0)
    g_center = g_pos * context
    g_context = g_pos * center
    if len(negatives):
        g_negs_scal = _sigmoid(negatives @ center)  # in (0, 1)
        g_center = g_center + g_negs_scal @ negatives
        g_negatives = np.outer(g_negs_scal, center)
    else:
        g_negatives = np.zeros((0, len(center)))
    return g_center, g_context, g_negatives


def unigram_noise_probs(counts: Sequence[int], power: float = 0.75) -> np.ndarray:
    """Negative-sampling distribution: unigram counts raised to `power`."""
    arr = np.asarray(counts, dtype=float) ** power
    return arr / arr.sum()


class _TrainState:
    """Shared vocabulary, noise table, and vector arrays during training."""

    def __init__(self, corpus: Corpus, config: SgnsConfig):
        counts = Counter()
        for tok in corpus.tokenized:
            counts.update(tok.tokens)
        kept = sorted(
            ((w, c) for w, c in counts.items() if c >= config.min_count),
            key=lambda kv: (-kv[1], kv[0]),
        )
        if not kept:
            raise EmbeddingError(f"empty vocabulary after min_count={config.min_count}")
        self.vocab = {w: i for i, (w, _) in enumerate(kept)}
        self.counts = np.array([c for _, c in kept], dtype=np.int64)
        self.noise_cdf = np.cumsum(unigram_noise_probs(self.counts))
        total = float(self.counts.sum())
        # keep probability per vocab word under frequent-word subsampling
        freq = self.counts / total
        self.keep_prob = np.minimum(1.0, np.sqrt(config.subsample_threshold / freq))
        self.sentences = [
            np.array([self.vocab[t] for t in tok.tokens if t in self.vocab], dtype=np.int64)
            for tok in corpus.tokenized
        ]
        self.n_positions = int(sum(len(s) for s in self.sentences))
        rng = np.random.default_rng(config.seed)
        self.w_in = (rng.random((len(kept), config.dim)) - 0.5) / config.dim
        self.w_out = np.zeros((len(kept), config.dim))
        self.config = config

    def draw_negatives(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.searchsorted(self.noise_cdf, rng.random(n))

    def train_sentences(self, sent_ids: Sequence[int], rng: np.random.Generator, epoch: int) -> None:
        cfg = self.config
        lr0 = cfg.initial_learning_rate
        lr_floor = 1e-4 * lr0
        total_positions = max(cfg.epochs * self.n_positions, 1)
        done = epoch * self.n_positions
        w_in, w_out = self.w_in, self.w_out
        for si in sent_ids:
            sent = self.sentences[si]
            if len(sent) == 0:
                continue
            kept = sent[rng.random(len(sent)) < self.keep_prob[sent]]
            done += len(sent)
            if len(kept) < 2:
                continue
            lr = max(lr0 * (1.0 - done / total_positions), lr_floor)
            windows = rng.integers(1, cfg.window + 1, size=len(kept))
            for pos, center in enumerate(kept):
                b = windows[pos]
                lo = max(0, pos - b)
                hi = min(len(kept), pos + b + 1)
                v_c = w_in[center]
                for cpos in range(lo, hi):
                    if cpos == pos:
                        continue
                    ctx = kept[cpos]
                    negs = self.draw_negatives(rng, cfg.negatives)
                    negs = negs[negs != ctx]
                    g_c, g_ctx, g_negs = sgns_pair_grads(v_c, w_out[ctx], w_out[negs])
                    w_out[ctx] -= lr * g_ctx
                    if len(negs):
                        w_out[negs] -= lr * g_negs
                    v_c = v_c - lr * g_c
                w_in[center] = v_c


def train_sgns(
    corpus: Corpus,
    config: SgnsConfig,
    parallel: bool = False,
    workers: int = 4,
    epoch_callback=None,
) -> EmbeddingTable:
    """Skip-gram with negative sampling over the tokenized corpus.

    Deterministic under a fixed seed in single-threaded mode; the parallel
    mode updates shared arrays lock-free and is only statistically
    reproducible. `epoch_callback(epoch, w_in, w_out)` runs after each epoch.
    """
    state = _TrainState(corpus, config)
    n_sent = len(state.sentences)
    for epoch in range(config.epochs):
        if parallel and workers > 1:
            shards = [list(range(w, n_sent, workers)) for w in range(workers)]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(
                        state.train_sentences,
                        shard,
                        np.random.default_rng((config.seed, epoch, w)),
                        epoch,
                    )
                    for w, shard in enumerate(shards)
                ]
                for fut in futures:
                    fut.result()
        else:
            state.train_sentences(range(n_sent), np.random.default_rng((config.seed, epoch)), epoch)
        if epoch_callback is not None:
            epoch_callback(epoch, state.w_in, state.w_out)
    vectors = state.w_in.copy()
    zero = frozenset(w for w, i in state.vocab.items() if not np.any(vectors[i]))
    return EmbeddingTable(dim=config.dim, vocab=state.vocab, vectors=vectors, zero_words=zero)
