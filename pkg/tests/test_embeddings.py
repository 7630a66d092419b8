import numpy as np
import pytest

from lyricstats.corpus import Corpus, tokenize
from lyricstats.embeddings import (
    EmbeddingError,
    SgnsConfig,
    _TrainState,
    cosine,
    load_vectors,
    save_vectors,
    sgns_pair_grads,
    sgns_pair_loss,
    train_sgns,
    unigram_noise_probs,
)
from tests.conftest import make_record, make_table


def corpus_from_token_lists(token_lists):
    recs, toks = [], []
    for i, tokens in enumerate(token_lists):
        rec = make_record(f"s{i}", lyrics=" ".join(tokens), year=2000)
        recs.append(rec)
        toks.append(tokenize(rec))
    return Corpus(records=tuple(recs), tokenized=tuple(toks))


class TestCosine:
    def test_self_similarity(self):
        assert cosine([1.0, 2.0], [1.0, 2.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_opposite_scale_invariant(self):
        assert cosine([1.0, 0.0], [-3.0, 0.0]) == pytest.approx(-1.0)
        assert cosine([1.0, 0.0], [-3.0, 0.0]) == pytest.approx(cosine([1.0, 0.0], [-1.0, 0.0]))

    def test_symmetry_and_scaling(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            u, v = rng.normal(size=8), rng.normal(size=8)
            assert cosine(u, v) == pytest.approx(cosine(v, u), abs=1e-15)
            assert cosine(3.5 * u, v) == pytest.approx(cosine(u, v), abs=1e-12)
            assert -1.0 - 1e-12 <= cosine(u, v) <= 1.0 + 1e-12

    def test_zero_vector_rejected(self):
        with pytest.raises(EmbeddingError):
            cosine([0.0, 0.0], [1.0, 0.0])

    def test_dim_mismatch_rejected(self):
        with pytest.raises(EmbeddingError):
            cosine([1.0, 0.0], [1.0, 0.0, 0.0])


class TestVectorFile:
    def test_load_with_header(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("2 3\na 1 0 0\nb 0 1 0\n")
        table = load_vectors(str(path))
        assert table.dim == 3 and len(table) == 2
        assert table.get("a") == pytest.approx([1, 0, 0])

    def test_load_headerless(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 0 0\nb 0 1 0\n")
        table = load_vectors(str(path))
        assert table.dim == 3 and len(table) == 2

    def test_dimension_mismatch_names_line(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 0 0\nb 0 1\n")
        with pytest.raises(EmbeddingError, match=":2:"):
            load_vectors(str(path))

    def test_unparsable_number(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 zero 0\n")
        with pytest.raises(EmbeddingError, match="unparsable"):
            load_vectors(str(path))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("")
        with pytest.raises(EmbeddingError, match="empty"):
            load_vectors(str(path))

    def test_duplicate_last_wins(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 0\na 0 1\n")
        with pytest.warns(UserWarning, match="duplicate"):
            table = load_vectors(str(path))
        assert table.get("a") == pytest.approx([0, 1])

    def test_zero_vector_flagged(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 0 0\nb 1 0\n")
        table = load_vectors(str(path))
        assert table.zero_words == {"a"}

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        table = make_table({f"w{i}": rng.normal(size=4) for i in range(10)})
        path = tmp_path / "v.txt"
        save_vectors(table, str(path))
        loaded = load_vectors(str(path))
        assert loaded.vocab == table.vocab
        assert np.max(np.abs(loaded.vectors - table.vectors)) <= 1e-6


class TestSgnsGradients:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        dim, n_neg = 12, 5
        center = rng.normal(scale=0.5, size=dim)
        context = rng.normal(scale=0.5, size=dim)
        negatives = rng.normal(scale=0.5, size=(n_neg, dim))
        g_c, g_ctx, g_negs = sgns_pair_grads(center, context, negatives)
        h = 1e-6

        def fd(setter, base):
            grad = np.zeros_like(base)
            for i in range(base.size):
                plus, minus = base.copy().ravel(), base.copy().ravel()
                plus[i] += h
                minus[i] -= h
                grad.ravel()[i] = (
                    setter(plus.reshape(base.shape)) - setter(minus.reshape(base.shape))
                ) / (2 * h)
            return grad

        fd_c = fd(lambda c: sgns_pair_loss(c, context, negatives), center)
        fd_ctx = fd(lambda x: sgns_pair_loss(center, x, negatives), context)
        fd_negs = fd(lambda n: sgns_pair_loss(center, context, n), negatives)
        for analytic, numeric in ((g_c, fd_c), (g_ctx, fd_ctx), (g_negs, fd_negs)):
            rel = np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1e-8)
            assert np.max(rel) <= 1e-4

    def test_positive_pair_moves_center_toward_context(self):
        # zero negatives: the SGD step on the center is a positive multiple of
        # the context vector
        rng = np.random.default_rng(3)
        center = rng.normal(size=6)
        context = rng.normal(size=6)
        g_c, _, _ = sgns_pair_grads(center, context, np.zeros((0, 6)))
        step = -0.1 * g_c
        assert np.dot(step, context) > 0


class TestNoiseDistribution:
    def test_probs_proportional_to_counts_power(self):
        counts = [100, 10, 1]
        probs = unigram_noise_probs(counts)
        expected = np.array([100**0.75, 10**0.75, 1.0])
        assert probs == pytest.approx(expected / expected.sum())

    def test_empirical_frequencies_within_3_stderr(self):
        corpus = corpus_from_token_lists(
            [["alpha"] * 50 + ["beta"] * 20 + ["gamma"] * 10 + ["delta"] * 5] * 4
        )
        config = SgnsConfig(dim=4, min_count=1, seed=11)
        state = _TrainState(corpus, config)
        probs = unigram_noise_probs(state.counts)
        n = 1_000_000
        draws = state.draw_negatives(np.random.default_rng(42), n)
        freqs = np.bincount(draws, minlength=len(probs)) / n
        stderr = np.sqrt(probs * (1 - probs) / n)
        assert np.all(np.abs(freqs - probs) <= 3 * stderr)


def two_cluster_corpus(rng, n_songs=60, song_len=40):
    clusters = [[f"red{i}" for i in range(8)], [f"sea{i}" for i in range(8)]]
    songs = []
    for s in range(n_songs):
        pool = clusters[s % 2]
        songs.append([pool[rng.integers(len(pool))] for _ in range(song_len)])
    return corpus_from_token_lists(songs), clusters


class TestTraining:
    def test_empty_vocabulary_after_min_count(self):
        corpus = corpus_from_token_lists([["rare", "words", "only"]])
        with pytest.raises(EmbeddingError, match="empty vocabulary"):
            train_sgns(corpus, SgnsConfig(dim=4, min_count=5, seed=0, epochs=1))

    def test_deterministic_mode_reproduces_vector_file(self, tmp_path):
        rng = np.random.default_rng(0)
        corpus, _ = two_cluster_corpus(rng, n_songs=20, song_len=20)
        config = SgnsConfig(dim=8, min_count=1, epochs=2, seed=7)
        files = []
        for name in ("a.txt", "b.txt"):
            table = train_sgns(corpus, config)
            path = tmp_path / name
            save_vectors(table, str(path))
            files.append(path.read_bytes())
        assert files[0] == files[1]

    def test_clusters_separate(self):
        rng = np.random.default_rng(12)
        corpus, clusters = two_cluster_corpus(rng)
        config = SgnsConfig(dim=16, window=4, min_count=1, epochs=5, seed=5, subsample_threshold=1.0)
        table = train_sgns(corpus, config)
        from lyricstats.embeddings import cosine as cos

        within, across = [], []
        for ci, cluster in enumerate(clusters):
            for w in cluster:
                for v in cluster:
                    if w < v:
                        within.append(cos(table.get(w), table.get(v)))
                for v in clusters[1 - ci]:
                    if ci == 0:
                        across.append(cos(table.get(w), table.get(v)))
        assert np.mean(within) > np.mean(across)

    def test_loss_decreases_across_epochs(self):
        rng = np.random.default_rng(2)
        corpus, _ = two_cluster_corpus(rng, n_songs=30, song_len=30)
        config = SgnsConfig(dim=8, min_count=1, epochs=3, seed=9, subsample_threshold=1.0)
        state_probe = _TrainState(corpus, config)
        frozen = []
        probe_rng = np.random.default_rng(99)
        for sent in state_probe.sentences[:10]:
            for pos in range(0, len(sent) - 1, 5):
                negs = state_probe.draw_negatives(probe_rng, config.negatives)
                frozen.append((int(sent[pos]), int(sent[pos + 1]), negs))

        losses = []

        def record(epoch, w_in, w_out):
            losses.append(
                float(np.mean([sgns_pair_loss(w_in[c], w_out[x], w_out[n]) for c, x, n in frozen]))
            )

        train_sgns(corpus, config, epoch_callback=record)
        assert losses[1] < losses[0]

    def test_parallel_mode_runs(self):
        rng = np.random.default_rng(4)
        corpus, clusters = two_cluster_corpus(rng, n_songs=16, song_len=20)
        table = train_sgns(
            corpus, SgnsConfig(dim=8, min_count=1, epochs=1, seed=3), parallel=True, workers=2
        )
        assert len(table) == 16 and table.vectors.shape == (16, 8)
