import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from sentcomp.embeddings import EmbeddingStore
from sentcomp.errors import ArgumentError, ValidationError
from sentcomp.features import (
    FeatureConfig,
    MinMaxScaler,
    build,
    build_matrix,
    config_from_dict,
    config_to_dict,
    make_config,
    parse_flags,
    vocabulary_of,
)
from sentcomp.lexicon import PhraseRecord
from sentcomp.postags import COARSE_TAGS


def rec(tokens, tags, scores, phrase_score=0.1):
    return PhraseRecord(tuple(tokens), tuple(tags), tuple(scores), phrase_score)


RECORDS = [
    rec(["glad", "tears"], ["JJ", "NN"], [0.5, -0.4], -0.2),
    rec(["cold", "comfort"], ["JJ", "NN"], [-0.6, 0.3], -0.3),
    rec(["tears", "glad"], ["NN", "JJ"], [-0.4, 0.5], 0.2),
]


def tiny_store(dim=4):
    vectors = {
        "glad": np.arange(1, dim + 1, dtype=np.float64),
        "tears": -np.arange(1, dim + 1, dtype=np.float64),
        "cold": np.full(dim, 0.5),
    }
    for v in vectors.values():
        v.setflags(write=False)
    return EmbeddingStore(vectors, dim)


class TestFlags:
    def test_parse(self):
        assert parse_flags("pos,score,uni") == frozenset({"pos", "score", "uni"})
        assert parse_flags(" emb-avg , label ") == frozenset({"emb-avg", "label"})

    def test_unknown_flag(self):
        with pytest.raises(ArgumentError, match="unknown feature flags: bigrams"):
            parse_flags("pos,bigrams")

    def test_empty(self):
        with pytest.raises(ArgumentError):
            parse_flags(" , ")


class TestConfig:
    def test_vocabulary_is_sorted_distinct_constituents(self):
        assert vocabulary_of(RECORDS) == ("cold", "comfort", "glad", "tears")
        config = make_config(RECORDS, frozenset({"uni"}))
        assert config.vocabulary == ("cold", "comfort", "glad", "tears")

    def test_mixed_lengths_rejected(self):
        mixed = RECORDS + [rec(["a", "b", "c"], ["JJ", "NN", "NN"], [0.1, 0.2, 0.3])]
        with pytest.raises(ValidationError, match="mixed"):
            make_config(mixed, frozenset({"score"}))

    def test_embedding_flags_need_store(self):
        with pytest.raises(ArgumentError, match="store"):
            make_config(RECORDS, frozenset({"emb-avg"}))
        with pytest.raises(ArgumentError):
            FeatureConfig(n=2, flags=frozenset({"emb-avg"}), emb_dim=0)

    def test_no_records(self):
        with pytest.raises(ArgumentError):
            make_config([], frozenset({"score"}))

    @pytest.mark.parametrize(
        "flags",
        [
            {"uni"}, {"pos"}, {"label"}, {"score"},
            {"emb-conc"}, {"emb-avg"}, {"emb-max"},
            {"uni", "pos", "label", "score", "emb-conc", "emb-avg", "emb-max"},
            {"pos", "score"}, {"uni", "emb-max"},
        ],
    )
    def test_length_matches_block_sum(self, flags):
        # Independent tally of the declared block widths.
        store = tiny_store()
        config = make_config(RECORDS, frozenset(flags), store)
        n, dim = 2, store.dim
        expected = 0
        if "uni" in flags:
            expected += len({t for r in RECORDS for t in r.term})
        if "pos" in flags:
            expected += n * len(COARSE_TAGS)
        if "label" in flags:
            expected += n
        if "score" in flags:
            expected += n
        if "emb-conc" in flags:
            expected += n * dim
        if "emb-avg" in flags:
            expected += dim
        if "emb-max" in flags:
            expected += dim
        assert config.length == expected
        row = build(RECORDS[0], config, store)
        assert row.shape == (expected,)

    def test_round_trip_dict(self):
        store = tiny_store()
        config = make_config(RECORDS, frozenset({"uni", "pos", "emb-avg"}), store)
        clone = config_from_dict(config_to_dict(config))
        assert clone.n == config.n
        assert clone.flags == config.flags
        assert clone.vocabulary == config.vocabulary
        assert clone.tagset == config.tagset
        assert clone.emb_dim == config.emb_dim


class TestBuild:
    def test_bag_of_words(self):
        config = make_config(RECORDS, frozenset({"uni"}))
        row = build(RECORDS[0], config)
        assert row.tolist() == [0.0, 0.0, 1.0, 1.0]

    def test_oov_token_contributes_nothing(self):
        config = make_config(RECORDS[:2], frozenset({"uni"}))
        unseen = rec(["brand", "new"], ["JJ", "NN"], [0.1, 0.2])
        assert build(unseen, config).tolist() == [0.0] * len(config.vocabulary)

    def test_pos_one_hot_positions(self):
        config = make_config(RECORDS, frozenset({"pos"}))
        row = build(RECORDS[0], config)
        tagset = list(COARSE_TAGS)
        expect = np.zeros(2 * len(tagset))
        expect[tagset.index("adj")] = 1.0
        expect[len(tagset) + tagset.index("noun")] = 1.0
        assert row.tolist() == expect.tolist()

    def test_label_and_score_blocks(self):
        config = make_config(RECORDS, frozenset({"label", "score"}))
        row = build(RECORDS[0], config)
        assert row.tolist() == [1.0, -1.0, 0.5, -0.4]

    def test_zero_constituent_score_labels_positive(self):
        config = make_config(RECORDS, frozenset({"label"}))
        record = rec(["flat", "day"], ["JJ", "NN"], [0.0, -0.2])
        assert build(record, config).tolist() == [1.0, -1.0]

    def test_embedding_blocks(self):
        store = tiny_store(dim=3)
        flags = frozenset({"emb-conc", "emb-avg", "emb-max"})
        config = make_config(RECORDS, flags, store)
        row = build(RECORDS[0], config, store)
        glad = [1.0, 2.0, 3.0]
        tears = [-1.0, -2.0, -3.0]
        assert row[:6].tolist() == glad + tears
        assert row[6:9].tolist() == [0.0, 0.0, 0.0]
        assert row[9:12].tolist() == glad

    def test_oov_embedding_is_zero_vector(self):
        store = tiny_store(dim=3)
        config = make_config(RECORDS, frozenset({"emb-avg"}), store)
        record = rec(["comfort", "comfort2"], ["NN", "NN"], [0.3, 0.3])
        assert build(record, config, store).tolist() == [0.0, 0.0, 0.0]

    def test_equal_constituent_vectors_collapse(self):
        # For identical vectors the average and the element max are both
        # exactly that vector.
        store = tiny_store(dim=4)
        config = make_config(RECORDS, frozenset({"emb-avg", "emb-max"}), store)
        record = rec(["glad", "glad2"], ["JJ", "JJ"], [0.5, 0.5])
        twin = EmbeddingStore(
            {"glad": store.lookup("glad"), "glad2": store.lookup("glad")}, 4
        )
        row = build(record, config, twin)
        assert row[:4].tolist() == store.lookup("glad").tolist()
        assert row[4:].tolist() == store.lookup("glad").tolist()

    def test_constituent_permutation(self):
        store = tiny_store(dim=3)
        flags = frozenset({"uni", "pos", "score", "emb-conc", "emb-avg", "emb-max"})
        config = make_config(RECORDS, flags, store)
        forward = build(RECORDS[0], config, store)
        backward = build(RECORDS[2], config, store)
        v = len(config.vocabulary)
        p = 2 * len(COARSE_TAGS)
        # Same bag of words, different positional and concatenated blocks,
        # same average and max blocks.
        assert forward[:v].tolist() == backward[:v].tolist()
        assert forward[v:v + p].tolist() != backward[v:v + p].tolist()
        conc = slice(v + p + 2, v + p + 2 + 6)
        assert forward[conc].tolist() != backward[conc].tolist()
        assert forward[conc.stop:].tolist() == backward[conc.stop:].tolist()

    def test_determinism(self):
        store = tiny_store()
        config = make_config(RECORDS, frozenset({"uni", "emb-max"}), store)
        one = build(RECORDS[1], config, store)
        two = build(RECORDS[1], config, store)
        assert np.array_equal(one, two)

    def test_wrong_length_rejected(self):
        config = make_config(RECORDS, frozenset({"score"}))
        with pytest.raises(ValidationError, match="tokens"):
            build(rec(["a", "b", "c"], ["JJ", "NN", "NN"], [0.1, 0.2, 0.3]), config)

    def test_missing_store_at_build_time(self):
        store = tiny_store()
        config = make_config(RECORDS, frozenset({"emb-avg"}), store)
        with pytest.raises(ArgumentError):
            build(RECORDS[0], config)

    def test_build_matrix_empty(self):
        config = make_config(RECORDS, frozenset({"uni", "score"}))
        out = build_matrix([], config)
        assert out.shape == (0, config.length)


class TestScaler:
    matrices = hnp.arrays(
        np.float64,
        st.tuples(st.integers(2, 12), st.integers(1, 6)),
        elements=st.floats(-50, 50, allow_nan=False),
    )

    @settings(max_examples=60)
    @given(X=matrices)
    def test_training_rows_land_in_unit_interval(self, X):
        scaled = MinMaxScaler().fit_transform(X)
        assert scaled.shape == X.shape
        assert np.all(scaled >= -1.0 - 1e-12)
        assert np.all(scaled <= 1.0 + 1e-12)
        varying = X.max(axis=0) > X.min(axis=0)
        if varying.any():
            assert np.allclose(scaled[:, varying].max(axis=0), 1.0)
            assert np.allclose(scaled[:, varying].min(axis=0), -1.0)

    def test_constant_dimension_maps_to_zero(self):
        X = np.array([[3.0, 1.0], [3.0, 2.0]])
        scaled = MinMaxScaler().fit_transform(X)
        assert scaled[:, 0].tolist() == [0.0, 0.0]

    def test_test_rows_may_leave_the_interval(self):
        scaler = MinMaxScaler().fit(np.array([[0.0], [1.0]]))
        assert scaler.transform(np.array([[2.0]]))[0, 0] == 3.0
        assert scaler.transform(np.array([[-1.0]]))[0, 0] == -3.0

    def test_unfitted_and_mismatched(self):
        with pytest.raises(ArgumentError, match="not fitted"):
            MinMaxScaler().transform(np.zeros((1, 2)))
        scaler = MinMaxScaler().fit(np.zeros((2, 3)))
        with pytest.raises(ArgumentError, match="dimensions"):
            scaler.transform(np.zeros((1, 2)))
        with pytest.raises(ArgumentError):
            MinMaxScaler().fit(np.zeros((0, 3)))

    def test_round_trip_dict(self):
        X = np.array([[0.0, 5.0], [2.0, 7.0], [1.0, 6.0]])
        scaler = MinMaxScaler().fit(X)
        clone = MinMaxScaler.from_dict(scaler.to_dict())
        assert np.array_equal(clone.transform(X), scaler.transform(X))
