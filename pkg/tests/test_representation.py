from __future__ import annotations

import numpy as np
import pytest

from sensegap import representation as rep
from sensegap.inventory import SenseEntry

from conftest import make_usage


class TestApplyStrategy:
    """The worked rewrite example: headword 'inadequate', sequence 'a poor
    salary' containing the synonym 'poor'."""

    HEADWORD = "inadequate"
    SEQ = "a poor salary"
    POOR = (2, 6)

    def check(self, text, span, expected_text, expected_target):
        assert text == expected_text
        assert text[span[0] : span[1]] == expected_target

    def test_strategy_0_as_is(self):
        text, span = rep.apply_strategy(0, self.HEADWORD, self.SEQ, self.POOR)
        self.check(text, span, "a poor salary", "poor")

    def test_strategy_0_without_contained_span_marks_whole_text(self):
        text, span = rep.apply_strategy(0, "x", "y z")
        assert (text, span) == ("y z", (0, 3))

    def test_strategy_1_prefix(self):
        text, span = rep.apply_strategy(1, self.HEADWORD, self.SEQ)
        self.check(text, span, "inadequate: a poor salary", "inadequate")

    def test_strategy_2_parenthesis(self):
        text, span = rep.apply_strategy(2, self.HEADWORD, self.SEQ)
        self.check(text, span, "a poor salary (inadequate)", "inadequate")

    def test_strategy_3_connective(self):
        text, span = rep.apply_strategy(3, self.HEADWORD, self.SEQ)
        self.check(text, span, "a poor salary, i.e., inadequate", "inadequate")

    def test_strategy_3_swedish_connective(self):
        text, span = rep.apply_strategy(3, "bedrägeri", "en stor svindel", language_tag="sv")
        self.check(text, span, "en stor svindel, dvs., bedrägeri", "bedrägeri")

    def test_strategy_4_raw_substitution_without_agreement(self):
        # raw substring swap: the article is left as-is on purpose
        text, span = rep.apply_strategy(4, self.HEADWORD, self.SEQ, self.POOR)
        self.check(text, span, "a inadequate salary", "inadequate")

    def test_strategy_4_falls_back_to_2_without_contained_span(self):
        with_fallback = rep.apply_strategy(4, self.HEADWORD, self.SEQ, None)
        assert with_fallback == rep.apply_strategy(2, self.HEADWORD, self.SEQ)

    def test_invalid_strategy_rejected(self):
        with pytest.raises(rep.StrategyError):
            rep.apply_strategy(5, "x", "y")
        with pytest.raises(rep.StrategyError):
            rep.apply_strategy(-1, "x", "y")

    def test_invalid_span_rejected(self):
        with pytest.raises(rep.StrategyError):
            rep.apply_strategy(4, "x", "abc", (2, 9))

    def test_span_always_delimits_headword_for_strategies_1_to_4(self):
        rng = np.random.default_rng(7)
        words = ["alpha", "beta", "gamma", "delta"]
        for _ in range(200):
            headword = words[rng.integers(len(words))]
            seq_words = [words[rng.integers(len(words))] for _ in range(rng.integers(1, 6))]
            seq = " ".join(seq_words)
            contained = rep.find_contained_span(seq, [seq_words[0]])
            for strategy in (1, 2, 3, 4):
                text, span = rep.apply_strategy(strategy, headword, seq, contained)
                assert text[span[0] : span[1]] == headword


class TestFindContainedSpan:
    def test_first_left_to_right(self):
        assert rep.find_contained_span("b a b", ["a", "b"]) == (0, 1)

    def test_tie_prefers_longer(self):
        assert rep.find_contained_span("cable car rides", ["cable", "cable car"]) == (0, 9)

    def test_word_boundaries(self):
        assert rep.find_contained_span("scarcity", ["car"]) is None

    def test_case_insensitive(self):
        assert rep.find_contained_span("Poor pay", ["poor"]) == (0, 4)

    def test_absent(self):
        assert rep.find_contained_span("nothing here", ["car"]) is None


class TestUsageRequests:
    def test_default_mode_is_identity(self):
        usage = make_usage("he kept running daily", "running", headword="run")
        request = rep.build_usage_request(usage, rep.USAGE_MODE_DEFAULT)
        assert request.text == usage.sentence
        assert (request.start, request.end) == (usage.start, usage.end)

    def test_sub_mode_substitutes_headword(self):
        usage = make_usage("he kept running daily", "running", headword="run")
        request = rep.build_usage_request(usage, rep.USAGE_MODE_SUB)
        assert request.text == "he kept run daily"
        assert request.text[request.start : request.end] == "run"

    def test_sub_mode_collapses_inflection_differences(self):
        a = make_usage("they run far", "run", headword="run")
        b = make_usage("they ran far", "ran", headword="run")
        ra = rep.build_usage_request(a, rep.USAGE_MODE_SUB)
        rb = rep.build_usage_request(b, rep.USAGE_MODE_SUB)
        assert (ra.text, ra.start, ra.end) == (rb.text, rb.start, rb.end)
        assert ra.content_hash == rb.content_hash


def sense(gloss=None, secondary=None, examples=(), members=()) -> SenseEntry:
    return SenseEntry(
        sense_id="s1",
        gloss=gloss,
        secondary_gloss=secondary,
        examples=list(examples),
        synset_members=list(members),
    )


class TestSenseRequests:
    def test_gloss_mode_with_prefix(self):
        reqs = rep.build_sense_requests(sense(gloss="a poor salary"), "inadequate", "G1")
        assert len(reqs) == 1
        assert reqs[0].text == "inadequate: a poor salary"

    def test_gloss_mode_uses_secondary_when_main_missing(self):
        reqs = rep.build_sense_requests(sense(secondary="i större skala"), "svindel", "G1")
        assert reqs[0].text == "svindel: i större skala"

    def test_glossless_sense_unrepresentable_in_gloss_mode(self):
        assert rep.build_sense_requests(sense(examples=["x y"]), "w", "G0") is None

    def test_exampleless_sense_unrepresentable_in_example_mode(self):
        assert rep.build_sense_requests(sense(gloss="g"), "w", "E0") is None

    def test_example_mode_one_request_per_example(self):
        s = sense(gloss="g", examples=["first usage", "second usage"])
        reqs = rep.build_sense_requests(s, "w", "E2")
        assert [r.text for r in reqs] == ["first usage (w)", "second usage (w)"]

    def test_e4_substitutes_first_synset_member(self):
        s = sense(examples=["a poor salary"], members=["inadequate", "poor", "short"])
        reqs = rep.build_sense_requests(s, "inadequate", "E4")
        assert reqs[0].text == "a inadequate salary"

    def test_e4_falls_back_to_parenthesis_without_member(self):
        s = sense(examples=["no synonyms here"], members=["inadequate", "poor"])
        reqs = rep.build_sense_requests(s, "inadequate", "E4")
        assert reqs[0].text == "no synonyms here (inadequate)"

    def test_embed_sense_averages_examples(self, mock_provider):
        s = sense(examples=["one example", "another example"])
        v = rep.embed_sense(s, "w", "E0", mock_provider)
        reqs = rep.build_sense_requests(s, "w", "E0")
        va, vb = mock_provider.embed_batch(reqs)
        np.testing.assert_array_equal(v, (va.astype(np.float64) + vb.astype(np.float64)) / 2.0)

    def test_singleton_mean_equals_vector(self, mock_provider):
        s = sense(examples=["only example"])
        v = rep.embed_sense(s, "w", "E0", mock_provider)
        (req,) = rep.build_sense_requests(s, "w", "E0")
        np.testing.assert_array_equal(v, mock_provider.embed_batch([req])[0].astype(np.float64))

    def test_example_mean_permutation_invariant(self, mock_provider):
        examples = ["one", "two", "three", "four"]
        s1 = sense(examples=examples)
        s2 = sense(examples=list(reversed(examples)))
        v1 = rep.embed_sense(s1, "w", "E0", mock_provider)
        v2 = rep.embed_sense(s2, "w", "E0", mock_provider)
        np.testing.assert_allclose(v1, v2, atol=1e-12)

    def test_incomplete_sense_embeds_to_none(self, mock_provider):
        assert rep.embed_sense(sense(gloss="g"), "w", "E1", mock_provider) is None


class TestMockProvider:
    def test_deterministic(self, mock_provider):
        r = rep.EmbeddingRequest("a", "some text", 0, 4)
        v1 = mock_provider.embed_batch([r])[0]
        v2 = rep.MockEmbeddingProvider(dim=16).embed_batch([r])[0]
        np.testing.assert_array_equal(v1, v2)

    def test_span_sensitivity(self, mock_provider):
        a = rep.EmbeddingRequest("a", "some text", 0, 4)
        b = rep.EmbeddingRequest("b", "some text", 5, 9)
        va, vb = mock_provider.embed_batch([a, b])
        assert not np.array_equal(va, vb)

    def test_order_preserved(self, mock_provider):
        reqs = [rep.EmbeddingRequest(str(i), f"text {i}", 0, 4) for i in range(3)]
        batch = mock_provider.embed_batch(reqs)
        singles = [mock_provider.embed_batch([r])[0] for r in reqs]
        for got, want in zip(batch, singles):
            np.testing.assert_array_equal(got, want)

    def test_batch_size_invariance(self):
        reqs = [rep.EmbeddingRequest(str(i), f"text {i}", 0, 4) for i in range(10)]
        small = rep.MockEmbeddingProvider(dim=8, batch_size=2).embed_batch(reqs)
        large = rep.MockEmbeddingProvider(dim=8, batch_size=100).embed_batch(reqs)
        for a, b in zip(small, large):
            np.testing.assert_array_equal(a, b)

    def test_min_dim(self):
        with pytest.raises(ValueError):
            rep.MockEmbeddingProvider(dim=1)


class TestModelConfig:
    def test_identifier_round_trip(self):
        for ident in ("G3_COS", "E4_SUB_SPR", "E0_SPR", "G0_SUB_COS"):
            assert rep.ModelConfig.from_identifier(ident).identifier == ident

    def test_bad_identifier(self):
        with pytest.raises(ValueError):
            rep.ModelConfig.from_identifier("G9_COS")
        with pytest.raises(ValueError):
            rep.ModelConfig.from_identifier("G1")

    def test_e4_requires_wordnet_like(self, wordnet_inv, so_inv):
        config = rep.ModelConfig.from_identifier("E4_COS")
        rep.validate_model_config(config, wordnet_inv)
        with pytest.raises(ValueError):
            rep.validate_model_config(config, so_inv)

    def test_threshold_bounds(self):
        with pytest.raises(ValueError):
            rep.ModelConfig(threshold=1.5)


class TestCachingProvider:
    def test_cache_returns_bit_identical_vectors(self, mock_provider):
        cached = rep.CachingProvider(mock_provider)
        reqs = [rep.EmbeddingRequest(str(i), f"text {i}", 0, 4) for i in range(5)]
        first = cached.embed_batch(reqs)
        second = cached.embed_batch(reqs)
        plain = mock_provider.embed_batch(reqs)
        for a, b, c in zip(first, second, plain):
            assert a.tobytes() == b.tobytes() == c.tobytes()

    def test_identical_requests_hit_one_entry(self, mock_provider):
        cached = rep.CachingProvider(mock_provider)
        r = rep.EmbeddingRequest("x", "same text", 0, 4)
        cached.embed_batch([r, r, r])
        assert len(cached.cache) == 1


class TestStoreBackedProvider:
    def test_serves_stored_vectors(self, mock_provider):
        reqs = [rep.EmbeddingRequest(str(i), f"text {i}", 0, 4) for i in range(3)]
        vectors = mock_provider.embed_batch(reqs)
        store = {r.content_hash: v for r, v in zip(reqs, vectors)}
        provider = rep.StoreBackedProvider(16, store)
        for got, want in zip(provider.embed_batch(reqs), vectors):
            np.testing.assert_array_equal(got, want)

    def test_missing_vector_names_request(self):
        provider = rep.StoreBackedProvider(16, {})
        with pytest.raises(rep.ProviderError, match="lost-req"):
            provider.embed_batch([rep.EmbeddingRequest("lost-req", "text", 0, 4)])
