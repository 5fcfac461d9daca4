from __future__ import annotations

import json

import pytest

from sensegap import corpus, inventory


def small_inventory(*headwords: str) -> inventory.SenseInventory:
    records = [{"headword": h, "entries": [{"gloss": f"gloss of {h}"}]} for h in headwords]
    return inventory.parse_wordnet_dump(json.dumps(records))


class TestFilterSentence:
    def test_301_characters_dropped(self):
        decision = corpus.filter_sentence("a" * 301)
        assert not decision.keep
        assert decision.reason == corpus.DROP_LENGTH

    def test_300_characters_kept(self):
        assert corpus.filter_sentence("a" * 300).keep

    def test_empty_sentence_kept(self):
        decision = corpus.filter_sentence("")
        assert decision.keep
        assert decision.reason is None

    def test_punctuation_share_above_quarter_dropped(self):
        # 8 tokens, 3 of them pure punctuation -> 37.5%
        decision = corpus.filter_sentence("a b c d e , ; !")
        assert not decision.keep
        assert decision.reason == corpus.DROP_PUNCTUATION

    def test_exactly_quarter_kept(self):
        assert corpus.filter_sentence("a b c ,").keep

    def test_attached_punctuation_is_not_a_punctuation_token(self):
        assert corpus.filter_sentence("The end.").keep


class TestCleanSentence:
    def test_control_characters_stripped(self):
        assert corpus.clean_sentence("a\tb\x00c") == "a b c"

    def test_diacritics_preserved(self):
        assert corpus.clean_sentence("hon säger något") == "hon säger något"

    def test_whitespace_collapsed(self):
        assert corpus.clean_sentence("  a   b ") == "a b"


class TestFindUsages:
    def test_single_headword_match(self):
        inv = small_inventory("car")
        lem = corpus.DictLemmatizer()
        sentence = "he needs a car to get to work"
        usages = list(corpus.find_usages([sentence], inv, lem, corpus_tag="modern"))
        assert len(usages) == 1
        u = usages[0]
        assert u.headword == "car"
        assert u.sentence[u.start : u.end] == "car"
        assert u.token_index == 3
        assert u.corpus_tag == "modern"

    def test_inflected_match_via_table(self):
        inv = small_inventory("car")
        lem = corpus.DictLemmatizer({"cars": "car"})
        usages = list(corpus.find_usages(["two cars passed"], inv, lem, corpus_tag="modern"))
        assert len(usages) == 1
        assert usages[0].target == "cars"
        assert usages[0].headword == "car"

    def test_no_match_yields_nothing(self):
        inv = small_inventory("car")
        lem = corpus.DictLemmatizer()
        assert list(corpus.find_usages(["nothing to see"], inv, lem, corpus_tag="modern")) == []

    def test_multiword_headword_contiguous_only(self):
        inv = small_inventory("cable car")
        lem = corpus.DictLemmatizer()
        hit = list(corpus.find_usages(["they took a cable car uphill"], inv, lem, corpus_tag="modern"))
        assert len(hit) == 1
        assert hit[0].target == "cable car"
        assert hit[0].token_index == 3
        miss = list(corpus.find_usages(["a cable and a car"], inv, lem, corpus_tag="modern"))
        assert miss == []

    def test_fixture_corpus_matches_manual_enumeration(self):
        inv = small_inventory("car", "run", "sun", "cable car")
        lem = corpus.DictLemmatizer({"cars": "car", "running": "run", "ran": "run", "suns": "sun"})
        sentences = [
            "the car stopped",
            "two cars and a sun",
            "he was running fast",
            "they ran home",
            "a cable car climbed",
            "nothing here",
            "car car car",
            "the sun set slowly",
            "cables everywhere",
            "sunny days",
        ]
        usages = list(corpus.find_usages(sentences, inv, lem, corpus_tag="modern"))
        by_headword = {}
        for u in usages:
            by_headword.setdefault(u.headword, []).append(u)
        # counted by hand over the fixture sentences
        assert len(by_headword["car"]) == 1 + 1 + 1 + 3  # sentences 1, 2, 5, 7
        assert len(by_headword["run"]) == 2
        assert len(by_headword["sun"]) == 2
        assert len(by_headword["cable car"]) == 1

    def test_emitted_usages_pass_filter(self):
        inv = small_inventory("car")
        lem = corpus.DictLemmatizer()
        sentences = ["car " * 120, "a car , ; ! ' -", "a fine car"]
        usages = list(corpus.find_usages(sentences, inv, lem, corpus_tag="modern"))
        assert {u.sentence for u in usages} == {"a fine car"}
        for u in usages:
            assert corpus.filter_sentence(u.sentence).keep

    def test_order_permutation_invariance(self):
        inv = small_inventory("car", "sun")
        lem = corpus.DictLemmatizer()
        sentences = ["the car stopped", "the sun rose", "a car under the sun"]
        a = {u.usage_id for u in corpus.find_usages(sentences, inv, lem, corpus_tag="modern")}
        b = {u.usage_id for u in corpus.find_usages(reversed(sentences), inv, lem, corpus_tag="modern")}
        assert a == b

    def test_lemmatizer_failure_skips_sentence(self, caplog):
        inv = small_inventory("car")

        class Flaky:
            def tokenize(self, sentence):
                if "boom" in sentence:
                    raise RuntimeError("no tokens for you")
                return corpus.DictLemmatizer().tokenize(sentence)

            def lemma(self, token_text):
                return token_text.lower()

        with caplog.at_level("WARNING"):
            usages = list(corpus.find_usages(["car boom", "a car"], inv, Flaky(), corpus_tag="modern"))
        assert len(usages) == 1
        assert usages[0].sentence == "a car"
        assert any("skipped" in r.message for r in caplog.records)

    def test_span_lemmatizes_back_to_headword(self):
        inv = small_inventory("run")
        lem = corpus.DictLemmatizer({"running": "run", "ran": "run"})
        for u in corpus.find_usages(["he was running", "she ran"], inv, lem, corpus_tag="modern"):
            assert lem.lemma(u.target) == u.headword


class TestUsageRecord:
    def test_span_bounds_validated(self):
        with pytest.raises(ValueError):
            corpus.Usage("u", "abc", 2, 2, 0, "abc", "modern")
        with pytest.raises(ValueError):
            corpus.Usage("u", "abc", 1, 9, 0, "abc", "modern")

    def test_jsonl_round_trip(self):
        inv = small_inventory("car")
        lem = corpus.DictLemmatizer()
        usages = list(corpus.find_usages(["a car passed"], inv, lem, corpus_tag="modern", language_tag="en"))
        text = corpus.write_usages(usages)
        assert corpus.load_usages(text) == usages
        record = json.loads(text.splitlines()[0])
        assert set(record) >= {"usage_id", "sentence", "start", "end", "token_index", "headword", "corpus_tag"}


def build_usage_pool(n_headwords: int, usages_per: list[int]) -> list[corpus.Usage]:
    out = []
    for i in range(n_headwords):
        headword = f"word{i:03d}"
        for j in range(usages_per[i % len(usages_per)]):
            sentence = f"sentence {j} about {headword} nr {i}"
            start = sentence.index(headword)
            out.append(
                corpus.Usage(
                    usage_id=corpus.make_usage_id(sentence, start, start + len(headword), "modern"),
                    sentence=sentence,
                    start=start,
                    end=start + len(headword),
                    token_index=3,
                    headword=headword,
                    corpus_tag="modern",
                )
            )
    return out


class TestSampling:
    def test_cap_at_five_per_headword(self):
        usages = build_usage_pool(1, [7])
        sample = corpus.sample_random_phase1(usages, ["word000"], rng_seed=1, stop_at_headwords_with_usage=1)
        assert len(sample.usages) == 5
        assert not sample.shortfall

    def test_empty_corpus_flags_shortfall(self):
        sample = corpus.sample_random_phase1([], ["a", "b"], rng_seed=1)
        assert sample.usages == []
        assert sample.shortfall

    def test_fixed_seed_reproducible(self):
        usages = build_usage_pool(40, [0, 1, 3, 7])
        headwords = sorted({u.headword for u in usages})
        runs = [
            corpus.write_usages(
                corpus.sample_random_phase1(
                    usages, headwords, rng_seed=99, stop_at_headwords_with_usage=10
                ).usages
            )
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_stops_after_target_headwords(self):
        usages = build_usage_pool(30, [2])
        headwords = sorted({u.headword for u in usages})
        sample = corpus.sample_random_phase1(usages, headwords, rng_seed=5, stop_at_headwords_with_usage=4)
        assert len(sample.headwords_with_usage) == 4
        assert not sample.shortfall
        assert {u.headword for u in sample.usages} == set(sample.headwords_with_usage)

    def test_pool_restricts_search(self):
        usages = build_usage_pool(50, [1])
        headwords = sorted({u.headword for u in usages})
        sample = corpus.sample_random_phase1(
            usages, headwords, rng_seed=3, headword_pool=10, stop_at_headwords_with_usage=50
        )
        assert len(sample.sampled_headwords) == 10
        assert sample.shortfall  # only 10 candidates for a target of 50

    def test_selection_roughly_uniform_across_seeds(self):
        # one headword with 10 usages, keep 5: each usage should be picked
        # about half the time across many seeds
        from scipy.stats import chisquare

        usages = build_usage_pool(1, [10])
        counts = {u.usage_id: 0 for u in usages}
        trials = 400
        for seed in range(trials):
            sample = corpus.sample_random_phase1(
                usages, ["word000"], rng_seed=seed, stop_at_headwords_with_usage=1
            )
            for u in sample.usages:
                counts[u.usage_id] += 1
        for c in counts.values():
            assert abs(c / trials - 0.5) < 0.12
        result = chisquare(list(counts.values()))
        assert result.pvalue > 0.001


class TestLemmatizerTable:
    def test_from_tsv(self):
        lem = corpus.DictLemmatizer.from_tsv("# comment\ncars\tcar\nran\trun\n")
        assert lem.lemma("Cars") == "car"
        assert lem.lemma("ran") == "run"
        assert lem.lemma("unknown") == "unknown"

    def test_bad_tsv_line(self):
        with pytest.raises(ValueError):
            corpus.DictLemmatizer.from_tsv("only-one-field\n")

    def test_deterministic(self):
        lem = corpus.DictLemmatizer({"cars": "car"})
        s = "Cars and cars"
        assert lem.tokenize(s) == lem.tokenize(s)
