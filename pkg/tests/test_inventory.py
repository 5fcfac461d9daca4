from __future__ import annotations

import json

import pytest

from sensegap import inventory
from sensegap.inventory import (
    KIND_BOTH,
    KIND_EXAMPLES,
    KIND_GLOSS,
    STATUS_COMPLETE,
    STATUS_PARTIAL,
    STATUS_UNREPRESENTABLE,
)

from conftest import UNABLE_RECORD


class TestParseWordnet:
    def test_unable_record(self):
        inv = inventory.parse_wordnet_dump(json.dumps([UNABLE_RECORD]))
        entry = inv.headwords["unable"]
        assert len(entry.senses) == 2
        for sense in entry.senses:
            assert sense.has_gloss()
            assert len(sense.examples) == 2
            assert sense.is_primary  # no marker in the dump -> default true
        assert entry.senses[0].examples[0] == "unable to get to town without a car"
        assert entry.sense_frequency_rank == [s.sense_id for s in entry.senses]

    def test_empty_document(self):
        inv = inventory.parse_wordnet_dump("")
        assert len(inv) == 0
        assert inv.source_tag == inventory.WORDNET_LIKE

    def test_primary_marker_is_read(self, wordnet_inv):
        car = wordnet_inv.headwords["car"]
        assert [s.is_primary for s in car.senses] == [True, False]
        assert car.senses[1].synset_members == ["cable car", "car"]

    def test_duplicate_headword_rejected(self):
        raw = json.dumps([UNABLE_RECORD, UNABLE_RECORD])
        with pytest.raises(inventory.DuplicateHeadwordError):
            inventory.parse_wordnet_dump(raw)

    def test_missing_gloss_names_headword(self):
        record = {"headword": "glossless", "entries": [{"examples": ["x"]}]}
        with pytest.raises(inventory.ParseError, match="glossless"):
            inventory.parse_wordnet_dump(json.dumps([record]))

    def test_jsonl_input_accepted(self):
        raw = "\n".join(json.dumps(r) for r in [UNABLE_RECORD]) + "\n"
        inv = inventory.parse_wordnet_dump(raw)
        assert "unable" in inv

    def test_sense_ids_are_stable_across_reruns(self, wordnet_dump_text):
        a = inventory.parse_wordnet_dump(wordnet_dump_text)
        b = inventory.parse_wordnet_dump(wordnet_dump_text)
        assert [s.sense_id for s in a.all_senses()] == [s.sense_id for s in b.all_senses()]


class TestParseSo:
    def test_svindel_record(self, so_inv):
        entry = so_inv.headwords["svindel"]
        assert len(entry.senses) == 2
        second = entry.senses[1]
        # main gloss wins even though a secondary gloss is present
        assert second.gloss == "(ekonomiskt) bedrägeri"
        assert second.secondary_gloss == "i större skala"
        assert second.effective_gloss == "(ekonomiskt) bedrägeri"
        assert second.year == "1879"
        assert all(s.is_primary for s in entry.senses)

    def test_sub_entries_kept_as_metadata_not_senses(self, so_inv):
        first = so_inv.headwords["svindel"].senses[0]
        assert len(first.sub_entries) == 1
        assert first.sub_entries[0]["gloss"].startswith("äv. om likn.")
        # first sense keeps only its own example
        assert first.examples == ["hon fick svindel uppe i tornet"]

    def test_secondary_gloss_fallback(self, so_inv):
        saga = so_inv.headwords["saga"].senses[0]
        assert saga.gloss is None
        assert saga.effective_gloss == "berättelse med övernaturliga inslag"

    def test_empty_definitions_skipped_with_warning(self, so_dump_text, caplog):
        with caplog.at_level("WARNING"):
            inv = inventory.parse_so_dump(so_dump_text)
        assert "tomt" not in inv
        assert any("tomt" in r.message for r in caplog.records)

    def test_no_frequency_metadata(self, so_inv):
        assert not so_inv.has_frequency_metadata()

    def test_sub_entries_ingestable_behind_flag(self, so_dump_text):
        inv = inventory.parse_so_dump(so_dump_text, include_sub_entries=True)
        entry = inv.headwords["svindel"]
        # 2 main senses plus the nested sub-entry of the first one
        assert len(entry.senses) == 3
        extra = entry.senses[2]
        assert extra.gloss.startswith("äv. om likn.")
        assert extra.examples == ["han kände svindel vid tanken på hur mycket pengar han hade ansvar för"]
        # default stays main-senses-only
        assert len(inventory.parse_so_dump(so_dump_text).headwords["svindel"].senses) == 2


class TestRoundTrip:
    @pytest.mark.parametrize("fixture", ["wordnet_inv", "so_inv"])
    def test_parse_serialize_parse_fixed_point(self, fixture, request):
        inv = request.getfixturevalue(fixture)
        text = inventory.serialize_inventory(inv)
        again = inventory.load_inventory(text)
        assert again == inv
        assert inventory.serialize_inventory(again) == text

    def test_header_required(self):
        with pytest.raises(inventory.ParseError):
            inventory.load_inventory('{"record":"headword"}')


class TestStats:
    def test_single_entry_absent_averages(self):
        inv = inventory.parse_wordnet_dump(
            json.dumps([{"headword": "solo", "entries": [{"gloss": "only sense"}]}])
        )
        stats = inventory.inventory_stats(inv)
        assert stats.headwords == 1
        assert stats.avg_senses_per_headword == 1.0
        assert stats.avg_senses_per_multisense_headword is None
        assert stats.pct_senses_with_gloss == 100.0
        assert stats.avg_gloss_length == float(len("only sense"))
        assert stats.pct_senses_with_examples == 0.0
        assert stats.avg_examples_per_sense == 0.0
        assert stats.avg_examples_per_exemplified_sense is None
        assert stats.avg_example_length is None

    def test_three_headword_fixture_hand_count(self, wordnet_inv):
        # 3 headwords, 6 senses; hand-tallied from the fixture records
        stats = inventory.inventory_stats(wordnet_inv)
        assert stats.headwords == 3
        assert stats.avg_senses_per_headword == pytest.approx(6 / 3)
        assert stats.avg_senses_per_multisense_headword == pytest.approx(2.0)
        assert stats.pct_senses_with_gloss == pytest.approx(100.0)
        assert stats.pct_senses_with_examples == pytest.approx(100.0 * 5 / 6)
        assert stats.avg_examples_per_sense == pytest.approx(7 / 6)
        assert stats.avg_examples_per_exemplified_sense == pytest.approx(7 / 5)

    def test_percentages_in_range_and_absent_not_zero(self, so_inv):
        stats = inventory.inventory_stats(so_inv)
        for pct in (stats.pct_senses_with_gloss, stats.pct_senses_with_examples):
            assert 0.0 <= pct <= 100.0
        d = stats.to_dict()
        assert "avg_gloss_length" in d

    def test_empty_inventory(self):
        stats = inventory.inventory_stats(inventory.SenseInventory({}, inventory.WORDNET_LIKE))
        assert stats.headwords == 0
        assert stats.avg_senses_per_headword is None
        assert stats.pct_senses_with_gloss is None


class TestCompleteness:
    def test_glossed_but_unexemplified(self):
        inv = inventory.parse_wordnet_dump(
            json.dumps(
                [{"headword": "w", "entries": [{"gloss": "first"}, {"gloss": "second"}]}]
            )
        )
        gloss_view = inventory.complete_senses(inv, KIND_GLOSS)
        assert gloss_view.status("w") == STATUS_COMPLETE
        assert len(gloss_view.complete_ids("w")) == 2
        example_view = inventory.complete_senses(inv, KIND_EXAMPLES)
        assert example_view.status("w") == STATUS_UNREPRESENTABLE
        assert example_view.complete_ids("w") == []

    def test_partially_complete(self):
        inv = inventory.parse_wordnet_dump(
            json.dumps(
                [
                    {
                        "headword": "w",
                        "entries": [
                            {"gloss": "a", "examples": ["one example"]},
                            {"gloss": "b"},
                            {"gloss": "c"},
                        ],
                    }
                ]
            )
        )
        view = inventory.complete_senses(inv, KIND_EXAMPLES)
        assert view.status("w") == STATUS_PARTIAL
        assert len(view.complete_ids("w")) == 1

    @pytest.mark.parametrize("kind", [KIND_GLOSS, KIND_EXAMPLES, KIND_BOTH])
    def test_status_partition(self, wordnet_inv, so_inv, kind):
        for inv in (wordnet_inv, so_inv):
            view = inventory.complete_senses(inv, kind)
            total = sum(
                len(view.headwords_with_status(s))
                for s in (STATUS_COMPLETE, STATUS_PARTIAL, STATUS_UNREPRESENTABLE)
            )
            assert total == len(inv)

    def test_unknown_kind_rejected(self, wordnet_inv):
        with pytest.raises(ValueError):
            inventory.complete_senses(wordnet_inv, "nope")
