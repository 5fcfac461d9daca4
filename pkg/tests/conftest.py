from __future__ import annotations

import json

import pytest

from sensegap import corpus, inventory, representation


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid:
                rows.append((nodeid.split("::")[-1], "PASS" if status == "passed" else "FAIL"))
    if rows:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"  {status}  {name}")

# The worked "unable" record plus extra headwords exercising multiword
# entries, non-primary synsets, synset members and missing examples.
UNABLE_RECORD = {
    "headword": "unable",
    "entries": [
        {
            "pos": "adj.",
            "gloss": "(usually followed by `to') not having the necessary means or skill or know-how",
            "examples": ["unable to get to town without a car", "unable to obtain funds"],
        },
        {
            "pos": "s",
            "gloss": "(usually followed by `to') lacking necessary physical or mental ability",
            "examples": ["dyslexics are unable to learn to read adequately", "the sun was unable to melt enough snow"],
        },
    ],
}

CAR_RECORD = {
    "headword": "car",
    "entries": [
        {
            "pos": "n",
            "gloss": "a motor vehicle with four wheels; usually propelled by an internal combustion engine",
            "examples": ["he needs a car to get to work"],
            "is_primary": True,
            "synset_members": ["car", "auto", "automobile", "machine", "motorcar"],
        },
        {
            "pos": "n",
            "gloss": "a conveyance for passengers or freight on a cable railway",
            "examples": ["they took a cable car to the top of the mountain"],
            "is_primary": False,
            "synset_members": ["cable car", "car"],
        },
    ],
}

INADEQUATE_RECORD = {
    "headword": "inadequate",
    "entries": [
        {
            "pos": "adj.",
            "gloss": "lacking the requisite qualities or resources to meet a task",
            "examples": ["a poor salary"],
            "is_primary": True,
            "synset_members": ["inadequate", "poor", "short"],
        },
        {
            "pos": "s",
            "gloss": "not sufficient to meet a need",
            "examples": [],
            "is_primary": True,
            "synset_members": ["inadequate", "unequal"],
        },
    ],
}

SVINDEL_RECORD = {
    "key": 145357,
    "word": "svindel",
    "nature": "subst.",
    "definitions": [
        {
            "gloss": "+yrsel som uppkommer vid vistelse på höga höjder",
            "sub_gloss": "",
            "sub_entries": [
                {
                    "gloss": "äv. om likn. känsla som uppstått av annan orsak",
                    "sub_gloss": "",
                    "sub_entries": [],
                    "examples": ["han kände svindel vid tanken på hur mycket pengar han hade ansvar för"],
                    "year": "1668",
                }
            ],
            "examples": ["hon fick svindel uppe i tornet"],
            "year": "1668",
        },
        {
            "gloss": "(ekonomiskt) bedrägeri",
            "sub_gloss": "i större skala",
            "sub_entries": [],
            "examples": [],
            "year": "1879",
        },
    ],
}

SAGA_RECORD = {
    "key": 900001,
    "word": "saga",
    "nature": "subst.",
    "definitions": [
        {
            "gloss": "",
            "sub_gloss": "berättelse med övernaturliga inslag",
            "sub_entries": [],
            "examples": ["hon läste en saga för barnen", "en gammal saga"],
            "year": "1520",
        }
    ],
}

EMPTY_DEFINITIONS_RECORD = {"key": 900002, "word": "tomt", "nature": "subst.", "definitions": []}


@pytest.fixture
def wordnet_dump_text() -> str:
    return json.dumps([UNABLE_RECORD, CAR_RECORD, INADEQUATE_RECORD], ensure_ascii=False)


@pytest.fixture
def wordnet_inv(wordnet_dump_text) -> inventory.SenseInventory:
    return inventory.parse_wordnet_dump(wordnet_dump_text)


@pytest.fixture
def so_dump_text() -> str:
    return json.dumps([SVINDEL_RECORD, SAGA_RECORD, EMPTY_DEFINITIONS_RECORD], ensure_ascii=False)


@pytest.fixture
def so_inv(so_dump_text) -> inventory.SenseInventory:
    return inventory.parse_so_dump(so_dump_text)


@pytest.fixture
def mock_provider() -> representation.MockEmbeddingProvider:
    return representation.MockEmbeddingProvider(dim=16)


@pytest.fixture
def identity_lemmatizer() -> corpus.DictLemmatizer:
    return corpus.DictLemmatizer(
        {
            "cars": "car",
            "needs": "need",
            "running": "run",
            "ran": "run",
            "unable": "unable",
        }
    )


def make_usage(sentence: str, target: str, headword: str | None = None, corpus_tag: str = "modern", occurrence: int = 0) -> corpus.Usage:
    """Build a Usage for the nth occurrence of ``target`` in ``sentence``."""
    start = -1
    for _ in range(occurrence + 1):
        start = sentence.index(target, start + 1)
    end = start + len(target)
    token_index = len(sentence[:start].split())
    return corpus.Usage(
        usage_id=corpus.make_usage_id(sentence, start, end, corpus_tag),
        sentence=sentence,
        start=start,
        end=end,
        token_index=token_index,
        headword=headword or target,
        corpus_tag=corpus_tag,
    )
