"""Access to the bundled data files (lexicons, WEAT battery, mini-corpus)."""

from __future__ import annotations

from importlib import resources


def _data_path(name: str):
    return resources.files("lyricstats").joinpath("data", name)


def default_swear_lexicon_path() -> str:
    return str(_data_path("swear_words.txt"))


def default_stopwords_path() -> str:
    return str(_data_path("stopwords.txt"))


def default_battery_path() -> str:
    return str(_data_path("weat_tests.json"))


def mini_corpus_path() -> str:
    return str(_data_path("mini_corpus.csv"))
