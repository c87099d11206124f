import hashlib
import random
from collections import Counter
from importlib import resources

from sumfactors.textnorm import (
    STOPWORDS,
    _IRREGULAR,
    content_tokens,
    extract_patterns,
    is_punctuation,
    lemmatize,
    normalize_tokens,
)

STOPWORD_FILE_SHA256 = "73da0de14f2874bf2761dc0b9f2a38d125a40ad0567af21a73ae3982e1b70062"


def test_stopword_list_is_pinned():
    data = resources.files("sumfactors").joinpath("data/stopwords.txt").read_bytes()
    assert hashlib.sha256(data).hexdigest() == STOPWORD_FILE_SHA256
    assert len(STOPWORDS) == 149


def test_normalize_drops_stopwords_and_punctuation():
    assert normalize_tokens(["the", "cats", "sat", ","]) == ["cat", "sat"]


def test_normalize_masks_numbers():
    assert normalize_tokens(["in", "1999", ","]) == ["0"]
    assert normalize_tokens(["covid19"]) == ["0"]


def test_normalize_empty():
    assert normalize_tokens([]) == []


def test_lemmatizer_rules():
    assert lemmatize("cats") == "cat"
    assert lemmatize("cities") == "city"
    assert lemmatize("boxes") == "box"
    assert lemmatize("churches") == "church"
    assert lemmatize("glasses") == "glass"
    assert lemmatize("running") == "run"
    assert lemmatize("stopped") == "stop"
    assert lemmatize("studied") == "study"
    assert lemmatize("agreed") == "agree"
    assert lemmatize("sat") == "sat"
    assert lemmatize("bus") == "bus"
    assert lemmatize("news") == "news"
    assert lemmatize("children") == "child"


def test_irregular_values_are_fixpoints():
    for value in _IRREGULAR.values():
        assert lemmatize(value) == value


_WORDY = [
    "cats", "cat", "running", "run", "cities", "studies", "walked", "talking",
    "glasses", "churches", "men", "children", "wolves", "apple", "apples",
    "buildings", "agreed", "series", "wills", "1999", "5", "covid19",
    "the", "of", "was", "been", ",", ".", "!", "'", "%", "big", "down",
]


def test_normalize_is_idempotent():
    rng = random.Random(11)
    for _ in range(300):
        tokens = [rng.choice(_WORDY) for _ in range(rng.randint(0, 15))]
        once = normalize_tokens(tokens)
        assert normalize_tokens(once) == once


def test_normalized_output_is_clean():
    rng = random.Random(13)
    for _ in range(300):
        tokens = [rng.choice(_WORDY) for _ in range(rng.randint(0, 15))]
        for tok in normalize_tokens(tokens):
            assert tok not in STOPWORDS
            assert not is_punctuation(tok)
            assert tok == "0" or not any(c.isdigit() for c in tok)


def test_content_tokens_keeps_numbers_and_inflections():
    assert content_tokens(["the", "big", "cats", ",", "in", "1999"]) == ["big", "cats", "1999"]


def test_extract_patterns_enumeration():
    assert extract_patterns(["a", "b", "c"]) == Counter(
        {("a", "b"): 1, ("b", "c"): 1, ("a", "b", "c"): 1}
    )


def test_extract_patterns_too_short():
    assert extract_patterns(["a"]) == Counter()
    assert extract_patterns([]) == Counter()


def test_extract_patterns_multiplicity():
    assert extract_patterns(["a", "b", "a", "b"]) == Counter(
        {("a", "b"): 2, ("b", "a"): 1, ("a", "b", "a"): 1, ("b", "a", "b"): 1}
    )


def test_patterns_from_normalized_tokens_are_clean():
    rng = random.Random(17)
    for _ in range(200):
        tokens = [rng.choice(_WORDY) for _ in range(rng.randint(0, 20))]
        for pattern in extract_patterns(normalize_tokens(tokens)):
            assert len(pattern) in (2, 3)
            for tok in pattern:
                assert tok not in STOPWORDS
                assert not is_punctuation(tok)
                assert tok == "0" or not any(c.isdigit() for c in tok)
