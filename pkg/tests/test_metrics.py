import random
from itertools import combinations

from sumfactors.metrics import lcs_length, ngram_counts, rouge_l, rouge_n

# --- independent oracles -----------------------------------------------


def brute_rouge_n(cand, ref, n):
    """Clipped n-gram overlap counted from the reference side."""

    def grams(toks):
        table = {}
        for i in range(len(toks) - n + 1):
            g = tuple(toks[i : i + n])
            table[g] = table.get(g, 0) + 1
        return table

    r = grams(ref)
    c = grams(cand)
    matched = sum(min(count, c.get(g, 0)) for g, count in r.items())
    ref_total = sum(r.values())
    cand_total = sum(c.values())
    recall = matched / ref_total if ref_total else 0.0
    precision = matched / cand_total if cand_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return recall, precision, f1


def brute_lcs(a, b):
    """Exponential subsequence enumeration; only for short sequences."""
    if len(a) > len(b):
        a, b = b, a
    for length in range(len(a), 0, -1):
        for idxs in combinations(range(len(a)), length):
            sub = [a[i] for i in idxs]
            it = iter(b)
            if all(x in it for x in sub):
                return length
    return 0


def dp_lcs_full_matrix(a, b):
    """Second DP implementation with an explicit (m+1)x(n+1) table."""
    m, n = len(a), len(b)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[m][n]


def random_pair(rng, max_len=30, vocab=15):
    def seq():
        return [f"w{rng.randrange(vocab)}" for _ in range(rng.randint(0, max_len))]

    return seq(), seq()


# --- spec examples ------------------------------------------------------


def test_rouge_1_recall():
    assert abs(rouge_n(["the", "cat", "sat"], ["the", "cat", "ran"], 1).recall - 2 / 3) < 1e-12


def test_rouge_2_recall():
    assert rouge_n(["the", "cat", "sat"], ["the", "cat", "ran"], 2).recall == 0.5


def test_rouge_identity():
    for n in (1, 2, 3):
        score = rouge_n(["a", "b", "c"], ["a", "b", "c"], n)
        assert score.recall == score.precision == score.f1 == 1.0


def test_rouge_empty_reference_is_zero():
    score = rouge_n(["a", "b"], [], 1)
    assert (score.recall, score.precision, score.f1) == (0.0, 0.0, 0.0)
    short_ref = rouge_n(["a", "b"], ["a"], 2)  # reference has no bigrams
    assert short_ref.f1 == 0.0


def test_lcs_examples():
    assert lcs_length(["a", "b", "c", "d"], ["a", "c", "d"]) == 3
    assert lcs_length(["a", "b"], ["c", "d"]) == 0
    assert lcs_length([], ["a"]) == 0


def test_rouge_l_example():
    score = rouge_l(["a", "b", "c"], ["a", "c"])
    assert score.recall == 1.0
    assert abs(score.precision - 2 / 3) < 1e-12
    assert abs(score.f1 - 0.8) < 1e-12
    assert rouge_l(["x", "y"], ["x", "y"]).f1 == 1.0


# --- oracle comparisons and properties ---------------------------------


def test_rouge_n_matches_brute_force():
    rng = random.Random(23)
    for _ in range(300):
        cand, ref = random_pair(rng)
        for n in (1, 2):
            score = rouge_n(cand, ref, n)
            br, bp, bf = brute_rouge_n(cand, ref, n)
            assert abs(score.recall - br) < 1e-12
            assert abs(score.precision - bp) < 1e-12
            assert abs(score.f1 - bf) < 1e-12


def test_lcs_matches_brute_force():
    rng = random.Random(29)
    for _ in range(200):
        a = [f"w{rng.randrange(6)}" for _ in range(rng.randint(0, 12))]
        b = [f"w{rng.randrange(6)}" for _ in range(rng.randint(0, 12))]
        assert lcs_length(a, b) == brute_lcs(a, b)


def test_rouge_l_matches_independent_dp():
    rng = random.Random(31)
    for _ in range(300):
        cand, ref = random_pair(rng)
        matched = dp_lcs_full_matrix(cand, ref)
        score = rouge_l(cand, ref)
        if ref:
            assert score.recall == matched / len(ref)
        if cand and ref:
            assert score.precision == matched / len(cand)


def test_lcs_symmetric_and_bounded():
    rng = random.Random(37)
    for _ in range(200):
        a, b = random_pair(rng, max_len=20, vocab=6)
        l = lcs_length(a, b)
        assert l == lcs_length(b, a)
        assert 0 <= l <= min(len(a), len(b))


def test_scores_stay_in_unit_interval():
    rng = random.Random(41)
    for _ in range(200):
        cand, ref = random_pair(rng)
        for score in (rouge_n(cand, ref, 1), rouge_n(cand, ref, 2), rouge_l(cand, ref)):
            for value in (score.recall, score.precision, score.f1):
                assert 0.0 <= value <= 1.0


def test_ngram_counts_window():
    assert ngram_counts(["a", "b", "a"], 2) == {("a", "b"): 1, ("b", "a"): 1}
