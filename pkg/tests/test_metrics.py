import pytest
from hypothesis import given
from hypothesis import strategies as st

from rpminer.metrics import (
    BothEmpty,
    LengthMismatch,
    automatability_scores,
    jaccard,
    routine_quality,
    total_coverage,
)


def test_jaccard_examples():
    assert jaccard("abc", "abc") == 1.0
    assert jaccard("abc", "bcd") == 0.5
    assert jaccard("ab", "cd") == 0.0
    with pytest.raises(BothEmpty):
        jaccard([], [])


def test_routine_quality():
    truth = [set(range(15)), {"x"}]
    assert routine_quality([set(range(15))], truth).average == 1.0
    missing_one = set(range(14)) | {"y"}
    q = routine_quality([missing_one], truth)
    assert q.per_routine == (14 / 16,) and q.matched == (0,)
    with pytest.warns(RuntimeWarning):
        assert routine_quality([], truth).average == 0.0
    with pytest.raises(ValueError):
        routine_quality([{"a"}], [])


def test_total_coverage():
    assert total_coverage([range(10), range(10, 20)], 20) == 1.0
    assert total_coverage([], 20) == 0.0
    assert total_coverage([[0, 2, 4], [6, 8], [10, 12, 14, 16, 18]], 20) == 0.5


def test_scores_examples():
    predicted = [True, True, True, True, False]
    truth = [True, True, True, False, False]
    p, r, f = automatability_scores(predicted, truth)
    assert p == 0.75 and r == 1.0
    assert f == pytest.approx(2 * 0.75 / 1.75)
    assert automatability_scores([True, False], [True, False]) == (1.0, 1.0, 1.0)
    with pytest.warns(RuntimeWarning):
        assert automatability_scores([False, False], [True, False])[1] == 0.0
    with pytest.raises(LengthMismatch):
        automatability_scores([True], [])


sets = st.sets(st.integers(0, 9), max_size=8)


@given(sets, sets)
def test_jaccard_properties(a, b):
    if not a and not b:
        return
    j = jaccard(a, b)
    assert j == jaccard(b, a)
    assert 0.0 <= j <= 1.0
    assert (j == 1.0) == (a == b)


@given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=30))
def test_f_score_is_harmonic_mean(pairs):
    predicted, truth = zip(*pairs)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        p, r, f = automatability_scores(predicted, truth)
    assert f <= max(p, r) + 1e-12
    assert min(p, r) - 1e-12 <= f or f == 0.0
    if p == r:
        assert f == pytest.approx(p)
