import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import brute_closed_patterns, is_subseq
from rpminer import run_pipeline
from rpminer.segmentation import Segment
from rpminer.mining import (
    NoMatch,
    SequentialPattern,
    extract_candidates,
    match_occurrences,
    mine_closed_patterns,
    rank_patterns,
    score_pattern,
)


def _as_segments(symbol_lists):
    out, offset = [], 0
    for syms in symbol_lists:
        idx = tuple(range(offset, offset + len(syms)))
        out.append(Segment(events=tuple(f"e{i}" for i in idx), indices=idx, keys=tuple(syms)))
        offset += len(syms) + 1
    return out


def _used(cands):
    return [i for c in cands for inst in c.instances for i in inst.log_indices]


def _closed(segments, support):
    return {(p.symbols, p.count) for p in mine_closed_patterns(segments, support)}


def test_shared_pattern_with_gaps():
    segs = [["u1", "uy", "u2", "u3"], ["u1", "u2", "ux", "u3"], ["u1", "ux", "u2", "u3"]]
    found = {p.symbols: p.support for p in mine_closed_patterns(segs, 0.5)}
    assert found[("u1", "u2", "u3")] == 1.0


def test_single_segment_is_its_own_closed_pattern():
    (p,) = mine_closed_patterns([list("abca")], 1.0)
    assert p.symbols == tuple("abca") and p.support == 1.0


def test_no_segments():
    assert mine_closed_patterns([], 0.5) == []
    assert extract_candidates([]) == []


@pytest.mark.parametrize("bad", [0, -0.1, 1.5])
def test_support_bounds(bad):
    with pytest.raises(ValueError):
        mine_closed_patterns([["a"]], bad)


def test_cohesion_from_gap_counts():
    segs = [list("axbc"), list("abxc"), list("abc")]
    pattern = SequentialPattern(tuple("abc"), 1.0, 3)
    score = score_pattern(pattern, segs)
    # one gap, one gap, none: median 1
    assert score.cohesion == 2
    assert score.length == 3 and score.frequency == 3


def test_contiguous_pattern_cohesion_and_full_coverage():
    segs = [list("abc"), list("abc")]
    score = score_pattern(SequentialPattern(tuple("abc"), 1.0, 2), segs)
    assert score.cohesion == 3
    assert score.coverage == 1.0


def test_ranking_ties_prefer_longer_then_frequent():
    segs = [list("ab"), list("ab"), list("c")]
    ranked = rank_patterns(mine_closed_patterns(segs, 0.3), segs, "frequency")
    assert ranked[0][0].symbols == ("a", "b")
    with pytest.raises(ValueError):
        rank_patterns([], segs, "beauty")


def test_match_occurrences():
    assert match_occurrences("ab", "axab") == (0, 3)
    assert match_occurrences("abc", "abc") == (0, 1, 2)
    with pytest.raises(NoMatch):
        match_occurrences("ba", "ab")


def test_sample_log_two_candidates(sample_log):
    result = run_pipeline(sample_log)
    assert [len(c) for c in result.candidates] == [15, 15]
    used = [i for c in result.candidates for inst in c.instances for i in inst.log_indices]
    assert len(used) == len(set(used)) == 30


def test_overlapping_patterns_extracted_disjointly():
    segs = [["u1", "u2", "u4"], ["u1", "u3", "u4"], ["u1", "u2", "u4"], ["u1", "u3", "u4"]]
    cands = extract_candidates(_as_segments(segs), min_support=0.5, min_coverage=0.0)
    assert len(cands) >= 2
    used = _used(cands)
    assert len(used) == len(set(used))
    assert [c.symbols for c in cands[:2]] == [("u1", "u2", "u4"), ("u1", "u3", "u4")]


# ------------------------------------------------------------------ properties

small_inputs = st.lists(
    st.lists(st.sampled_from("abcde"), max_size=6),
    min_size=1,
    max_size=8,
)


@given(small_inputs, st.sampled_from([0.2, 0.25, 0.5, 1.0]))
def test_miner_matches_brute_force(segments, support):
    assert _closed(segments, support) == brute_closed_patterns(segments, support)


@given(small_inputs)
def test_prefixes_of_frequent_patterns_are_frequent(segments):
    n = len(segments)
    for p in mine_closed_patterns(segments, 0.25):
        for k in range(1, len(p.symbols)):
            prefix = p.symbols[:k]
            assert sum(is_subseq(prefix, s) for s in segments) >= p.count
        assert p.support == p.count / n


@given(small_inputs, st.sampled_from(["frequency", "length", "coverage", "cohesion"]))
def test_extraction_terminates_with_disjoint_instances(segments, criterion):
    segs = _as_segments(segments)
    cands = extract_candidates(segs, min_support=0.25, min_coverage=0.0, criterion=criterion)
    used = _used(cands)
    assert len(used) == len(set(used))
    for c in cands:
        for inst in c.instances:
            # every instance spells the pattern, one event per symbol
            assert len(inst.events) == len(c.symbols)
            keys = {i: k for s in segs for i, k in zip(s.indices, s.keys)}
            assert tuple(keys[i] for i in inst.log_indices) == c.symbols
        assert c.score.cohesion <= c.score.length
        assert 0.0 <= c.score.coverage <= 1.0
