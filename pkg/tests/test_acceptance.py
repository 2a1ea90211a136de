"""Acceptance gate: one test per criterion, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager

import pytest
from hypothesis import given, settings, strategies as st

import tweetswing as tw
from tweetswing.aggregate import GroupAggregates, merge, shares_from_totals
from tweetswing.matching import group_universe
from tweetswing.pipeline import process_texts
from tweetswing.swing import (
    forecast_constituency,
    forecast_seats,
    load_constituencies,
    national_changes,
    project_constituency,
)

import oracle
from conftest import DATA_DIR, make_texts

REPORT_GROUPS = ("CON", "DUP", "GRN", "LAB", "LD", "PC", "SF", "SNP", "UKIP")

# published totals column and the proportions it must normalise to
PUBLISHED_TOTALS = {
    "CON": 0.511811582, "LAB": 0.494797271, "LD": 0.077637275, "SNP": 0.160053484,
    "GRN": 0.044856119, "UKIP": 0.41519195, "DUP": 0.029038815, "PC": 0.003549149,
    "SF": 0.013734232,
}
PUBLISHED_PROPORTIONS = {
    "CON": 0.292351853, "LAB": 0.28263311, "LD": 0.044347182, "SNP": 0.091424138,
    "GRN": 0.02562226, "UKIP": 0.237161761, "DUP": 0.016587259, "PC": 0.002027309,
    "SF": 0.007845129,
}

# published national pairs: 2010 share, estimated share, change, reference seats
NATIONAL_2010 = {"CON": 36.1, "LAB": 29.0, "LD": 23.0, "SNP": 1.7, "GRN": 1.0,
                 "UKIP": 3.1, "PC": 0.6}
ESTIMATED_SHARE_PCT = {"CON": 29.3, "LAB": 28.3, "LD": 4.4, "SNP": 9.2, "GRN": 2.3,
                       "UKIP": 23.8, "DUP": 1.7, "PC": 0.2, "SF": 0.8}
EXPECTED_CHANGES = {"CON": -6.8, "LAB": -0.7, "LD": -18.6, "SNP": 7.5, "GRN": 1.3,
                    "UKIP": 20.7, "PC": -0.4}
REFERENCE_SEATS = {"LAB": 306, "CON": 285, "LD": 21, "SNP": 9, "UKIP": 5, "GRN": 1, "PC": 3}


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {number}: FAIL - {label}")
        raise
    print(f"\nACCEPTANCE {number}: PASS - {label}")


def table2_proportions() -> dict[str, float]:
    return {g: v / 100.0 for g, v in ESTIMATED_SHARE_PCT.items()}


def test_criterion_1_normalisation_fixture():
    with criterion(1, "published totals normalise to published proportions (1e-5)"):
        start = time.perf_counter()
        vector = shares_from_totals(PUBLISHED_TOTALS)
        elapsed = time.perf_counter() - start
        for group, expected in PUBLISHED_PROPORTIONS.items():
            assert vector[group].proportion == pytest.approx(expected, abs=1e-5), group
        assert elapsed < 1.0


def test_criterion_2_swing_fixture():
    with criterion(2, "national share pairs give the printed changes to one decimal"):
        start = time.perf_counter()
        changes = national_changes(table2_proportions(), NATIONAL_2010)
        for group, expected in EXPECTED_CHANGES.items():
            assert round(changes[group], 1) == expected, group
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0


def test_criterion_3_worked_example():
    with criterion(3, "worked single-constituency example: 34.4 / 35.9, winner LAB, LD clamped"):
        changes = national_changes(table2_proportions(), NATIONAL_2010)
        result = load_constituencies(DATA_DIR / "halesowen.csv")[0]
        projected = project_constituency(result, changes)
        assert projected["CON"] == pytest.approx(34.4, abs=1e-9)
        assert projected["LAB"] == pytest.approx(35.9, abs=1e-9)
        # uniform swing arithmetic gives 14.8 - 18.6 = -3.8; shares clamp to 0
        assert projected["LD"] == 0.0
        forecast = forecast_constituency(result, changes)
        assert forecast.winner == "LAB"
        assert forecast.margin == pytest.approx(1.5, abs=1e-9)


def test_criterion_4_directional_seat_forecast():
    with criterion(4, "full map: hung parliament, LAB ahead of CON; deviations reported"):
        results = load_constituencies(DATA_DIR / "gb2010_constituencies.csv")
        changes = national_changes(table2_proportions(), NATIONAL_2010)
        forecast = forecast_seats(results, changes)

        print(f"\n  seats over {forecast.total_seats} constituencies "
              f"(majority needs {forecast.majority_threshold}):")
        for group in sorted(set(REFERENCE_SEATS) | set(forecast.seats)):
            got = forecast.seats.get(group, 0)
            ref = REFERENCE_SEATS.get(group, 0)
            flag = "  INVESTIGATE" if abs(got - ref) > 15 else ""
            print(f"    {group:<5} {got:>4}  (reference {ref:>3}, deviation {got - ref:+d}){flag}")

        assert forecast.is_hung
        assert max(forecast.seats.values()) < 326
        assert forecast.seats["LAB"] > forecast.seats["CON"]


def test_criterion_5_oracle_equivalence(matcher, lexicon, term_tuples, lexicon_dicts):
    with criterion(5, "pipeline equals brute-force oracle on a 1,000-tweet synthetic corpus"):
        start = time.perf_counter()
        rng = random.Random(20150507)
        texts = make_texts(rng, 1000, [t[0] for t in term_tuples], list(lexicon.strengths))

        universe = group_universe(matcher.entries)
        aggs = GroupAggregates(universe)
        process_texts(texts, matcher, lexicon, aggs)
        vector = tw.shares(aggs, REPORT_GROUPS)

        strengths, boosters, negators = lexicon_dicts
        sums, counts, proportions = oracle.run_pipeline(
            texts, term_tuples, strengths, boosters, negators, report_groups=REPORT_GROUPS
        )

        for group in universe:
            agg = aggs[group]
            got_counts = (agg.party_kept, agg.leader_kept, agg.excluded_multi,
                          agg.filtered_negative)
            want = counts[group]
            assert got_counts == (want["party_kept"], want["leader_kept"],
                                  want["excluded_multi"], want["filtered_negative"]), group
            assert agg.party_sum == pytest.approx(sums[group]["party"], rel=1e-12, abs=1e-12)
            assert agg.leader_sum == pytest.approx(sums[group]["leader"], rel=1e-12, abs=1e-12)
        for group in REPORT_GROUPS:
            assert vector[group].proportion == pytest.approx(
                proportions[group], rel=1e-12, abs=1e-12
            )
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0


# ---------------------------------------------------------------------------
# criterion 6: the property suites, executed inline
# ---------------------------------------------------------------------------

_LEX = tw.Lexicon({"good": 2, "awful": -2, "love": 5, "hate": -4},
                  {"really": 1}, {"never"})
_VOCAB = ["good", "awful", "love", "hate", "really", "never", "meh", "the"]

_SURFACES = ["Labour", "Labour Party", "SNP", "Tories", "Ed Miliband",
             "David Cameron", "greens", "Green Party", "lib dems", "UKIP"]
_PROP_ENTRIES = [
    tw.TermEntry("Labour", tw.TermKind.PARTY, "LAB", 0.789),
    tw.TermEntry("Labour Party", tw.TermKind.PARTY, "LAB"),
    tw.TermEntry("SNP", tw.TermKind.PARTY, "SNP"),
    tw.TermEntry("Tories", tw.TermKind.PARTY, "CON"),
    tw.TermEntry("Ed Miliband", tw.TermKind.LEADER, "LAB"),
    tw.TermEntry("David Cameron", tw.TermKind.LEADER, "CON"),
    tw.TermEntry("greens", tw.TermKind.PARTY, "GRN", 0.194),
    tw.TermEntry("Green Party", tw.TermKind.PARTY, "GRN"),
    tw.TermEntry("lib dems", tw.TermKind.PARTY, "LD"),
    tw.TermEntry("UKIP", tw.TermKind.PARTY, "UKIP"),
]
_PROP_MATCHER = tw.Matcher(_PROP_ENTRIES)
_PROP_TUPLES = [(e.term, e.kind.value, e.group, e.weight) for e in _PROP_ENTRIES]


@st.composite
def _texts(draw):
    parts = draw(st.lists(st.sampled_from(_SURFACES + _VOCAB), max_size=6))
    if not parts:
        return ""
    seps = draw(st.lists(st.sampled_from([" ", ", ", "! ", " #", "-"]),
                         min_size=len(parts) - 1, max_size=len(parts) - 1))
    text = parts[0]
    for sep, part in zip(seps, parts[1:]):
        text += sep + part
    return text


@given(st.lists(st.sampled_from(_VOCAB), max_size=12))
def _check_sentiment_bounds(tokens):
    score = tw.score_text(tokens, _LEX)
    assert 1 <= score.positive <= 5 and -5 <= score.negative <= -1
    appended = tw.score_text(tokens + ["good"], _LEX)
    assert appended.positive >= score.positive
    appended = tw.score_text(tokens + ["awful"], _LEX)
    assert appended.negative <= score.negative


@given(_texts())
def _check_matcher_case_invariance(text):
    base = tw.classify(_PROP_MATCHER.match(text))
    assert tw.classify(_PROP_MATCHER.match(text.upper())) == base
    assert tw.classify(_PROP_MATCHER.match(text.lower())) == base


@given(_texts())
def _check_matcher_equals_substring_oracle(text):
    got = [(h.start, h.end, h.entry.term) for h in _PROP_MATCHER.scan(text)]
    want = [(s, e, t) for s, e, t, *_ in oracle.find_occurrences(text, _PROP_TUPLES)]
    assert got == want
    suppressed = {(h.start, h.end) for h in _PROP_MATCHER.match(text)}
    want_suppressed = {(s, e) for s, e, *_ in oracle.drop_contained(
        oracle.find_occurrences(text, _PROP_TUPLES))}
    assert suppressed <= want_suppressed  # match() also de-duplicates terms


_GROUPS = ("A", "B", "C")
_agg_floats = st.floats(min_value=-100, max_value=100, allow_nan=False)


def _aggs_from(values):
    aggs = GroupAggregates(_GROUPS)
    for group, (ps, ls, pk, lk) in zip(_GROUPS, values):
        agg = aggs[group]
        agg.party_sum, agg.leader_sum = ps, ls
        agg.party_kept, agg.leader_kept = pk, lk
    return aggs


_agg_strategy = st.lists(
    st.tuples(_agg_floats, _agg_floats, st.integers(0, 50), st.integers(0, 50)),
    min_size=3, max_size=3,
)


def _agg_close(a, b):
    for group in _GROUPS:
        assert a[group].party_kept == b[group].party_kept
        assert a[group].leader_kept == b[group].leader_kept
        assert a[group].party_sum == pytest.approx(b[group].party_sum, rel=1e-12, abs=1e-9)
        assert a[group].leader_sum == pytest.approx(b[group].leader_sum, rel=1e-12, abs=1e-9)


@given(_agg_strategy, _agg_strategy, _agg_strategy)
def _check_merge_laws(va, vb, vc):
    a, b, c = _aggs_from(va), _aggs_from(vb), _aggs_from(vc)
    assert merge(a, GroupAggregates(_GROUPS)) == a  # identity
    assert merge(a, b) == merge(b, a)  # commutativity (exact: float + is commutative)
    _agg_close(merge(merge(a, b), c), merge(a, merge(b, c)))  # associativity to 1e-12


@given(
    st.dictionaries(st.sampled_from(_GROUPS), st.floats(0.01, 1e6, allow_nan=False), min_size=1),
    st.floats(min_value=1e-3, max_value=1e3, allow_nan=False),
)
def _check_share_scale_invariance(totals, factor):
    base = shares_from_totals(totals)
    scaled = shares_from_totals({g: v * factor for g, v in totals.items()})
    for group in totals:
        assert scaled[group].proportion == pytest.approx(base[group].proportion,
                                                         rel=1e-9, abs=1e-12)


def _check_shard_invariance(matcher, lexicon, term_tuples):
    rng = random.Random(77)
    texts = make_texts(rng, 600, [t[0] for t in term_tuples], list(lexicon.strengths))
    universe = group_universe(matcher.entries)
    sequential = GroupAggregates(universe)
    process_texts(texts, matcher, lexicon, sequential)
    for num_shards in (1, 2, 7):
        per_shard = -(-len(texts) // num_shards)
        merged = GroupAggregates(universe)
        for i in range(num_shards):
            shard = GroupAggregates(universe)
            process_texts(texts[i * per_shard:(i + 1) * per_shard], matcher, lexicon, shard)
            merged = merge(merged, shard)
        for group in universe:
            seq, got = sequential[group], merged[group]
            assert (got.party_kept, got.leader_kept) == (seq.party_kept, seq.leader_kept)
            assert (got.excluded_multi, got.filtered_negative) == (
                seq.excluded_multi, seq.filtered_negative)
            assert got.party_sum == pytest.approx(seq.party_sum, rel=1e-12, abs=1e-12)
            assert got.leader_sum == pytest.approx(seq.leader_sum, rel=1e-12, abs=1e-12)


def _check_winner_scale_invariance(results):
    rng = random.Random(13)
    totals = {g: rng.uniform(0.5, 10.0) for g in REPORT_GROUPS}
    baseline_changes = national_changes(
        {g: e.proportion for g, e in shares_from_totals(totals).items()}, NATIONAL_2010
    )
    base_winners = [forecast_constituency(r, baseline_changes).winner for r in results]
    for factor in (1e-3, 7.0, 1e4):
        scaled = {g: v * factor for g, v in totals.items()}
        changes = national_changes(
            {g: e.proportion for g, e in shares_from_totals(scaled).items()}, NATIONAL_2010
        )
        winners = [forecast_constituency(r, changes).winner for r in results]
        assert winners == base_winners


def _check_identity_swing(results):
    identity = forecast_seats(results, {g: 0.0 for g in NATIONAL_2010})
    for result, forecast in zip(results, identity.constituencies):
        winner_2010 = max(result.shares, key=lambda g: (result.shares[g], g))
        assert forecast.winner == winner_2010
    assert dict(identity.seats) == {"CON": 305, "LAB": 258, "LD": 59,
                                    "SNP": 6, "PC": 3, "GRN": 1}


def test_criterion_6_property_suites(matcher, lexicon, term_tuples):
    with criterion(6, "property suites: bounds, invariance, merge laws, identity swing"):
        settings_profile = settings(deadline=None, max_examples=100)
        settings_profile(_check_sentiment_bounds)()
        settings_profile(_check_matcher_case_invariance)()
        settings_profile(_check_matcher_equals_substring_oracle)()
        settings_profile(_check_merge_laws)()
        settings_profile(_check_share_scale_invariance)()
        _check_shard_invariance(matcher, lexicon, term_tuples)
        results = load_constituencies(DATA_DIR / "gb2010_constituencies.csv")
        _check_winner_scale_invariance(results[:150])
        _check_identity_swing(results)


def test_criterion_7_throughput(matcher, lexicon, term_tuples):
    with criterion(7, "single-worker match+score+accumulate >= 50,000 tweets/s"):
        rng = random.Random(42)
        texts = make_texts(rng, 40000, [t[0] for t in term_tuples], list(lexicon.strengths))
        universe = group_universe(matcher.entries)
        aggs = GroupAggregates(universe)
        start = time.perf_counter()
        n = process_texts(texts, matcher, lexicon, aggs)
        elapsed = time.perf_counter() - start
        rate = n / elapsed
        minutes_for_14m = 13_899_073 / rate / 60.0
        print(f"\n  {n} tweets in {elapsed:.3f}s -> {rate:,.0f} tweets/s "
              f"(a 13.9M-message corpus would take ~{minutes_for_14m:.1f} min)")
        assert rate >= 50_000
