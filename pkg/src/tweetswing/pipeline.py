"""Per-tweet evaluation and the scored-file wire format.

One evaluation = match the search terms, classify the tweet, score its
sentiment, and decide whether it survives the filter. The scored file
records one CSV row per evaluated tweet so the aggregation stage can run
from the file alone: ``id,outcome,positive,negative,combined,kept,weight``
where outcome is ``none``, ``excluded``, or ``GROUP:kind``. The weight
column carries the matched term's precision weight for assigned rows;
without it the aggregate stage could not re-apply term-level weighting.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .aggregate import GroupAggregates
from .errors import ConfigError
from .matching import NO_MATCH, Assigned, Excluded, Matcher, MatchOutcome, TermKind, classify
from .sentiment import DEFAULT_THRESHOLD, Lexicon, SentimentScore, score_string

SCORED_HEADER = ["id", "outcome", "positive", "negative", "combined", "kept", "weight"]


@dataclass(frozen=True, slots=True)
class ScoredRecord:
    tweet_id: str
    outcome: MatchOutcome
    score: SentimentScore
    kept: bool


def evaluate_text(
    text: str,
    matcher: Matcher,
    lexicon: Lexicon,
    *,
    threshold: int = DEFAULT_THRESHOLD,
    exclusion: str = "literal",
) -> tuple[MatchOutcome, SentimentScore, bool]:
    """Match, classify and score one text; kept means it passes the filter."""
    outcome = classify(matcher.match(text), exclusion)
    score = score_string(text, lexicon)
    return outcome, score, score.combined >= threshold


def process_texts(
    texts: Iterable[str],
    matcher: Matcher,
    lexicon: Lexicon,
    aggregates: GroupAggregates,
    *,
    threshold: int = DEFAULT_THRESHOLD,
    exclusion: str = "literal",
) -> int:
    """Match + score + accumulate a stream of texts; the single-worker hot path.

    Returns the number of texts processed. Matching and scoring are pure, so
    any sharding of the stream into several aggregate sets merged afterwards
    gives the same sums.
    """
    n = 0
    accumulate = aggregates.accumulate_kept
    match = matcher.match
    for text in texts:
        outcome = classify(match(text), exclusion)
        score = score_string(text, lexicon)
        accumulate(outcome, score, score.combined >= threshold)
        n += 1
    return n


def encode_outcome(outcome: MatchOutcome) -> tuple[str, str]:
    """Outcome column plus weight column for one scored row."""
    if isinstance(outcome, Assigned):
        return f"{outcome.group}:{outcome.kind.value}", f"{outcome.weight:g}"
    if isinstance(outcome, Excluded):
        return "excluded", ""
    return "none", ""


def decode_outcome(outcome_field: str, weight_field: str) -> MatchOutcome:
    if outcome_field == "none":
        return NO_MATCH
    if outcome_field == "excluded":
        # The scored file does not carry the excluded groups; per-group
        # attribution of exclusions is only available in-process.
        return Excluded(frozenset())
    group, sep, kind_raw = outcome_field.partition(":")
    if not sep or not group:
        raise ValueError(f"bad outcome field {outcome_field!r}")
    try:
        kind = TermKind(kind_raw)
    except ValueError:
        raise ValueError(f"bad outcome kind {kind_raw!r}") from None
    weight = float(weight_field) if weight_field else 1.0
    return Assigned(group=group, kind=kind, weight=weight)


def write_scored_row(writer, record: ScoredRecord) -> None:
    outcome_field, weight_field = encode_outcome(record.outcome)
    writer.writerow(
        [
            record.tweet_id,
            outcome_field,
            str(record.score.positive),
            str(record.score.negative),
            str(record.score.combined),
            "true" if record.kept else "false",
            weight_field,
        ]
    )


def open_scored_writer(handle: TextIO):
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(SCORED_HEADER)
    return writer


def read_scored_csv(path: str | Path) -> Iterator[ScoredRecord]:
    """Stream scored rows back; raises ConfigError on a malformed file."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != SCORED_HEADER:
            raise ConfigError(f"{path}: expected header {','.join(SCORED_HEADER)}")
        for row_num, row in enumerate(reader, start=2):
            if len(row) != len(SCORED_HEADER):
                raise ConfigError(f"{path}:{row_num}: expected {len(SCORED_HEADER)} fields")
            tweet_id, outcome_field, pos, neg, combined, kept, weight_field = row
            try:
                outcome = decode_outcome(outcome_field, weight_field)
                score = SentimentScore(positive=int(pos), negative=int(neg))
                if int(combined) != score.combined:
                    raise ValueError("combined inconsistent with positive+negative")
                if kept not in ("true", "false"):
                    raise ValueError(f"bad kept flag {kept!r}")
            except ValueError as exc:
                raise ConfigError(f"{path}:{row_num}: {exc}") from None
            yield ScoredRecord(tweet_id, outcome, score, kept == "true")
