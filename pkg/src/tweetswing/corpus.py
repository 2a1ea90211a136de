"""Corpus ingestion: replay files of collected messages, one JSON object per line.

Each record is a flat object with exactly the keys ``id`` (non-empty string),
``created_at`` (ISO-8601 UTC, e.g. ``2014-12-01T09:30:00Z``) and ``text``
(string). Lines starting with ``#`` are comments; blank lines are ignored.
Malformed records are skipped and counted, never fatal — only an unreadable
file aborts a run. Records repeating an already-seen id are dropped (first
occurrence wins) so re-runs are deterministic.

Parsing is pure per line, which keeps ingestion shardable: splitting a file
into line blocks, parsing each block independently and de-duplicating the
concatenated stream in shard order gives the same tweets and the same counts
as a single pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

_RECORD_KEYS = {"id", "created_at", "text"}


@dataclass(frozen=True, slots=True)
class Tweet:
    """One collected message."""

    id: str
    created_at: datetime  # timezone-aware, UTC
    text: str


@dataclass(frozen=True, slots=True)
class DateWindow:
    """Half-open collection window: ``start`` inclusive, ``end`` exclusive."""

    start: datetime
    end: datetime

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"window start {self.start} must precede end {self.end}")

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts < self.end


@dataclass
class IngestStats:
    """Per-run ingestion counters; read = accepted + duplicate_id + malformed."""

    read: int = 0
    accepted: int = 0
    duplicate_id: int = 0
    malformed: int = 0

    def merge(self, other: "IngestStats") -> "IngestStats":
        return IngestStats(
            read=self.read + other.read,
            accepted=self.accepted + other.accepted,
            duplicate_id=self.duplicate_id + other.duplicate_id,
            malformed=self.malformed + other.malformed,
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "read": self.read,
            "accepted": self.accepted,
            "duplicate_id": self.duplicate_id,
            "malformed": self.malformed,
        }


def parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 timestamp to an aware UTC datetime.

    Accepts a trailing ``Z`` (Python 3.10's fromisoformat does not) and any
    explicit offset; naive timestamps are taken as UTC.
    """
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_record(line: str) -> Tweet:
    """Parse one corpus line; raises ValueError on any malformation."""
    obj = json.loads(line)
    if not isinstance(obj, dict) or set(obj) != _RECORD_KEYS:
        raise ValueError("record must be a flat object with keys id, created_at, text")
    tweet_id, created_at, text = obj["id"], obj["created_at"], obj["text"]
    if not isinstance(tweet_id, str) or not tweet_id:
        raise ValueError("id must be a non-empty string")
    if not isinstance(created_at, str):
        raise ValueError("created_at must be a string")
    if not isinstance(text, str):
        raise ValueError("text must be a string")
    return Tweet(id=tweet_id, created_at=parse_timestamp(created_at), text=text)


def iter_records(lines: Iterable[str], stats: IngestStats) -> Iterator[Tweet]:
    """Parse raw lines into tweets, counting read/malformed.

    Comment and blank lines are not records and are not counted. Duplicate
    detection is a separate stage (see :func:`dedupe`) so that per-shard
    parsing stays pure.
    """
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        stats.read += 1
        try:
            yield parse_record(stripped)
        except ValueError:
            stats.malformed += 1


def dedupe(tweets: Iterable[Tweet], stats: IngestStats) -> Iterator[Tweet]:
    """Drop tweets whose id was already seen; first occurrence wins."""
    seen: set[str] = set()
    for tweet in tweets:
        if tweet.id in seen:
            stats.duplicate_id += 1
            continue
        seen.add(tweet.id)
        stats.accepted += 1
        yield tweet


def load_corpus(path: str | Path) -> tuple[Iterator[Tweet], IngestStats]:
    """Stream tweets from a corpus file in file order.

    Returns the tweet iterator plus a live stats object; the counters are
    final once the iterator is exhausted. An unreadable file raises OSError
    immediately.
    """
    path = Path(path)
    handle = path.open(encoding="utf-8")  # raises before any tweet is yielded
    stats = IngestStats()

    def gen() -> Iterator[Tweet]:
        with handle:
            yield from dedupe(iter_records(handle, stats), stats)

    return gen(), stats


def filter_window(tweets: Iterable[Tweet], window: DateWindow) -> Iterator[Tweet]:
    """Keep exactly the tweets with start <= created_at < end, order preserved."""
    return (t for t in tweets if window.contains(t.created_at))


def shard_lines(path: str | Path, num_shards: int) -> list[list[str]]:
    """Split a corpus file into contiguous line blocks for parallel ingestion."""
    if num_shards < 1:
        raise ValueError("num_shards must be >= 1")
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    per_shard = -(-len(lines) // num_shards) if lines else 0
    shards = [lines[i * per_shard : (i + 1) * per_shard] for i in range(num_shards)]
    return shards
