"""Shared fixtures: bundled tables, lexicon views, synthetic corpus builder."""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

import tweetswing as tw

DATA_DIR = Path(__file__).parent / "data"

FILLERS = [
    "the", "a", "vote", "for", "today", "tonight", "my", "we", "all", "big",
    "poll", "debate", "news", "on", "street", "and", "but", "now", "next",
    # adversarial: contain term strings as substrings, must never match
    "snapshot", "labourer", "greensleeves", "dupont", "uupx", "toriesque",
]

SEPARATORS = [" ", " ", " ", " ", ", ", "! ", " - ", " #", "... "]


@pytest.fixture(scope="session")
def term_entries():
    return tw.default_term_table()


@pytest.fixture(scope="session")
def matcher(term_entries):
    return tw.compile_terms(term_entries)


@pytest.fixture(scope="session")
def term_tuples(term_entries):
    return [(e.term, e.kind.value, e.group, e.weight) for e in term_entries]


@pytest.fixture(scope="session")
def lexicon():
    return tw.toy_lexicon()


@pytest.fixture(scope="session")
def lexicon_dicts(lexicon):
    return dict(lexicon.strengths), dict(lexicon.boosters), set(lexicon.negators)


def lexicon_vocab(lexicon) -> list[str]:
    """Every lexicon word: sentiment terms, boosters and negators."""
    return [*lexicon.strengths, *lexicon.boosters, *lexicon.negators]


def make_texts(rng: random.Random, count: int, term_surfaces, lexicon_words) -> list[str]:
    """Randomised short texts mixing fillers, search terms and lexicon words."""
    texts = []
    for _ in range(count):
        words = [rng.choice(FILLERS) for _ in range(rng.randint(4, 11))]
        for _ in range(rng.choice((0, 1, 1, 1, 2))):
            surface = rng.choice(term_surfaces)
            surface = rng.choice((surface, surface.lower(), surface.upper(), surface.title()))
            words.insert(rng.randrange(len(words) + 1), surface)
        for _ in range(rng.choice((0, 1, 1, 2))):
            words.insert(rng.randrange(len(words) + 1), rng.choice(lexicon_words))
        text = words[0]
        for word in words[1:]:
            text += rng.choice(SEPARATORS) + word
        texts.append(text)
    return texts


def write_corpus(path: Path, texts, start="2014-12-05T00:00:00Z") -> None:
    """One well-formed record per text, ids t0001..., timestamps one minute apart."""
    base = datetime.fromisoformat(start.replace("Z", "+00:00")).astimezone(timezone.utc)
    with path.open("w", encoding="utf-8") as handle:
        for i, text in enumerate(texts, start=1):
            ts = (base + timedelta(minutes=i)).strftime("%Y-%m-%dT%H:%M:%SZ")
            record = {"id": f"t{i:04d}", "created_at": ts, "text": text}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
