"""Dual-polarity lexicon scoring of short informal text.

Every text gets a positive strength in 1..5 and a negative strength in
-5..-1, driven by a word lexicon of emotive strengths plus booster words
(raise the magnitude of the sentiment word immediately after them) and
negators (neutralise any sentiment word within the following two tokens).
A text with no lexicon words scores the neutral baseline (1, -1).

The filterable quantity is ``combined = positive + negative`` in -4..4;
tweets below the threshold (default -1) are dropped before aggregation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ConfigError

_TOKEN_RE = re.compile(r"(?:[^\W_]|')+")  # runs of letters, digits, apostrophes

# tags in the combined lookup table
_SENTIMENT, _BOOSTER, _NEGATOR = 0, 1, 2

MIN_STRENGTH, MAX_STRENGTH = -5, 5
DEFAULT_THRESHOLD = -1


@dataclass(frozen=True, slots=True)
class SentimentScore:
    positive: int  # 1..5
    negative: int  # -5..-1

    @property
    def combined(self) -> int:
        return self.positive + self.negative


NEUTRAL = SentimentScore(positive=1, negative=-1)


class Lexicon:
    """Immutable scoring lexicon: sentiment strengths, boosters, negators."""

    def __init__(
        self,
        strengths: Mapping[str, int],
        boosters: Mapping[str, int] | None = None,
        negators: Sequence[str] | frozenset[str] = (),
    ):
        boosters = dict(boosters or {})
        negators = frozenset(negators)
        for term in (*strengths, *boosters, *negators):
            if _TOKEN_RE.fullmatch(term) is None or term != term.casefold():
                raise ConfigError(
                    f"lexicon term {term!r} must be a single case-folded token"
                )
        for term, value in strengths.items():
            if not isinstance(value, int) or not MIN_STRENGTH <= value <= MAX_STRENGTH or value == 0:
                raise ConfigError(f"sentiment strength for {term!r} must be in -5..-1 or 1..5")
        for term, value in boosters.items():
            if value not in (1, 2):
                raise ConfigError(f"booster value for {term!r} must be 1 or 2")
        overlap = (set(strengths) & set(boosters)) | (set(strengths) & negators) | (set(boosters) & negators)
        if overlap:
            raise ConfigError(f"terms in more than one lexicon section: {sorted(overlap)}")
        self.strengths = dict(strengths)
        self.boosters = boosters
        self.negators = negators
        # single lookup table for the hot scoring loop
        self._table: dict[str, tuple[int, int]] = {t: (_SENTIMENT, v) for t, v in strengths.items()}
        self._table.update({t: (_BOOSTER, v) for t, v in boosters.items()})
        self._table.update({t: (_NEGATOR, 0) for t in negators})
        # C-level prescreens. Texts with no sentiment word as a full token
        # score neutral without tokenizing; texts with sentiment words but no
        # booster/negator anywhere need no window bookkeeping either.
        self._prescreen = _token_alternation(strengths)
        self._modifier_re = _token_alternation(set(boosters) | negators)

    def __len__(self) -> int:
        return len(self._table)


def _token_alternation(words) -> re.Pattern | None:
    """Regex matching any of the words when it forms a whole token."""
    if not words:
        return None
    alternation = "|".join(re.escape(w) for w in sorted(words, key=lambda w: (-len(w), w)))
    return re.compile(r"(?<![^\W_])(?<!')(?:" + alternation + r")(?![^\W_])(?!')")


def tokenize(text: str) -> list[str]:
    """Case-folded maximal runs of letters, digits and apostrophes, in order."""
    return _TOKEN_RE.findall(text.casefold())


def score_text(tokens: Sequence[str], lexicon: Lexicon, *, negator_window: int = 2) -> SentimentScore:
    """Score a token sequence.

    Rules, applied per sentiment token: a negator within ``negator_window``
    preceding tokens neutralises it; otherwise a booster immediately before
    it adds the booster value to its magnitude, clamped to +/-5. The text
    scores the strongest surviving value per polarity, floored at the
    (1, -1) neutral baseline.
    """
    table = lexicon._table
    positive = 1
    negative = -1
    for i, token in enumerate(tokens):
        hit = table.get(token)
        if hit is None or hit[0] != _SENTIMENT:
            continue
        lo = i - negator_window
        if lo < 0:
            lo = 0
        negated = False
        for j in range(lo, i):
            prev = table.get(tokens[j])
            if prev is not None and prev[0] == _NEGATOR:
                negated = True
                break
        if negated:
            continue
        strength = hit[1]
        if i > 0:
            prev = table.get(tokens[i - 1])
            if prev is not None and prev[0] == _BOOSTER:
                if strength > 0:
                    strength = min(MAX_STRENGTH, strength + prev[1])
                else:
                    strength = max(MIN_STRENGTH, strength - prev[1])
        if strength > 0:
            if strength > positive:
                positive = strength
        elif strength < negative:
            negative = strength
    return SentimentScore(positive=positive, negative=negative)


def score_string(text: str, lexicon: Lexicon, *, negator_window: int = 2) -> SentimentScore:
    """tokenize + score_text, with fast exits for the two dominant shapes.

    A text with no sentiment word as a full token always scores (1, -1).
    A text with sentiment words but no booster or negator anywhere needs no
    token positions at all: the score is just the strongest occurrence per
    polarity, read straight off the prescreen regex. Only texts containing
    a modifier word go through the tokenizer.
    """
    folded = text.casefold()
    prescreen = lexicon._prescreen
    if prescreen is None or (first := prescreen.search(folded)) is None:
        return NEUTRAL
    modifiers = lexicon._modifier_re
    if modifiers is None or modifiers.search(folded) is None:
        strengths = lexicon.strengths
        positive, negative = 1, -1
        m = first
        while m is not None:
            value = strengths[m.group()]
            if value > 0:
                if value > positive:
                    positive = value
            elif value < negative:
                negative = value
            m = prescreen.search(folded, m.end())
        return SentimentScore(positive, negative)
    return score_text(_TOKEN_RE.findall(folded), lexicon, negator_window=negator_window)


def passes_filter(score: SentimentScore, threshold: int = DEFAULT_THRESHOLD) -> bool:
    """True iff the combined score is at or above the removal threshold."""
    return score.combined >= threshold


def load_lexicon(path: str | Path) -> Lexicon:
    """Read a lexicon file: tab-separated sections [sentiment], [boosters], [negators].

    Sentiment and booster rows are ``term<TAB>value``; negator rows are bare
    terms. ``#`` comment lines and blank lines are ignored. Terms are
    case-folded on load.
    """
    strengths: dict[str, int] = {}
    boosters: dict[str, int] = {}
    negators: list[str] = []
    section = None
    path = Path(path)
    for line_num, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            if section not in ("sentiment", "boosters", "negators"):
                raise ConfigError(f"{path}:{line_num}: unknown section {section!r}")
            continue
        if section is None:
            raise ConfigError(f"{path}:{line_num}: row before any section header")
        if section == "negators":
            negators.append(line.split("\t")[0].casefold())
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ConfigError(f"{path}:{line_num}: expected term<TAB>value")
        term = parts[0].casefold()
        try:
            value = int(parts[1])
        except ValueError:
            raise ConfigError(f"{path}:{line_num}: bad value {parts[1]!r}") from None
        if section == "sentiment":
            strengths[term] = value
        else:
            boosters[term] = value
    return Lexicon(strengths, boosters, negators)


def toy_lexicon_path() -> Path:
    return Path(str(resources.files("tweetswing.data") / "toy_lexicon.tsv"))


def toy_lexicon() -> Lexicon:
    """The small lexicon shipped for tests and demos; real runs need a full one."""
    return load_lexicon(toy_lexicon_path())
