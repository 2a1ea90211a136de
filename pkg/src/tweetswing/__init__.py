"""tweetswing: sentiment-volume election forecasting over a message corpus.

Stages: ingest a replay corpus, match party/leader search terms, score
sentiment against a lexicon, sum weighted kept scores per party group,
normalise into a vote-share vector, and apply uniform national swing to a
2010 constituency baseline to tally seats.
"""

from .aggregate import (
    GroupAggregate,
    GroupAggregates,
    ShareEntry,
    ShareVector,
    merge,
    shares,
    shares_from_totals,
)
from .corpus import DateWindow, IngestStats, Tweet, filter_window, load_corpus
from .errors import ConfigError, NoPositiveSignalError
from .matching import (
    Assigned,
    Excluded,
    Matcher,
    MatchOutcome,
    NoMatch,
    NO_MATCH,
    TermEntry,
    TermKind,
    TermMatch,
    classify,
    compile_terms,
    default_term_table,
    match_terms,
)
from .pipeline import evaluate_text, process_texts
from .sentiment import (
    Lexicon,
    SentimentScore,
    load_lexicon,
    passes_filter,
    score_text,
    tokenize,
    toy_lexicon,
)
from .swing import (
    ConstituencyForecast,
    ConstituencyResult,
    SeatForecast,
    constituency_winner,
    forecast_constituency,
    forecast_seats,
    load_constituencies,
    load_national_baseline,
    national_changes,
    project_constituency,
    tally,
)

__version__ = "0.1.0"
