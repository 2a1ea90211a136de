"""Staged command line: score -> aggregate -> forecast, plus single-shot run.

Every stage reads and writes plain files so each step of the method is
reproducible in isolation: ``score`` turns a corpus into a scored-tweets
CSV, ``aggregate`` turns scored tweets into the vote-share table,
``forecast`` turns a share table plus 2010 baselines into per-seat
projections and the national seat summary. ``run`` chains the three and is
byte-identical to running them separately.

Each stage writes a ``manifest_<stage>.json`` recording its inputs (with
content digests), configuration and counts, so a run can be audited and
reproduced. Manifests carry no timestamps; re-running on the same inputs
produces identical bytes.

All free parameters of the method (collection window, filter threshold,
exclusion rule, term weights via the table) are flags or input files, so
sensitivity runs need no code change.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import aggregate as agg
from . import corpus, matching, pipeline, sentiment, swing
from .errors import ConfigError, NoPositiveSignalError

DEFAULT_WINDOW_START = "2014-11-28T00:00:00Z"
DEFAULT_WINDOW_END = "2015-03-09T00:00:00Z"
DEFAULT_THRESHOLD = -1
DEFAULT_REPORT_GROUPS = ("CON", "DUP", "GRN", "LAB", "LD", "PC", "SF", "SNP", "UKIP")

SCORED_FILE = "scored.csv"
SHARES_FILE = "shares.csv"
CONSTITUENCY_FILE = "constituency_forecast.csv"
SUMMARY_FILE = "national_summary.csv"
REPORT_FILE = "forecast_report.txt"


@dataclass
class RunConfig:
    """Validated free parameters of a pipeline invocation."""

    out_dir: Path
    terms: Path
    lexicon: Path
    corpus_path: Path | None = None
    constituency_baseline: Path | None = None
    national_baseline: Path | None = None
    window_start: str = DEFAULT_WINDOW_START
    window_end: str = DEFAULT_WINDOW_END
    threshold: int = DEFAULT_THRESHOLD
    exclusion: str = "literal"
    report_groups: tuple[str, ...] | None = None
    scored_input: Path | None = None
    shares_input: Path | None = None
    totals_override: Path | None = None

    def window(self) -> corpus.DateWindow:
        return corpus.DateWindow(
            corpus.parse_timestamp(self.window_start),
            corpus.parse_timestamp(self.window_end),
        )


def _validate(cfg: RunConfig, *, needs: tuple[str, ...]) -> list[str]:
    """Collect every configuration problem instead of stopping at the first."""
    problems = []
    checks = {
        "corpus": cfg.corpus_path,
        "terms": cfg.terms,
        "lexicon": cfg.lexicon,
        "baseline": cfg.constituency_baseline,
        "national": cfg.national_baseline,
        "scored": cfg.scored_input,
        "shares": cfg.shares_input,
    }
    for name in needs:
        path = checks[name]
        if path is None:
            problems.append(f"missing required input: --{name}")
        elif not Path(path).is_file():
            problems.append(f"{name} file not found: {path}")
    if cfg.totals_override is not None and not Path(cfg.totals_override).is_file():
        problems.append(f"totals-override file not found: {cfg.totals_override}")
    if not -4 <= cfg.threshold <= 4:
        problems.append(f"threshold {cfg.threshold} outside -4..4")
    if cfg.exclusion not in matching.EXCLUSION_MODES:
        problems.append(f"exclusion must be one of {'|'.join(matching.EXCLUSION_MODES)}")
    if "corpus" in needs:
        try:
            cfg.window()
        except ValueError as exc:
            problems.append(str(exc))
    return problems


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(
    out_dir: Path,
    stage: str,
    config: dict,
    inputs: dict[str, Path],
    counts: dict,
    outputs: dict[str, Path],
) -> None:
    manifest = {
        "stage": stage,
        "config": config,
        "inputs": {name: {"path": str(p), "sha256": _sha256(Path(p))} for name, p in inputs.items()},
        "counts": counts,
        "outputs": {name: {"path": str(p), "sha256": _sha256(Path(p))} for name, p in outputs.items()},
    }
    path = out_dir / f"manifest_{stage}.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _resolve_report_groups(cfg: RunConfig, universe: set[str]) -> list[str]:
    """Explicit flag wins; else the standard report set when the table covers it."""
    if cfg.report_groups:
        return sorted(cfg.report_groups)
    if set(DEFAULT_REPORT_GROUPS) <= universe:
        return sorted(DEFAULT_REPORT_GROUPS)
    return sorted(universe)


def run_score(cfg: RunConfig) -> int:
    problems = _validate(cfg, needs=("corpus", "terms", "lexicon"))
    if problems:
        for problem in problems:
            _diag(f"config error: {problem}")
        return 2

    matcher = matching.Matcher(matching.load_term_table(cfg.terms))
    lexicon = sentiment.load_lexicon(cfg.lexicon)
    window = cfg.window()
    tweets, stats = corpus.load_corpus(cfg.corpus_path)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    scored_path = cfg.out_dir / SCORED_FILE
    outcome_counts = {"none": 0, "excluded": 0, "assigned": 0}
    window_kept = 0
    kept_count = 0
    with scored_path.open("w", encoding="utf-8", newline="") as handle:
        writer = pipeline.open_scored_writer(handle)
        for tweet in corpus.filter_window(tweets, window):
            window_kept += 1
            outcome, score, kept = pipeline.evaluate_text(
                tweet.text,
                matcher,
                lexicon,
                threshold=cfg.threshold,
                exclusion=cfg.exclusion,
            )
            if isinstance(outcome, matching.Assigned):
                outcome_counts["assigned"] += 1
            elif isinstance(outcome, matching.Excluded):
                outcome_counts["excluded"] += 1
            else:
                outcome_counts["none"] += 1
            kept_count += kept
            pipeline.write_scored_row(writer, pipeline.ScoredRecord(tweet.id, outcome, score, kept))

    counts = {
        "ingest": stats.as_dict(),
        "window_kept": window_kept,
        "window_dropped": stats.accepted - window_kept,
        "outcomes": outcome_counts,
        "kept": kept_count,
    }
    _write_manifest(
        cfg.out_dir,
        "score",
        {
            "corpus": str(cfg.corpus_path),
            "terms": str(cfg.terms),
            "lexicon": str(cfg.lexicon),
            "from": cfg.window_start,
            "to": cfg.window_end,
            "threshold": cfg.threshold,
            "exclusion": cfg.exclusion,
        },
        {"corpus": cfg.corpus_path, "terms": cfg.terms, "lexicon": cfg.lexicon},
        counts,
        {"scored": scored_path},
    )
    _diag(
        f"score: read={stats.read} accepted={stats.accepted} malformed={stats.malformed} "
        f"duplicate_id={stats.duplicate_id} in_window={window_kept} "
        f"assigned={outcome_counts['assigned']} excluded_multi={outcome_counts['excluded']} "
        f"no_match={outcome_counts['none']} kept={kept_count}"
    )
    return 0


def _load_totals_override(path: Path) -> dict[str, float]:
    totals: dict[str, float] = {}
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != ["group", "total_sum"]:
            raise ConfigError(f"{path}: expected header group,total_sum")
        for row_num, row in enumerate(reader, start=2):
            try:
                totals[row["group"]] = float(row["total_sum"])
            except (TypeError, ValueError):
                raise ConfigError(f"{path}:{row_num}: bad total {row['total_sum']!r}") from None
    if not totals:
        raise ConfigError(f"{path}: no totals rows")
    return totals


def run_aggregate(cfg: RunConfig) -> int:
    needs = ("terms",) if cfg.totals_override else ("terms", "scored")
    problems = _validate(cfg, needs=needs)
    if problems:
        for problem in problems:
            _diag(f"config error: {problem}")
        return 2

    entries = matching.load_term_table(cfg.terms)
    universe = matching.group_universe(entries)
    report = _resolve_report_groups(cfg, universe)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    shares_path = cfg.out_dir / SHARES_FILE

    if cfg.totals_override:
        totals = _load_totals_override(cfg.totals_override)
        if cfg.report_groups:
            missing = [g for g in report if g not in totals]
            if missing:
                raise ConfigError(f"report groups missing from totals override: {missing}")
            totals = {g: totals[g] for g in report}
        vector = agg.shares_from_totals(totals)
        agg.write_shares_csv(shares_path, vector)
        counts = {"mode": "totals_override", "groups": len(vector)}
        inputs = {"terms": cfg.terms, "totals_override": cfg.totals_override}
        config = {
            "terms": str(cfg.terms),
            "totals_override": str(cfg.totals_override),
            "report_groups": sorted(vector),
        }
    else:
        aggregates = agg.GroupAggregates(universe)
        rows = 0
        excluded_rows = 0
        for record in pipeline.read_scored_csv(cfg.scored_input):
            rows += 1
            excluded_rows += isinstance(record.outcome, matching.Excluded)
            aggregates.accumulate_kept(record.outcome, record.score, record.kept)
        vector = agg.shares(aggregates, report)
        agg.write_shares_csv(shares_path, vector, aggregates)
        totals = aggregates.count_totals()
        counts = {
            "rows": rows,
            "party_kept": totals["party_kept"],
            "leader_kept": totals["leader_kept"],
            "filtered_negative": totals["filtered_negative"],
            # scored files do not carry the excluded groups, so this is the
            # stream-level count rather than a per-group attribution
            "excluded_multi": excluded_rows,
        }
        inputs = {"terms": cfg.terms, "scored": cfg.scored_input}
        config = {
            "terms": str(cfg.terms),
            "scored": str(cfg.scored_input),
            "report_groups": report,
        }
    _write_manifest(cfg.out_dir, "aggregate", config, inputs, counts, {"shares": shares_path})
    _diag(f"aggregate: groups={len(vector)} -> {shares_path}")
    return 0


def run_forecast(cfg: RunConfig) -> int:
    problems = _validate(cfg, needs=("shares", "baseline", "national"))
    if problems:
        for problem in problems:
            _diag(f"config error: {problem}")
        return 2

    vector = agg.read_shares_csv(cfg.shares_input)
    proportions = {group: entry.proportion for group, entry in vector.items()}
    national = swing.load_national_baseline(cfg.national_baseline)
    known_groups = set(proportions) | set(national)
    constituencies = swing.load_constituencies(cfg.constituency_baseline, known_groups)
    changes = swing.national_changes(proportions, national)
    forecast = swing.forecast_seats(constituencies, changes)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    constituency_path = cfg.out_dir / CONSTITUENCY_FILE
    summary_path = cfg.out_dir / SUMMARY_FILE
    report_path = cfg.out_dir / REPORT_FILE
    swing.write_constituency_csv(constituency_path, forecast)
    swing.write_summary_csv(summary_path, national, proportions, forecast)
    report_path.write_text(_format_report(forecast), encoding="utf-8")

    counts = {
        "constituencies": forecast.total_seats,
        "majority_threshold": forecast.majority_threshold,
        "seats": dict(sorted(forecast.seats.items())),
        "verdict": "hung" if forecast.is_hung else f"majority:{forecast.majority_group}",
    }
    _write_manifest(
        cfg.out_dir,
        "forecast",
        {
            "shares": str(cfg.shares_input),
            "baseline": str(cfg.constituency_baseline),
            "national": str(cfg.national_baseline),
        },
        {
            "shares": cfg.shares_input,
            "baseline": cfg.constituency_baseline,
            "national": cfg.national_baseline,
        },
        counts,
        {"constituency": constituency_path, "summary": summary_path, "report": report_path},
    )
    _diag(f"forecast: {counts['verdict']} over {forecast.total_seats} seats")
    return 0


def _format_report(forecast: swing.SeatForecast) -> str:
    lines = [
        f"Seat forecast over {forecast.total_seats} constituencies "
        f"(majority threshold {forecast.majority_threshold})",
    ]
    ranked = sorted(forecast.seats.items(), key=lambda item: (-item[1], item[0]))
    for group, seats in ranked:
        lines.append(f"  {group}: {seats}")
    top_group, top_seats = ranked[0]
    if forecast.is_hung:
        lines.append(f"Verdict: hung parliament (largest party {top_group} with {top_seats} seats)")
    else:
        lines.append(f"Verdict: majority for {forecast.majority_group} with {top_seats} seats")
    return "\n".join(lines) + "\n"


def run_all(cfg: RunConfig) -> int:
    code = run_score(cfg)
    if code:
        return code
    cfg.scored_input = cfg.out_dir / SCORED_FILE
    code = run_aggregate(cfg)
    if code:
        return code
    cfg.shares_input = cfg.out_dir / SHARES_FILE
    return run_forecast(cfg)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument(
        "--terms",
        default=str(matching.default_term_table_path()),
        help="search-term table CSV (term,kind,group,weight)",
    )


def _add_scoring_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True, help="corpus file, one JSON record per line")
    parser.add_argument(
        "--lexicon",
        default=str(sentiment.toy_lexicon_path()),
        help="sentiment lexicon file (the bundled default is a small test lexicon)",
    )
    parser.add_argument("--from", dest="window_start", default=DEFAULT_WINDOW_START,
                        help="window start, inclusive (ISO-8601)")
    parser.add_argument("--to", dest="window_end", default=DEFAULT_WINDOW_END,
                        help="window end, exclusive (ISO-8601)")
    parser.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD,
                        help="drop tweets with combined score below this (-4..4)")
    parser.add_argument("--exclusion", choices=matching.EXCLUSION_MODES, default="literal",
                        help="multi-term exclusion rule")


def _add_forecast_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--baseline", required=True,
                        help="constituency baseline CSV (constituency_id,name,group,share_pct)")
    parser.add_argument("--national", required=True,
                        help="national baseline CSV (group,share_pct)")


def _report_groups_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report-groups", default=None,
                        help="comma-separated groups to report (default: standard set)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetswing",
        description="Sentiment-volume election forecasting over a message corpus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="match, classify and score each tweet")
    _add_common(p_score)
    _add_scoring_flags(p_score)

    p_agg = sub.add_parser("aggregate", help="sum scored tweets into the vote-share table")
    _add_common(p_agg)
    p_agg.add_argument("scored", nargs="?", default=None, help="scored CSV from the score stage")
    p_agg.add_argument("--totals-override", default=None,
                       help="CSV group,total_sum: inject totals instead of reading scored tweets")
    _report_groups_flag(p_agg)

    p_fc = sub.add_parser("forecast", help="apply national swing and tally seats")
    _add_common(p_fc)
    p_fc.add_argument("shares", help="shares CSV from the aggregate stage")
    _add_forecast_flags(p_fc)

    p_run = sub.add_parser("run", help="score + aggregate + forecast in one shot")
    _add_common(p_run)
    _add_scoring_flags(p_run)
    _add_forecast_flags(p_run)
    p_run.add_argument("--totals-override", default=None,
                       help="CSV group,total_sum: inject totals instead of aggregating")
    _report_groups_flag(p_run)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    report = None
    if getattr(args, "report_groups", None):
        report = tuple(g.strip() for g in args.report_groups.split(",") if g.strip())
    return RunConfig(
        out_dir=Path(args.out),
        terms=Path(args.terms),
        lexicon=Path(args.lexicon) if getattr(args, "lexicon", None) else Path(str(sentiment.toy_lexicon_path())),
        corpus_path=Path(args.corpus) if getattr(args, "corpus", None) else None,
        constituency_baseline=Path(args.baseline) if getattr(args, "baseline", None) else None,
        national_baseline=Path(args.national) if getattr(args, "national", None) else None,
        window_start=getattr(args, "window_start", DEFAULT_WINDOW_START),
        window_end=getattr(args, "window_end", DEFAULT_WINDOW_END),
        threshold=getattr(args, "threshold", DEFAULT_THRESHOLD),
        exclusion=getattr(args, "exclusion", "literal"),
        report_groups=report,
        scored_input=Path(args.scored) if getattr(args, "scored", None) else None,
        shares_input=Path(args.shares) if getattr(args, "shares", None) else None,
        totals_override=Path(args.totals_override) if getattr(args, "totals_override", None) else None,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    handlers = {
        "score": run_score,
        "aggregate": run_aggregate,
        "forecast": run_forecast,
        "run": run_all,
    }
    try:
        return handlers[args.command](cfg)
    except (ConfigError, NoPositiveSignalError, OSError) as exc:
        _diag(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
