"""Uniform national swing: national change, per-seat projection, seat tally.

Each party's national change is its estimated vote share (percent) minus its
2010 national share; the change is added to the party's 2010 share in every
constituency it contested. Projections clamp at zero and are deliberately
not renormalised to 100. Parties with no national 2010 figure (the Northern
Ireland parties) carry their constituency baseline forward unchanged, and a
party absent from a constituency in 2010 is never projected into it.

The winner of a seat is the party with the highest projected share; ties
break on the higher 2010 constituency share, then on group id. Seat counts
over all constituencies give the national tally and the majority verdict
(threshold: floor(total / 2) + 1).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError

ROUNDING_SLACK = 0.5  # allowed excess over 100 for a constituency's share sum


@dataclass(frozen=True, slots=True)
class ConstituencyResult:
    """2010 baseline for one seat: vote-share percent per party that stood."""

    constituency_id: str
    name: str
    shares: Mapping[str, float]

    def __post_init__(self) -> None:
        if not self.shares:
            raise ValueError(f"{self.constituency_id}: at least one party required")
        for group, share in self.shares.items():
            if not 0.0 <= share <= 100.0:
                raise ValueError(f"{self.constituency_id}: share {share} for {group} outside 0..100")
        if sum(self.shares.values()) > 100.0 + ROUNDING_SLACK:
            raise ValueError(f"{self.constituency_id}: shares sum past 100")


@dataclass(frozen=True, slots=True)
class ConstituencyForecast:
    constituency_id: str
    name: str
    projected: Mapping[str, float]
    winner: str
    margin: float


@dataclass(frozen=True, slots=True)
class SeatForecast:
    constituencies: tuple[ConstituencyForecast, ...]
    seats: Mapping[str, int]
    majority_group: str | None  # None means hung parliament

    @property
    def total_seats(self) -> int:
        return len(self.constituencies)

    @property
    def majority_threshold(self) -> int:
        return self.total_seats // 2 + 1

    @property
    def is_hung(self) -> bool:
        return self.majority_group is None


def national_changes(
    proportions: Mapping[str, float], baseline: Mapping[str, float]
) -> dict[str, float]:
    """Change in percentage points per group: 100 x proportion - 2010 share.

    Groups without a national 2010 figure get change 0 so their constituency
    baselines carry forward. Groups in the baseline but missing from the
    share vector are treated as having zero estimated share.
    """
    changes: dict[str, float] = {}
    for group in set(proportions) | set(baseline):
        if group in baseline:
            changes[group] = 100.0 * proportions.get(group, 0.0) - baseline[group]
        else:
            changes[group] = 0.0
    return changes


def project_constituency(
    result: ConstituencyResult, changes: Mapping[str, float]
) -> dict[str, float]:
    """Apply national changes to the parties that stood; clamp at zero."""
    return {
        group: max(0.0, share + changes.get(group, 0.0))
        for group, share in result.shares.items()
    }


def constituency_winner(
    projected: Mapping[str, float], baseline: Mapping[str, float] | None = None
) -> tuple[str, float]:
    """Argmax over projected shares.

    Ties break on the higher 2010 share, then lexicographic group id. The
    margin is the gap to the runner-up's projected share, 0 for a sole party.
    """
    if not projected:
        raise ValueError("no projected parties")
    base = baseline or {}
    winner = min(projected, key=lambda g: (-projected[g], -base.get(g, 0.0), g))
    others = [share for group, share in projected.items() if group != winner]
    margin = projected[winner] - max(others) if others else 0.0
    return winner, margin


def forecast_constituency(
    result: ConstituencyResult, changes: Mapping[str, float]
) -> ConstituencyForecast:
    projected = project_constituency(result, changes)
    winner, margin = constituency_winner(projected, result.shares)
    return ConstituencyForecast(
        constituency_id=result.constituency_id,
        name=result.name,
        projected=projected,
        winner=winner,
        margin=margin,
    )


def tally(forecasts: Sequence[ConstituencyForecast]) -> SeatForecast:
    """Seat counts per group plus the majority/hung verdict."""
    if not forecasts:
        raise ValueError("at least one constituency required")
    seats: dict[str, int] = {}
    for forecast in forecasts:
        seats[forecast.winner] = seats.get(forecast.winner, 0) + 1
    threshold = len(forecasts) // 2 + 1
    majority = max(seats, key=lambda g: (seats[g], g))
    return SeatForecast(
        constituencies=tuple(forecasts),
        seats=seats,
        majority_group=majority if seats[majority] >= threshold else None,
    )


def forecast_seats(
    results: Iterable[ConstituencyResult], changes: Mapping[str, float]
) -> SeatForecast:
    return tally([forecast_constituency(r, changes) for r in results])


def load_constituencies(
    path: str | Path, known_groups: Iterable[str] | None = None
) -> list[ConstituencyResult]:
    """Read the long-format baseline CSV: constituency_id,name,group,share_pct."""
    known = set(known_groups) if known_groups is not None else None
    order: list[str] = []
    names: dict[str, str] = {}
    shares: dict[str, dict[str, float]] = {}
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        expected = ["constituency_id", "name", "group", "share_pct"]
        if reader.fieldnames != expected:
            raise ConfigError(f"{path}: expected header {','.join(expected)}")
        for row_num, row in enumerate(reader, start=2):
            cid = row["constituency_id"]
            group = row["group"]
            if known is not None and group not in known:
                raise ConfigError(f"{path}:{row_num}: unknown group id {group!r}")
            try:
                share = float(row["share_pct"])
            except (TypeError, ValueError):
                raise ConfigError(f"{path}:{row_num}: bad share {row['share_pct']!r}") from None
            if not 0.0 <= share <= 100.0:
                raise ConfigError(f"{path}:{row_num}: share {share} outside 0..100")
            if cid not in shares:
                order.append(cid)
                names[cid] = row["name"]
                shares[cid] = {}
            if group in shares[cid]:
                raise ConfigError(f"{path}:{row_num}: duplicate {group} row for {cid}")
            shares[cid][group] = share
    results = []
    for cid in order:
        try:
            results.append(ConstituencyResult(cid, names[cid], shares[cid]))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if not results:
        raise ConfigError(f"{path}: no constituency rows")
    return results


def load_national_baseline(path: str | Path) -> dict[str, float]:
    """Read the national baseline CSV: group,share_pct. Absent groups have no row."""
    baseline: dict[str, float] = {}
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != ["group", "share_pct"]:
            raise ConfigError(f"{path}: expected header group,share_pct")
        for row_num, row in enumerate(reader, start=2):
            try:
                share = float(row["share_pct"])
            except (TypeError, ValueError):
                raise ConfigError(f"{path}:{row_num}: bad share {row['share_pct']!r}") from None
            if not 0.0 <= share <= 100.0:
                raise ConfigError(f"{path}:{row_num}: share {share} outside 0..100")
            if row["group"] in baseline:
                raise ConfigError(f"{path}:{row_num}: duplicate group {row['group']!r}")
            baseline[row["group"]] = share
    return baseline


def write_constituency_csv(path: str | Path, forecast: SeatForecast) -> None:
    """Per-seat output: winner, margin, and projected share per group column."""
    groups = sorted({g for c in forecast.constituencies for g in c.projected})
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["constituency_id", "name", "winner", "margin", *groups])
        for c in forecast.constituencies:
            row = [c.constituency_id, c.name, c.winner, f"{c.margin:.4f}"]
            row.extend(
                f"{c.projected[g]:.4f}" if g in c.projected else "" for g in groups
            )
            writer.writerow(row)


def write_summary_csv(
    path: str | Path,
    baseline: Mapping[str, float],
    proportions: Mapping[str, float],
    forecast: SeatForecast,
) -> None:
    """National roll-up: 2010 share, estimated share, change, seats per group."""
    changes = national_changes(proportions, baseline)
    groups = sorted(set(baseline) | set(proportions) | set(forecast.seats))
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["group", "share_2010", "twitter_share", "change", "seats"])
        for group in groups:
            in_base = group in baseline
            writer.writerow(
                [
                    group,
                    f"{baseline[group]:.1f}" if in_base else "",
                    f"{100.0 * proportions.get(group, 0.0):.1f}",
                    f"{changes[group]:+.1f}" if in_base else "",
                    str(forecast.seats.get(group, 0)),
                ]
            )
