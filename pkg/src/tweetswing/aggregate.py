"""Per-group sentiment accumulation and vote-share normalisation.

Each kept tweet contributes ``weight x combined`` to its group's party-kind
or leader-kind sum; excluded (multi-term) tweets and tweets failing the
sentiment filter only bump diagnostic counters. Aggregates are mergeable
partial sums, so any sharding of the stream followed by a merge reproduces
the single-pass result.

A group's total is its party sum plus leader sum; shares normalise the
totals over the reported groups (negative totals clamp to zero first) into
the vote-share vector the swing stage consumes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError, NoPositiveSignalError
from .matching import Assigned, Excluded, MatchOutcome, TermKind
from .sentiment import DEFAULT_THRESHOLD, SentimentScore

SHARES_HEADER = ["group", "party_sum", "leader_sum", "total_sum", "proportion"]


@dataclass
class GroupAggregate:
    """Running sums and counters for one party group."""

    group: str
    party_sum: float = 0.0
    leader_sum: float = 0.0
    party_kept: int = 0
    leader_kept: int = 0
    excluded_multi: int = 0
    filtered_negative: int = 0

    @property
    def total_sum(self) -> float:
        return self.party_sum + self.leader_sum

    def merged_with(self, other: "GroupAggregate") -> "GroupAggregate":
        if other.group != self.group:
            raise ValueError(f"cannot merge {self.group} with {other.group}")
        return GroupAggregate(
            group=self.group,
            party_sum=self.party_sum + other.party_sum,
            leader_sum=self.leader_sum + other.leader_sum,
            party_kept=self.party_kept + other.party_kept,
            leader_kept=self.leader_kept + other.leader_kept,
            excluded_multi=self.excluded_multi + other.excluded_multi,
            filtered_negative=self.filtered_negative + other.filtered_negative,
        )


class GroupAggregates:
    """Mergeable set of per-group aggregates over a fixed group universe."""

    def __init__(self, groups: Iterable[str]):
        self._groups: dict[str, GroupAggregate] = {g: GroupAggregate(g) for g in groups}
        if not self._groups:
            raise ConfigError("aggregate group universe is empty")

    def __getitem__(self, group: str) -> GroupAggregate:
        return self._groups[group]

    def __iter__(self):
        return iter(self._groups)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupAggregates) and self._groups == other._groups

    @property
    def groups(self) -> set[str]:
        return set(self._groups)

    def accumulate(
        self,
        outcome: MatchOutcome,
        score: SentimentScore,
        *,
        threshold: int = DEFAULT_THRESHOLD,
    ) -> None:
        """Fold one tweet's outcome and score into the running sums.

        No-match tweets change nothing. Excluded tweets bump excluded_multi
        on every group they named. Assigned tweets either fail the filter
        (filtered_negative) or add weight x combined to the (group, kind) sum.
        """
        self.accumulate_kept(outcome, score, score.combined >= threshold)

    def accumulate_kept(
        self, outcome: MatchOutcome, score: SentimentScore, kept: bool
    ) -> None:
        """As accumulate, but with the filter decision already made.

        Used when replaying scored files, where the kept flag recorded by the
        scoring stage is authoritative.
        """
        if type(outcome) is Assigned:
            agg = self._groups[outcome.group]
            if not kept:
                agg.filtered_negative += 1
                return
            contribution = outcome.weight * score.combined
            if outcome.kind is TermKind.PARTY:
                agg.party_sum += contribution
                agg.party_kept += 1
            else:
                agg.leader_sum += contribution
                agg.leader_kept += 1
        elif type(outcome) is Excluded:
            for group in outcome.groups:
                self._groups[group].excluded_multi += 1

    def merge(self, other: "GroupAggregates") -> "GroupAggregates":
        """Field-wise addition; the two sides must share one group universe."""
        if self.groups != other.groups:
            raise ValueError(
                f"group universe mismatch: {sorted(self.groups)} vs {sorted(other.groups)}"
            )
        merged = GroupAggregates(self._groups)
        for group, agg in self._groups.items():
            merged._groups[group] = agg.merged_with(other._groups[group])
        return merged

    def totals(self) -> dict[str, float]:
        return {g: agg.total_sum for g, agg in self._groups.items()}

    def count_totals(self) -> dict[str, int]:
        return {
            "party_kept": sum(a.party_kept for a in self._groups.values()),
            "leader_kept": sum(a.leader_kept for a in self._groups.values()),
            "excluded_multi": sum(a.excluded_multi for a in self._groups.values()),
            "filtered_negative": sum(a.filtered_negative for a in self._groups.values()),
        }


@dataclass(frozen=True, slots=True)
class ShareEntry:
    total_sum: float
    proportion: float


ShareVector = dict[str, ShareEntry]


def shares_from_totals(totals: Mapping[str, float]) -> ShareVector:
    """Normalise group totals into proportions; negatives clamp to 0 first."""
    clamped = {g: max(0.0, t) for g, t in totals.items()}
    denominator = sum(clamped.values())
    if denominator <= 0.0:
        raise NoPositiveSignalError(
            "no positive sentiment signal in any reported group; shares undefined"
        )
    return {
        g: ShareEntry(total_sum=totals[g], proportion=clamped[g] / denominator)
        for g in totals
    }


def shares(aggs: GroupAggregates, report_groups: Iterable[str]) -> ShareVector:
    """Share vector over the reported groups only."""
    report = sorted(set(report_groups))
    missing = [g for g in report if g not in aggs.groups]
    if missing:
        raise ConfigError(f"report groups not in aggregate universe: {missing}")
    return shares_from_totals({g: aggs[g].total_sum for g in report})


def merge(a: GroupAggregates, b: GroupAggregates) -> GroupAggregates:
    return a.merge(b)


def write_shares_csv(
    path: str | Path, vector: ShareVector, aggs: GroupAggregates | None = None
) -> None:
    """Stage output: one row per reported group, 9 decimal places, sorted by group.

    The party/leader breakdown columns are blank when the vector came from
    injected totals rather than accumulated aggregates.
    """
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SHARES_HEADER)
        for group in sorted(vector):
            entry = vector[group]
            if aggs is not None:
                party = f"{aggs[group].party_sum:.9f}"
                leader = f"{aggs[group].leader_sum:.9f}"
            else:
                party = leader = ""
            writer.writerow(
                [group, party, leader, f"{entry.total_sum:.9f}", f"{entry.proportion:.9f}"]
            )


def read_shares_csv(path: str | Path) -> ShareVector:
    """Read a stage-output shares CSV back into a share vector."""
    vector: ShareVector = {}
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != SHARES_HEADER:
            raise ConfigError(f"{path}: expected header {','.join(SHARES_HEADER)}")
        for row in reader:
            vector[row["group"]] = ShareEntry(
                total_sum=float(row["total_sum"]),
                proportion=float(row["proportion"]),
            )
    if not vector:
        raise ConfigError(f"{path}: no share rows")
    return vector
