#!/usr/bin/env python3
"""Generate the synthetic 2010 GB constituency baseline used by the tests.

Real constituency-level results cannot be bundled here, so this builds a
632-seat stand-in whose structure is calibrated to behave like the real
2010 map under the pipeline's default national changes: the 2010 winner
tallies match the real GB totals (CON 305, LAB 258, LD 59, SNP 6, PC 3,
GRN 1) and applying the default estimated-share fixtures produces a hung
parliament with Labour the largest party. Margins in every archetype keep
at least half a point of slack so winners are stable under float noise.

Regenerate with:  python scripts/make_synthetic_gb2010.py
Writes tests/data/gb2010_constituencies.csv; fails loudly if the generated
map does not verify against the swing module.
"""

from __future__ import annotations

import csv
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tweetswing import swing  # noqa: E402

OUT_PATH = Path(__file__).resolve().parent.parent / "tests" / "data" / "gb2010_constituencies.csv"
SEED = 20100506

# Default estimated shares (percent) the tests feed the swing stage, and the
# bundled 2010 national baseline. Changes derived from these decide which
# archetype bands are safe versus flippable.
ESTIMATED_SHARE_PCT = {
    "CON": 29.3, "LAB": 28.3, "LD": 4.4, "SNP": 9.2, "GRN": 2.3,
    "UKIP": 23.8, "DUP": 1.7, "PC": 0.2, "SF": 0.8,
}
NATIONAL_2010 = {
    "CON": 36.1, "LAB": 29.0, "LD": 23.0, "SNP": 1.7, "GRN": 1.0,
    "UKIP": 3.1, "PC": 0.6,
}

WINNERS_2010 = {"CON": 305, "LAB": 258, "LD": 59, "SNP": 6, "PC": 3, "GRN": 1}
WINNERS_PROJECTED = {"LAB": 306, "CON": 285, "LD": 23, "SNP": 9, "UKIP": 5, "PC": 3, "GRN": 1}


def tenth(rng: random.Random, lo: float, hi: float) -> float:
    """Uniform draw on the 0.1 grid, inclusive bounds."""
    return rng.randint(round(lo * 10), round(hi * 10)) / 10.0


# Each archetype returns {group: share}. Bands are chosen so the 2010 winner
# and the projected winner are both unambiguous with >= 0.5pt slack.

def lab_safe_scot(rng):
    lab = tenth(rng, 40, 46)
    return {"LAB": lab, "SNP": lab - tenth(rng, 12, 18), "CON": tenth(rng, 5, 9), "LD": tenth(rng, 4, 8)}

def lab_to_snp(rng):
    lab = tenth(rng, 38, 42)
    return {"LAB": lab, "SNP": lab - tenth(rng, 2, 6), "CON": tenth(rng, 5, 8), "LD": tenth(rng, 4, 7)}

def ld_hold_scot(rng):
    return {"LD": tenth(rng, 48, 52), "SNP": tenth(rng, 15, 18), "LAB": tenth(rng, 10, 14), "CON": tenth(rng, 8, 12)}

def ld_to_snp(rng):
    return {"LD": tenth(rng, 38, 42), "SNP": tenth(rng, 24, 28), "LAB": tenth(rng, 10, 14), "CON": tenth(rng, 6, 9)}

def snp_hold(rng):
    return {"SNP": tenth(rng, 38, 44), "LAB": tenth(rng, 22, 28), "CON": tenth(rng, 8, 12), "LD": tenth(rng, 5, 9)}

def con_hold_scot(rng):
    return {"CON": tenth(rng, 38, 40), "LAB": tenth(rng, 24, 28), "SNP": tenth(rng, 16, 19), "LD": tenth(rng, 6, 9)}

def lab_safe_wales(rng):
    return {"LAB": tenth(rng, 42, 48), "CON": tenth(rng, 18, 24), "LD": tenth(rng, 8, 12), "PC": tenth(rng, 5, 8), "UKIP": tenth(rng, 2, 4)}

def con_safe_wales(rng):
    return {"CON": tenth(rng, 40, 46), "LAB": tenth(rng, 22, 28), "LD": tenth(rng, 7, 10), "PC": tenth(rng, 4, 7), "UKIP": tenth(rng, 2, 3)}

def con_to_lab_wales(rng):
    con = tenth(rng, 36, 40)
    return {"CON": con, "LAB": con - tenth(rng, 1.0, 5.4), "LD": tenth(rng, 6, 9), "PC": tenth(rng, 4, 6), "UKIP": tenth(rng, 2, 3)}

def pc_hold(rng):
    return {"PC": tenth(rng, 36, 40), "LAB": tenth(rng, 25, 30), "CON": tenth(rng, 10, 14), "LD": tenth(rng, 6, 9), "UKIP": tenth(rng, 1, 3)}

def ld_hold_wales(rng):
    ld = tenth(rng, 50, 52)
    return {"LD": ld, "CON": ld - tenth(rng, 17, 20), "LAB": tenth(rng, 8, 12), "PC": tenth(rng, 4, 6)}

def ld_to_con_wales(rng):
    ld = tenth(rng, 38, 42)
    return {"LD": ld, "CON": ld - tenth(rng, 3, 7), "LAB": tenth(rng, 8, 12), "PC": tenth(rng, 3, 5)}

def ld_to_lab_wales(rng):
    ld = tenth(rng, 36, 40)
    return {"LD": ld, "LAB": ld - tenth(rng, 2, 11), "CON": tenth(rng, 8, 13), "PC": tenth(rng, 3, 5)}

def con_safe_lab(rng):
    return {"CON": tenth(rng, 42, 50), "LAB": tenth(rng, 20, 28), "LD": tenth(rng, 8, 14), "UKIP": tenth(rng, 3, 5)}

def con_safe_ld(rng):
    return {"CON": tenth(rng, 42, 48), "LD": tenth(rng, 25, 30), "LAB": tenth(rng, 10, 15), "UKIP": tenth(rng, 3, 5)}

def con_to_lab(rng):
    con = tenth(rng, 36, 40)
    return {"CON": con, "LAB": con - tenth(rng, 1.0, 5.4), "LD": tenth(rng, 7, 11), "UKIP": tenth(rng, 3, 5)}

def con_to_ukip(rng):
    return {"CON": tenth(rng, 37, 40), "UKIP": tenth(rng, 15, 18), "LAB": tenth(rng, 14, 18), "LD": tenth(rng, 5, 8)}

def lab_safe(rng):
    shares = {"LAB": tenth(rng, 42, 52), "CON": tenth(rng, 18, 26), "LD": tenth(rng, 8, 14), "UKIP": tenth(rng, 3, 5)}
    if rng.random() < 0.25:
        shares["GRN"] = tenth(rng, 0.5, 2.0)
    return shares

def ld_hold(rng):
    ld = tenth(rng, 50, 52)
    return {"LD": ld, "CON": ld - tenth(rng, 17, 22), "LAB": tenth(rng, 5, 8), "UKIP": tenth(rng, 2, 3)}

def ld_to_con(rng):
    ld = tenth(rng, 38, 42)
    return {"LD": ld, "CON": ld - tenth(rng, 3, 7), "LAB": tenth(rng, 8, 12), "UKIP": tenth(rng, 1, 2)}

def ld_to_lab(rng):
    ld = tenth(rng, 36, 40)
    return {"LD": ld, "LAB": ld - tenth(rng, 2, 11), "CON": tenth(rng, 8, 13), "UKIP": tenth(rng, 1, 2)}

def ld_to_ukip(rng):
    return {"LD": tenth(rng, 38, 40), "UKIP": tenth(rng, 21, 24), "CON": tenth(rng, 10, 13), "LAB": tenth(rng, 8, 12)}

def grn_hold(_rng):
    return {"GRN": 31.3, "LAB": 28.9, "CON": 23.7, "LD": 13.8}


REGIONS = [
    ("S", "Scotland", [
        (lab_safe_scot, 40), (lab_to_snp, 1), (ld_hold_scot, 9),
        (ld_to_snp, 2), (snp_hold, 6), (con_hold_scot, 1),
    ]),
    ("W", "Wales", [
        (lab_safe_wales, 26), (con_safe_wales, 6), (con_to_lab_wales, 2),
        (pc_hold, 3), (ld_hold_wales, 1), (ld_to_con_wales, 1), (ld_to_lab_wales, 1),
    ]),
    ("E", "England", [
        (con_safe_lab, 193), (con_safe_ld, 65), (con_to_lab, 36), (con_to_ukip, 2),
        (lab_safe, 191), (ld_hold, 13), (ld_to_con, 19), (ld_to_lab, 10),
        (ld_to_ukip, 3), (grn_hold, 1),
    ]),
]


def build() -> list[swing.ConstituencyResult]:
    rng = random.Random(SEED)
    results = []
    for prefix, region, mix in REGIONS:
        makers = [maker for maker, count in mix for _ in range(count)]
        rng.shuffle(makers)
        for i, maker in enumerate(makers, start=1):
            cid = f"{prefix}{i:03d}"
            results.append(
                swing.ConstituencyResult(cid, f"{region} Synthetic {i:03d}", maker(rng))
            )
    return results


def verify(results: list[swing.ConstituencyResult]) -> None:
    identity = swing.forecast_seats(results, {g: 0.0 for g in NATIONAL_2010})
    assert dict(identity.seats) == WINNERS_2010, f"2010 winners off: {identity.seats}"

    total = sum(ESTIMATED_SHARE_PCT.values())
    proportions = {g: v / total for g, v in ESTIMATED_SHARE_PCT.items()}
    changes = swing.national_changes(proportions, NATIONAL_2010)
    projected = swing.forecast_seats(results, changes)
    assert dict(projected.seats) == WINNERS_PROJECTED, f"projection off: {projected.seats}"
    assert projected.is_hung
    margins = [c.margin for c in projected.constituencies] + [c.margin for c in identity.constituencies]
    assert min(margins) >= 0.4, f"margin too thin: {min(margins)}"


def main() -> None:
    results = build()
    verify(results)
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    with OUT_PATH.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["constituency_id", "name", "group", "share_pct"])
        for result in results:
            ranked = sorted(result.shares.items(), key=lambda kv: (-kv[1], kv[0]))
            for group, share in ranked:
                writer.writerow([result.constituency_id, result.name, group, f"{share:.1f}"])
    print(f"wrote {OUT_PATH} ({len(results)} constituencies)")


if __name__ == "__main__":
    main()
