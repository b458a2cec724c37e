"""Exact decimal display of rationals and rendering of tally outcomes."""

from __future__ import annotations

import math
from fractions import Fraction

from .ballots import PreferenceProfile
from .tally import Elected, Eliminated, ExhaustedDelta, RoundEvent, TallyOutcome

JSON_PLACES = 5
TABLE_PLACES = 2


def fixed(value: Fraction | int, places: int, *, truncate: bool = False) -> str:
    """Render ``value`` with ``places`` decimals, rounding half away from zero."""
    value = Fraction(value)
    scale = 10**places
    scaled = abs(value) * scale
    digits = math.floor(scaled) if truncate else math.floor(scaled + Fraction(1, 2))
    sign = "-" if value < 0 and digits else ""
    whole, frac = divmod(digits, scale)
    if not places:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def exact(value: Fraction | int) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _event_dict(event: RoundEvent, profile: PreferenceProfile) -> dict:
    if isinstance(event, Eliminated):
        return {"type": "eliminated", "candidate": profile.name(event.candidate)}
    if isinstance(event, Elected):
        return {
            "type": "elected",
            "candidate": profile.name(event.candidate),
            "surplus": None if event.surplus is None else fixed(event.surplus, JSON_PLACES),
            "surplus_exact": None if event.surplus is None else exact(event.surplus),
        }
    if isinstance(event, ExhaustedDelta):
        return {
            "type": "exhausted",
            "amount": fixed(event.amount, JSON_PLACES),
            "amount_exact": exact(event.amount),
        }
    raise TypeError(f"unknown round event {event!r}")


def outcome_to_dict(outcome: TallyOutcome, profile: PreferenceProfile) -> dict:
    """JSON-ready view of ``outcome`` with candidate names resolved."""
    rounds = []
    for table_index, table in enumerate(outcome.tables):
        for rnd in table.rounds:
            rounds.append(
                {
                    "table": table_index,
                    "round": rnd.number,
                    "totals": {
                        profile.name(c): fixed(v, JSON_PLACES) for c, v in rnd.totals.items()
                    },
                    "totals_exact": {
                        profile.name(c): exact(v) for c, v in rnd.totals.items()
                    },
                    "exhausted": fixed(rnd.exhausted, JSON_PLACES),
                    "exhausted_exact": exact(rnd.exhausted),
                    "events": [_event_dict(e, profile) for e in rnd.events],
                }
            )
    data = {
        "method": outcome.method,
        "winners": [profile.name(c) for c in outcome.winners],
        "rounds": rounds,
        "lot_used": outcome.lot_used,
        "tie_events": [
            {
                "table": t.table,
                "round": t.round,
                "purpose": t.purpose,
                "candidates": [profile.name(c) for c in t.candidates],
                "chosen": profile.name(t.chosen),
                "resolution": t.resolution,
            }
            for t in outcome.tie_events
        ],
    }
    if outcome.quota is not None:
        data["quota"] = outcome.quota
    return data


def render_round_tables(outcome: TallyOutcome, profile: PreferenceProfile) -> str:
    """Votes-by-round tables, candidates down and rounds across.

    A ``*`` marks the round in which a candidate is elected.
    """
    blocks = []
    for table_index, table in enumerate(outcome.tables):
        elected_in = {
            e.candidate: r.number
            for r in table.rounds
            for e in r.events
            if isinstance(e, Elected)
        }
        header = ["Candidate"] + [f"Round {r.number}" for r in table.rounds]
        body = []
        for candidate, values in table.rows().items():
            cells = [profile.name(candidate)]
            for rnd, value in zip(table.rounds, values):
                if value is None:
                    cells.append("")
                    continue
                mark = "*" if elected_in.get(candidate) == rnd.number else ""
                cells.append(fixed(value, TABLE_PLACES) + mark)
            body.append(cells)
        body.append(["Exhausted"] + [fixed(r.exhausted, TABLE_PLACES) for r in table.rounds])

        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        lines = []
        if outcome.method == "seqrcv":
            lines.append(f"Seat {table_index + 1}")
        if table.quota is not None:
            lines.append(f"Quota: {table.quota}")
        for row in [header, *body]:
            lines.append(
                "  ".join(
                    cell.ljust(w) if i == 0 else cell.rjust(w)
                    for i, (cell, w) in enumerate(zip(row, widths))
                ).rstrip()
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)
