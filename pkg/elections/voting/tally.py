"""IRV, sequential RCV and STV tabulation with exact arithmetic.

Every tabulator is a pure function of its inputs and a :class:`TiePolicy`.
Ballots are held in piles per candidate so that each round only moves the
ballots of the candidate being excluded or elected.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .ballots import CandidateId, Election, PreferenceProfile, remove_candidates
from .exceptions import InvalidElectionError, ProfileExhaustedError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

TRANSFER_DECIMALS = 5


class TieBreakMode(enum.Enum):
    BACKWARD_THEN_LOT = "backward_then_lot"
    LOT_ONLY = "lot_only"


@dataclass(frozen=True)
class TiePolicy:
    """How ties are broken. The lot is a PCG64 stream seeded with ``seed``."""

    mode: TieBreakMode = TieBreakMode.BACKWARD_THEN_LOT
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InvalidElectionError("tie-break seed must be an unsigned 64-bit integer")


# --------------------------------------------------------------------------------
# Audit records
# --------------------------------------------------------------------------------


@dataclass(frozen=True)
class Eliminated:
    candidate: CandidateId


@dataclass(frozen=True)
class Elected:
    candidate: CandidateId
    surplus: Fraction | None = None


@dataclass(frozen=True)
class ExhaustedDelta:
    amount: Fraction


RoundEvent = Union[Eliminated, Elected, ExhaustedDelta]


@dataclass(frozen=True)
class Round:
    """Totals as they stood at the start of a round, and what the round did.

    ``exhausted`` and ``lost`` are cumulative; ``retained`` is the vote kept
    by candidates elected in earlier rounds.
    """

    number: int
    totals: dict[CandidateId, Fraction]
    exhausted: Fraction
    retained: Fraction = Fraction(0)
    lost: Fraction = Fraction(0)
    events: tuple[RoundEvent, ...] = ()


@dataclass(frozen=True)
class RoundTable:
    rounds: tuple[Round, ...]
    quota: int | None = None

    def rows(self) -> dict[CandidateId, list[Fraction | None]]:
        """Candidate x round grid; ``None`` once a candidate has been excluded."""
        candidates = sorted({c for r in self.rounds for c in r.totals})
        return {c: [r.totals.get(c) for r in self.rounds] for c in candidates}


@dataclass(frozen=True)
class TieEvent:
    table: int
    round: int
    purpose: str
    candidates: tuple[CandidateId, ...]
    chosen: CandidateId
    resolution: str


@dataclass(frozen=True)
class TallyOutcome:
    method: str
    winners: tuple[CandidateId, ...]
    tables: tuple[RoundTable, ...] = ()
    quota: int | None = None
    tie_events: tuple[TieEvent, ...] = ()
    lot_used: bool = False

    @property
    def winner_set(self) -> frozenset[CandidateId]:
        return frozenset(self.winners)


# --------------------------------------------------------------------------------
# Tie breaking
# --------------------------------------------------------------------------------


@dataclass
class _TieBreaker:
    policy: TiePolicy
    table: int = 0
    events: list[TieEvent] = field(default_factory=list)
    lot_used: bool = False
    _rng: np.random.Generator | None = None

    def _draw(self, candidates: Sequence[CandidateId]) -> CandidateId:
        if self._rng is None:
            self._rng = np.random.Generator(np.random.PCG64(self.policy.seed))
        return candidates[int(self._rng.integers(len(candidates)))]

    def _record(self, tied, chosen, resolution, *, purpose, round_no):
        self.events.append(
            TieEvent(self.table, round_no, purpose, tuple(tied), chosen, resolution)
        )

    def resolve(
        self,
        tied: Iterable[CandidateId],
        history: Sequence[dict[CandidateId, Number]],
        *,
        lowest: bool,
        purpose: str,
        round_no: int,
    ) -> CandidateId:
        tied = sorted(tied)
        remaining = tied
        if self.policy.mode is TieBreakMode.BACKWARD_THEN_LOT:
            for snapshot in reversed(history):
                pick = min if lowest else max
                target = pick(snapshot[c] for c in remaining)
                remaining = [c for c in remaining if snapshot[c] == target]
                if len(remaining) == 1:
                    break

        if len(remaining) == 1:
            chosen, resolution = remaining[0], "backward"
            logger.info(
                "Tie for %s in round %d broken by earlier totals: %s",
                purpose,
                round_no,
                chosen,
            )
        else:
            chosen, resolution = self._draw(remaining), "lot"
            self.lot_used = True
            logger.warning(
                "Tie for %s in round %d between %s decided by lot: %s",
                purpose,
                round_no,
                remaining,
                chosen,
            )
        self._record(tied, chosen, resolution, purpose=purpose, round_no=round_no)
        return chosen

    def exclude(self, tied, history, *, zero_safe: bool, round_no: int) -> CandidateId:
        """Choose which of the tied lowest candidates to exclude.

        When all of them hold no votes and all are certain to be excluded the
        order is immaterial, so the highest index goes first without a lot.
        """
        if zero_safe:
            chosen = max(tied)
            self._record(
                sorted(tied), chosen, "zero_vote", purpose="elimination", round_no=round_no
            )
            return chosen
        return self.resolve(
            tied, history, lowest=True, purpose="elimination", round_no=round_no
        )

    def order(self, candidates, totals, history, *, purpose: str, round_no: int):
        """Sort ``candidates`` by total, largest first, breaking ties by policy."""
        ranked = sorted(candidates, key=lambda c: (-totals[c], c))
        result: list[CandidateId] = []
        for _, group in itertools.groupby(ranked, key=lambda c: totals[c]):
            group = list(group)
            while len(group) > 1:
                chosen = self.resolve(
                    group, history, lowest=False, purpose=purpose, round_no=round_no
                )
                result.append(chosen)
                group.remove(chosen)
            result.extend(group)
        return result


def _fractions(values: dict[CandidateId, Number]) -> dict[CandidateId, Fraction]:
    return {c: Fraction(v) for c, v in sorted(values.items())}


def droop_quota(v: int, s: int) -> int:
    """Droop quota: the smallest integer above v / (s + 1)."""
    if v < 1 or s < 1:
        raise InvalidElectionError("quota needs at least one voter and one seat")
    return v // (s + 1) + 1


# --------------------------------------------------------------------------------
# IRV and sequential RCV
# --------------------------------------------------------------------------------


def _irv_table(
    profile: PreferenceProfile, tiebreak: _TieBreaker, record_rounds: bool
) -> tuple[CandidateId, RoundTable]:
    continuing = set(profile.candidates)
    piles: dict[CandidateId, list[tuple[tuple[CandidateId, ...], Number]]] = {
        c: [] for c in continuing
    }
    totals: dict[CandidateId, Number] = {c: 0 for c in continuing}
    for ballot, count in profile.entries:
        value = count if ballot.weight == 1 else ballot.weight * count
        first = ballot.ranking[0]
        piles[first].append((ballot.ranking, value))
        totals[first] += value

    exhausted: Number = 0
    history: list[dict[CandidateId, Number]] = []
    rounds: list[Round] = []
    round_no = 0
    while True:
        round_no += 1
        active = sum(totals.values())
        if active == 0:
            raise ProfileExhaustedError("every ballot is exhausted")
        snapshot = dict(totals)
        events: list[RoundEvent] = []

        leader = max(totals, key=lambda c: (totals[c], -c))
        if 2 * totals[leader] > active:
            events.append(Elected(leader))
            winner = leader
        else:
            lowest = min(totals.values())
            tied = [c for c in continuing if totals[c] == lowest]
            if len(tied) == 1:
                loser = tied[0]
            else:
                loser = tiebreak.exclude(
                    tied, history, zero_safe=lowest == 0, round_no=round_no
                )
            events.append(Eliminated(loser))
            continuing.discard(loser)
            del totals[loser]
            delta: Number = 0
            for ranking, value in piles.pop(loser):
                nxt = next((c for c in ranking if c in continuing), None)
                if nxt is None:
                    delta += value
                else:
                    piles[nxt].append((ranking, value))
                    totals[nxt] += value
            if delta:
                events.append(ExhaustedDelta(Fraction(delta)))
            winner = None

        if record_rounds:
            rounds.append(
                Round(round_no, _fractions(snapshot), Fraction(exhausted), events=tuple(events))
            )
        if winner is not None:
            return winner, RoundTable(tuple(rounds))
        exhausted += delta
        history.append(snapshot)


def irv(
    profile: PreferenceProfile,
    policy: TiePolicy | None = None,
    *,
    record_rounds: bool = True,
) -> TallyOutcome:
    """Instant runoff: exclude the last-placed candidate until one holds a
    strict majority of the ballots still in play."""
    tiebreak = _TieBreaker(policy or TiePolicy())
    winner, table = _irv_table(profile, tiebreak, record_rounds)
    return TallyOutcome(
        method="irv",
        winners=(winner,),
        tables=(table,) if record_rounds else (),
        tie_events=tuple(tiebreak.events),
        lot_used=tiebreak.lot_used,
    )


def sequential_rcv(
    election: Election,
    policy: TiePolicy | None = None,
    *,
    record_rounds: bool = True,
) -> TallyOutcome:
    """Fill seat k with the IRV winner once seats 1..k-1 are struck from the
    original ballots."""
    tiebreak = _TieBreaker(policy or TiePolicy())
    winners: list[CandidateId] = []
    tables: list[RoundTable] = []
    for seat in range(election.seats):
        reduced = remove_candidates(election.profile, winners)
        tiebreak.table = seat
        winner, table = _irv_table(reduced, tiebreak, record_rounds)
        winners.append(winner)
        if record_rounds:
            tables.append(table)
    return TallyOutcome(
        method="seqrcv",
        winners=tuple(winners),
        tables=tuple(tables),
        tie_events=tuple(tiebreak.events),
        lot_used=tiebreak.lot_used,
    )


# --------------------------------------------------------------------------------
# STV
# --------------------------------------------------------------------------------


def _truncate(value: Fraction) -> Fraction:
    scale = 10**TRANSFER_DECIMALS
    return Fraction(math.floor(value * scale), scale)


class _StvCount:
    """Mutable state of one STV count."""

    def __init__(self, election: Election, tiebreak: _TieBreaker, truncate: bool):
        self.seats = election.seats
        self.quota = droop_quota(election.voters, election.seats)
        self.tiebreak = tiebreak
        self.truncate = truncate
        self.hopeful = set(election.profile.candidates)
        self.elected: list[CandidateId] = []
        self.piles: dict[CandidateId, list[tuple[tuple[CandidateId, ...], Number, int]]] = {
            c: [] for c in self.hopeful
        }
        self.totals: dict[CandidateId, Number] = {c: 0 for c in self.hopeful}
        self.exhausted: Number = 0
        self.lost: Number = 0
        for ballot, count in election.profile.entries:
            weight = 1 if ballot.weight == 1 else ballot.weight
            first = ballot.ranking[0]
            self.piles[first].append((ballot.ranking, weight, count))
            self.totals[first] += weight * count

    def _move(self, pile, factor: Fraction | None, accepting) -> tuple[Number, Number]:
        """Pass each ballot to its next accepting candidate.

        Returns ``(transferred, exhausted)``.
        """
        transferred: Number = 0
        exhausted: Number = 0
        for ranking, weight, count in pile:
            if factor is not None:
                weight = weight * factor
                if self.truncate:
                    weight = _truncate(weight)
            value = weight * count
            nxt = next((c for c in ranking if c in accepting), None)
            if nxt is None:
                exhausted += value
            else:
                self.piles[nxt].append((ranking, weight, count))
                self.totals[nxt] += value
                transferred += value
        return transferred, exhausted

    def transfer_surplus(self, candidate: CandidateId, accepting) -> Number:
        total = self.totals[candidate]
        surplus = total - self.quota
        if surplus <= 0:
            return 0
        transferred, exhausted = self._move(
            self.piles.pop(candidate), Fraction(surplus) / total, accepting
        )
        self.lost += surplus - transferred - exhausted
        self.exhausted += exhausted
        self.totals[candidate] = self.quota
        self.piles[candidate] = []
        return exhausted

    def exclude(self, candidate: CandidateId) -> Number:
        self.hopeful.discard(candidate)
        del self.totals[candidate]
        _, exhausted = self._move(self.piles.pop(candidate), None, self.hopeful)
        self.exhausted += exhausted
        return exhausted


def stv(
    election: Election,
    policy: TiePolicy | None = None,
    *,
    truncate_transfers: bool = False,
    record_rounds: bool = True,
) -> TallyOutcome:
    """Single transferable vote with the Droop quota and weighted inclusive
    surplus transfers.

    Candidates at or above quota are elected together at the start of a
    round and their surpluses transferred largest first. Otherwise the
    lowest hopeful is excluded, unless the hopefuls exactly fill the seats
    left, in which case they are all elected.
    """
    tiebreak = _TieBreaker(policy or TiePolicy())
    count = _StvCount(election, tiebreak, truncate_transfers)
    quota = count.quota
    history: list[dict[CandidateId, Number]] = []
    rounds: list[Round] = []
    round_no = 0

    while len(count.elected) < count.seats:
        round_no += 1
        snapshot = dict(count.totals)
        exhausted_before, lost_before = count.exhausted, count.lost
        retained = sum((count.totals[c] for c in count.elected), 0)
        remaining = count.seats - len(count.elected)
        events: list[RoundEvent] = []

        reached = [c for c in count.hopeful if count.totals[c] >= quota]
        if reached:
            order = tiebreak.order(
                reached, count.totals, history, purpose="surplus_order", round_no=round_no
            )
            for c in order:
                count.hopeful.discard(c)
                count.elected.append(c)
                events.append(Elected(c, Fraction(count.totals[c] - quota)))
            if len(count.elected) < count.seats:
                frozen: set[CandidateId] = set()
                for c in order:
                    delta = count.transfer_surplus(c, count.hopeful - frozen)
                    if delta:
                        events.append(ExhaustedDelta(Fraction(delta)))
                    frozen |= {h for h in count.hopeful if count.totals[h] >= quota}
        elif len(count.hopeful) <= remaining:
            for c in sorted(count.hopeful, key=lambda c: (-count.totals[c], c)):
                count.elected.append(c)
                events.append(Elected(c))
            count.hopeful.clear()
        else:
            lowest = min(count.totals[c] for c in count.hopeful)
            tied = [c for c in count.hopeful if count.totals[c] == lowest]
            if len(tied) == 1:
                loser = tied[0]
            else:
                zero_safe = lowest == 0 and len(count.hopeful) - len(tied) >= remaining
                loser = tiebreak.exclude(
                    tied, history, zero_safe=zero_safe, round_no=round_no
                )
            events.append(Eliminated(loser))
            delta = count.exclude(loser)
            if delta:
                events.append(ExhaustedDelta(Fraction(delta)))

        if record_rounds:
            rounds.append(
                Round(
                    number=round_no,
                    totals=_fractions(snapshot),
                    exhausted=Fraction(exhausted_before),
                    retained=Fraction(retained),
                    lost=Fraction(lost_before),
                    events=tuple(events),
                )
            )
        history.append(snapshot)

    return TallyOutcome(
        method="stv",
        winners=tuple(count.elected),
        tables=(RoundTable(tuple(rounds), quota),) if record_rounds else (),
        quota=quota,
        tie_events=tuple(tiebreak.events),
        lot_used=tiebreak.lot_used,
    )


METHODS = ("irv", "seqrcv", "stv")


def tabulate(
    method: str,
    election: Election,
    policy: TiePolicy | None = None,
    *,
    truncate_transfers: bool = False,
    record_rounds: bool = True,
) -> TallyOutcome:
    """Run ``method`` (one of :data:`METHODS`) on ``election``."""
    if method == "irv":
        return irv(election.profile, policy, record_rounds=record_rounds)
    if method == "seqrcv":
        return sequential_rcv(election, policy, record_rounds=record_rounds)
    if method == "stv":
        return stv(
            election,
            policy,
            truncate_transfers=truncate_transfers,
            record_rounds=record_rounds,
        )
    raise InvalidElectionError(f"unknown method {method!r}; expected one of {METHODS}")
