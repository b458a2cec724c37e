"""Compare sequential RCV and STV on a collection of real ballot files."""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings

from ..voting.ballots import Election, read_blt
from ..voting.exceptions import ElectionError
from ..voting.metrics import (
    Percentage,
    condorcet_committee,
    degree_of_maximal_representation,
    degree_of_misrepresentation,
    party_count,
    selects_committee,
    winner_set_diff,
)
from ..voting.tally import TiePolicy, sequential_rcv, stv

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ElectionRecord:
    file: str
    title: str
    n: int
    s: int
    voters: int
    rcv_winners: tuple[str, ...]
    stv_winners: tuple[str, ...]
    diff: int
    committee: tuple[str, ...] | None
    rcv_selects_committee: bool
    stv_selects_committee: bool
    misrep_rcv: Percentage
    misrep_stv: Percentage
    maxrep_rcv: Percentage
    maxrep_stv: Percentage
    rcv_parties: int | None
    stv_parties: int | None
    rcv_lot_used: bool
    stv_lot_used: bool

    def to_dict(self) -> dict:
        data = dict(self.__dict__)
        for name in ("misrep_rcv", "misrep_stv", "maxrep_rcv", "maxrep_stv"):
            data[name] = str(data[name])
        for name in ("rcv_winners", "stv_winners", "committee"):
            data[name] = None if data[name] is None else list(data[name])
        return data


@dataclass(frozen=True)
class BatchError:
    file: str
    error: str


@dataclass
class BatchResult:
    records: list[ElectionRecord] = field(default_factory=list)
    errors: list[BatchError] = field(default_factory=list)

    @property
    def aggregate(self) -> dict:
        records = self.records
        with_parties = [
            r for r in records if r.rcv_parties is not None and r.stv_parties is not None
        ]
        diffs = Counter(r.diff for r in records)
        return {
            "elections": len(records),
            "errors": len(self.errors),
            "different_winners": sum(1 for r in records if r.diff),
            "diff_counts": {str(k): v for k, v in sorted(diffs.items())},
            "committee_exists": sum(1 for r in records if r.committee is not None),
            "rcv_selects_committee": sum(r.rcv_selects_committee for r in records),
            "stv_selects_committee": sum(r.stv_selects_committee for r in records),
            "with_party_data": len(with_parties),
            "stv_more_parties": sum(1 for r in with_parties if r.stv_parties > r.rcv_parties),
            "stv_two_more_parties": sum(
                1 for r in with_parties if r.stv_parties >= r.rcv_parties + 2
            ),
            "rcv_more_parties": sum(1 for r in with_parties if r.rcv_parties > r.stv_parties),
            "stv_higher_misrep": sum(
                1 for r in records if r.misrep_stv.count > r.misrep_rcv.count
            ),
        }

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "records": [r.to_dict() for r in self.records],
            "errors": [e.__dict__ for e in self.errors],
            "aggregate": self.aggregate,
        }


def _party_lookup(election: Election, party_map: Mapping[str, str] | None) -> dict:
    profile = election.profile
    parties = {}
    for c in profile.candidates:
        name = profile.name(c)
        party = (party_map or {}).get(name) or profile.party(c)
        if party:
            parties[c] = party
    return parties


def analyse_election(
    election: Election,
    *,
    file: str = "",
    seed: int = 0,
    party_map: Mapping[str, str] | None = None,
    independents_distinct: bool | None = None,
    independent_label: str | None = None,
) -> ElectionRecord:
    """Tabulate ``election`` both ways and compare the outcomes."""
    if independents_distinct is None:
        independents_distinct = getattr(settings, "PARTY_INDEPENDENTS_DISTINCT", True)
    if independent_label is None:
        independent_label = getattr(settings, "PARTY_INDEPENDENT_LABEL", "Ind")

    profile, s = election.profile, election.seats
    policy = TiePolicy(seed=seed)
    by_rcv = sequential_rcv(election, policy, record_rounds=False)
    by_stv = stv(election, policy, record_rounds=False)
    committee = condorcet_committee(
        profile, s, limit=getattr(settings, "COMMITTEE_ENUMERATION_LIMIT", 20)
    )

    parties = _party_lookup(election, party_map)
    counts = {}
    for method, outcome in (("rcv", by_rcv), ("stv", by_stv)):
        try:
            counts[method] = party_count(
                outcome.winners,
                parties,
                independents_distinct=independents_distinct,
                independent_label=independent_label,
            )
        except KeyError:
            counts[method] = None

    def names(ids: Iterable[int]) -> tuple[str, ...]:
        return tuple(profile.name(c) for c in ids)

    return ElectionRecord(
        file=file,
        title=profile.title,
        n=len(profile.candidates),
        s=s,
        voters=profile.total_voters,
        rcv_winners=names(by_rcv.winners),
        stv_winners=names(by_stv.winners),
        diff=winner_set_diff(by_rcv.winners, by_stv.winners),
        committee=names(sorted(committee.committee)) if committee.exists else None,
        rcv_selects_committee=selects_committee(by_rcv.winners, committee),
        stv_selects_committee=selects_committee(by_stv.winners, committee),
        misrep_rcv=degree_of_misrepresentation(profile, s, by_rcv.winners),
        misrep_stv=degree_of_misrepresentation(profile, s, by_stv.winners),
        maxrep_rcv=degree_of_maximal_representation(profile, s, by_rcv.winners),
        maxrep_stv=degree_of_maximal_representation(profile, s, by_stv.winners),
        rcv_parties=counts["rcv"],
        stv_parties=counts["stv"],
        rcv_lot_used=by_rcv.lot_used,
        stv_lot_used=by_stv.lot_used,
    )


def run_batch(
    paths: Iterable[str | Path],
    *,
    s_override: int | None = None,
    seed: int = 0,
    party_map: Mapping[str, str] | None = None,
    independents_distinct: bool | None = None,
    independent_label: str | None = None,
) -> BatchResult:
    """Analyse every ballot file, collecting per-file failures instead of stopping."""
    result = BatchResult()
    for path in paths:
        path = Path(path)
        try:
            election = read_blt(path)
            if s_override is not None:
                election = election.with_seats(s_override)
            record = analyse_election(
                election,
                file=str(path),
                seed=seed,
                party_map=party_map,
                independents_distinct=independents_distinct,
                independent_label=independent_label,
            )
        except (ElectionError, OSError) as exc:
            logger.warning("Skipping %s: %s", path, exc)
            result.errors.append(BatchError(str(path), str(exc)))
            continue
        result.records.append(record)
        logger.debug("Analysed %s: diff=%d", path, record.diff)

    logger.info(
        "📊 [run_batch] %d election(s) analysed, %d error(s)",
        len(result.records),
        len(result.errors),
    )
    return result
