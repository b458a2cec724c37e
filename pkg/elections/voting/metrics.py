"""Head-to-head comparisons, Condorcet committees and representation measures.

Unranked candidates are treated as tied for last place on a ballot.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Collection, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ballots import CandidateId, PreferenceProfile
from .exceptions import (
    CommitteeSearchError,
    InvalidElectionError,
    MissingPartyError,
)
from .formatting import fixed

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_LIMIT = 20
DEFAULT_INDEPENDENT_LABEL = "Ind"


@dataclass(frozen=True)
class Percentage:
    """``count`` out of ``denominator`` voters (or runs), as a percentage."""

    count: Fraction | int
    denominator: int

    @property
    def value(self) -> Fraction | None:
        if not self.denominator:
            return None
        return Fraction(self.count) * 100 / self.denominator

    def __float__(self) -> float:
        value = self.value
        return float("nan") if value is None else float(value)

    def __str__(self) -> str:
        value = self.value
        return "n/a" if value is None else fixed(value, 1)


@dataclass(frozen=True)
class PairwiseMatrix:
    """``wins[a, b]``: voters strictly preferring ``a`` to ``b``."""

    wins: np.ndarray
    candidates: frozenset[CandidateId]

    def beats(self, a: CandidateId, b: CandidateId) -> bool:
        return bool(self.wins[a, b] > self.wins[b, a])

    def beat_counts(self) -> dict[CandidateId, int]:
        return {
            a: sum(1 for b in self.candidates if b != a and self.beats(a, b))
            for a in self.candidates
        }

    def tolist(self) -> list[list[int]]:
        return self.wins.tolist()


@dataclass(frozen=True)
class CommitteeResult:
    committee: frozenset[CandidateId] | None

    @property
    def exists(self) -> bool:
        return self.committee is not None


def pairwise_matrix(profile: PreferenceProfile) -> PairwiseMatrix:
    n = profile.num_candidates
    # Position of each candidate on each ballot; unranked share position n.
    positions = np.full((len(profile.entries), n), n, dtype=np.int64)
    counts = np.empty(len(profile.entries), dtype=np.int64)
    for row, (ballot, count) in enumerate(profile.entries):
        positions[row, list(ballot.ranking)] = np.arange(len(ballot.ranking))
        counts[row] = count
    prefers = positions[:, :, None] < positions[:, None, :]
    wins = np.einsum("k,kab->ab", counts, prefers.astype(np.int64))
    if profile.withdrawn:
        gone = sorted(profile.withdrawn)
        wins[gone, :] = 0
        wins[:, gone] = 0
    return PairwiseMatrix(wins=wins, candidates=profile.candidates)


def _is_committee(matrix: PairwiseMatrix, members: Collection[CandidateId]) -> bool:
    outside = matrix.candidates - set(members)
    return all(matrix.beats(a, b) for a in members for b in outside)


def condorcet_committees(
    matrix: PairwiseMatrix, s: int, *, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> list[frozenset[CandidateId]]:
    """Every size-``s`` Condorcet committee, by exhaustive enumeration."""
    if len(matrix.candidates) > limit:
        raise CommitteeSearchError(
            f"exhaustive committee search is limited to {limit} candidates"
        )
    return [
        frozenset(members)
        for members in itertools.combinations(sorted(matrix.candidates), s)
        if _is_committee(matrix, members)
    ]


def condorcet_committee(
    source: PreferenceProfile | PairwiseMatrix,
    s: int,
    *,
    method: str = "fast",
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> CommitteeResult:
    """The size-``s`` committee whose members all beat all non-members, if any.

    The fast path uses the fact that a committee member beats at least
    ``n - s`` rivals while an outsider beats at most ``n - s - 1``.
    """
    matrix = source if isinstance(source, PairwiseMatrix) else pairwise_matrix(source)
    n = len(matrix.candidates)
    if not 1 <= s < n:
        raise InvalidElectionError(f"committee size must lie in [1, {n})")

    if method == "exhaustive":
        found = condorcet_committees(matrix, s, limit=limit)
        return CommitteeResult(found[0] if found else None)
    if method != "fast":
        raise InvalidElectionError(f"unknown committee search method {method!r}")

    members = [a for a, k in matrix.beat_counts().items() if k >= n - s]
    if len(members) == s and _is_committee(matrix, members):
        return CommitteeResult(frozenset(members))
    return CommitteeResult(None)


def selects_committee(winners: Iterable[CandidateId], committee: CommitteeResult) -> bool:
    return committee.exists and frozenset(winners) == committee.committee


def _check_size(s: int, winners: frozenset) -> None:
    if len(winners) != s:
        raise InvalidElectionError(f"winner set has {len(winners)} members, expected {s}")


def degree_of_misrepresentation(
    profile: PreferenceProfile, s: int, winners: Iterable[CandidateId]
) -> Percentage:
    """Share of voters with none of their top ``s`` ranked candidates seated."""
    winners = frozenset(winners)
    _check_size(s, winners)
    missed = sum(
        count
        for ballot, count in profile.entries
        if winners.isdisjoint(ballot.ranking[:s])
    )
    return Percentage(missed, profile.total_voters)


def degree_of_maximal_representation(
    profile: PreferenceProfile, s: int, winners: Iterable[CandidateId]
) -> Percentage:
    """Share of voters whose top ``s`` ranked candidates are all seated.

    Ballots ranking fewer than ``s`` candidates count when every ranked
    candidate is seated.
    """
    winners = frozenset(winners)
    _check_size(s, winners)
    served = sum(
        count
        for ballot, count in profile.entries
        if winners.issuperset(ballot.ranking[:s])
    )
    return Percentage(served, profile.total_voters)


def winner_set_diff(w1: Iterable[CandidateId], w2: Iterable[CandidateId]) -> int:
    w1, w2 = frozenset(w1), frozenset(w2)
    if len(w1) != len(w2):
        raise InvalidElectionError("winner sets must have the same size")
    return len(w1 - w2)


def party_count(
    winners: Iterable[CandidateId],
    parties: Mapping[CandidateId, str | None],
    *,
    independents_distinct: bool = True,
    independent_label: str = DEFAULT_INDEPENDENT_LABEL,
) -> int:
    """Number of distinct parties among ``winners``.

    With ``independents_distinct`` each independent counts as a party of
    their own.
    """
    labels: set[str] = set()
    independents = 0
    for c in winners:
        party = parties.get(c)
        if not party:
            raise MissingPartyError(f"no party recorded for candidate {c}")
        if independents_distinct and party.casefold() == independent_label.casefold():
            independents += 1
        else:
            labels.add(party)
    return len(labels) + independents


def consecutive_share(
    profile: PreferenceProfile, a: CandidateId, b: CandidateId
) -> Percentage:
    """Share of voters ranking ``a`` and ``b`` next to each other, either order."""
    pair = {a, b}
    together = sum(
        count
        for ballot, count in profile.entries
        if any({x, y} == pair for x, y in zip(ballot.ranking, ballot.ranking[1:]))
    )
    return Percentage(together, profile.total_voters)
