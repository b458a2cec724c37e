"""Ballot data model, profile transformations and BLT ingestion.

Candidates are identified by their 0-based index in the profile's id space.
Removing a candidate never renumbers the others: the id is marked withdrawn
and disappears from every ranking.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from .exceptions import (
    BltFormatError,
    ExplicitTieError,
    InvalidElectionError,
    ProfileExhaustedError,
)

logger = logging.getLogger(__name__)

CandidateId = int

_PARTY_SUFFIX = re.compile(r"^(?P<name>.*?)\s*\((?P<party>[^()]*)\)$")


@dataclass(frozen=True, slots=True)
class Ballot:
    """One ranking of distinct candidates, most preferred first."""

    ranking: tuple[CandidateId, ...]
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.ranking, tuple):
            object.__setattr__(self, "ranking", tuple(self.ranking))
        if not isinstance(self.weight, Fraction):
            object.__setattr__(self, "weight", Fraction(self.weight))
        if not self.ranking:
            raise InvalidElectionError("a ballot must rank at least one candidate")
        if len(set(self.ranking)) != len(self.ranking):
            raise InvalidElectionError(
                f"candidate ranked twice on ballot {self.ranking}"
            )
        if self.weight < 0:
            raise InvalidElectionError("ballot weight cannot be negative")


@dataclass(frozen=True)
class PreferenceProfile:
    """A multiset of ballots over ``num_candidates`` candidate ids."""

    num_candidates: int
    candidate_names: tuple[str, ...]
    entries: tuple[tuple[Ballot, int], ...]
    parties: tuple[str | None, ...] = ()
    withdrawn: frozenset[CandidateId] = frozenset()
    title: str = ""
    _total: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "candidate_names", tuple(self.candidate_names))
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "parties", tuple(self.parties))
        object.__setattr__(self, "withdrawn", frozenset(self.withdrawn))

        n = self.num_candidates
        if n < 1:
            raise InvalidElectionError("a profile needs at least one candidate")
        if len(self.candidate_names) != n:
            raise InvalidElectionError(
                f"expected {n} candidate names, got {len(self.candidate_names)}"
            )
        if self.parties and len(self.parties) != n:
            raise InvalidElectionError(
                f"expected {n} party entries, got {len(self.parties)}"
            )
        if any(c < 0 or c >= n for c in self.withdrawn):
            raise InvalidElectionError("withdrawn candidate outside the id space")
        if len(self.withdrawn) >= n:
            raise InvalidElectionError("every candidate has been withdrawn")

        total = 0
        for ballot, count in self.entries:
            if count < 1:
                raise InvalidElectionError(f"ballot count must be positive, got {count}")
            for c in ballot.ranking:
                if c < 0 or c >= n:
                    raise InvalidElectionError(f"candidate id {c} outside [0, {n})")
                if c in self.withdrawn:
                    raise InvalidElectionError(
                        f"ballot ranks withdrawn candidate {self.candidate_names[c]}"
                    )
            total += count
        if total < 1:
            raise InvalidElectionError("a profile needs at least one voter")
        object.__setattr__(self, "_total", total)

    @property
    def total_voters(self) -> int:
        return self._total

    @property
    def candidates(self) -> frozenset[CandidateId]:
        """Continuing (non-withdrawn) candidate ids."""
        return frozenset(range(self.num_candidates)) - self.withdrawn

    def name(self, candidate: CandidateId) -> str:
        return self.candidate_names[candidate]

    def party(self, candidate: CandidateId) -> str | None:
        return self.parties[candidate] if self.parties else None

    def index_of(self, name: str) -> CandidateId:
        try:
            return self.candidate_names.index(name)
        except ValueError:
            raise KeyError(f"unknown candidate {name!r}") from None

    def merged(self) -> PreferenceProfile:
        """Return the profile with identical ballots combined into one entry."""
        counts: dict[tuple[tuple[CandidateId, ...], Fraction], int] = {}
        for ballot, count in self.entries:
            key = (ballot.ranking, ballot.weight)
            counts[key] = counts.get(key, 0) + count
        entries = tuple(
            (Ballot(ranking, weight), count)
            for (ranking, weight), count in counts.items()
        )
        return replace(self, entries=entries)

    def same_ballots(self, other: PreferenceProfile) -> bool:
        """Equality up to entry order and merging."""
        def key(profile):
            return sorted(
                (b.ranking, b.weight, c) for b, c in profile.merged().entries
            )

        return (
            self.num_candidates == other.num_candidates
            and self.candidate_names == other.candidate_names
            and self.withdrawn == other.withdrawn
            and key(self) == key(other)
        )


@dataclass(frozen=True)
class Election:
    """A preference profile together with the number of seats to fill."""

    profile: PreferenceProfile
    seats: int

    def __post_init__(self):
        available = len(self.profile.candidates)
        if self.seats < 1:
            raise InvalidElectionError("an election needs at least one seat")
        if self.seats >= available:
            raise InvalidElectionError(
                f"seats ({self.seats}) must be fewer than candidates ({available})"
            )

    @property
    def voters(self) -> int:
        return self.profile.total_voters

    def with_seats(self, seats: int) -> Election:
        return Election(self.profile, seats)


class FirstPlaceTotals(NamedTuple):
    totals: dict[CandidateId, Fraction]
    exhausted: Fraction


def first_place_totals(
    profile: PreferenceProfile, continuing: Iterable[CandidateId]
) -> FirstPlaceTotals:
    """Credit each ballot to its highest-ranked continuing candidate."""
    continuing = frozenset(continuing)
    if not continuing:
        raise InvalidElectionError("at least one candidate must be continuing")

    totals: dict[CandidateId, int | Fraction] = {c: 0 for c in continuing}
    exhausted: int | Fraction = 0
    for ballot, count in profile.entries:
        value = count if ballot.weight == 1 else ballot.weight * count
        for c in ballot.ranking:
            if c in continuing:
                totals[c] += value
                break
        else:
            exhausted += value
    return FirstPlaceTotals(
        {c: Fraction(v) for c, v in totals.items()}, Fraction(exhausted)
    )


def remove_candidates(
    profile: PreferenceProfile, removed: Iterable[CandidateId]
) -> PreferenceProfile:
    """Delete ``removed`` from every ballot, keeping the survivors' order.

    Ballots left with no ranked candidate are dropped, so the voter count
    falls by exactly the number of dropped voters.
    """
    removed = frozenset(removed)
    unknown = [c for c in removed if c < 0 or c >= profile.num_candidates]
    if unknown:
        raise InvalidElectionError(f"cannot remove unknown candidates {sorted(unknown)}")
    withdrawn = profile.withdrawn | removed
    if len(withdrawn) >= profile.num_candidates:
        raise InvalidElectionError("cannot remove every candidate")
    if removed <= profile.withdrawn:
        return profile

    entries = []
    dropped = 0
    for ballot, count in profile.entries:
        ranking = tuple(c for c in ballot.ranking if c not in removed)
        if not ranking:
            dropped += count
        elif len(ranking) == len(ballot.ranking):
            entries.append((ballot, count))
        else:
            entries.append((Ballot(ranking, ballot.weight), count))
    if not entries:
        raise ProfileExhaustedError(
            "removing the candidates leaves no ballot with a ranked candidate"
        )
    if dropped:
        logger.debug(
            "Removed %d candidate(s); %d voter(s) dropped with empty rankings",
            len(removed - profile.withdrawn),
            dropped,
        )
    return replace(profile, entries=tuple(entries), withdrawn=withdrawn)


# --------------------------------------------------------------------------------
# BLT files
# --------------------------------------------------------------------------------


def _ints(tokens: list[str], line_no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise BltFormatError(f"expected integers, got {' '.join(tokens)!r}", line_no) from None


def _quoted(line: str, line_no: int, what: str) -> str:
    if len(line) < 2 or not (line.startswith('"') and line.endswith('"')):
        raise BltFormatError(f"{what} must be double-quoted, got {line!r}", line_no)
    return line[1:-1]


def _split_party(label: str) -> tuple[str, str | None]:
    match = _PARTY_SUFFIX.match(label)
    if match and match.group("name"):
        return match.group("name"), match.group("party").strip()
    return label, None


def parse_blt(data: bytes | str) -> Election:
    """Parse a BLT ballot file into an :class:`Election`.

    Withdrawn candidates (negative indices on the second line) are removed
    from the profile before it is returned.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise BltFormatError(f"ballot file is not UTF-8 ({exc.reason})") from exc
    else:
        text = data.lstrip("\ufeff")
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not lines:
        raise BltFormatError("empty ballot file")
    pos = 0

    header_no, header = lines[pos]
    header_tokens = header.split()
    if len(header_tokens) != 2:
        raise BltFormatError(f"malformed header {header!r}", header_no)
    n, seats = _ints(header_tokens, header_no)
    if n < 1 or seats < 1:
        raise BltFormatError("header values must be positive", header_no)
    if seats >= n:
        raise BltFormatError(
            f"seats ({seats}) must be fewer than candidates ({n})", header_no
        )
    pos += 1

    withdrawn: set[int] = set()
    if pos < len(lines) and lines[pos][1].startswith("-"):
        line_no, line = lines[pos]
        for value in _ints(line.split(), line_no):
            if value >= 0 or -value > n:
                raise BltFormatError(f"bad withdrawn candidate {value}", line_no)
            withdrawn.add(-value - 1)
        pos += 1

    entries: list[tuple[Ballot, int]] = []
    while True:
        if pos >= len(lines):
            raise BltFormatError("missing ballot terminator line '0'")
        line_no, line = lines[pos]
        pos += 1
        if line == "0":
            break
        if "=" in line:
            raise ExplicitTieError("explicit ties ('=') are not supported", line_no)
        tokens = line.split()
        if tokens[-1] != "0":
            raise BltFormatError("ballot line must end with the 0 sentinel", line_no)
        values = _ints(tokens, line_no)
        count, prefs = values[0], values[1:-1]
        if count < 1:
            raise BltFormatError(f"ballot count must be positive, got {count}", line_no)
        if not prefs:
            raise BltFormatError("ballot ranks no candidate", line_no)
        seen: set[int] = set()
        for pref in prefs:
            if pref < 1 or pref > n:
                raise BltFormatError(f"candidate index {pref} out of range 1..{n}", line_no)
            if pref in seen:
                raise BltFormatError(f"candidate {pref} ranked twice", line_no)
            seen.add(pref)
        entries.append((Ballot(tuple(p - 1 for p in prefs)), count))

    if len(lines) - pos < n + 1:
        raise BltFormatError(
            f"expected {n} candidate names and a title after the ballots"
        )
    names: list[str] = []
    parties: list[str | None] = []
    for _ in range(n):
        line_no, line = lines[pos]
        pos += 1
        name, party = _split_party(_quoted(line, line_no, "candidate name"))
        names.append(name)
        parties.append(party)
    title_no, title_line = lines[pos]
    title = _quoted(title_line, title_no, "election title")
    pos += 1
    if pos != len(lines):
        raise BltFormatError("unexpected content after the title", lines[pos][0])
    if not entries:
        raise BltFormatError("ballot file contains no ballots")

    profile = PreferenceProfile(
        num_candidates=n,
        candidate_names=tuple(names),
        entries=tuple(entries),
        parties=tuple(parties) if any(p is not None for p in parties) else (),
        title=title,
    )
    if withdrawn:
        logger.info(
            "Applying %d withdrawn candidate(s) from %r", len(withdrawn), title
        )
        profile = remove_candidates(profile, withdrawn)
    try:
        return Election(profile, seats)
    except InvalidElectionError as exc:
        raise BltFormatError(str(exc), header_no) from exc


def read_blt(path: str | Path) -> Election:
    return parse_blt(Path(path).read_bytes())


def serialize_blt(election: Election) -> bytes:
    """Render ``election`` in the BLT format (``\\n`` line endings)."""
    profile = election.profile
    lines = [f"{profile.num_candidates} {election.seats}"]
    if profile.withdrawn:
        lines.append(" ".join(str(-(c + 1)) for c in sorted(profile.withdrawn)))
    for ballot, count in profile.entries:
        if ballot.weight != 1:
            raise InvalidElectionError("only unit-weight ballots can be written as BLT")
        prefs = " ".join(str(c + 1) for c in ballot.ranking)
        lines.append(f"{count} {prefs} 0")
    lines.append("0")
    for c, name in enumerate(profile.candidate_names):
        party = profile.party(c)
        if not party and _split_party(name)[1] is not None:
            raise InvalidElectionError(
                f"candidate name {name!r} would read back as a party suffix"
            )
        lines.append(f'"{name} ({party})"' if party else f'"{name}"')
    lines.append(f'"{profile.title}"')
    return ("\n".join(lines) + "\n").encode("utf-8")


def profile_from_rankings(
    names: Iterable[str],
    columns: Iterable[tuple[int, Iterable[str]]],
    *,
    title: str = "",
    parties: Mapping[str, str] | None = None,
) -> PreferenceProfile:
    """Build a profile from ``(count, [name, ...])`` columns, as printed in tables."""
    names = tuple(names)
    index = {name: i for i, name in enumerate(names)}
    entries = tuple(
        (Ballot(tuple(index[name] for name in ranking)), count)
        for count, ranking in columns
    )
    party_tuple = tuple((parties or {}).get(name) for name in names) if parties else ()
    return PreferenceProfile(
        num_candidates=len(names),
        candidate_names=names,
        entries=entries,
        parties=party_tuple,
        title=title,
    )
