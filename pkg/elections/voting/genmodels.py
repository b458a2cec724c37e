"""Random elections under impartial cultures, and the disjoint-winners construction.

Random streams are numpy PCG64 generators. Replica ``i`` of an experiment
seeded with ``seed`` draws from ``SeedSequence(seed, spawn_key=(i,))`` so
replicas can run in any order or process.
"""

from __future__ import annotations

import enum
import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ballots import Ballot, CandidateId, Election, PreferenceProfile
from .exceptions import ConstructionError, SamplerError
from .tally import TiePolicy, sequential_rcv, stv

logger = logging.getLogger(__name__)

MAX_CANDIDATES = 12
PERMUTATION_TABLE_LIMIT = 8
MAX_CONSTRUCTION_VOTERS = 10_000_000


class CultureKind(enum.Enum):
    IC = "ic"
    IAC = "iac"


@dataclass(frozen=True)
class CultureModel:
    kind: CultureKind
    n: int
    v: int
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.n <= MAX_CANDIDATES:
            raise SamplerError(f"culture models need 2 <= n <= {MAX_CANDIDATES}, got {self.n}")
        if self.v < 1:
            raise SamplerError("culture models need at least one voter")
        if self.seed < 0:
            raise SamplerError("seed must be non-negative")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


def replica_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(index,))


def candidate_names(n: int) -> tuple[str, ...]:
    return tuple(f"C{i}" for i in range(1, n + 1))


@functools.lru_cache(maxsize=None)
def _permutation_table(n: int) -> tuple[tuple[CandidateId, ...], ...]:
    return tuple(itertools.permutations(range(n)))


def unrank_permutation(index: int, n: int) -> tuple[CandidateId, ...]:
    """The ``index``-th ranking of ``n`` candidates in lexicographic order."""
    if n <= PERMUTATION_TABLE_LIMIT:
        return _permutation_table(n)[index]
    items = list(range(n))
    ranking = []
    for k in range(n, 0, -1):
        q, index = divmod(index, math.factorial(k - 1))
        ranking.append(items.pop(q))
    return tuple(ranking)


def rank_permutation(ranking: tuple[CandidateId, ...]) -> int:
    items = sorted(ranking)
    index = 0
    for k, c in enumerate(ranking):
        q = items.index(c)
        index += q * math.factorial(len(ranking) - 1 - k)
        items.pop(q)
    return index


def _profile_from_indices(indices: np.ndarray, n: int, title: str) -> PreferenceProfile:
    types, counts = np.unique(indices, return_counts=True)
    entries = tuple(
        (Ballot(unrank_permutation(int(t), n)), int(c))
        for t, c in zip(types.tolist(), counts.tolist())
    )
    return PreferenceProfile(
        num_candidates=n,
        candidate_names=candidate_names(n),
        entries=entries,
        title=title,
    )


def sample_ic(model: CultureModel, rng: np.random.Generator | None = None) -> PreferenceProfile:
    """Each voter picks one of the n! complete rankings uniformly."""
    if model.kind is not CultureKind.IC:
        raise SamplerError("sample_ic needs an IC model")
    rng = rng or model.generator()
    draws = rng.integers(0, math.factorial(model.n), size=model.v, dtype=np.int64)
    return _profile_from_indices(draws, model.n, f"IC n={model.n} V={model.v}")


def sample_iac(model: CultureModel, rng: np.random.Generator | None = None) -> PreferenceProfile:
    """Uniform anonymous profile, drawn from a Polya urn with one ball per ranking.

    The ``t``-th draw takes a fresh uniform ranking with probability
    ``K / (K + t)`` and otherwise repeats a uniformly chosen earlier draw,
    which is the same as drawing from the urn after ``t`` reinforcements.
    """
    if model.kind is not CultureKind.IAC:
        raise SamplerError("sample_iac needs an IAC model")
    rng = rng or model.generator()
    types = math.factorial(model.n)
    fresh = rng.integers(0, types, size=model.v, dtype=np.int64).tolist()
    coin = rng.random(model.v).tolist()
    pick = rng.random(model.v).tolist()

    draws = [0] * model.v
    for t in range(model.v):
        if coin[t] * (types + t) < types:
            draws[t] = fresh[t]
        else:
            draws[t] = draws[int(pick[t] * t)]
    return _profile_from_indices(
        np.asarray(draws, dtype=np.int64), model.n, f"IAC n={model.n} V={model.v}"
    )


def sample(model: CultureModel, rng: np.random.Generator | None = None) -> PreferenceProfile:
    if model.kind is CultureKind.IC:
        return sample_ic(model, rng)
    return sample_iac(model, rng)


# --------------------------------------------------------------------------------
# Disjoint STV / sequential RCV winner sets
# --------------------------------------------------------------------------------


@dataclass(frozen=True)
class _DisjointLayout:
    first_block: int
    counts: tuple[int, ...]


def _disjoint_layout(s: int, v: int) -> _DisjointLayout | None:
    """Integer counts for the construction, or ``None`` if ``v`` is too small.

    ``C1`` takes the largest multiple of ``s - 1`` below half the vote; the
    rest is spread over ``C2..C_{s+1}`` in strictly decreasing blocks.
    """
    first = ((v - 1) // 2) // (s - 1) * (s - 1)
    rest = v - first
    offset = s * (s - 1) // 2
    if first < s - 1 or rest - offset < s:
        return None
    base, extra = divmod(rest - offset, s)
    counts = tuple(base + (s - 1 - j) + (1 if j < extra else 0) for j in range(s))

    quota = v // (s + 1) + 1
    keeper = s - 2  # position of C_s among C2..C_{s+1}
    receivers = [counts[j] for j in range(s) if j != keeper]
    share = Fraction(first - quota, s - 1)
    feasible = (
        first >= quota
        and max(counts) < quota
        and min(receivers) + share >= quota
        and counts[keeper] + counts[-1] > counts[0]
    )
    return _DisjointLayout(first, counts) if feasible else None


def minimum_disjoint_voters(s: int) -> int:
    """Smallest electorate for which :func:`construct_disjoint` is feasible."""
    if s < 2:
        raise ConstructionError("the construction needs at least two seats")
    for v in range(2, MAX_CONSTRUCTION_VOTERS + 1):
        if _disjoint_layout(s, v) is not None:
            return v
    raise ConstructionError(f"no feasible electorate found for {s} seats")


def construct_disjoint(s: int, v: int) -> Election:
    """An election with ``2s`` candidates where STV and sequential RCV seat
    disjoint sets.

    ``C1`` falls just short of half the first preferences and its ballots
    pass evenly to every core candidate except ``C_s``. The others lean on
    ``C_s``, which wins IRV; the extra candidates ``C_{s+2}..C_{2s}`` follow
    ``C_s`` on its ballots and inherit its seat one by one.
    """
    if s < 2:
        raise ConstructionError("the construction needs at least two seats")
    layout = _disjoint_layout(s, v)
    if layout is None:
        raise ConstructionError(
            f"{v} voters is too few for {s} seats "
            f"(at least {minimum_disjoint_voters(s)} needed)"
        )

    n = 2 * s
    core = list(range(s + 1))
    keeper = s - 1
    chain = list(range(s + 1, n))
    receivers = [c for c in range(1, s + 1) if c != keeper]

    def complete(prefix: list[CandidateId]) -> tuple[CandidateId, ...]:
        ranking = prefix + [c for c in core if c not in prefix]
        at = ranking.index(keeper) + 1
        return tuple(ranking[:at] + chain + ranking[at:])

    entries: list[tuple[Ballot, int]] = []
    per_receiver = layout.first_block // (s - 1)
    for c in receivers:
        entries.append((Ballot(complete([0, c])), per_receiver))
    for j, count in enumerate(layout.counts):
        c = j + 1
        prefix = [c] if c == keeper else [c, keeper]
        entries.append((Ballot(complete(prefix)), count))

    profile = PreferenceProfile(
        num_candidates=n,
        candidate_names=candidate_names(n),
        entries=tuple(entries),
        title=f"Disjoint STV and sequential RCV winners, S={s}, V={v}",
    )
    election = Election(profile, s)

    policy = TiePolicy(seed=0)
    by_stv = stv(election, policy, record_rounds=False)
    by_rcv = sequential_rcv(election, policy, record_rounds=False)
    if by_stv.lot_used or by_rcv.lot_used or by_stv.winner_set & by_rcv.winner_set:
        raise ConstructionError(
            f"construction for S={s}, V={v} did not produce disjoint winner sets"
        )
    logger.debug(
        "Constructed S=%d V=%d: STV %s, sequential RCV %s",
        s,
        v,
        sorted(by_stv.winners),
        sorted(by_rcv.winners),
    )
    return election
