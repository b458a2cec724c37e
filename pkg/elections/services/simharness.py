"""Monte Carlo comparison of sequential RCV and STV on random elections."""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from django.conf import settings

from ..voting.ballots import Election
from ..voting.exceptions import ElectionError
from ..voting.genmodels import MAX_CANDIDATES, CultureKind, CultureModel, replica_seed, sample
from ..voting.metrics import (
    Percentage,
    condorcet_committee,
    degree_of_maximal_representation,
    degree_of_misrepresentation,
    selects_committee,
    winner_set_diff,
)
from ..voting.tally import TiePolicy, sequential_rcv, stv

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    model: CultureKind
    n: int
    s: int
    v: int = 1001
    runs: int = 1
    seed: int = 0
    workers: int = 1
    committee_includes_ties: bool = True

    def __post_init__(self):
        if isinstance(self.model, str):
            object.__setattr__(self, "model", CultureKind(self.model.lower()))
        if self.runs < 1:
            raise ElectionError("an experiment needs at least one run")
        if self.n < 2:
            raise ElectionError("an experiment needs at least two candidates")
        if self.n > MAX_CANDIDATES:
            raise ElectionError(
                f"the samplers support at most {MAX_CANDIDATES} candidates, got {self.n}"
            )
        if not 1 <= self.s < self.n:
            raise ElectionError(f"seats must lie in [1, {self.n}), got {self.s}")
        if self.v < 1:
            raise ElectionError("an experiment needs at least one voter")
        if self.workers < 1:
            raise ElectionError("workers must be at least 1")
        if self.seed < 0:
            raise ElectionError("seed must be non-negative")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["model"] = self.model.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        return cls(**data)


@dataclass
class ExperimentTally:
    """Raw counters behind a report. Merging is associative and commutative."""

    runs: int = 0
    excluded_ties: int = 0
    diff_counts: Counter = field(default_factory=Counter)
    committee_runs: int = 0
    committee_exists: int = 0
    rcv_cc: int = 0
    stv_cc: int = 0
    degree_runs: int = 0
    misrep_rcv: Fraction = Fraction(0)
    misrep_stv: Fraction = Fraction(0)
    maxrep_rcv: Fraction = Fraction(0)
    maxrep_stv: Fraction = Fraction(0)

    _SUMS = ("misrep_rcv", "misrep_stv", "maxrep_rcv", "maxrep_stv")
    _COUNTS = (
        "runs",
        "excluded_ties",
        "committee_runs",
        "committee_exists",
        "rcv_cc",
        "stv_cc",
        "degree_runs",
    )

    def merge(self, other: ExperimentTally) -> ExperimentTally:
        merged = ExperimentTally(diff_counts=self.diff_counts + other.diff_counts)
        for name in self._COUNTS + self._SUMS:
            setattr(merged, name, getattr(self, name) + getattr(other, name))
        return merged

    def to_dict(self) -> dict:
        data = {name: getattr(self, name) for name in self._COUNTS}
        data.update({name: str(getattr(self, name)) for name in self._SUMS})
        data["diff_counts"] = {str(k): v for k, v in sorted(self.diff_counts.items())}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentTally:
        tally = cls(diff_counts=Counter({int(k): v for k, v in data["diff_counts"].items()}))
        for name in cls._COUNTS:
            setattr(tally, name, int(data[name]))
        for name in cls._SUMS:
            setattr(tally, name, Fraction(data[name]))
        return tally


@dataclass(frozen=True)
class SimulationReport:
    config: ExperimentConfig
    counts: ExperimentTally

    @property
    def compared_runs(self) -> int:
        return self.counts.runs - self.counts.excluded_ties

    @property
    def excluded_ties(self) -> int:
        return self.counts.excluded_ties

    @property
    def diff_counts(self) -> dict[int, int]:
        return dict(sorted(self.counts.diff_counts.items()))

    def pct_diff(self, k: int) -> Percentage:
        return Percentage(self.counts.diff_counts.get(k, 0), self.compared_runs)

    @property
    def pct_same_winners(self) -> Percentage:
        return self.pct_diff(0)

    @property
    def pct_diff_1(self) -> Percentage:
        return self.pct_diff(1)

    @property
    def pct_diff_2(self) -> Percentage:
        return self.pct_diff(2)

    @property
    def pct_cc_exists(self) -> Percentage:
        return Percentage(self.counts.committee_exists, self.counts.committee_runs)

    @property
    def pct_rcv_cc(self) -> Percentage:
        return Percentage(self.counts.rcv_cc, self.counts.committee_exists)

    @property
    def pct_stv_cc(self) -> Percentage:
        return Percentage(self.counts.stv_cc, self.counts.committee_exists)

    @property
    def avg_misrep_rcv(self) -> Percentage:
        return Percentage(self.counts.misrep_rcv, self.counts.degree_runs)

    @property
    def avg_misrep_stv(self) -> Percentage:
        return Percentage(self.counts.misrep_stv, self.counts.degree_runs)

    @property
    def avg_maxrep_rcv(self) -> Percentage:
        return Percentage(self.counts.maxrep_rcv, self.counts.degree_runs)

    @property
    def avg_maxrep_stv(self) -> Percentage:
        return Percentage(self.counts.maxrep_stv, self.counts.degree_runs)

    PERCENTAGES = (
        "pct_same_winners",
        "pct_diff_1",
        "pct_diff_2",
        "pct_stv_cc",
        "pct_rcv_cc",
        "pct_cc_exists",
        "avg_misrep_rcv",
        "avg_misrep_stv",
        "avg_maxrep_rcv",
        "avg_maxrep_stv",
    )

    def to_dict(self) -> dict:
        percentages = {}
        for name in self.PERCENTAGES:
            pct = getattr(self, name)
            percentages[name] = {
                "percent": str(pct),
                "count": str(pct.count),
                "denominator": pct.denominator,
            }
        return {
            "schema_version": 1,
            "config": self.config.to_dict(),
            "percentages": percentages,
            "excluded_ties": self.excluded_ties,
            "diff_counts": {str(k): v for k, v in self.diff_counts.items()},
            "counts": self.counts.to_dict(),
        }


def evaluate_replica(cfg: ExperimentConfig, index: int, tally: ExperimentTally) -> None:
    """Sample replica ``index`` and fold its comparison into ``tally``."""
    sampler_seq, tie_seq = replica_seed(cfg.seed, index).spawn(2)
    rng = np.random.Generator(np.random.PCG64(sampler_seq))
    tie_seed = int(tie_seq.generate_state(1, dtype=np.uint64)[0])

    profile = sample(CultureModel(cfg.model, cfg.n, cfg.v, cfg.seed), rng)
    election = Election(profile, cfg.s)
    policy = TiePolicy(seed=tie_seed)
    by_rcv = sequential_rcv(election, policy, record_rounds=False)
    by_stv = stv(election, policy, record_rounds=False)
    tied = by_rcv.lot_used or by_stv.lot_used

    tally.runs += 1
    if not tied or cfg.committee_includes_ties:
        tally.committee_runs += 1
        committee = condorcet_committee(profile, cfg.s)
        if committee.exists:
            tally.committee_exists += 1
            tally.rcv_cc += selects_committee(by_rcv.winners, committee)
            tally.stv_cc += selects_committee(by_stv.winners, committee)

    if tied:
        tally.excluded_ties += 1
        return

    diff = winner_set_diff(by_rcv.winners, by_stv.winners)
    tally.diff_counts[diff] += 1
    if diff:
        tally.degree_runs += 1
        v = profile.total_voters
        tally.misrep_rcv += Fraction(
            degree_of_misrepresentation(profile, cfg.s, by_rcv.winners).count, v
        )
        tally.misrep_stv += Fraction(
            degree_of_misrepresentation(profile, cfg.s, by_stv.winners).count, v
        )
        tally.maxrep_rcv += Fraction(
            degree_of_maximal_representation(profile, cfg.s, by_rcv.winners).count, v
        )
        tally.maxrep_stv += Fraction(
            degree_of_maximal_representation(profile, cfg.s, by_stv.winners).count, v
        )


def run_replica_chunk(cfg: ExperimentConfig, start: int, stop: int) -> ExperimentTally:
    tally = ExperimentTally()
    for index in range(start, stop):
        evaluate_replica(cfg, index, tally)
    return tally


def _chunks(runs: int, size: int) -> list[tuple[int, int]]:
    return [(start, min(start + size, runs)) for start in range(0, runs, size)]


def _run_local(cfg: ExperimentConfig, chunks) -> list[ExperimentTally]:
    if cfg.workers == 1:
        return [run_replica_chunk(cfg, a, b) for a, b in chunks]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(run_replica_chunk, cfg, a, b) for a, b in chunks]
        return [f.result() for f in futures]


def _run_celery(cfg: ExperimentConfig, chunks) -> list[ExperimentTally] | None:
    """Dispatch chunks to Celery workers; ``None`` means run locally instead."""
    from celery import group
    from celery.exceptions import OperationalError

    from ..tasks import simulate_chunk

    eager = getattr(settings, "CELERY_TASK_ALWAYS_EAGER", False)
    if settings.CELERY_BROKER_URL.startswith("memory") and not eager:
        logger.warning("⚠️ Celery broker is in-memory, running simulation locally")
        return None
    try:
        job = group(simulate_chunk.s(cfg.to_dict(), a, b) for a, b in chunks)
        payloads = job.apply_async().get()
    except (OperationalError, ConnectionError) as exc:
        logger.exception("Celery unavailable, running simulation locally", exc_info=exc)
        return None
    return [ExperimentTally.from_dict(p) for p in payloads]


def run_experiment(
    cfg: ExperimentConfig,
    *,
    backend: str | None = None,
    chunk_size: int | None = None,
) -> SimulationReport:
    """Run ``cfg.runs`` replicas and aggregate them into a report.

    The report depends only on the config: replicas draw from derived seeds
    and tallies merge exactly, so worker count and backend do not matter.
    """
    backend = backend or getattr(settings, "SIMULATION_BACKEND", "local")
    chunk_size = chunk_size or getattr(settings, "SIMULATION_CHUNK_SIZE", 2000)
    grid_max = getattr(settings, "SIMULATION_GRID_MAX_CANDIDATES", 6)
    if cfg.n > grid_max:
        logger.warning(
            "n=%d is beyond the calibrated grid (n <= %d); sampling still works but is slower",
            cfg.n,
            grid_max,
        )

    chunks = _chunks(cfg.runs, chunk_size)
    logger.info(
        "🚀 [run_experiment] %s n=%d s=%d v=%d runs=%d workers=%d backend=%s",
        cfg.model.name,
        cfg.n,
        cfg.s,
        cfg.v,
        cfg.runs,
        cfg.workers,
        backend,
    )
    logger.debug("Dispatching %d chunk(s) of up to %d replicas", len(chunks), chunk_size)
    started = time.perf_counter()

    tallies = None
    if backend == "celery":
        tallies = _run_celery(cfg, chunks)
    elif backend != "local":
        raise ElectionError(f"unknown simulation backend {backend!r}")
    if tallies is None:
        tallies = _run_local(cfg, chunks)

    total = ExperimentTally()
    for part in tallies:
        total = total.merge(part)

    elapsed = time.perf_counter() - started
    logger.info(
        "✅ [run_experiment] %d runs in %.1fs (%.0f runs/s), %d excluded for ties",
        total.runs,
        elapsed,
        total.runs / elapsed if elapsed else float("inf"),
        total.excluded_ties,
    )
    return SimulationReport(cfg, total)
