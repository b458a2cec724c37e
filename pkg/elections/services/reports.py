"""CSV rendering of simulation and batch results."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from pathlib import Path

import pandas as pd

from .batch_analysis import BatchResult
from .simharness import SimulationReport

logger = logging.getLogger(__name__)

AGREEMENT_COLUMNS = [
    "n",
    "s",
    "same",
    "diff1",
    "diff2",
    "stv_cc",
    "rcv_cc",
    "cc_exists",
    "excluded_ties",
]
DEGREE_COLUMNS = ["n", "s", "mis_rcv", "mis_stv", "max_rcv", "max_stv"]


def agreement_frame(reports: Iterable[SimulationReport]) -> pd.DataFrame:
    rows = [
        {
            "n": r.config.n,
            "s": r.config.s,
            "same": str(r.pct_same_winners),
            "diff1": str(r.pct_diff_1),
            "diff2": str(r.pct_diff_2),
            "stv_cc": str(r.pct_stv_cc),
            "rcv_cc": str(r.pct_rcv_cc),
            "cc_exists": str(r.pct_cc_exists),
            "excluded_ties": r.excluded_ties,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=AGREEMENT_COLUMNS)


def degrees_frame(reports: Iterable[SimulationReport]) -> pd.DataFrame:
    rows = [
        {
            "n": r.config.n,
            "s": r.config.s,
            "mis_rcv": str(r.avg_misrep_rcv),
            "mis_stv": str(r.avg_misrep_stv),
            "max_rcv": str(r.avg_maxrep_rcv),
            "max_stv": str(r.avg_maxrep_stv),
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=DEGREE_COLUMNS)


def batch_frame(result: BatchResult) -> pd.DataFrame:
    rows = []
    for record in result.records:
        row = record.to_dict()
        for name in ("rcv_winners", "stv_winners", "committee"):
            row[name] = ";".join(row[name]) if row[name] is not None else ""
        rows.append(row)
    return pd.DataFrame(rows)


def append_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    """Append ``frame`` to ``path``, writing the header only for a new file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    new_file = not path.exists() or path.stat().st_size == 0
    frame.to_csv(path, mode="a", header=new_file, index=False)
    logger.debug("Wrote %d row(s) to %s", len(frame), path)
    return path
