import logging
from pathlib import Path

import pandas as pd

from ..voting.exceptions import ElectionError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = {"candidate", "party"}


def load_party_map(path: str | Path) -> dict[str, str]:
    """Read a ``candidate,party`` CSV into a name -> party mapping."""
    df = pd.read_csv(path, dtype=str, skipinitialspace=True)
    df.columns = [str(c).strip().lower() for c in df.columns]
    missing = REQUIRED_COLUMNS - set(df.columns)
    if missing:
        raise ElectionError(
            f"party map {path} is missing column(s): {', '.join(sorted(missing))}"
        )
    df = df.dropna(subset=["candidate", "party"])
    df["candidate"] = df["candidate"].str.strip()
    df["party"] = df["party"].str.strip()
    duplicated = df["candidate"][df["candidate"].duplicated()].tolist()
    if duplicated:
        raise ElectionError(f"party map {path} lists {duplicated[0]!r} twice")
    logger.debug("Loaded %d party assignments from %s", len(df), path)
    return dict(zip(df["candidate"], df["party"]))
