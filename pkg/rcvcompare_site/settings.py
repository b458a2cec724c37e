# flake8: noqa
"""
Django settings for the rcvcompare command-line project.

Everything is driven by environment variables (optionally from a .env file).
There is no database and no HTTP surface; the project exists to host the
``elections`` management commands and the Celery simulation workers.
"""

from __future__ import annotations

import os
from pathlib import Path

import sentry_sdk
from dotenv import load_dotenv
from sentry_sdk.integrations.celery import CeleryIntegration
from sentry_sdk.integrations.django import DjangoIntegration

# ────────────────────────────────────────────────────
# Paths & .env
# ────────────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(BASE_DIR / ".env")
ENV = os.getenv


def env_bool(key: str, default: str = "false") -> bool:
    return ENV(key, default).lower() in {"1", "true", "yes", "on"}


def env_int(key: str, default: int) -> int:
    value = ENV(key)
    return int(value) if value not in (None, "") else default


# ────────────────────────────────────────────────────
# Core flags & secret
# ────────────────────────────────────────────────────
DEBUG: bool = env_bool("DEBUG")

# No sessions or signed cookies are issued, so a local fallback is harmless.
SECRET_KEY = ENV("SECRET_KEY", "rcvcompare-local-only")

ALLOWED_HOSTS: list[str] = []

INSTALLED_APPS = [
    "elections",
]

DATABASES: dict = {}

USE_TZ = True
TIME_ZONE = "UTC"
LANGUAGE_CODE = "en-us"

# ────────────────────────────────────────────────────
# Sentry (error monitoring)
# ────────────────────────────────────────────────────
SENTRY_DSN = ENV("SENTRY_DSN", "")
if SENTRY_DSN:
    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[DjangoIntegration(), CeleryIntegration()],
        traces_sample_rate=float(ENV("SENTRY_TRACES_SAMPLE_RATE", "0.0")),
        sample_rate=float(ENV("SENTRY_SAMPLE_RATE", "1.0")),
        send_default_pii=False,
    )

# ────────────────────────────────────────────────────
# Logging
# ────────────────────────────────────────────────────
LOG_LEVEL = ENV("LOG_LEVEL", "DEBUG" if DEBUG else "INFO").upper()
LOG_FORMAT = ENV("LOG_FORMAT", "text").lower()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "text": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
        "json": {"()": "elections.utils.json_formatter.JsonFormatter"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "json" if LOG_FORMAT == "json" else "text",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        "elections": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "celery": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
    },
}

# ────────────────────────────────────────────────────
# Celery
# ────────────────────────────────────────────────────
CELERY_BROKER_URL = ENV("CELERY_BROKER_URL", ENV("REDIS_URL", "memory://"))
CELERY_RESULT_BACKEND = ENV("CELERY_RESULT_BACKEND", ENV("REDIS_URL", "cache+memory://"))
CELERY_ACCEPT_CONTENT = ["json"]
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_TASK_ALWAYS_EAGER = env_bool("CELERY_TASK_ALWAYS_EAGER")

# ────────────────────────────────────────────────────
# Simulation & analysis
# ────────────────────────────────────────────────────
SIMULATION_BACKEND = ENV("SIMULATION_BACKEND", "local").lower()
SIMULATION_CHUNK_SIZE = env_int("SIMULATION_CHUNK_SIZE", 2000)
SIMULATION_DEFAULT_VOTERS = env_int("SIMULATION_DEFAULT_VOTERS", 1001)
SIMULATION_GRID_MAX_CANDIDATES = env_int("SIMULATION_GRID_MAX_CANDIDATES", 6)
COMMITTEE_ENUMERATION_LIMIT = env_int("COMMITTEE_ENUMERATION_LIMIT", 20)
COMMITTEE_STATS_INCLUDE_TIES = env_bool("COMMITTEE_STATS_INCLUDE_TIES", "true")
PARTY_INDEPENDENT_LABEL = ENV("PARTY_INDEPENDENT_LABEL", "Ind")
PARTY_INDEPENDENTS_DISTINCT = env_bool("PARTY_INDEPENDENTS_DISTINCT", "true")
