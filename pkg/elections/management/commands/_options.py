"""Argument and output helpers shared by the election commands."""

import argparse
import json
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
from django.core.management.base import CommandError
from django.core.serializers.json import DjangoJSONEncoder

from elections.voting.ballots import Election, read_blt
from elections.voting.exceptions import ElectionError
from elections.voting.metrics import Percentage

SCHEMA_VERSION = 1


def unsigned_64(value):
    try:
        seed = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {value!r}") from None
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return number


def add_seed(parser, *, required=True):
    parser.add_argument(
        "--seed",
        type=unsigned_64,
        required=required,
        help="Seed for the tie-break lot and random generators (unsigned 64-bit)",
    )


def add_json(parser):
    parser.add_argument(
        "--json", action="store_true", help="Emit machine-readable JSON instead of text"
    )


class ElectionJSONEncoder(DjangoJSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            return f"{o.numerator}/{o.denominator}"
        if isinstance(o, Percentage):
            return str(o)
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


def write_json(command, data):
    payload = {"schema_version": SCHEMA_VERSION, **data}
    command.stdout.write(json.dumps(payload, cls=ElectionJSONEncoder, indent=2))


@contextmanager
def domain_errors():
    """Report election and file errors as command failures (exit status 1)."""
    try:
        yield
    except ElectionError as exc:
        raise CommandError(str(exc)) from exc
    except OSError as exc:
        raise CommandError(f"{exc.filename or 'file'}: {exc.strerror or exc}") from exc


def load_election(path, seats=None) -> Election:
    with domain_errors():
        election = read_blt(path)
        if seats is not None:
            election = election.with_seats(seats)
    return election


def names(profile, candidates):
    return [profile.name(c) for c in candidates]
