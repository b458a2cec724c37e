"""
Tabulate a BLT ballot file.
Usage: python manage.py tally FILE --method stv --seats 2 --seed 1 [--scots-5dp] [--json]
"""

from django.core.management.base import BaseCommand

from elections.voting.formatting import outcome_to_dict, render_round_tables
from elections.voting.tally import METHODS, TiePolicy, tabulate

from ._options import (
    add_json,
    add_seed,
    domain_errors,
    load_election,
    names,
    positive_int,
    write_json,
)

METHOD_LABELS = {"irv": "IRV", "seqrcv": "Sequential RCV", "stv": "STV"}


class Command(BaseCommand):
    help = "Tabulate a BLT election with IRV, sequential RCV or STV"

    def add_arguments(self, parser):
        parser.add_argument("file", help="BLT ballot file")
        parser.add_argument("--method", choices=METHODS, required=True)
        parser.add_argument(
            "--seats", type=positive_int, help="Override the seat count in the file header"
        )
        add_seed(parser)
        parser.add_argument(
            "--scots-5dp",
            action="store_true",
            help="Truncate STV transfer values to 5 decimal places",
        )
        add_json(parser)

    def handle(self, *args, **options):
        election = load_election(options["file"], options.get("seats"))
        method = options["method"]
        with domain_errors():
            outcome = tabulate(
                method,
                election,
                TiePolicy(seed=options["seed"]),
                truncate_transfers=options["scots_5dp"],
            )

        profile = election.profile
        if options["json"]:
            data = outcome_to_dict(outcome, profile)
            data["seats"] = 1 if method == "irv" else election.seats
            data["voters"] = profile.total_voters
            write_json(self, data)
            return

        self.stdout.write(f"Election: {profile.title or options['file']}")
        self.stdout.write(f"Method: {METHOD_LABELS[method]}")
        if method != "irv":
            self.stdout.write(f"Seats: {election.seats}")
        self.stdout.write(f"Voters: {profile.total_voters}")
        self.stdout.write("")
        self.stdout.write(render_round_tables(outcome, profile))
        self.stdout.write("")
        if outcome.lot_used:
            self.stdout.write(self.style.WARNING("⚠️ A tie was decided by lot"))
        self.stdout.write(
            self.style.SUCCESS(f"Winners: {', '.join(names(profile, outcome.winners))}")
        )
