"""
Compare sequential RCV and STV across many BLT files.
Usage: python manage.py batch FILE [FILE ...] --seed 1 [--s-override 2] [--csv out.csv] [--json]
"""

from django.core.management.base import BaseCommand

from elections.services.batch_analysis import run_batch
from elections.services.reports import batch_frame
from elections.utils.party_map import load_party_map

from ._options import add_json, add_seed, domain_errors, positive_int, write_json


class Command(BaseCommand):
    help = "Analyse a batch of BLT elections; failing files are reported, not fatal"

    def add_arguments(self, parser):
        parser.add_argument("files", nargs="*", help="BLT ballot files")
        add_seed(parser)
        parser.add_argument(
            "--s-override", type=positive_int, help="Use this seat count for every election"
        )
        parser.add_argument("--party-map", help="CSV with candidate,party columns")
        parser.add_argument("--csv", help="Write one row per election to this CSV file")
        add_json(parser)

    def handle(self, *args, **options):
        with domain_errors():
            party_map = load_party_map(options["party_map"]) if options.get("party_map") else None
        result = run_batch(
            options["files"],
            s_override=options.get("s_override"),
            seed=options["seed"],
            party_map=party_map,
        )

        if options.get("csv"):
            with domain_errors():
                batch_frame(result).to_csv(options["csv"], index=False)

        if options["json"]:
            write_json(self, result.to_dict())
            return

        for record in result.records:
            self.stdout.write(
                f"{record.file}: seqrcv={', '.join(record.rcv_winners)} "
                f"stv={', '.join(record.stv_winners)} diff={record.diff}"
            )
        for error in result.errors:
            self.stdout.write(self.style.ERROR(f"{error.file}: {error.error}"))
        aggregate = result.aggregate
        self.stdout.write(
            self.style.SUCCESS(
                f"📊 {aggregate['elections']} election(s), "
                f"{aggregate['different_winners']} with different winner sets, "
                f"{aggregate['errors']} error(s)"
            )
        )
