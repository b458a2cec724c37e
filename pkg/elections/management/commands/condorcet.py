from django.conf import settings
from django.core.management.base import BaseCommand

from elections.voting.metrics import condorcet_committee

from ._options import add_json, domain_errors, load_election, names, positive_int, write_json


class Command(BaseCommand):
    help = "Find the Condorcet committee of a given size, if one exists"

    def add_arguments(self, parser):
        parser.add_argument("file", help="BLT ballot file")
        parser.add_argument(
            "--size",
            type=positive_int,
            help="Committee size (defaults to the seat count in the file)",
        )
        parser.add_argument(
            "--search",
            choices=("fast", "exhaustive"),
            default="fast",
            help="Committee search strategy",
        )
        add_json(parser)

    def handle(self, *args, **options):
        election = load_election(options["file"])
        size = options.get("size") or election.seats
        profile = election.profile
        with domain_errors():
            result = condorcet_committee(
                profile,
                size,
                method=options["search"],
                limit=settings.COMMITTEE_ENUMERATION_LIMIT,
            )
        committee = names(profile, sorted(result.committee)) if result.exists else None

        if options["json"]:
            write_json(self, {"size": size, "condorcet_committee": committee})
        else:
            self.stdout.write(", ".join(committee) if committee else "none")
