from pathlib import Path

from django.core.management.base import BaseCommand

from elections.voting.ballots import serialize_blt
from elections.voting.genmodels import construct_disjoint, minimum_disjoint_voters
from elections.voting.tally import sequential_rcv, stv

from ._options import add_json, domain_errors, names, positive_int, write_json


class Command(BaseCommand):
    help = "Build an election where STV and sequential RCV seat disjoint winner sets"

    def add_arguments(self, parser):
        parser.add_argument("--seats", type=positive_int, required=True)
        parser.add_argument("--voters", type=positive_int, required=True)
        parser.add_argument("--output", help="Write the BLT file here instead of stdout")
        add_json(parser)

    def handle(self, *args, **options):
        seats, voters = options["seats"], options["voters"]
        with domain_errors():
            election = construct_disjoint(seats, voters)
            minimum = minimum_disjoint_voters(seats)
            data = serialize_blt(election)
            if options.get("output"):
                Path(options["output"]).write_bytes(data)

        profile = election.profile
        if options["json"]:
            write_json(
                self,
                {
                    "seats": seats,
                    "voters": voters,
                    "minimum_voters": minimum,
                    "output": options.get("output"),
                    "stv_winners": names(profile, stv(election).winners),
                    "seqrcv_winners": names(profile, sequential_rcv(election).winners),
                    "blt": None if options.get("output") else data.decode("utf-8"),
                },
            )
        elif options.get("output"):
            self.stdout.write(self.style.SUCCESS(f"✅ Wrote {options['output']}"))
        else:
            self.stdout.write(data.decode("utf-8"), ending="")
