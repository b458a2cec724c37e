from django.core.management.base import BaseCommand

from elections.voting.metrics import winner_set_diff
from elections.voting.tally import TiePolicy, sequential_rcv, stv

from ._options import (
    add_json,
    add_seed,
    domain_errors,
    load_election,
    names,
    positive_int,
    write_json,
)


def describe_diff(diff, seats):
    if diff == 0:
        return "diff=0 (identical)"
    if diff == seats:
        return f"diff={diff} (disjoint)"
    return f"diff={diff}"


class Command(BaseCommand):
    help = "Compare sequential RCV and STV winner sets for a BLT election"

    def add_arguments(self, parser):
        parser.add_argument("file", help="BLT ballot file")
        parser.add_argument("--seats", type=positive_int)
        add_seed(parser)
        add_json(parser)

    def handle(self, *args, **options):
        election = load_election(options["file"], options.get("seats"))
        policy = TiePolicy(seed=options["seed"])
        with domain_errors():
            by_rcv = sequential_rcv(election, policy, record_rounds=False)
            by_stv = stv(election, policy, record_rounds=False)
        diff = winner_set_diff(by_rcv.winners, by_stv.winners)
        profile = election.profile

        if options["json"]:
            write_json(
                self,
                {
                    "seats": election.seats,
                    "seqrcv": names(profile, by_rcv.winners),
                    "stv": names(profile, by_stv.winners),
                    "diff": diff,
                    "disjoint": diff == election.seats,
                    "lot_used": {"seqrcv": by_rcv.lot_used, "stv": by_stv.lot_used},
                },
            )
            return

        self.stdout.write(f"Sequential RCV: {', '.join(names(profile, by_rcv.winners))}")
        self.stdout.write(f"STV: {', '.join(names(profile, by_stv.winners))}")
        if by_rcv.lot_used or by_stv.lot_used:
            self.stdout.write(self.style.WARNING("⚠️ A tie was decided by lot"))
        self.stdout.write(describe_diff(diff, election.seats))
