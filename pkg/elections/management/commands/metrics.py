"""
Social-choice metrics for a BLT election.
Usage: python manage.py metrics FILE --seed 1 [--seats N] [--party-map parties.csv] [--json]
"""

import itertools

from django.conf import settings
from django.core.management.base import BaseCommand

from elections.utils.party_map import load_party_map
from elections.voting.exceptions import MissingPartyError
from elections.voting.metrics import (
    condorcet_committee,
    consecutive_share,
    degree_of_maximal_representation,
    degree_of_misrepresentation,
    pairwise_matrix,
    party_count,
)
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


class Command(BaseCommand):
    help = "Pairwise matrix, Condorcet committee, representation degrees and party counts"

    def add_arguments(self, parser):
        parser.add_argument("file", help="BLT ballot file")
        parser.add_argument("--seats", type=positive_int)
        add_seed(parser)
        parser.add_argument(
            "--party-map", help="CSV with candidate,party columns (overrides BLT suffixes)"
        )
        add_json(parser)

    def handle(self, *args, **options):
        election = load_election(options["file"], options.get("seats"))
        profile, s = election.profile, election.seats
        policy = TiePolicy(seed=options["seed"])

        with domain_errors():
            party_map = load_party_map(options["party_map"]) if options.get("party_map") else {}
            matrix = pairwise_matrix(profile)
            committee = condorcet_committee(
                matrix, s, limit=settings.COMMITTEE_ENUMERATION_LIMIT
            )
            outcomes = {
                "seqrcv": sequential_rcv(election, policy, record_rounds=False),
                "stv": stv(election, policy, record_rounds=False),
            }

        parties = {}
        for c in profile.candidates:
            party = party_map.get(profile.name(c)) or profile.party(c)
            if party:
                parties[c] = party

        degrees, party_counts, consecutive, winners = {}, {}, {}, {}
        for method, outcome in outcomes.items():
            winners[method] = names(profile, outcome.winners)
            degrees[method] = {
                "misrep": degree_of_misrepresentation(profile, s, outcome.winners),
                "maxrep": degree_of_maximal_representation(profile, s, outcome.winners),
            }
            try:
                party_counts[method] = party_count(
                    outcome.winners,
                    parties,
                    independents_distinct=settings.PARTY_INDEPENDENTS_DISTINCT,
                    independent_label=settings.PARTY_INDEPENDENT_LABEL,
                )
            except MissingPartyError:
                party_counts[method] = None
            consecutive[method] = {
                f"{profile.name(a)}|{profile.name(b)}": consecutive_share(profile, a, b)
                for a, b in itertools.combinations(sorted(outcome.winners), 2)
            }

        committee_names = names(profile, sorted(committee.committee)) if committee.exists else None

        if options["json"]:
            write_json(
                self,
                {
                    "seats": s,
                    "candidates": list(profile.candidate_names),
                    "pairwise": matrix.tolist(),
                    "condorcet_committee": committee_names,
                    "winners": winners,
                    "degrees": degrees,
                    "party_counts": party_counts,
                    "consecutive": consecutive,
                },
            )
            return

        active = sorted(profile.candidates)
        width = max(len(profile.name(c)) for c in active)
        self.stdout.write("Pairwise wins (row over column):")
        self.stdout.write(
            " " * width + "  " + "  ".join(profile.name(c).rjust(6) for c in active)
        )
        for a in active:
            cells = "  ".join(str(matrix.wins[a, b]).rjust(6) for b in active)
            self.stdout.write(f"{profile.name(a).ljust(width)}  {cells}")
        self.stdout.write("")
        self.stdout.write(
            f"Condorcet committee (size {s}): "
            + (", ".join(committee_names) if committee_names else "none")
        )
        for method, label in (("seqrcv", "Sequential RCV"), ("stv", "STV")):
            self.stdout.write("")
            self.stdout.write(self.style.SUCCESS(f"{label}: {', '.join(winners[method])}"))
            self.stdout.write(f"  misrepresentation: {degrees[method]['misrep']}%")
            self.stdout.write(f"  maximal representation: {degrees[method]['maxrep']}%")
            count = party_counts[method]
            self.stdout.write(f"  parties: {'n/a' if count is None else count}")
            for pair, share in consecutive[method].items():
                self.stdout.write(f"  ranked consecutively {pair}: {share}%")
