"""
Monte Carlo comparison of sequential RCV and STV.
Usage: python manage.py simulate --model ic --candidates 3 --seats 2 --runs 100000 --seed 7
"""

from django.conf import settings
from django.core.management.base import BaseCommand

from elections.services.reports import AGREEMENT_COLUMNS, agreement_frame, append_csv, degrees_frame
from elections.services.simharness import ExperimentConfig, run_experiment
from elections.voting.genmodels import CultureKind

from ._options import add_json, add_seed, domain_errors, positive_int, write_json


class Command(BaseCommand):
    help = "Simulate random elections and compare sequential RCV with STV"

    def add_arguments(self, parser):
        parser.add_argument("--model", choices=[k.value for k in CultureKind], required=True)
        parser.add_argument("--candidates", type=positive_int, required=True)
        parser.add_argument("--seats", type=positive_int, required=True)
        parser.add_argument(
            "--voters", type=positive_int, help="Voters per election (default 1001)"
        )
        parser.add_argument("--runs", type=positive_int, required=True)
        add_seed(parser)
        parser.add_argument("--workers", type=positive_int, default=1)
        parser.add_argument(
            "--backend",
            choices=("local", "celery"),
            help="Where replicas run (default from SIMULATION_BACKEND)",
        )
        parser.add_argument(
            "--csv-dir", help="Append result rows to agreement.csv and degrees.csv here"
        )
        add_json(parser)

    def handle(self, *args, **options):
        with domain_errors():
            cfg = ExperimentConfig(
                model=CultureKind(options["model"]),
                n=options["candidates"],
                s=options["seats"],
                v=options.get("voters") or settings.SIMULATION_DEFAULT_VOTERS,
                runs=options["runs"],
                seed=options["seed"],
                workers=options["workers"],
                committee_includes_ties=settings.COMMITTEE_STATS_INCLUDE_TIES,
            )
            report = run_experiment(cfg, backend=options.get("backend"))

        if options.get("csv_dir"):
            with domain_errors():
                append_csv(agreement_frame([report]), f"{options['csv_dir']}/agreement.csv")
                append_csv(degrees_frame([report]), f"{options['csv_dir']}/degrees.csv")

        if options["json"]:
            write_json(self, report.to_dict())
            return

        self.stdout.write(
            f"{cfg.model.name} n={cfg.n} S={cfg.s} V={cfg.v} runs={cfg.runs} seed={cfg.seed}"
        )
        agreement = agreement_frame([report]).iloc[0]
        for column in AGREEMENT_COLUMNS[2:]:
            self.stdout.write(f"  {column}: {agreement[column]}")
        degrees = degrees_frame([report]).iloc[0]
        for column in ("mis_rcv", "mis_stv", "max_rcv", "max_stv"):
            self.stdout.write(f"  {column}: {degrees[column]}")
        self.stdout.write(self.style.SUCCESS(f"✅ {report.compared_runs} runs compared"))
