from pathlib import Path

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from elections.voting.ballots import Election, serialize_blt
from elections.voting.genmodels import CultureKind, CultureModel, replica_seed, sample

from ._options import add_json, add_seed, domain_errors, positive_int, write_json


class Command(BaseCommand):
    help = "Write random IC or IAC elections as BLT files"

    def add_arguments(self, parser):
        parser.add_argument("--model", choices=[k.value for k in CultureKind], required=True)
        parser.add_argument("--candidates", type=positive_int, required=True)
        parser.add_argument("--voters", type=positive_int, required=True)
        parser.add_argument("--seats", type=positive_int, required=True)
        add_seed(parser)
        parser.add_argument("--count", type=positive_int, default=1)
        parser.add_argument("--output-dir", help="Directory for the generated files")
        add_json(parser)

    def handle(self, *args, **options):
        count, output_dir = options["count"], options.get("output_dir")
        if count > 1 and not output_dir:
            raise CommandError("--output-dir is required when --count is above 1")

        written = []
        with domain_errors():
            model = CultureModel(
                CultureKind(options["model"]),
                options["candidates"],
                options["voters"],
                options["seed"],
            )
            for i in range(count):
                rng = np.random.Generator(np.random.PCG64(replica_seed(model.seed, i)))
                election = Election(sample(model, rng), options["seats"])
                data = serialize_blt(election)
                if not output_dir:
                    self.stdout.write(data.decode("utf-8"), ending="")
                    return
                path = Path(output_dir) / (
                    f"{model.kind.value}_n{model.n}_v{model.v}_s{options['seats']}"
                    f"_seed{model.seed}_{i:05d}.blt"
                )
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_bytes(data)
                written.append(str(path))

        if options["json"]:
            write_json(self, {"files": written})
        else:
            self.stdout.write(self.style.SUCCESS(f"✅ Wrote {len(written)} file(s) to {output_dir}"))
