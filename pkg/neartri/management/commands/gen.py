"""Write a generated near-triangulation as an NTG file."""

from pathlib import Path

from django.core.management.base import BaseCommand

from neartri.cli import exit_codes
from neartri.embedding import serialize
from neartri.generators import Family, GeneratorSpec


class Command(BaseCommand):
    help = "Generate an instance of a family and write it as NTG"

    def add_arguments(self, parser):
        parser.add_argument(
            "--family", required=True, choices=[family.value for family in Family]
        )
        parser.add_argument("--n", type=int, help="Order of the instance")
        parser.add_argument("--k", type=int, help="Block count (tight_mop, octahedra, exceptions)")
        parser.add_argument("--interior", type=int, default=0, help="Interior vertices (random_neartri)")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument(
            "-o",
            "--output",
            help="Directory to write into; stdout when omitted",
        )

    def handle(self, *args, **options):
        spec = GeneratorSpec(
            family=Family(options["family"]),
            n=options["n"],
            k=options["k"],
            interior=options["interior"],
            seed=options["seed"],
        )
        with exit_codes():
            T = spec.build()
            text = serialize(T)
            if options["output"] is None:
                self.stdout.write(text, ending="")
                return
            directory = Path(options["output"])
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / f"{self._stem(spec)}.ntg"
            path.write_text(text)
        self.stdout.write(self.style.SUCCESS(f"Wrote {path} (n={T.n})"))

    @staticmethod
    def _stem(spec):
        parts = [str(spec.family)]
        if spec.n is not None:
            parts.append(f"n{spec.n}")
        if spec.k is not None:
            parts.append(f"k{spec.k}")
        if spec.family is Family.RANDOM_NEARTRI:
            parts.append(f"i{spec.interior}")
        if spec.family in (Family.RANDOM_MOP, Family.RANDOM_NEARTRI):
            parts.append(f"s{spec.seed}")
        return "_".join(parts)
