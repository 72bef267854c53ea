"""Write one NTG file per isomorphism class of triangulated n-gons."""

from pathlib import Path

from django.core.management.base import BaseCommand

from neartri.cli import exit_codes
from neartri.embedding import serialize
from neartri.mop_solver import enumerate_mops


class Command(BaseCommand):
    help = "Enumerate the MOPs of order N up to isomorphism"

    def add_arguments(self, parser):
        parser.add_argument("n", type=int, help="Order of the polygon")
        parser.add_argument("-o", "--output", required=True, help="Directory to write into")

    def handle(self, *args, **options):
        n = options["n"]
        directory = Path(options["output"])
        with exit_codes():
            classes = enumerate_mops(n)
            directory.mkdir(parents=True, exist_ok=True)
            for i, M in enumerate(classes):
                (directory / f"mop_n{n}_{i:04d}.ntg").write_text(serialize(M))
        self.stdout.write(self.style.SUCCESS(f"Wrote {len(classes)} classes of order {n} to {directory}"))
