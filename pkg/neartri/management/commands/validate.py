"""Check that an NTG file describes a valid near-triangulation."""

from django.core.management.base import BaseCommand

from neartri.cli import exit_codes, read_ntg
from neartri.embedding import classify


class Command(BaseCommand):
    help = "Validate an NTG file and print its class, order and boundary length"

    def add_arguments(self, parser):
        parser.add_argument("file", help="Path to the NTG file")

    def handle(self, *args, **options):
        with exit_codes():
            T = read_ntg(options["file"])
        self.stdout.write(
            self.style.SUCCESS(
                f"valid {classify(T)}: n={T.n}, h={T.h}, interior={len(T.interior)}"
            )
        )
