"""Regenerate the cache of the two exceptional 12-vertex MOPs."""

import json
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand

from neartri.cli import exit_codes
from neartri.embedding import reset_exception_forms
from neartri.generators import derive_exceptions
from neartri.surgery import is_diagonal


class Command(BaseCommand):
    help = "Enumerate all MOPs of order 12 and store the chords of those with total domination number 5"

    def add_arguments(self, parser):
        parser.add_argument(
            "--output",
            help="Where to write the cache (default NT_EXCEPTIONS_CACHE)",
        )

    def handle(self, *args, **options):
        path = Path(options["output"] or settings.NT_EXCEPTIONS_CACHE)
        with exit_codes():
            found = derive_exceptions()
            chords = [
                [list(edge) for edge in sorted(e for e in M.edges if is_diagonal(M, e))]
                for M in found
            ]
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps({"n": 12, "chords": chords}, indent=2) + "\n")
        reset_exception_forms()
        self.stdout.write(self.style.SUCCESS(f"Wrote {len(chords)} exceptional classes to {path}"))
