"""Print the polygon decomposition of an NTG instance."""

from django.core.management.base import BaseCommand

from neartri.cli import exit_codes, read_ntg, write_json
from neartri.decomposition import decomposition_summary
from neartri.embedding import to_dot


class Command(BaseCommand):
    help = "Show class, polygon regions and the outer MOPs of the selected terminal polygon"

    def add_arguments(self, parser):
        parser.add_argument("file", help="Path to the NTG file")
        parser.add_argument("--dot", action="store_true", help="Print Graphviz DOT instead")
        parser.add_argument("--pretty", action="store_true", help="Print a table instead of JSON")

    def handle(self, *args, **options):
        with exit_codes():
            T = read_ntg(options["file"])
            if options["dot"]:
                self.stdout.write(to_dot(T), ending="")
                return
            summary = decomposition_summary(T)
        if not options["pretty"]:
            write_json(self.stdout, summary)
            return
        self.stdout.write(f"{summary['class']}: n={summary['n']}, h={summary['h']}")
        for region in summary["regions"]:
            marker = "*" if region["selected"] else ("t" if region["terminal"] else " ")
            corners = " ".join(map(str, region["corners"]))
            self.stdout.write(f" {marker} [{corners}] interior={region['interior_count']}")
        if summary["mops"]:
            orders = ", ".join(
                f"{part['side'][0]}-{part['side'][1]}:{part['order']}" for part in summary["mops"]
            )
            self.stdout.write(f"outer parts: {orders}")
