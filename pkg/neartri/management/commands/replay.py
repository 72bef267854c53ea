"""Re-check a certificate against its NTG file without trusting the solver."""

import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from neartri.certificates import TdsCertificate, budget, is_tds
from neartri.cli import EXIT_VALIDATION, exit_codes, read_ntg
from neartri.embedding import is_exception


def replay(T, data):
    """The reasons the certificate fails on T; empty when it holds."""
    problems = []
    certificate = TdsCertificate.from_dict(data)
    if data.get("n", T.n) != T.n:
        problems.append(f"certificate is for n={data['n']}, graph has n={T.n}")
    outside = sorted(v for v in certificate.vertices if not 0 <= v < T.n)
    if outside:
        problems.append(f"vertices {outside} are not in the graph")
    elif not is_tds(T.to_networkx(), certificate.vertices):
        problems.append("the vertex set is not a total dominating set")
    if not is_exception(T) and certificate.size > budget(T.n):
        problems.append(f"size {certificate.size} exceeds floor(2n/5) = {budget(T.n)}")
    for step in certificate.trace:
        if step.size_removed and budget(step.n - step.size_removed) + step.budget_spent > budget(step.n):
            problems.append(f"{step.case_id} at n={step.n} overspends its budget")
    return problems


class Command(BaseCommand):
    help = "Validate a JSON certificate against an NTG file"

    def add_arguments(self, parser):
        parser.add_argument("certificate", help="Path to the certificate JSON")
        parser.add_argument("file", help="Path to the NTG file")

    def handle(self, *args, **options):
        with exit_codes():
            data = json.loads(Path(options["certificate"]).read_text())
            T = read_ntg(options["file"])
            try:
                problems = replay(T, data)
            except (KeyError, TypeError, ValueError) as exc:
                raise CommandError(f"malformed certificate: {exc}", returncode=EXIT_VALIDATION) from exc
        if problems:
            for problem in problems:
                self.stderr.write(self.style.ERROR(problem))
            raise CommandError("certificate rejected", returncode=EXIT_VALIDATION)
        self.stdout.write(self.style.SUCCESS(f"ok: {len(data['vertices'])} <= {budget(T.n)}"))
