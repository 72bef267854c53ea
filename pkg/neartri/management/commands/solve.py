"""Compute a total dominating set for an NTG file and print its certificate."""

from django.core.management.base import BaseCommand

from neartri.certificates import CaseId, ReductionStep, TdsCertificate, budget
from neartri.cli import exit_codes, read_ntg, write_json
from neartri.constructor import solve_exact, tds_neartri
from neartri.embedding import GraphClass, classify
from neartri.exceptions import NotApplicable
from neartri.mop_solver import exact_tds_mop

METHODS = ("constructive", "exact", "mop-dp")


def solve_mop(T):
    if classify(T) is not GraphClass.MOP:
        raise NotApplicable("mop-dp needs a maximal outerplanar graph")
    certificate = exact_tds_mop(T)
    step = ReductionStep(CaseId.BASE_MOP, T.n, 0, 0, budget(T.n))
    return TdsCertificate(certificate.vertices, (step,))


class Command(BaseCommand):
    help = "Solve an NTG instance and print a JSON certificate"

    def add_arguments(self, parser):
        parser.add_argument("file", help="Path to the NTG file")
        parser.add_argument("--method", choices=METHODS, default="constructive")
        parser.add_argument("--pretty", action="store_true", help="Print a table instead of JSON")

    def handle(self, *args, **options):
        with exit_codes():
            T = read_ntg(options["file"])
            match options["method"]:
                case "constructive":
                    certificate = tds_neartri(T)
                case "exact":
                    certificate = solve_exact(T)
                case "mop-dp":
                    certificate = solve_mop(T)
        if options["pretty"]:
            self._table(T, certificate)
        else:
            write_json(self.stdout, certificate.to_dict(T.n))

    def _table(self, T, certificate):
        self.stdout.write(f"n={T.n} size={certificate.size} bound={budget(T.n)}")
        self.stdout.write(f"vertices: {' '.join(map(str, sorted(certificate.vertices)))}")
        for step in certificate.trace:
            indent = "  " * step.depth
            self.stdout.write(
                f"{indent}{step.case_id:<14} n={step.n:<4} k={step.size_removed:<3} "
                f"d={step.budget_spent:<3} bound={step.bound}"
            )
        self.stdout.write(self.style.SUCCESS(f"{certificate.size} <= {budget(T.n)}"))
