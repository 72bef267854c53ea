"""Run the constructive solver over a generated family and cross-check every result."""

import argparse
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import django
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from neartri.cli import EXIT_BREACH, exit_codes
from neartri.embedding import serialize
from neartri.generators import (
    Family,
    gen_fan,
    gen_octahedra,
    gen_random_mop,
    gen_random_neartri,
    gen_tight_mop,
    gen_wheel,
)
from neartri.mop_solver import enumerate_mops
from neartri.oracle import SearchLimits
from neartri.reports import RunReport, check_instance

ENUMERATE = "enumerate_mops"
FAMILIES = (
    Family.FAN,
    Family.RANDOM_MOP,
    Family.RANDOM_NEARTRI,
    Family.TIGHT_MOP,
    Family.OCTAHEDRA,
    Family.WHEEL,
)


def parse_range(value):
    """`a..b` (inclusive) or a single integer."""
    try:
        if ".." in value:
            low, high = (int(x) for x in value.split("..", 1))
        else:
            low = high = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {value!r}") from None
    if low > high:
        raise argparse.ArgumentTypeError(f"empty range {value!r}")
    return range(low, high + 1)


def family_instances(family, sizes, samples, seed):
    """(label, instance) pairs; ``sizes`` ranges over n, or over k for the block families."""
    rng = random.Random(seed)
    for size in sizes:
        match family:
            case Family.FAN:
                yield f"fan-n{size}", gen_fan(size)
            case Family.WHEEL:
                yield f"wheel-n{size}", gen_wheel(size - 1)
            case Family.TIGHT_MOP:
                yield f"tight_mop-k{size}", gen_tight_mop(size)
            case Family.OCTAHEDRA:
                yield f"octahedra-k{size}", gen_octahedra(size)
            case Family.RANDOM_MOP:
                for i in range(samples):
                    yield f"random_mop-n{size}-{i}", gen_random_mop(size, rng.randrange(2**32))
            case Family.RANDOM_NEARTRI:
                for i in range(samples):
                    interior = rng.randint(0, size - 4)
                    instance = gen_random_neartri(size, interior, rng.randrange(2**32))
                    yield f"random_neartri-n{size}-{i}", instance
            case _:
                for i, M in enumerate(enumerate_mops(size)):
                    yield f"enumerate_mops-n{size}-{i}", M


class Command(BaseCommand):
    help = "Verify the floor(2n/5) bound and the certificates over an instance family"

    def add_arguments(self, parser):
        parser.add_argument(
            "--family",
            required=True,
            choices=[family.value for family in FAMILIES] + [ENUMERATE],
        )
        parser.add_argument(
            "--n-range",
            type=parse_range,
            required=True,
            help="Orders a..b, or block counts for tight_mop and octahedra",
        )
        parser.add_argument("--samples", type=int, default=10, help="Instances per order for random families")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument(
            "--oracle-max",
            type=int,
            help="Cross-check against exact search up to this order (default NT_ORACLE_MAX)",
        )
        parser.add_argument("--workers", type=int, help="Worker processes (default NT_VERIFY_WORKERS)")
        parser.add_argument("--pretty", action="store_true", help="Print a table instead of JSON lines")

    def handle(self, *args, **options):
        family = options["family"]
        if family != ENUMERATE:
            family = Family(family)
        limits = SearchLimits.from_settings()
        if options["oracle_max"] is not None:
            limits = replace(limits, max_n=options["oracle_max"])
        workers = options["workers"] or settings.NT_VERIFY_WORKERS

        with exit_codes():
            jobs = [
                (label, serialize(T), limits)
                for label, T in family_instances(
                    family, options["n_range"], options["samples"], options["seed"]
                )
            ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers, initializer=django.setup) as pool:
                records = list(pool.map(check_instance, jobs))
        else:
            records = [check_instance(job) for job in jobs]
        report = RunReport(records)

        if options["pretty"]:
            self._table(report)
        else:
            for line in report.json_lines():
                self.stdout.write(line)
        if report.failures:
            raise CommandError(
                f"{report.failures} of {report.count} instances failed", returncode=EXIT_BREACH
            )

    def _table(self, report):
        for record in report.records:
            status = self.style.SUCCESS("ok") if record.ok else self.style.ERROR("FAIL")
            size = "-" if record.size is None else record.size
            exact = "-" if record.gamma_t is None else record.gamma_t
            self.stdout.write(
                f"{record.file:<28} {record.graph_class:<12} n={record.n:<4} "
                f"size={size:<4} exact={exact:<4} bound={record.bound:<4} {status}"
            )
        summary = report.summary()
        self.stdout.write(
            f"{summary['count']} instances, {summary['failures']} failures, "
            f"{summary['exceptions']} exceptions, max ratio {summary['max_ratio']}"
        )
