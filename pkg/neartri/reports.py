"""Per-instance verification records and the run report built from them."""

import json
import logging
import time
from dataclasses import asdict, dataclass, field

import networkx as nx

from .certificates import budget, is_tds
from .constructor import tds_neartri
from .embedding import classify, is_exception, parse
from .exceptions import LedgerBreach, NearTriError, SearchBudgetExceeded
from .mop_solver import gamma_t_mop
from .oracle import SearchLimits, gamma_t

logger = logging.getLogger(__name__)


@dataclass
class InstanceRecord:
    file: str
    n: int
    interior: int
    graph_class: str
    method: str
    size: int | None
    bound: int
    ok: bool
    millis: float
    gamma_t: int | None = None
    exception: bool = False
    error: str | None = None

    @property
    def ratio(self):
        if not self.size or not self.bound:
            return 0.0
        return self.size / self.bound

    def to_dict(self):
        data = asdict(self)
        data["class"] = data.pop("graph_class")
        return {key: value for key, value in data.items() if value is not None}


@dataclass
class RunReport:
    records: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.records)

    @property
    def failures(self):
        return sum(1 for record in self.records if not record.ok)

    @property
    def exceptions(self):
        return sum(1 for record in self.records if record.exception)

    @property
    def max_ratio(self):
        return max((record.ratio for record in self.records if not record.exception), default=0.0)

    def summary(self):
        return {
            "count": self.count,
            "failures": self.failures,
            "exceptions": self.exceptions,
            "max_ratio": round(self.max_ratio, 6),
        }

    def json_lines(self):
        lines = [json.dumps(record.to_dict(), sort_keys=True) for record in self.records]
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return lines


def _independent_check(T, vertices):
    """TDS check on a networkx copy, sharing no code path with the solver."""
    graph = T.to_networkx()
    return nx.is_connected(graph) and is_tds(graph, vertices)


def check_instance(job):
    """Solve one NTG instance and cross-check it; ``job`` is (label, text, limits)."""
    label, text, limits = job
    limits = limits or SearchLimits.from_settings()
    started = time.perf_counter()
    T = parse(text)
    record = InstanceRecord(
        file=label,
        n=T.n,
        interior=len(T.interior),
        graph_class=str(classify(T)),
        method="constructive",
        size=None,
        bound=budget(T.n),
        ok=False,
        millis=0.0,
    )
    try:
        if is_exception(T):
            record.method = "mop-dp"
            record.exception = True
            record.size = gamma_t_mop(T)
            record.ok = record.size == 5
        else:
            certificate = tds_neartri(T, limits)
            record.size = certificate.size
            record.ok = record.size <= record.bound and _independent_check(T, certificate.vertices)
            if T.n <= limits.max_n:
                record.gamma_t = gamma_t(T, limits)
                record.ok = record.ok and record.gamma_t <= record.size
    except (LedgerBreach, SearchBudgetExceeded) as exc:
        logger.error("Instance %s failed: %s", label, exc)
        record.error = str(exc)
    except NearTriError as exc:
        record.error = str(exc)
    record.millis = round((time.perf_counter() - started) * 1000, 3)
    return record
