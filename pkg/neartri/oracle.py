"""Exact minimum total domination by branch and bound, for small graphs.

Vertex sets are bitmasks. The search branches on the undominated vertex with
the fewest candidate dominators and tries each candidate in turn, forbidding
the candidates already tried in earlier sibling branches.
"""

import logging
import time
from dataclasses import dataclass
from itertools import combinations

from django.conf import settings

from .certificates import TdsCertificate
from .exceptions import SearchBudgetExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchLimits:
    max_n: int = 25
    node_budget: int = 5_000_000
    time_budget: float = 120.0

    @classmethod
    def from_settings(cls):
        return cls(
            max_n=settings.NT_ORACLE_MAX,
            node_budget=settings.NT_ORACLE_NODE_BUDGET,
            time_budget=settings.NT_ORACLE_TIME_BUDGET,
        )


def _neighborhoods(G):
    if hasattr(G, "rotation"):
        return G.n, [frozenset(rot) for rot in G.rotation]
    nodes = sorted(G.nodes)
    if nodes != list(range(len(nodes))):
        raise ValueError("oracle graphs must be labelled 0..n-1")
    return len(nodes), [frozenset(G.neighbors(v)) for v in nodes]


class _Search:
    def __init__(self, n, neighborhoods, limits, forced_in=0, forced_out=0):
        self.n = n
        self.full = (1 << n) - 1
        # neighbors[u] doubles as the set of vertices u dominates
        self.neighbors = [sum(1 << u for u in neighborhoods[v]) for v in range(n)]
        self.max_cover = max((bin(mask).count("1") for mask in self.neighbors), default=0)
        self.limits = limits
        self.forced_in = forced_in
        self.forced_out = forced_out
        self.nodes = 0
        self.started = time.monotonic()

    def _dominated(self, chosen):
        mask = 0
        x = chosen
        while x:
            low = x & -x
            mask |= self.neighbors[low.bit_length() - 1]
            x ^= low
        return mask

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.limits.node_budget:
            raise SearchBudgetExceeded(f"node budget {self.limits.node_budget} exhausted")
        if self.nodes % 4096 == 0 and time.monotonic() - self.started > self.limits.time_budget:
            raise SearchBudgetExceeded(f"time budget {self.limits.time_budget}s exhausted")

    def feasible(self, limit, forced_in=None, forced_out=None):
        """Some TDS with at most ``limit`` vertices under the constraints, as a bitmask."""
        chosen = self.forced_in if forced_in is None else forced_in
        banned = self.forced_out if forced_out is None else forced_out
        if chosen & banned:
            return None
        return self._branch(chosen, banned, self._dominated(chosen), limit)

    def _branch(self, chosen, banned, dominated, limit):
        self._tick()
        size = bin(chosen).count("1")
        missing = self.full & ~dominated
        if not missing:
            return chosen if size <= limit else None
        if size >= limit or self.max_cover == 0:
            return None
        lower = -(-bin(missing).count("1") // self.max_cover)
        if size + lower > limit:
            return None
        best_candidates = None
        x = missing
        while x:
            low = x & -x
            v = low.bit_length() - 1
            candidates = self.neighbors[v] & ~banned
            count = bin(candidates).count("1")
            if count == 0:
                return None
            if best_candidates is None or count < bin(best_candidates).count("1"):
                best_candidates = candidates
            x ^= low
        tried = 0
        x = best_candidates
        while x:
            low = x & -x
            u = low.bit_length() - 1
            found = self._branch(
                chosen | low, banned | tried, dominated | self.neighbors[u], limit
            )
            if found is not None:
                return found
            tried |= low
            x ^= low
        return None


def _bits(mask):
    return frozenset(v for v in range(mask.bit_length()) if mask >> v & 1)


def _mask(vertices):
    return sum(1 << v for v in set(vertices))


def _lexmin(search, size, forced_in, forced_out):
    for v in range(search.n):
        bit = 1 << v
        if (forced_in | forced_out) & bit:
            continue
        if search.feasible(size, forced_in | bit, forced_out) is not None:
            forced_in |= bit
        else:
            forced_out |= bit
    return forced_in


def exact_tds(G, must_contain=(), max_size=None, limits=None):
    """Minimum TDS of G containing ``must_contain`` with at most ``max_size`` vertices.

    Returns None when no such set exists. Among minimum sets the
    lexicographically smallest one is returned.
    """
    limits = limits or SearchLimits.from_settings()
    n, neighborhoods = _neighborhoods(G)
    if n > limits.max_n:
        raise SearchBudgetExceeded(f"oracle is capped at n <= {limits.max_n}, got {n}")
    forced = _mask(must_contain)
    search = _Search(n, neighborhoods, limits, forced_in=forced)
    cap = n if max_size is None else min(max_size, n)
    found = None
    for size in range(max(bin(forced).count("1"), 1), cap + 1):
        if search.feasible(size) is not None:
            found = size
            break
    if found is None:
        logger.debug("Oracle: no TDS within %s on n=%s (%s nodes)", cap, n, search.nodes)
        return None
    chosen = _lexmin(search, found, forced, 0)
    logger.debug("Oracle: gamma_t=%s on n=%s after %s nodes", found, n, search.nodes)
    return TdsCertificate(_bits(chosen))


def complete_tds(G, partial, limit, limits=None):
    """Smallest TDS containing ``partial`` with at most ``limit`` vertices, or None.

    No order cap applies: the search only branches on vertices left
    undominated by ``partial``.
    """
    limits = limits or SearchLimits.from_settings()
    n, neighborhoods = _neighborhoods(G)
    forced = _mask(partial)
    search = _Search(n, neighborhoods, limits, forced_in=forced)
    start = bin(forced).count("1")
    for size in range(start, limit + 1):
        chosen = search.feasible(size)
        if chosen is not None:
            return TdsCertificate(_bits(chosen))
    return None


def naive_tds(G):
    """Minimum TDS by plain subset enumeration."""
    n, neighborhoods = _neighborhoods(G)
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            if all(neighborhoods[v] & chosen for v in range(n)):
                return TdsCertificate(chosen)
    return None


def gamma_t(G, limits=None):
    certificate = exact_tds(G, limits=limits)
    return None if certificate is None else certificate.size
