"""Exact minimum total domination on maximal outerplanar graphs.

The solver runs an interval DP over the polygon triangulation: the sub-polygon
on boundary positions i..j is cut off by the edge (i, j) and split by its
unique apex k. Each sub-result is keyed by whether i and j are in the set and
whether they already have a dominator strictly inside the interval.
"""

import logging
from functools import lru_cache
from math import comb

from .certificates import TdsCertificate, is_tds
from .embedding import canonical_form, from_faces
from .exceptions import GeneratorError

logger = logging.getLogger(__name__)

ENUMERATE_MAX_N = 16
INF = float("inf")


def catalan(m):
    return comb(2 * m, m) // (m + 1)


class _IntervalDP:
    def __init__(self, M, forced_in=(), forced_out=()):
        if M.interior:
            raise ValueError("the interval DP needs a MOP")
        self.M = M
        self.order = M.boundary
        pos = M.boundary_position
        self.adj = [set() for _ in range(M.n)]
        for u, v in M.edges:
            self.adj[pos[u]].add(pos[v])
            self.adj[pos[v]].add(pos[u])
        self.choices = {}
        for i, v in enumerate(self.order):
            if v in forced_in and v in forced_out:
                self.choices[i] = ()
            elif v in forced_in:
                self.choices[i] = (1,)
            elif v in forced_out:
                self.choices[i] = (0,)
            else:
                self.choices[i] = (0, 1)
        self.memo = {}

    def apex(self, i, j):
        return next(k for k in self.adj[i] & self.adj[j] if i < k < j)

    def table(self, i, j, xi, xj):
        """{(di, dj): (cost, back)} for the open interval (i, j)."""
        key = (i, j, xi, xj)
        if key in self.memo:
            return self.memo[key]
        if j == i + 1:
            result = {(False, False): (0, None)}
        else:
            k = self.apex(i, j)
            result = {}
            for xk in self.choices[k]:
                left = self.table(i, k, xi, xk)
                right = self.table(k, j, xk, xj)
                for (di, dkl), (cl, _) in left.items():
                    for (dkr, dj), (cr, _) in right.items():
                        if not (dkl or dkr or xi or xj):
                            continue
                        state = (di or bool(xk), dj or bool(xk))
                        cost = cl + cr + xk
                        if state not in result or cost < result[state][0]:
                            result[state] = (cost, (k, xk, (di, dkl), (dkr, dj)))
        self.memo[key] = result
        return result

    def solve(self):
        """Minimum (size, set) or None when the constraints are infeasible."""
        last = len(self.order) - 1
        best = None
        for x0 in self.choices[0]:
            for xl in self.choices[last]:
                for (d0, dl), (cost, _) in self.table(0, last, x0, xl).items():
                    if not (d0 or xl) or not (dl or x0):
                        continue
                    total = cost + x0 + xl
                    if best is None or total < best[0]:
                        best = (total, x0, xl, (d0, dl))
        if best is None:
            return None
        total, x0, xl, state = best
        chosen = {i for i, x in ((0, x0), (last, xl)) if x}
        self._collect(0, last, x0, xl, state, chosen)
        return total, frozenset(self.order[i] for i in chosen)

    def _collect(self, i, j, xi, xj, state, chosen):
        _, back = self.table(i, j, xi, xj)[state]
        if back is None:
            return
        k, xk, left, right = back
        if xk:
            chosen.add(k)
        self._collect(i, k, xi, xk, left, chosen)
        self._collect(k, j, xk, xj, right, chosen)


def mop_tds_with(M, forced_in=(), forced_out=()):
    """A minimum TDS of M containing ``forced_in`` and avoiding ``forced_out``, or None."""
    result = _IntervalDP(M, set(forced_in), set(forced_out)).solve()
    if result is None:
        return None
    return TdsCertificate(result[1])


def gamma_t_mop(M):
    return _IntervalDP(M).solve()[0]


def lexmin_mop_tds(M, forced_in=(), forced_out=(), size=None):
    """Lexicographically smallest TDS of the given (default: minimum) size under constraints."""
    forced_in, forced_out = set(forced_in), set(forced_out)
    result = _IntervalDP(M, forced_in, forced_out).solve()
    if result is None:
        return None
    target = result[0] if size is None else size
    if result[0] > target:
        return None
    for v in range(M.n):
        if v in forced_in or v in forced_out:
            continue
        trial = _IntervalDP(M, forced_in | {v}, forced_out).solve()
        if trial is not None and trial[0] <= target:
            forced_in.add(v)
        else:
            forced_out.add(v)
    vertices = frozenset(forced_in)
    assert is_tds(M, vertices)
    return TdsCertificate(vertices)


def exact_tds_mop(M):
    certificate = lexmin_mop_tds(M)
    logger.debug("MOP n=%s solved exactly with %s vertices", M.n, certificate.size)
    return certificate


def pentagon_tds_with(M, u):
    """A 2-vertex TDS of a pentagon MOP that contains u."""
    if M.n != 5 or M.interior:
        raise ValueError("pentagon_tds_with needs a MOP of order 5")
    certificate = lexmin_mop_tds(M, forced_in={u}, size=2)
    if certificate is None or certificate.size != 2:
        raise ValueError(f"pentagon has no 2-vertex TDS containing {u}")
    return certificate


def hexagon_tds_pair(M, ui, uj):
    """A 2-vertex TDS of a hexagon MOP containing u_i or u_{i+1}."""
    if M.n != 6 or M.interior:
        raise ValueError("hexagon_tds_pair needs a MOP of order 6")
    if uj not in (M.next_on_boundary(ui), M.prev_on_boundary(ui)):
        raise ValueError(f"({ui}, {uj}) is not a boundary edge")
    for anchor in (ui, uj):
        certificate = lexmin_mop_tds(M, forced_in={anchor}, size=2)
        if certificate is not None and certificate.size == 2:
            return certificate
    raise ValueError(f"hexagon has no 2-vertex TDS containing {ui} or {uj}")


# Construction and enumeration


def mop_from_chords(n, chords):
    """MOP on the convex polygon 0..n-1 (boundary clockwise in id order) with the given chords."""
    adj = [set() for _ in range(n)]
    for i in range(n):
        adj[i].add((i + 1) % n)
        adj[(i + 1) % n].add(i)
    for a, b in chords:
        adj[a].add(b)
        adj[b].add(a)
    faces = []
    for a in range(n):
        for b in adj[a]:
            if b <= a:
                continue
            for c in adj[a] & adj[b]:
                if c > b:
                    faces.append((c, b, a))
    return from_faces(faces, tuple(range(n)))


def raw_mop_chords(n):
    """Every triangulation of the convex n-gon as a frozenset of chords."""

    @lru_cache(maxsize=None)
    def between(i, j):
        if j - i < 2:
            return (frozenset(),)
        found = []
        for k in range(i + 1, j):
            extra = set()
            if k - i >= 2:
                extra.add((i, k))
            if j - k >= 2:
                extra.add((k, j))
            for left in between(i, k):
                for right in between(k, j):
                    found.append(left | right | extra)
        return tuple(found)

    yield from between(0, n - 1)


def enumerate_mops(n):
    """One MOP per isomorphism class of triangulated convex n-gons."""
    if not 3 <= n <= ENUMERATE_MAX_N:
        raise GeneratorError(f"enumerate_mops supports 3 <= n <= {ENUMERATE_MAX_N}, got {n}")
    seen = set()
    classes = []
    raw = 0
    for chords in raw_mop_chords(n):
        raw += 1
        M = mop_from_chords(n, chords)
        form = canonical_form(M)
        if form not in seen:
            seen.add(form)
            classes.append(M)
    logger.info("Enumerated %s triangulations of the %s-gon, %s classes", raw, n, len(classes))
    return classes
