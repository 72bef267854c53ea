"""Polygon regions cut out by the diagonals of T[C], their dual tree and terminal polygons."""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .embedding import GraphClass, classify, edge_key, start_at_min
from .exceptions import DecompositionError
from .surgery import EdgeRef, face_with, restrict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolygonRegion:
    corners: tuple[int, ...]
    faces: frozenset
    interior: frozenset
    terminal: bool = False

    @property
    def corner_vertices(self):
        return self.corners

    @property
    def interior_count(self):
        return len(self.interior)

    @property
    def sides(self):
        k = len(self.corners)
        return tuple(EdgeRef(self.corners[j], self.corners[(j + 1) % k]) for j in range(k))

    @property
    def lowest_corner(self):
        return min(self.corners)


@dataclass(frozen=True)
class PolygonDecomposition:
    graph: object
    regions: tuple[PolygonRegion, ...]
    dual: nx.Graph

    @property
    def terminal_regions(self):
        return [region for region in self.regions if region.terminal]


@dataclass(frozen=True)
class SplitPair:
    inner: object
    outer: object
    shared: EdgeRef


@dataclass(frozen=True)
class OuterPart:
    """T_out(P, d) for the side d = (start, end) of a terminal polygon, corners clockwise."""

    start: int
    end: int
    arc: tuple[int, ...]
    part: object

    @property
    def side(self):
        return EdgeRef(self.start, self.end)

    @cached_property
    def is_mop(self):
        return not self.part.graph.interior

    @property
    def order(self):
        return len(self.part.labels)


def boundary_subgraph(T):
    graph = nx.Graph()
    graph.add_nodes_from(T.boundary)
    graph.add_edges_from((u, v) for u, v in T.edges if T.on_boundary(u) and T.on_boundary(v))
    return graph


def boundary_arc(T, a, b):
    """Boundary vertices from a clockwise to b, both included."""
    i, j = T.boundary_position[a], T.boundary_position[b]
    length = (j - i) % T.h + 1
    return tuple(T.boundary[(i + k) % T.h] for k in range(length))


def _is_chord_edge(T, u, v):
    return T.on_boundary(u) and T.on_boundary(v)


def _flood(T, seeds, walls):
    by_edge = {}
    for face in T.inner_faces:
        for k in range(3):
            by_edge.setdefault(edge_key(face[k], face[(k + 1) % 3]), []).append(face)
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        face = queue.popleft()
        for k in range(3):
            key = edge_key(face[k], face[(k + 1) % 3])
            if walls(key):
                continue
            for other in by_edge[key]:
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
    return frozenset(seen)


def _polygon_cycles(T):
    """Inner faces of T[C], as traced under the restricted rotation (counterclockwise)."""
    rotation = {
        v: [u for u in T.rotation[v] if T.on_boundary(u)] for v in T.boundary
    }
    position = {v: {u: i for i, u in enumerate(rot)} for v, rot in rotation.items()}

    def succ(v, u):
        rot = rotation[v]
        return rot[(position[v][u] + 1) % len(rot)]

    seen = set()
    cycles = []
    for u in T.boundary:
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            cycle = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cycle.append(a)
                a, b = b, succ(b, a)
            cycles.append(tuple(cycle))
    outer = start_at_min(T.boundary)
    return [cycle for cycle in cycles if start_at_min(cycle) != outer]


def faces_beyond(T, start, end):
    """Faces of T beyond the side (start, end) of a polygon whose corners run clockwise."""
    wall = edge_key(start, end)
    return _flood(T, [face_with(T, start, end)], lambda key: key == wall)


def decompose(T):
    if classify(T) is not GraphClass.IRREDUCIBLE:
        raise DecompositionError("not irreducible")

    shells = []
    for cycle in _polygon_cycles(T):
        seeds = [face_with(T, cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))]
        faces = _flood(T, seeds, lambda key: _is_chord_edge(T, *key))
        interior = frozenset(x for face in faces for x in face if not T.on_boundary(x))
        corners = start_at_min(tuple(reversed(cycle)))
        shells.append((corners, faces, interior))

    regions = []
    for corners, faces, interior in shells:
        terminal = False
        if interior:
            k = len(corners)
            heavy = 0
            for j in range(k):
                a, b = corners[j], corners[(j + 1) % k]
                if T.next_on_boundary(a) == b:
                    raise DecompositionError(
                        f"side ({a}, {b}) of a non-empty polygon lies on C"
                    )
                outside = faces_beyond(T, a, b)
                if any(not T.on_boundary(x) for face in outside for x in face):
                    heavy += 1
            terminal = heavy <= 1
        regions.append(PolygonRegion(corners, faces, interior, terminal))

    dual = nx.Graph()
    dual.add_nodes_from(range(len(regions)))
    owner = {}
    for index, region in enumerate(regions):
        for side in region.sides:
            key = (side.u, side.v)
            if key in owner:
                dual.add_edge(owner[key], index, diagonal=side)
            else:
                owner[key] = index
    if not nx.is_tree(dual):
        raise DecompositionError("dual graph of the polygon regions is not a tree")
    if sum(region.interior_count for region in regions) != len(T.interior):
        raise DecompositionError("regions do not account for every interior vertex")
    if any(region.interior for region in regions) and not any(r.terminal for r in regions):
        raise DecompositionError("no terminal polygon among the non-empty regions")

    logger.debug(
        "Decomposed n=%s into %s regions, %s terminal",
        T.n,
        len(regions),
        sum(region.terminal for region in regions),
    )
    return PolygonDecomposition(T, tuple(regions), dual)


def select_terminal(decomposition):
    terminal = decomposition.terminal_regions
    if not terminal:
        raise DecompositionError("not terminal: no terminal polygon")
    return min(terminal, key=lambda region: region.lowest_corner)


def split_by_diagonal(T, d, P):
    a, b = d
    corners = P.corners
    k = len(corners)
    for j in range(k):
        start, end = corners[j], corners[(j + 1) % k]
        if {start, end} == {a, b}:
            break
    else:
        raise DecompositionError(f"({a}, {b}) is not a side of the polygon")
    wall = edge_key(start, end)
    outer = restrict(faces_beyond(T, start, end), "split breaks near-triangulation")
    inner = restrict(
        _flood(T, [face_with(T, end, start)], lambda key: key == wall),
        "split breaks near-triangulation",
    )
    if len(inner.labels) + len(outer.labels) != T.n + 2:
        raise DecompositionError(f"split at ({a}, {b}) does not share exactly the diagonal")
    return SplitPair(inner=inner, outer=outer, shared=EdgeRef(a, b))


def mops_around(T, P):
    """Outer parts of a terminal polygon clockwise, the special one last.

    The special part is the one with interior vertices, or else the first
    largest MOP.
    """
    if not P.terminal:
        raise DecompositionError("not terminal")
    corners = P.corners
    k = len(corners)
    parts = []
    for j in range(k):
        start, end = corners[j], corners[(j + 1) % k]
        part = restrict(faces_beyond(T, start, end), "split breaks near-triangulation")
        parts.append(OuterPart(start, end, boundary_arc(T, start, end), part))
    heavy = [j for j, part in enumerate(parts) if not part.is_mop]
    if len(heavy) > 1:
        raise DecompositionError("not terminal: two outer parts hold interior vertices")
    if heavy:
        last = heavy[0]
    else:
        largest = max(part.order for part in parts)
        last = next(j for j, part in enumerate(parts) if part.order == largest)
    return parts[last + 1 :] + parts[: last + 1]


def mop_split_diagonal(M, avoid):
    """A chord of the MOP M cutting off a side of 6 to 9 vertices that misses ``avoid``."""
    if M.n < 10:
        raise DecompositionError(f"mop_split_diagonal needs at least 10 vertices, got {M.n}")
    if M.interior:
        raise DecompositionError("mop_split_diagonal needs a MOP")
    x, y = avoid
    if M.next_on_boundary(y) == x:
        x, y = y, x
    if M.next_on_boundary(x) != y:
        raise DecompositionError(f"({x}, {y}) is not a boundary edge")
    n = M.n
    pos = M.boundary_position
    best = None
    for a, b in M.edges:
        if M.next_on_boundary(a) == b or M.next_on_boundary(b) == a:
            continue
        for start, end in ((a, b), (b, a)):
            span = (pos[end] - pos[start]) % n
            size = span + 1
            if not 6 <= size <= 9:
                continue
            if (pos[x] - pos[start]) % n < span:
                continue
            key = (size, edge_key(a, b))
            if best is None or key < best:
                best = key
    if best is None:
        raise DecompositionError("no chord cuts off 6 to 9 vertices")
    return EdgeRef(*best[1])


def decomposition_summary(T):
    graph_class = classify(T)
    summary = {"class": str(graph_class), "n": T.n, "h": T.h, "regions": [], "mops": []}
    if graph_class is not GraphClass.IRREDUCIBLE:
        return summary
    decomposition = decompose(T)
    terminal = select_terminal(decomposition)
    for region in decomposition.regions:
        summary["regions"].append(
            {
                "corners": list(region.corners),
                "interior_count": region.interior_count,
                "terminal": region.terminal,
                "selected": region is terminal,
            }
        )
    summary["mops"] = [
        {"side": [part.start, part.end], "order": part.order, "is_mop": part.is_mop}
        for part in mops_around(T, terminal)
    ]
    return summary
