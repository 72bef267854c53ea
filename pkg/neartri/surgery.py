"""Local surgery: vertex deletion, edge contraction, boundary-edge removal and peeling.

Every operation works on oriented inner faces and rebuilds the result through
``embedding.from_faces``, so each output is fully revalidated.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .embedding import edge_key, from_faces, mirror, outer_cycle, start_at_min
from .exceptions import InvalidEmbedding, SurgeryError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeRef:
    u: int
    v: int

    def __post_init__(self):
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    def __iter__(self):
        return iter((self.u, self.v))

    def other(self, x):
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class Restriction:
    """A near-triangulation on fresh ids 0..m-1 with ``labels[new] == old``."""

    graph: object
    labels: tuple[int, ...]

    @cached_property
    def index(self):
        return {old: new for new, old in enumerate(self.labels)}

    def lift(self, vertices):
        return frozenset(self.labels[x] for x in vertices)

    def lower(self, vertices):
        return frozenset(self.index[x] for x in vertices)


@dataclass(frozen=True)
class Contraction:
    graph: object
    merged: int
    mapping: dict
    edge: EdgeRef


@dataclass(frozen=True)
class PeelResult:
    removed_boundary: tuple[int, ...]
    anchor: int
    interior_partner: int
    result: Restriction


def _rotate_to(cycle, first):
    if first not in cycle:
        return tuple(cycle)
    i = cycle.index(first)
    return tuple(cycle[i:]) + tuple(cycle[:i])


def _boundary_from(faces, first, reason="surgery breaks near-triangulation"):
    try:
        return _rotate_to(outer_cycle(faces), first)
    except InvalidEmbedding as exc:
        raise SurgeryError(f"{reason}: {exc}") from exc


def restrict(faces, reason="surgery breaks near-triangulation"):
    """Near-triangulation spanned by oriented faces given in the caller's ids."""
    faces = [tuple(face) for face in faces]
    if not faces:
        raise SurgeryError(f"{reason}: no faces left")
    survivors = sorted({x for face in faces for x in face})
    index = {old: new for new, old in enumerate(survivors)}
    relabelled = [tuple(index[x] for x in face) for face in faces]
    try:
        graph = from_faces(relabelled)
    except InvalidEmbedding as exc:
        raise SurgeryError(f"{reason}: {exc}") from exc
    return Restriction(graph, tuple(survivors))


def delete_vertices(T, vertices):
    removed = frozenset(vertices)
    faces = [face for face in T.inner_faces if not removed.intersection(face)]
    restriction = restrict(faces, "deletion breaks near-triangulation")
    if len(restriction.labels) != T.n - len(removed):
        raise SurgeryError("deletion breaks near-triangulation: a vertex lost all its faces")
    return restriction


def delete_vertex(T, v):
    if T.on_boundary(v):
        ok = _boundary_degree(T, v) == 2
    else:
        ok = T.degree(v) == 3
    if not ok:
        raise SurgeryError(
            f"deletion breaks near-triangulation: vertex {v} is neither an interior "
            "vertex of degree 3 nor a boundary vertex of degree 2 in T[C]"
        )
    if T.on_boundary(v):
        return delete_vertices(T, {v})
    a, b, c = T.rotation[v]
    faces = [face for face in T.inner_faces if v not in face]
    faces.append((a, c, b))
    return restrict(faces, "deletion breaks near-triangulation")


def _boundary_degree(T, v):
    return sum(1 for u in T.neighbors(v) if T.on_boundary(u))


def is_diagonal(T, e):
    u, v = e
    if not (T.on_boundary(u) and T.on_boundary(v)):
        return False
    return v not in (T.next_on_boundary(u), T.prev_on_boundary(u))


def _is_face(T, triple):
    key = frozenset(triple)
    if T.h == 3 and key == frozenset(T.boundary):
        return True
    return key in T.face_sets


def separating_triangles(T):
    found = []
    for u, v in sorted(T.edges):
        for w in sorted(T.neighbors(u) & T.neighbors(v)):
            if w > v and not _is_face(T, (u, v, w)):
                found.append((u, v, w))
    return found


def _separating_apexes(T, u, v):
    return sorted(
        w for w in T.neighbors(u) & T.neighbors(v) if not _is_face(T, (u, v, w))
    )


def is_contractible(T, e):
    u, v = e
    if is_diagonal(T, (u, v)):
        return False
    if _separating_apexes(T, u, v):
        return False
    # a triangular outer face would collapse to a digon
    return not (T.h == 3 and T.on_boundary(u) and T.on_boundary(v))


def contract_edge(T, e):
    u, v = e
    if not T.has_edge(u, v):
        raise SurgeryError(f"not contractible: ({u}, {v}) is not an edge")
    if not is_contractible(T, (u, v)):
        raise SurgeryError(f"not contractible: ({u}, {v})")
    keep = min(u, v)
    faces = []
    for face in T.inner_faces:
        if u in face and v in face:
            continue
        faces.append(tuple(keep if x in (u, v) else x for x in face))
    restriction = restrict(faces, "not contractible")
    merged = restriction.index[keep]
    mapping = {
        old: merged if old in (u, v) else restriction.index[old] for old in range(T.n)
    }
    logger.debug("Contracted (%s, %s) into %s on n=%s", u, v, merged, T.n)
    return Contraction(restriction.graph, merged, mapping, EdgeRef(u, v))


def remove_boundary_edge(T, e):
    u, v = e
    if T.on_boundary(u) and T.next_on_boundary(u) == v:
        first, second = u, v
    elif T.on_boundary(v) and T.next_on_boundary(v) == u:
        first, second = v, u
    else:
        raise SurgeryError(f"({u}, {v}) is not a boundary edge")
    apex = T.succ(first, second)
    if T.on_boundary(apex):
        raise SurgeryError(f"edge not reducible: apex {apex} of ({first}, {second}) is on C")
    triangle = frozenset((first, second, apex))
    faces = [face for face in T.inner_faces if frozenset(face) != triangle]
    try:
        return from_faces(faces, _boundary_from(faces, T.boundary[0], "edge not reducible"))
    except InvalidEmbedding as exc:
        raise SurgeryError(f"edge not reducible: {exc}") from exc


def glue_quadrilateral(T, z, y):
    """Attach a 4-vertex MOP on boundary edge (z, y); returns (graph, w1, w2).

    The new vertices take ids n and n+1 and the new edges are
    (z, w1), (z, w2), (w2, w1) and (y, w2).
    """
    w1, w2 = T.n, T.n + 1
    faces = list(T.inner_faces)
    if T.next_on_boundary(z) == y:
        faces += [(w1, z, w2), (y, w2, z)]
    elif T.prev_on_boundary(z) == y:
        faces += [(w2, y, z), (w1, w2, z)]
    else:
        raise SurgeryError(f"({z}, {y}) is not a boundary edge")
    try:
        graph = from_faces(faces, _boundary_from(faces, T.boundary[0]))
    except InvalidEmbedding as exc:
        raise SurgeryError(f"glue breaks near-triangulation: {exc}") from exc
    return graph, w1, w2


# Peeling


def _face_adjacency(faces):
    neighbors = {}
    for face in faces:
        for x in face:
            neighbors.setdefault(x, set()).update(y for y in face if y != x)
    return neighbors


def _ears(cycle, neighbors):
    on_cycle = set(cycle)
    return [x for x in cycle if len(neighbors[x] & on_cycle) == 2]


def _check_two_ears(cycle, ears, neighbors):
    if len(cycle) < 4:
        return
    for i, x in enumerate(ears):
        for y in ears[i + 1 :]:
            if y not in neighbors[x]:
                return
    raise SurgeryError(
        f"outerplanar boundary subgraph on {len(cycle)} vertices lacks two non-adjacent ears"
    )


def peel(T, start):
    """Remove degree-2 vertices of T[C] clockwise from ``start`` until an interior one goes.

    Works on T's own ids. The last removed vertex is the interior partner and the
    one before it the anchor; their edge is contractible in T.
    """
    if not T.on_boundary(start):
        raise SurgeryError(f"peel start {start} is not on C")
    if len(T.interior) < 2:
        raise SurgeryError("peel needs at least two interior vertices")
    for u, v in T.edges:
        if is_diagonal(T, (u, v)):
            raise SurgeryError(f"peel needs a diagonal-free graph, found ({u}, {v})")

    faces = list(T.inner_faces)
    removed = []
    while True:
        cycle = outer_cycle(faces)
        neighbors = _face_adjacency(faces)
        ears = set(_ears(cycle, neighbors))
        _check_two_ears(cycle, [x for x in cycle if x in ears], neighbors)
        i = cycle.index(start)
        order = cycle[i + 1 :] + cycle[:i]
        victim = next((x for x in order if x in ears), None)
        if victim is None:
            raise SurgeryError("peel found no removable vertex")
        faces = [face for face in faces if victim not in face]
        removed.append(victim)
        if not T.on_boundary(victim):
            break

    partner, anchor = removed[-1], removed[-2]
    logger.debug("Peeled %s from %s; pair (%s, %s)", removed, start, anchor, partner)
    return PeelResult(
        removed_boundary=tuple(removed[:-1]),
        anchor=anchor,
        interior_partner=partner,
        result=restrict(faces, "peel breaks near-triangulation"),
    )


def _flood_inside(T, seed, walls):
    """Inner faces reachable from ``seed`` without crossing an edge in ``walls``."""
    by_edge = {}
    for face in T.inner_faces:
        for k in range(3):
            by_edge.setdefault(edge_key(face[k], face[(k + 1) % 3]), []).append(face)
    seen = {seed}
    queue = deque([seed])
    while queue:
        face = queue.popleft()
        for k in range(3):
            key = edge_key(face[k], face[(k + 1) % 3])
            if key in walls:
                continue
            for other in by_edge[key]:
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
    return seen


def face_with(T, a, b):
    """The inner face containing the half-edge a -> b."""
    return start_at_min((a, b, T.succ(b, a)))


def find_interior_pair(T, u, other=None):
    """Interior v adjacent to u such that T - {u, v} is a near-triangulation.

    ``other`` is the boundary neighbor of u across the non-contractible edge;
    it defaults to u's counterclockwise neighbor on C.
    """
    if other is None:
        other = T.prev_on_boundary(u)
    if T.next_on_boundary(u) == other:
        T = mirror(T)
    elif T.prev_on_boundary(u) != other:
        raise SurgeryError(f"({other}, {u}) is not a boundary edge")
    if is_contractible(T, (u, other)):
        raise SurgeryError(f"edge is contractible: ({other}, {u})")
    if not T.interior:
        raise SurgeryError("find_interior_pair needs an interior vertex")

    seed = face_with(T, u, other)
    best = None
    if T.h == 3:
        # the outer triangle bounds every interior vertex
        best = (set(T.inner_faces), set(T.interior))
    for w in _separating_apexes(T, u, other):
        walls = {edge_key(u, other), edge_key(u, w), edge_key(other, w)}
        inside = _flood_inside(T, seed, walls)
        inner = {x for face in inside for x in face} - {u, other, w}
        if best is None or len(inner) < len(best[1]):
            best = (inside, inner)
    if best is None:
        raise SurgeryError(f"edge is contractible: ({other}, {u})")
    inside, inner = best
    if len(inner) == 1:
        (v,) = inner
        return v
    sub = restrict(inside)
    result = peel(sub.graph, sub.index[other])
    return sub.labels[result.interior_partner]


def find_contractible_at(T, u):
    """A contractible edge at boundary vertex u, interior neighbors first."""
    p = T.prev_on_boundary(u)
    x = T.succ(u, p)
    while x != p:
        if not T.on_boundary(x) and is_contractible(T, (u, x)):
            return EdgeRef(u, x)
        x = T.succ(u, x)
    for y in (p, T.next_on_boundary(u)):
        if is_contractible(T, (u, y)):
            return EdgeRef(u, y)
    raise SurgeryError(f"no contractible edge at {u}")
