"""Near-triangulations as combinatorial embeddings.

A near-triangulation is stored as a rotation system (clockwise neighbor order
around every vertex) plus its outer boundary cycle, also clockwise. The face
to the left of the half-edge u -> v continues with v -> succ(v, u), where
succ(v, u) is the clockwise successor of u around v. Under this rule the outer
face is traversed in boundary order and every inner face is a 3-cycle.
"""

import enum
import json
import logging
import re
from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from pathlib import Path

import networkx as nx
from django.conf import settings

from .exceptions import (
    CanonicalFormTooLarge,
    InvalidEmbedding,
    NtgSyntaxError,
)

logger = logging.getLogger(__name__)

NTG_VERSION = 1
CANONICAL_MAX_N = 16


class GraphClass(enum.StrEnum):
    MOP = "MOP"
    REDUCIBLE = "Reducible"
    IRREDUCIBLE = "Irreducible"


@dataclass(frozen=True)
class Face:
    vertices: tuple[int, ...]
    outer: bool = False


def edge_key(u, v):
    return (u, v) if u < v else (v, u)


def start_at_min(cycle):
    cycle = tuple(cycle)
    if not cycle:
        return cycle
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def same_cycle(a, b):
    """True when two vertex sequences are the same cyclic sequence."""
    return len(a) == len(b) and start_at_min(a) == start_at_min(b)


@dataclass(frozen=True)
class NearTriangulation:
    """A validated near-triangulation; construction fails unless every invariant holds."""

    n: int
    rotation: tuple[tuple[int, ...], ...]
    boundary: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "rotation", tuple(start_at_min(r) for r in self.rotation)
        )
        object.__setattr__(self, "boundary", tuple(self.boundary))
        _validate(self)

    # Local structure

    @cached_property
    def _index(self):
        return [{u: i for i, u in enumerate(rot)} for rot in self.rotation]

    @cached_property
    def adjacency(self):
        return tuple(frozenset(rot) for rot in self.rotation)

    def neighbors(self, v):
        return self.adjacency[v]

    def degree(self, v):
        return len(self.rotation[v])

    def has_edge(self, u, v):
        return v in self.adjacency[u]

    def succ(self, v, u):
        """Clockwise successor of u in the rotation of v."""
        rot = self.rotation[v]
        return rot[(self._index[v][u] + 1) % len(rot)]

    def pred(self, v, u):
        rot = self.rotation[v]
        return rot[(self._index[v][u] - 1) % len(rot)]

    @cached_property
    def edges(self):
        return frozenset(
            edge_key(u, v) for u in range(self.n) for v in self.rotation[u]
        )

    @property
    def h(self):
        return len(self.boundary)

    @cached_property
    def boundary_position(self):
        return {v: i for i, v in enumerate(self.boundary)}

    def on_boundary(self, v):
        return v in self.boundary_position

    def next_on_boundary(self, v):
        return self.boundary[(self.boundary_position[v] + 1) % self.h]

    def prev_on_boundary(self, v):
        return self.boundary[(self.boundary_position[v] - 1) % self.h]

    @cached_property
    def interior(self):
        return tuple(v for v in range(self.n) if v not in self.boundary_position)

    @property
    def boundary_edges(self):
        b = self.boundary
        return tuple((b[i], b[(i + 1) % self.h]) for i in range(self.h))

    def apex(self, i):
        """Third vertex of the inner triangle on boundary edge (u_i, u_{i+1})."""
        u, v = self.boundary[i % self.h], self.boundary[(i + 1) % self.h]
        return self.succ(u, v)

    @cached_property
    def _faces(self):
        return _trace_faces(self)

    @cached_property
    def face_sets(self):
        return frozenset(frozenset(face) for face in self.inner_faces)

    @cached_property
    def inner_faces(self):
        """Inner triangles as oriented triples, each rotated to start at its smallest vertex."""
        return tuple(
            start_at_min(face)
            for face in self._faces
            if not same_cycle(face, self.boundary)
        )

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def __str__(self):
        return f"NearTriangulation(n={self.n}, h={self.h}, e={len(self.edges)})"


def _trace_faces(T):
    seen = set()
    faces = []
    for u in range(T.n):
        for v in T.rotation[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                a, b = b, T.succ(b, a)
            faces.append(tuple(face))
    return faces


def _validate(T):
    n = T.n
    if n < 3:
        raise InvalidEmbedding("order", f"need at least 3 vertices, got {n}")
    if len(T.rotation) != n:
        raise InvalidEmbedding(
            "order", f"expected {n} rotations, got {len(T.rotation)}"
        )
    for v, rot in enumerate(T.rotation):
        if len(rot) < 2:
            raise InvalidEmbedding("simple", f"vertex {v} has degree {len(rot)}")
        if len(set(rot)) != len(rot):
            raise InvalidEmbedding("simple", f"parallel edges at vertex {v}")
        for u in rot:
            if not 0 <= u < n:
                raise InvalidEmbedding("simple", f"vertex {v} lists unknown neighbor {u}")
            if u == v:
                raise InvalidEmbedding("simple", f"loop at vertex {v}")
    for v, rot in enumerate(T.rotation):
        for u in rot:
            if v not in T.rotation[u]:
                raise InvalidEmbedding(
                    "symmetric", f"{u} is a neighbor of {v} but not the reverse"
                )

    boundary = T.boundary
    if len(boundary) < 3 or len(set(boundary)) != len(boundary):
        raise InvalidEmbedding("boundary", "boundary must list at least 3 distinct vertices")
    for u, v in T.boundary_edges:
        if not (0 <= u < n and 0 <= v < n) or v not in T.rotation[u]:
            raise InvalidEmbedding("boundary", f"boundary edge ({u}, {v}) is not an edge")

    faces = T._faces
    outer = [i for i, face in enumerate(faces) if same_cycle(face, boundary)]
    if not outer:
        reverse = tuple(reversed(boundary))
        if any(same_cycle(face, reverse) for face in faces):
            raise InvalidEmbedding("orientation", "boundary is listed counterclockwise")
        raise InvalidEmbedding("faces", "boundary is not a face of the rotation system")
    for k, face in enumerate(faces):
        if k != outer[0] and len(face) != 3:
            raise InvalidEmbedding(
                "triangular", f"non-triangular inner face at face #{k}: {face}"
            )

    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((u, v) for u in range(n) for v in T.rotation[u])
    if not nx.is_connected(graph):
        raise InvalidEmbedding("connected", "graph is not connected")
    if not nx.is_biconnected(graph):
        raise InvalidEmbedding("biconnected", "graph has a cut vertex")
    e = graph.number_of_edges()
    if n - e + len(faces) != 2:
        raise InvalidEmbedding(
            "euler", f"n - e + f = {n} - {e} + {len(faces)} != 2"
        )


# Construction helpers


def outer_cycle(faces):
    """Boundary cycle (clockwise) of the disk covered by consistently oriented triangles."""
    half = set()
    for a, b, c in faces:
        for edge in ((a, b), (b, c), (c, a)):
            if edge in half:
                raise InvalidEmbedding(
                    "orientation", f"half-edge {edge} belongs to two triangles"
                )
            half.add(edge)
    following = {}
    for a, b in half:
        if (b, a) not in half:
            if b in following:
                raise InvalidEmbedding(
                    "biconnected", f"outer boundary touches vertex {b} twice"
                )
            following[b] = a
    if not following:
        raise InvalidEmbedding("boundary", "triangles close up without an outer face")
    start = min(following)
    cycle = [start]
    v = following[start]
    while v != start:
        if v not in following or len(cycle) > len(following):
            raise InvalidEmbedding("boundary", "outer boundary is not a cycle")
        cycle.append(v)
        v = following[v]
    if len(cycle) != len(following):
        raise InvalidEmbedding("connected", "outer boundary splits into several cycles")
    return tuple(cycle)


def from_faces(faces, boundary=None):
    """Build a near-triangulation on 0..n-1 from oriented inner triangles."""
    faces = [tuple(face) for face in faces]
    boundary = outer_cycle(faces) if boundary is None else tuple(boundary)
    succ = defaultdict(dict)

    def link(v, u, w):
        if succ[v].setdefault(u, w) != w:
            raise InvalidEmbedding("orientation", f"rotation at {v} is ambiguous")

    for a, b, c in faces:
        link(b, a, c)
        link(c, b, a)
        link(a, c, b)
    h = len(boundary)
    for i, v in enumerate(boundary):
        link(v, boundary[i - 1], boundary[(i + 1) % h])

    n = len(succ)
    if set(succ) != set(range(n)):
        raise InvalidEmbedding("order", "vertex ids are not contiguous from 0")
    rotation = []
    for v in range(n):
        step = succ[v]
        first = min(step)
        rot = [first]
        u = step[first]
        while u != first:
            if len(rot) > len(step):
                break
            rot.append(u)
            u = step.get(u, first)
        if len(rot) != len(step):
            raise InvalidEmbedding("simple", f"faces around vertex {v} do not close up")
        rotation.append(tuple(rot))
    return NearTriangulation(n, tuple(rotation), boundary)


def from_triangles(boundary, triangles):
    """Orient an unordered triangle list from the boundary and build the embedding.

    The inner triangle on boundary edge (u_i, u_{i+1}) is traversed
    u_{i+1} -> u_i -> c; neighbors across a shared edge get the opposite direction.
    """
    tris = [tuple(t) for t in triangles]
    by_edge = defaultdict(list)
    for idx, tri in enumerate(tris):
        if len(set(tri)) != 3:
            raise InvalidEmbedding("simple", f"degenerate triangle {tri}")
        for u, v in combinations(tri, 2):
            by_edge[edge_key(u, v)].append(idx)
    for key, owners in by_edge.items():
        if len(owners) > 2:
            raise InvalidEmbedding("faces", f"edge {key} lies on {len(owners)} triangles")

    oriented = {}
    queue = deque()

    def third(idx, u, v):
        (w,) = set(tris[idx]) - {u, v}
        return w

    def assign(idx, face):
        if idx in oriented:
            if not same_cycle(oriented[idx], face):
                raise InvalidEmbedding(
                    "orientation", "triangles cannot be oriented consistently"
                )
            return
        oriented[idx] = face
        queue.append(idx)

    h = len(boundary)
    for i in range(h):
        u, v = boundary[i], boundary[(i + 1) % h]
        owners = by_edge.get(edge_key(u, v), [])
        if len(owners) != 1:
            raise InvalidEmbedding(
                "boundary", f"boundary edge ({u}, {v}) must lie on exactly one triangle"
            )
        assign(owners[0], (v, u, third(owners[0], u, v)))
    while queue:
        idx = queue.popleft()
        a, b, c = oriented[idx]
        for x, y in ((a, b), (b, c), (c, a)):
            for other in by_edge[edge_key(x, y)]:
                if other != idx:
                    assign(other, (y, x, third(other, x, y)))
    if len(oriented) != len(tris):
        raise InvalidEmbedding("connected", "some triangles are not reachable from the boundary")
    return from_faces(oriented.values(), boundary)


def mirror(T):
    """The reflected embedding: same vertices and edges, every cyclic order reversed."""
    return NearTriangulation(
        T.n,
        tuple(tuple(reversed(rot)) for rot in T.rotation),
        tuple(reversed(T.boundary)),
    )


# Queries


def faces(T):
    return [Face(face, outer=same_cycle(face, T.boundary)) for face in T._faces]


def classify(T):
    if not T.interior:
        return GraphClass.MOP
    for i in range(T.h):
        if not T.on_boundary(T.apex(i)):
            return GraphClass.REDUCIBLE
    return GraphClass.IRREDUCIBLE


# NTG text format

_TOKEN = re.compile(r":|[^\s:]+")


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _int(token, lineno):
    text, column = token
    try:
        value = int(text)
    except ValueError:
        raise NtgSyntaxError(f"expected an integer, got {text!r}", lineno, column) from None
    if value < 0:
        raise NtgSyntaxError(f"negative vertex id {value}", lineno, column)
    return value


def parse(text):
    """Parse an NTG document and return the validated near-triangulation."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if content.strip():
            lines.append((lineno, content))
    if not lines:
        raise NtgSyntaxError("empty document", 1)

    lineno, content = lines[0]
    header = _tokens(content)
    if [t for t, _ in header] != ["ntg", str(NTG_VERSION)]:
        raise NtgSyntaxError(f"expected 'ntg {NTG_VERSION}' header", lineno)

    if len(lines) < 3:
        raise NtgSyntaxError("missing 'n' or 'boundary' line", lines[-1][0])
    lineno, content = lines[1]
    tokens = _tokens(content)
    if len(tokens) != 2 or tokens[0][0] != "n":
        raise NtgSyntaxError("expected 'n <N>'", lineno)
    n = _int(tokens[1], lineno)

    lineno, content = lines[2]
    tokens = _tokens(content)
    if len(tokens) < 2 or tokens[0][0] != "boundary":
        raise NtgSyntaxError("expected 'boundary <h> <v0> ...'", lineno)
    h = _int(tokens[1], lineno)
    boundary = tuple(_int(token, lineno) for token in tokens[2:])
    if len(boundary) != h:
        raise NtgSyntaxError(
            f"boundary declares {h} vertices but lists {len(boundary)}", lineno, tokens[1][1]
        )

    rotation = {}
    for lineno, content in lines[3:]:
        tokens = _tokens(content)
        if len(tokens) < 3 or tokens[0][0] != "rot" or tokens[2][0] != ":":
            raise NtgSyntaxError("expected 'rot <v>: <w0> <w1> ...'", lineno)
        v = _int(tokens[1], lineno)
        if v >= n:
            raise NtgSyntaxError(f"vertex {v} out of range for n={n}", lineno, tokens[1][1])
        if v in rotation:
            raise NtgSyntaxError(f"duplicate rotation for vertex {v}", lineno, tokens[1][1])
        rotation[v] = tuple(_int(token, lineno) for token in tokens[3:])
    if len(rotation) != n:
        missing = sorted(set(range(n)) - set(rotation))
        raise NtgSyntaxError(f"missing rotation lines for {missing}", lines[-1][0])

    return NearTriangulation(n, tuple(rotation[v] for v in range(n)), boundary)


def serialize(T):
    lines = [
        f"ntg {NTG_VERSION}",
        f"n {T.n}",
        "boundary " + " ".join(str(x) for x in (T.h, *T.boundary)),
    ]
    for v, rot in enumerate(T.rotation):
        lines.append(f"rot {v}: " + " ".join(str(u) for u in rot))
    return "\n".join(lines) + "\n"


def to_dot(T, name="T"):
    boundary_edges = {edge_key(u, v) for u, v in T.boundary_edges}
    lines = [f"graph {name} {{"]
    for v in range(T.n):
        style = "" if T.on_boundary(v) else " [style=filled, fillcolor=lightgray]"
        lines.append(f"  {v}{style};")
    for u, v in sorted(T.edges):
        style = " [penwidth=2]" if (u, v) in boundary_edges else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# Isomorphism


def _refine(adj, colors):
    while True:
        signatures = [
            (colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(len(adj))
        ]
        ranks = {s: i for i, s in enumerate(sorted(set(signatures)))}
        refined = [ranks[s] for s in signatures]
        if len(ranks) == len(set(colors)):
            return refined
        colors = refined


def canonical_form(T):
    """A byte string equal for two graphs exactly when they are isomorphic.

    Color refinement followed by individualization of the first smallest
    non-trivial cell; the certificate is the smallest relabelled edge list over
    all leaves of the search tree.
    """
    n = T.n
    if n > CANONICAL_MAX_N:
        raise CanonicalFormTooLarge(f"canonical_form supports n <= {CANONICAL_MAX_N}, got {n}")
    adj = [sorted(T.neighbors(v)) for v in range(n)]
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(adj, colors)
        cells = Counter(colors)
        if len(cells) == n:
            cert = tuple(
                sorted(edge_key(colors[u], colors[v]) for u in range(n) for v in adj[u] if u < v)
            )
            if best is None or cert < best:
                best = cert
            return
        target = min((size, color) for color, size in cells.items() if size > 1)[1]
        for v in range(n):
            if colors[v] == target:
                search([2 * c if u == v else 2 * c + 1 for u, c in enumerate(colors)])

    search([0] * n)
    return f"{n};".encode() + ",".join(f"{a}-{b}" for a, b in best).encode()


@lru_cache(maxsize=8)
def _load_exception_forms(path):
    path = Path(path)
    if not path.exists():
        logger.warning(
            "Exception cache %s is missing; deciding H1/H2 by the exact MOP solver. "
            "Run `deriveexceptions` to create it.",
            path,
        )
        return None
    from .mop_solver import mop_from_chords

    data = json.loads(path.read_text())
    n = data["n"]
    return frozenset(
        canonical_form(mop_from_chords(n, [tuple(chord) for chord in chords]))
        for chords in data["chords"]
    )


def exception_forms():
    """Canonical forms of H1 and H2 built from the cached chord lists, or None without a cache."""
    return _load_exception_forms(str(settings.NT_EXCEPTIONS_CACHE))


def reset_exception_forms():
    _load_exception_forms.cache_clear()


def is_exception(T):
    if T.n != 12 or T.h != 12:
        return False
    from .mop_solver import gamma_t_mop

    if gamma_t_mop(T) <= 4:
        return False
    forms = exception_forms()
    if forms is None:
        return True
    return canonical_form(T) in forms
