"""Reproducible instance families: fans, random MOPs and near-triangulations,
wheels, the irreducible H, the exceptional MOPs, and the tight families."""

import enum
import logging
import random
from dataclasses import dataclass

from .embedding import canonical_form, from_faces, from_triangles
from .exceptions import GeneratorError, InvalidEmbedding
from .mop_solver import catalan, gamma_t_mop, mop_from_chords, raw_mop_chords

logger = logging.getLogger(__name__)

TIGHT_CHECK_MAX_K = 6


class Family(enum.StrEnum):
    FAN = "fan"
    RANDOM_MOP = "random_mop"
    RANDOM_NEARTRI = "random_neartri"
    H7 = "h7"
    EXCEPTIONS = "exceptions"
    TIGHT_MOP = "tight_mop"
    OCTAHEDRA = "octahedra"
    WHEEL = "wheel"


def gen_fan(n):
    if n < 3:
        raise GeneratorError(f"a fan needs n >= 3, got {n}")
    return mop_from_chords(n, [(0, i) for i in range(2, n - 1)])


def gen_mop(n, chords):
    chords = {(min(a, b), max(a, b)) for a, b in chords}
    if n < 3 or len(chords) != n - 3:
        raise GeneratorError(f"a MOP on {n} vertices has {max(n - 3, 0)} chords, got {len(chords)}")
    for a, b in chords:
        if not (0 <= a < b < n) or b - a in (1, n - 1):
            raise GeneratorError(f"({a}, {b}) is not a chord of the {n}-gon")
    try:
        return mop_from_chords(n, chords)
    except InvalidEmbedding as exc:
        raise GeneratorError(f"chords do not triangulate the {n}-gon: {exc}") from exc


def random_mop_chords(n, rng):
    """Chords of a triangulation drawn uniformly among the Catalan(n-2) of the n-gon."""
    chords = set()
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        weights = [catalan(k - i - 1) * catalan(j - k - 1) for k in range(i + 1, j)]
        pick = rng.randrange(sum(weights))
        for offset, weight in enumerate(weights):
            if pick < weight:
                break
            pick -= weight
        k = i + 1 + offset
        if k - i >= 2:
            chords.add((i, k))
        if j - k >= 2:
            chords.add((k, j))
        stack.append((i, k))
        stack.append((k, j))
    return chords


def gen_random_mop(n, seed):
    if n < 3:
        raise GeneratorError(f"a MOP needs n >= 3, got {n}")
    return mop_from_chords(n, random_mop_chords(n, random.Random(seed)))


def gen_random_neartri(n, interior, seed):
    """A random MOP on n - interior vertices with ``interior`` seeded face subdivisions."""
    if n < 5 or not 0 <= interior <= n - 4:
        raise GeneratorError(f"need n >= 5 and 0 <= interior <= n - 4, got n={n}, interior={interior}")
    rng = random.Random(seed)
    base = n - interior
    faces = list(mop_from_chords(base, random_mop_chords(base, rng)).inner_faces)
    for x in range(base, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [(a, b, x), (b, c, x), (c, a, x)]
        faces.sort()
    return from_faces(faces, tuple(range(base)))


def gen_wheel(h):
    if h < 3:
        raise GeneratorError(f"a wheel needs a rim of at least 3, got {h}")
    return from_faces([((i + 1) % h, i, h) for i in range(h)], tuple(range(h)))


def gen_h7():
    """Hexagon 0..5 with chords 0-2, 2-4, 4-0 and vertex 6 inside the chord triangle."""
    faces = [(2, 1, 0), (4, 3, 2), (5, 4, 0), (4, 2, 6), (2, 0, 6), (0, 4, 6)]
    return from_faces(faces, tuple(range(6)))


def _annulus(outer, inner):
    x0, x1, x2 = outer
    y0, y1, y2 = inner
    return [
        (x0, x1, y0),
        (x1, y1, y0),
        (x1, x2, y1),
        (x2, y2, y1),
        (x2, x0, y2),
        (x0, y0, y2),
    ]


def gen_octahedra(k):
    """k octahedra; the outermost keeps the outer face and each further one sits
    in a triangle between the previous two, leaving its own inner triangle empty."""
    if k < 1:
        raise GeneratorError(f"need at least one octahedron, got {k}")
    outer, hole = (0, 1, 2), (3, 4, 5)
    triangles = _annulus(outer, hole)
    for i in range(1, k):
        x = (6 * i, 6 * i + 1, 6 * i + 2)
        y = (6 * i + 3, 6 * i + 4, 6 * i + 5)
        band = _annulus(hole, x)
        next_hole = band.pop(0)
        triangles += band + _annulus(x, y) + [y]
        hole = next_hole
    triangles.append(hole)
    return from_triangles(outer, triangles)


def gen_tight_mop(k):
    """k pentagon blocks p..t on positions 5i..5i+4 with chords q-s, q-t and p-t;
    the spine polygon 0, 4, 5, 9, ... is fanned from 0."""
    if k < 1:
        raise GeneratorError(f"need at least one block, got {k}")
    n = 5 * k
    chords = set()
    spine = []
    for i in range(k):
        p, q, r, s, t = range(5 * i, 5 * i + 5)
        chords |= {(q, s), (q, t)}
        if k > 1:
            chords.add((p, t))
        spine += [p, t]
    for v in spine[2:-1]:
        chords.add((0, v))
    M = gen_mop(n, chords)
    if k <= TIGHT_CHECK_MAX_K and gamma_t_mop(M) != 2 * k:
        raise GeneratorError(f"tight family failed its contract at k={k}")
    return M


def derive_exceptions():
    """The MOPs of order 12 whose total domination number exceeds 4, one per class."""
    forms = {}
    for chords in raw_mop_chords(12):
        M = mop_from_chords(12, chords)
        if gamma_t_mop(M) > 4:
            forms.setdefault(canonical_form(M), M)
    found = [forms[form] for form in sorted(forms)]
    if len(found) != 2:
        raise GeneratorError(f"expected 2 exceptional classes, found {len(found)}")
    for M in found:
        if gamma_t_mop(M) != 5:
            raise GeneratorError("an exceptional MOP has total domination number other than 5")
        if sum(1 for v in range(M.n) if M.degree(v) == 2) != 3:
            raise GeneratorError("an exceptional MOP does not have three ears")
        if not any(all(_is_chord(M, a, b) for a, b in _sides(face)) for face in M.inner_faces):
            raise GeneratorError("an exceptional MOP has no central triangle")
    logger.info("Derived %s exceptional classes of order 12", len(found))
    return tuple(found)


def _sides(face):
    a, b, c = face
    return ((a, b), (b, c), (c, a))


def _is_chord(M, a, b):
    return b not in (M.next_on_boundary(a), M.prev_on_boundary(a))


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    n: int | None = None
    k: int | None = None
    interior: int = 0
    seed: int = 0

    def build(self):
        family = Family(self.family)
        match family:
            case Family.FAN:
                return gen_fan(self._require("n"))
            case Family.RANDOM_MOP:
                return gen_random_mop(self._require("n"), self.seed)
            case Family.RANDOM_NEARTRI:
                return gen_random_neartri(self._require("n"), self.interior, self.seed)
            case Family.H7:
                return gen_h7()
            case Family.EXCEPTIONS:
                which = self.k or 1
                if which not in (1, 2):
                    raise GeneratorError("the exceptions family has k = 1 or k = 2")
                return derive_exceptions()[which - 1]
            case Family.TIGHT_MOP:
                return gen_tight_mop(self._require("k"))
            case Family.OCTAHEDRA:
                return gen_octahedra(self._require("k"))
            case Family.WHEEL:
                return gen_wheel(self._require("n") - 1)

    def _require(self, name):
        value = getattr(self, name)
        if value is None:
            raise GeneratorError(f"family {self.family} needs --{name}")
        return value


def sample_corpus(count, seed, max_n=20):
    """Seeded near-triangulations of mixed size and class, for sweeps."""
    rng = random.Random(seed)
    corpus = []
    for _ in range(count):
        n = rng.randint(5, max_n)
        interior = rng.randint(0, n - 4)
        corpus.append(gen_random_neartri(n, interior, rng.randrange(2**63)))
    return corpus

