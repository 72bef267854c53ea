"""The certified constructive solver for total domination within floor(2n/5).

``InductiveSolver`` follows the induction on (interior vertices, order): MOPs
are solved exactly, reducible instances lose a boundary edge, and irreducible
ones remove vertices around a terminal polygon. Every step is checked against
its budget and appended to the trace; any breach raises ``LedgerBreach``.
"""

import logging

from .certificates import CaseId, ReductionStep, TdsCertificate, budget, undominated
from .decomposition import (
    decompose,
    faces_beyond,
    mop_split_diagonal,
    mops_around,
    select_terminal,
)
from .embedding import GraphClass, classify, is_exception
from .exceptions import (
    DecompositionError,
    ExceptionalInput,
    LedgerBreach,
    NotApplicable,
    SurgeryError,
)
from .mop_solver import exact_tds_mop, hexagon_tds_pair, pentagon_tds_with
from .oracle import SearchLimits, complete_tds, exact_tds
from .surgery import (
    contract_edge,
    delete_vertices,
    find_contractible_at,
    find_interior_pair,
    glue_quadrilateral,
    is_contractible,
    peel,
    remove_boundary_edge,
    restrict,
)

logger = logging.getLogger(__name__)


class _Degenerate(Exception):
    """A reduction would leave an instance below the induction base."""


def rewrite_glued_tds(D, z, w1, w2, graph):
    """Turn a TDS of the glued graph into one containing z and neither w1 nor w2."""
    D = set(D)
    if z not in D and w2 not in D:
        raise LedgerBreach(f"glued vertex {w1} is not dominated")
    D -= {w1, w2}
    D.add(z)
    others = graph.neighbors(z) - {w1, w2}
    if not others & D:
        D.add(min(others))
    return frozenset(D)


def lift_contraction(D_prime, contraction, anchor=None):
    """Lift a set of T/e back to T.

    With the merged vertex in the set both endpoints replace it. Otherwise the
    set is kept as is, plus ``anchor`` when given.
    """
    inverse = {
        new: old for old, new in contraction.mapping.items() if new != contraction.merged
    }
    lifted = {inverse[x] for x in D_prime if x != contraction.merged}
    if contraction.merged in D_prime:
        return frozenset(lifted | set(contraction.edge)), True
    if anchor is not None:
        lifted.add(anchor)
    return frozenset(lifted), False


class InductiveSolver:
    def __init__(self, limits=None):
        self.limits = limits or SearchLimits.from_settings()
        self.trace = []

    def solve(self, T):
        if T.n < 5:
            raise NotApplicable(f"the constructive solver needs n >= 5, got {T.n}")
        if is_exception(T):
            raise ExceptionalInput("input is one of the two exceptional MOPs of order 12")
        self.trace = []
        D = self._solve(T, 0)
        logger.info("Solved n=%s with %s vertices (bound %s)", T.n, len(D), budget(T.n))
        return TdsCertificate(D, tuple(self.trace))

    # Ledger

    def _record(
        self, case, T, D, depth, k=0, d=0, removed=(), limit=None, exempt=(), completed=()
    ):
        limit = budget(T.n) if limit is None else limit
        missing = undominated(T, D) - set(exempt)
        if missing:
            self._breach(case, T, f"vertices {sorted(missing)} are not dominated")
        if len(D) > limit:
            self._breach(case, T, f"size {len(D)} exceeds {limit}")
        if k and budget(T.n - k) + d > budget(T.n):
            self._breach(case, T, f"f({T.n - k}) + {d} > f({T.n})")
        self.trace.append(
            ReductionStep(
                case_id=case,
                n=T.n,
                size_removed=k,
                budget_spent=d,
                bound=limit,
                depth=depth,
                removed=tuple(removed),
                completed=tuple(sorted(completed)),
            )
        )
        logger.debug("%s at depth %s: n=%s, size %s <= %s", case, depth, T.n, len(D), limit)
        return frozenset(D)

    def _breach(self, case, T, message):
        logger.error("Ledger breach in %s on n=%s: %s", case, T.n, message)
        raise LedgerBreach(f"{case}: {message}")

    def _recurse(self, parent, child, depth):
        if (len(child.interior), child.n) >= (len(parent.interior), parent.n):
            self._breach(CaseId.REDUCIBLE, parent, "recursion does not decrease (m, n)")
        return self._solve(child, depth + 1)

    def _complete(self, T, partial, limit=None):
        limit = budget(T.n) if limit is None else limit
        certificate = complete_tds(T, partial, limit, self.limits)
        if certificate is None:
            raise LedgerBreach(
                f"no completion of {sorted(partial)} within {limit} on n={T.n}"
            )
        return certificate.vertices

    def _search(self, T, size, anchors):
        """A TDS of T with at most ``size`` vertices containing one of ``anchors``."""
        for anchor in anchors:
            certificate = exact_tds(T, must_contain={anchor}, max_size=size, limits=self.limits)
            if certificate is not None:
                return certificate.vertices
        raise LedgerBreach(f"no TDS of size {size} containing one of {sorted(anchors)}")

    # Dispatch

    def _solve(self, T, depth):
        if T.n < 5:
            raise _Degenerate(f"order {T.n} is below the induction base")
        if is_exception(T):
            raise LedgerBreach("a reduction produced an exceptional MOP")
        graph_class = classify(T)
        if graph_class is GraphClass.MOP:
            D = exact_tds_mop(T).vertices
            return self._record(CaseId.BASE_MOP, T, D, depth)
        if graph_class is GraphClass.REDUCIBLE:
            return self._reducible(T, depth)
        return self._irreducible(T, depth)

    def _reducible(self, T, depth):
        i = next(i for i in range(T.h) if not T.on_boundary(T.apex(i)))
        u, v = T.boundary[i], T.boundary[(i + 1) % T.h]
        reduct = remove_boundary_edge(T, (u, v))
        if is_exception(reduct):
            D = self._search(T, 4, (u, v))
            return self._record(CaseId.LEMMA9, T, D, depth, removed=((u, v),), limit=4)
        D = self._recurse(T, reduct, depth)
        return self._record(CaseId.REDUCIBLE, T, D, depth, removed=((u, v),))

    def _fallback(self, T, depth, reason):
        if T.n > self.limits.max_n:
            raise LedgerBreach(f"no applicable reduction on n={T.n}: {reason}") from None
        logger.debug("Falling back to exact search on n=%s: %s", T.n, reason)
        D = exact_tds(T, limits=self.limits).vertices
        return self._record(CaseId.ORACLE_FALLBACK, T, D, depth)

    def _irreducible(self, T, depth):
        mark = len(self.trace)
        try:
            decomposition = decompose(T)
            P = select_terminal(decomposition)
            parts = mops_around(T, P)
            return self._cases(T, P, parts, depth)
        except _Degenerate as exc:
            del self.trace[mark:]
            return self._fallback(T, depth, str(exc))
        except (SurgeryError, DecompositionError) as exc:
            logger.error("No case applies on n=%s: %s", T.n, exc)
            raise LedgerBreach(f"no case applies on n={T.n}: {exc}") from exc

    # Anchored variant and contraction lifting

    def _anchored(self, T, x, depth):
        """x in D, |D| <= f(n-1)+1, and every vertex except possibly x is dominated."""
        limit = budget(T.n - 1) + 1
        if T.n < 5:
            raise _Degenerate(f"anchored set on order {T.n}")
        if T.n == 5:
            D = self._search_or_degenerate(T, 2, x)
            return self._record(CaseId.CLAIM2, T, D, depth, removed=(x,), limit=limit)
        if is_exception(T):
            D = self._search(T, 5, (x,))
            return self._record(CaseId.LEMMA9, T, D, depth, removed=(x,), limit=5)
        e = find_contractible_at(T, x)
        contraction = contract_edge(T, e)
        if is_exception(contraction.graph):
            D = self._search(T, 5, (x,))
            return self._record(CaseId.LEMMA9, T, D, depth, removed=(tuple(e),), limit=5)
        D_prime = self._recurse(T, contraction.graph, depth)
        D, merged = lift_contraction(D_prime, contraction, anchor=x)
        self._record(
            CaseId.LEMMA10II, T, D, depth, removed=(tuple(e),), limit=len(D_prime) + 1, exempt=(x,)
        )
        logger.debug("Anchored lift at %s kept the merged vertex: %s", x, merged)
        return self._record(CaseId.CLAIM2, T, D, depth, removed=(x,), limit=limit, exempt=(x,))

    def _search_or_degenerate(self, T, size, x):
        certificate = exact_tds(T, must_contain={x}, max_size=size, limits=self.limits)
        if certificate is None:
            raise _Degenerate(f"no {size}-vertex TDS containing {x} on order {T.n}")
        return certificate.vertices

    # Case analysis around a terminal polygon

    def _cases(self, T, P, parts, depth):
        mops = [part for part in parts if part.is_mop]
        for part in mops:
            if part.order == 4:
                z, y = self._quadrilateral_hinge(T, part.arc)
                return self._glued(T, part.arc, z, y, CaseId.C1, depth)
        for wanted in (6, 7, 8):
            for part in mops:
                if part.order == wanted:
                    return self._remove_mop(T, part.arc, depth)
        for part in mops:
            if part.order == 9 and self._chord_contractible(T, part.arc):
                return self._remove_mop(T, part.arc, depth)
        for part in mops:
            if part.order >= 10:
                return self._remove_mop(T, part.arc, depth)
        return self._mixed(T, P, parts, depth)

    def _quadrilateral_hinge(self, T, arc):
        """The chord endpoint of a 4-vertex outer MOP and its boundary neighbor outside it."""
        a, b = arc[0], arc[-1]
        if T.has_edge(a, arc[2]):
            return a, T.prev_on_boundary(a)
        return b, T.next_on_boundary(b)

    def _apex_position(self, T, arc):
        return arc.index(T.succ(arc[-1], arc[0]))

    def _chord_contractible(self, T, arc):
        rest = delete_vertices(T, arc[1:-1])
        index = rest.index
        return is_contractible(rest.graph, (index[arc[0]], index[arc[-1]]))

    def _solve_part(self, T, rest, depth):
        if is_exception(rest.graph):
            raise SurgeryError("the remaining instance is an exceptional MOP")
        return rest.lift(self._recurse(T, rest.graph, depth))

    def _anchored_part(self, T, rest, x, depth):
        if rest.graph.n >= T.n:
            self._breach(CaseId.CLAIM2, T, "anchored instance does not shrink")
        return rest.lift(self._anchored(rest.graph, rest.index[x], depth + 1))

    def _search_part(self, T, rest, size, x):
        return rest.lift(self._search(rest.graph, size, (rest.index[x],)))

    def _pentagon_partner(self, part, u):
        index = part.part.index
        pair = pentagon_tds_with(part.part.graph, index[u]).vertices
        (other,) = pair - {index[u]}
        return part.part.labels[other]

    def _finish(self, case, T, partial, depth, k=0, d=0, removed=()):
        D = self._complete(T, partial)
        return self._record(
            case, T, D, depth, k=k, d=d, removed=removed, completed=D - set(partial)
        )

    def _remove_mop(self, T, arc, depth):
        """Remove the interior of the outer MOP on ``arc`` (order 6 and up)."""
        m = len(arc)
        a, b = arc[0], arc[-1]
        p = self._apex_position(T, arc)
        removed = tuple(arc[1:-1])
        if m == 6:
            part = restrict(faces_beyond(T, a, b))
            index = part.index
            pair = part.lift(hexagon_tds_pair(part.graph, index[a], index[b]).vertices)
            x = a if a in pair else b
            rest = delete_vertices(T, removed)
            partial = self._anchored_part(T, rest, x, depth) | pair
            return self._finish(CaseId.C2, T, partial, depth, k=5, d=2, removed=removed)
        if m == 7:
            rest = delete_vertices(T, removed)
            partial = self._solve_part(T, rest, depth)
            return self._finish(CaseId.C3, T, partial, depth, k=5, d=2, removed=removed)
        if m == 8:
            if p in (1, 2):
                return self._remove_mop(T, arc[p:], depth)
            if p in (5, 6):
                return self._remove_mop(T, arc[: p + 1], depth)
            removed = tuple(arc[i] for i in range(1, 7) if i != p)
            rest = delete_vertices(T, removed)
            partial = self._solve_part(T, rest, depth)
            return self._finish(CaseId.C4, T, partial, depth, k=5, d=2, removed=removed)
        if m == 9:
            if p in (1, 2, 3):
                return self._remove_mop(T, arc[p:], depth)
            if p in (5, 6, 7):
                return self._remove_mop(T, arc[: p + 1], depth)
            return self._contract_side(T, arc, depth)
        part = restrict(faces_beyond(T, a, b))
        index = part.index
        chord = mop_split_diagonal(part.graph, (index[a], index[b]))
        first, last = sorted(arc.index(part.labels[x]) for x in chord)
        D = self._remove_mop(T, arc[first : last + 1], depth)
        return self._record(CaseId.C6, T, D, depth, removed=((arc[first], arc[last]),))

    def _contract_side(self, T, arc, depth):
        a, b = arc[0], arc[-1]
        removed = tuple(arc[1:-1])
        rest = delete_vertices(T, removed)
        index = rest.index
        e = (index[a], index[b])
        if not is_contractible(rest.graph, e):
            raise SurgeryError(f"side ({a}, {b}) is not contractible")
        contraction = contract_edge(rest.graph, e)
        if is_exception(contraction.graph):
            raise SurgeryError("contracting the side leaves an exceptional MOP")
        D_prime = self._recurse(rest.graph, contraction.graph, depth)
        D_rest, merged = lift_contraction(D_prime, contraction)
        exempt = () if merged else e
        self._record(
            CaseId.LEMMA10I,
            rest.graph,
            D_rest,
            depth + 1,
            removed=(e,),
            limit=len(D_prime) + 1,
            exempt=exempt,
        )
        partial = rest.lift(D_rest)
        return self._finish(CaseId.C5, T, partial, depth, k=8, d=3, removed=removed)

    def _glued(self, T, arc, z, y, case, depth):
        """Replace the ears on the edge at z by a 4-vertex MOP glued to (z, y)."""
        removed = tuple(arc[1:-1])
        rest = delete_vertices(T, removed)
        index = rest.index
        glued, w1, w2 = glue_quadrilateral(rest.graph, index[z], index[y])
        if classify(glued) is not GraphClass.REDUCIBLE:
            raise SurgeryError("glued instance is not reducible")
        D = self._reducible(glued, depth + 1)
        D = rewrite_glued_tds(D, index[z], w1, w2, glued)
        partial = rest.lift(D)
        return self._finish(case, T, partial, depth, removed=removed)

    def _mixed(self, T, P, parts, depth):
        """Every outer MOP has order 3, 5 or 9; pick a case from neighboring orders."""
        k = len(parts)
        pairs = [
            (j, (j + 1) % k)
            for j in range(k)
            if parts[j].is_mop
            and parts[(j + 1) % k].is_mop
            and parts[j].order != parts[(j + 1) % k].order
        ]
        pairs.sort(key=lambda pair: (k - 1 in pair, pair))
        if pairs:
            first, second = (parts[j] for j in pairs[0])
            big, small = (first, second) if first.order > second.order else (second, first)
            orders = (big.order, small.order)
            special = self._meets_special(T, k, pairs[0], big, small)
            if orders == (5, 3):
                if special:
                    return self._fallback(T, depth, "pentagon pair meets the special outer MOP")
                return self._pentagon_and_triangle(T, first, big, small, depth)
            if orders in ((9, 3), (9, 5)):
                return self._nonagon_pair(T, P, first, big, small, depth, special)
            raise SurgeryError(f"no case applies to outer MOPs of orders {orders}")
        orders = {part.order for part in parts if part.is_mop}
        first, second = parts[0], parts[1]
        if orders == {3}:
            arc = (first.start, first.arc[1], second.arc[1], second.end)
            return self._glued(T, arc, first.end, second.end, CaseId.C10, depth)
        if orders == {9}:
            return self._two_nonagons(T, first, second, depth)
        if orders == {5}:
            return self._pentagon_chain(T, P, parts, depth)
        raise SurgeryError(f"no case applies to outer MOPs of orders {sorted(orders)}")

    @staticmethod
    def _meets_special(T, k, pair, big, small):
        """The pair holds the last outer MOP and removing it drops below the induction base.

        This only happens for n below 18.
        """
        if k - 1 not in pair:
            return False
        removed = big.order + small.order - 3 + (big.order == 9)
        floor = 6 if (big.order, small.order) == (9, 5) else 5
        return T.n - removed < floor

    @staticmethod
    def _hinge(first, big):
        """The shared corner and the far corner of ``big``."""
        pivot = first.end
        far = big.start if big is first else big.end
        return pivot, far

    def _pentagon_and_triangle(self, T, first, big, small, depth):
        pivot, _ = self._hinge(first, big)
        u = self._pentagon_partner(big, pivot)
        inner = big.arc[1:-1] + small.arc[1:-1]
        rest = delete_vertices(T, inner + (pivot,))
        if is_exception(rest.graph):
            partial = self._search_part(T, delete_vertices(T, inner), 5, pivot) | {u}
        else:
            partial = self._solve_part(T, rest, depth) | {pivot, u}
        return self._finish(CaseId.C7, T, partial, depth, k=5, d=2, removed=inner + (pivot,))

    def _off_center(self, T, arc):
        """The smaller outer MOP to remove instead when the apex on ``arc`` is off center."""
        p = self._apex_position(T, arc)
        if p < 4:
            return arc[p:]
        if p > 4:
            return arc[: p + 1]
        return None

    def _nonagon_pair(self, T, P, first, big, small, depth, special=False):
        sub = self._off_center(T, big.arc)
        if sub is not None:
            return self._remove_mop(T, sub, depth)
        if special:
            return self._fallback(T, depth, "nonagon pair meets the special outer MOP")
        pivot, far = self._hinge(first, big)
        region = restrict(P.faces)
        index = region.index
        partner = region.labels[find_interior_pair(region.graph, index[pivot], index[far])]
        inner = big.arc[1:-1] + small.arc[1:-1]
        removed = inner + (pivot, partner)
        rest = delete_vertices(T, removed)
        if small.order == 3:
            if is_exception(rest.graph):
                partial = self._search_part(T, delete_vertices(T, inner), 5, pivot)
            else:
                partial = self._solve_part(T, rest, depth) | {pivot}
            return self._finish(CaseId.C8, T, partial, depth, k=10, d=4, removed=removed)
        partial = self._anchored_part(T, rest, far, depth) | {pivot}
        return self._finish(CaseId.C9, T, partial, depth, k=13, d=5, removed=removed)

    def _two_nonagons(self, T, first, second, depth):
        for part in (first, second):
            sub = self._off_center(T, part.arc)
            if sub is not None:
                return self._remove_mop(T, sub, depth)
        pivot = first.end
        removed = first.arc[1:-1] + second.arc[1:-1] + (pivot,)
        rest = delete_vertices(T, removed)
        partial = self._solve_part(T, rest, depth)
        return self._finish(CaseId.C11, T, partial, depth, k=15, d=6, removed=removed)

    def _pentagon_chain(self, T, P, parts, depth):
        """Peel the pentagons hanging off the polygon starting at the first corner."""
        region = restrict(P.faces)
        corners = [part.start for part in parts]
        if len(region.graph.interior) >= 2:
            index = region.index
            result = peel(region.graph, index[corners[0]])
            peeled = [region.labels[x] for x in result.removed_boundary]
            partner = region.labels[result.interior_partner]
            j = len(peeled) + 1
            if peeled != corners[1:j]:
                raise SurgeryError("peeling left the polygon corners out of order")
        else:
            (centre,) = region.graph.interior
            partner = region.labels[centre]
            j = len(parts) - 1
        inner = tuple(x for part in parts[:j] for x in part.arc[1:-1])
        chain = inner + tuple(corners[1:j])
        rest = delete_vertices(T, chain + (partner,))
        triples = set()
        for i in range(1 if j % 2 else 0, j - 1, 2):
            u = corners[i + 1]
            triples |= {
                u,
                self._pentagon_partner(parts[i], u),
                self._pentagon_partner(parts[i + 1], u),
            }
        if j % 2 == 0:
            if is_exception(rest.graph):
                partial = self._search_part(T, delete_vertices(T, chain), 5, partner)
            else:
                partial = self._solve_part(T, rest, depth)
            k, d = 4 * j, 3 * j // 2
        else:
            first = corners[0]
            partial = self._anchored_part(T, rest, first, depth)
            partial |= {self._pentagon_partner(parts[0], first)}
            k, d = 4 * j + 1, 2 + 3 * (j - 1) // 2
        return self._finish(
            CaseId.C12, T, partial | triples, depth, k=k, d=d, removed=chain + (partner,)
        )


def tds_neartri(T, limits=None):
    """A certified TDS of T with at most floor(2n/5) vertices."""
    return InductiveSolver(limits).solve(T)


def solve_exact(T, limits=None):
    """A minimum TDS by exhaustive search, traced as a single fallback step."""
    if T.n < 5:
        raise NotApplicable(f"the exact solver needs n >= 5, got {T.n}")
    certificate = exact_tds(T, limits=limits)
    step = ReductionStep(
        case_id=CaseId.ORACLE_FALLBACK,
        n=T.n,
        size_removed=0,
        budget_spent=0,
        bound=budget(T.n),
    )
    return TdsCertificate(certificate.vertices, (step,))
