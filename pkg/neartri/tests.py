"""Tests for the neartri app."""

import io
import json
import random
import shutil
import tempfile
from itertools import combinations, pairwise
from pathlib import Path
from unittest.mock import patch

import networkx as nx
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings, tag
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from .certificates import CaseId, ReductionStep, TdsCertificate, budget, is_tds, undominated
from .constructor import InductiveSolver, lift_contraction, rewrite_glued_tds, solve_exact, tds_neartri
from .decomposition import (
    boundary_arc,
    boundary_subgraph,
    decompose,
    decomposition_summary,
    mop_split_diagonal,
    mops_around,
    select_terminal,
    split_by_diagonal,
)
from .embedding import (
    CANONICAL_MAX_N,
    GraphClass,
    canonical_form,
    classify,
    exception_forms,
    from_faces,
    from_triangles,
    is_exception,
    mirror,
    parse,
    reset_exception_forms,
    serialize,
    to_dot,
)
from .exceptions import (
    CanonicalFormTooLarge,
    DecompositionError,
    ExceptionalInput,
    GeneratorError,
    InvalidEmbedding,
    NotApplicable,
    NtgSyntaxError,
    SearchBudgetExceeded,
    SurgeryError,
)
from .generators import (
    Family,
    GeneratorSpec,
    derive_exceptions,
    gen_fan,
    gen_h7,
    gen_mop,
    gen_octahedra,
    gen_random_mop,
    gen_random_neartri,
    gen_tight_mop,
    gen_wheel,
    sample_corpus,
)
from .mop_solver import (
    catalan,
    enumerate_mops,
    exact_tds_mop,
    gamma_t_mop,
    hexagon_tds_pair,
    mop_tds_with,
    pentagon_tds_with,
    raw_mop_chords,
)
from .oracle import SearchLimits, complete_tds, exact_tds, gamma_t, naive_tds
from .reports import RunReport, check_instance
from .surgery import (
    contract_edge,
    delete_vertex,
    delete_vertices,
    find_contractible_at,
    find_interior_pair,
    glue_quadrilateral,
    is_contractible,
    is_diagonal,
    peel,
    remove_boundary_edge,
    separating_triangles,
)

FIXTURES = Path(__file__).resolve().parent / "fixtures"
SHIPPED_CACHE = Path(__file__).resolve().parent / "data" / "exceptions.json"

PROPERTY_SETTINGS = settings(
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

H1_CHORDS = [(0, 4), (4, 8), (8, 0), (1, 3), (5, 7), (9, 11), (0, 3), (4, 7), (8, 11)]
H2_CHORDS = [(0, 4), (4, 8), (8, 0), (1, 3), (5, 7), (9, 11), (0, 3), (4, 7), (9, 0)]

SMALL_LIMITS = SearchLimits(max_n=25, node_budget=2_000_000, time_budget=60.0)


def fixture(name):
    return parse((FIXTURES / name).read_text())


def _fan(arc):
    return [(arc[0], x, y) for x, y in zip(arc[1:-1], arc[2:], strict=True)]


def decorated_wheel(orders):
    """A wheel whose rim sides each carry an outer part.

    An integer is a fan MOP of that order. "nonagon" is a 9-vertex MOP whose
    triangle on the rim side has its apex in the middle of the arc, and
    "heavy" is a quadrilateral around one interior vertex with an ear on
    each of its outer edges.
    """
    k = len(orders)
    hub = k
    next_id = k + 1
    boundary = []
    triangles = []
    for j, kind in enumerate(orders):
        a, b = j, (j + 1) % k
        triangles.append((hub, a, b))
        size = {"nonagon": 9, "heavy": 7}.get(kind, kind)
        arc = [a, *range(next_id, next_id + size - 2), b]
        next_id += size - 2
        if kind == "nonagon":
            triangles += [(a, arc[4], b), *_fan(arc[:5]), *_fan(arc[4:])]
        elif kind == "heavy":
            z = next_id
            next_id += 1
            triangles += [(x, y, z) for x, y in pairwise(arc[::2])] + [(b, a, z)]
            triangles += [(arc[i], arc[i + 1], arc[i + 2]) for i in (0, 2, 4)]
        else:
            triangles += _fan(arc)
        boundary += arc[:-1]
    return from_triangles(tuple(boundary), triangles)


def subdivided_wheel(h, extra, seed):
    """A wheel with ``extra`` seeded face subdivisions; it never has a diagonal."""
    rng = random.Random(seed)
    faces = list(gen_wheel(h).inner_faces)
    for x in range(h + 1, h + 1 + extra):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [(a, b, x), (b, c, x), (c, a, x)]
    return from_faces(faces, tuple(range(h)))


class MissingCacheMixin:
    """Point NT_EXCEPTIONS_CACHE at an empty directory so H1/H2 come from the DP."""

    def setUp(self):
        super().setUp()
        self.temp_dir = tempfile.mkdtemp()
        self.cache_path = Path(self.temp_dir) / "exceptions.json"
        self.cache_override = override_settings(NT_EXCEPTIONS_CACHE=self.cache_path)
        self.cache_override.enable()

    def tearDown(self):
        self.cache_override.disable()
        shutil.rmtree(self.temp_dir, ignore_errors=True)
        super().tearDown()


class EmbeddingTests(MissingCacheMixin, SimpleTestCase):
    def test_fan_fixture_is_a_mop(self):
        T = fixture("f5.ntg")

        self.assertEqual((T.n, T.h), (5, 5))
        self.assertIs(classify(T), GraphClass.MOP)
        self.assertEqual(T.apex(0), 2)
        self.assertEqual(len(T.edges), 2 * T.n - 3)

    def test_fixture_classes(self):
        self.assertIs(classify(fixture("w4.ntg")), GraphClass.REDUCIBLE)
        self.assertIs(classify(fixture("octahedron.ntg")), GraphClass.REDUCIBLE)
        self.assertIs(classify(fixture("h7.ntg")), GraphClass.IRREDUCIBLE)

    def test_h7_fixture_matches_generator(self):
        self.assertEqual(serialize(fixture("h7.ntg")), serialize(gen_h7()))

    def test_exception_fixtures_match_chords(self):
        self.assertEqual(fixture("h1.ntg").edges, gen_mop(12, H1_CHORDS).edges)
        self.assertEqual(fixture("h2.ntg").edges, gen_mop(12, H2_CHORDS).edges)

    def test_counterclockwise_boundary_is_rejected(self):
        with self.assertRaises(InvalidEmbedding) as ctx:
            fixture("ccw_boundary.ntg")

        self.assertEqual(ctx.exception.invariant, "orientation")

    def test_quadrilateral_face_is_rejected(self):
        with self.assertRaises(InvalidEmbedding) as ctx:
            fixture("quad_face.ntg")

        self.assertEqual(ctx.exception.invariant, "triangular")

    def test_syntax_error_reports_its_line(self):
        with self.assertRaises(NtgSyntaxError) as ctx:
            fixture("syntax_error.ntg")

        self.assertEqual(ctx.exception.line, 4)
        self.assertEqual(ctx.exception.column, 12)

    def test_missing_header_is_a_syntax_error(self):
        with self.assertRaises(NtgSyntaxError):
            parse("n 3\nboundary 3 0 1 2\n")

    def test_serialize_then_parse_keeps_the_embedding(self):
        T = gen_random_neartri(14, 4, seed=3)

        again = parse(serialize(T))

        self.assertEqual(again.rotation, T.rotation)
        self.assertEqual(again.boundary, T.boundary)

    def test_mirror_reverses_the_boundary(self):
        T = fixture("h7.ntg")

        M = mirror(T)

        self.assertEqual(M.edges, T.edges)
        self.assertEqual(M.boundary, tuple(reversed(T.boundary)))
        self.assertIs(classify(M), GraphClass.IRREDUCIBLE)

    def test_triangle_has_inner_and_outer_face(self):
        K3 = gen_fan(3)

        self.assertEqual(len(K3.inner_faces), 1)
        self.assertEqual(K3.h, 3)

    def test_networkx_export_is_planar(self):
        graph = gen_random_neartri(20, 7, seed=11).to_networkx()

        self.assertTrue(nx.check_planarity(graph)[0])
        self.assertTrue(nx.is_biconnected(graph))

    def test_to_dot_lists_every_edge(self):
        T = fixture("w4.ntg")

        dot = to_dot(T)

        self.assertTrue(dot.startswith("graph T {"))
        self.assertEqual(dot.count(" -- "), len(T.edges))
        self.assertIn("fillcolor=lightgray", dot)

    def test_canonical_form_ignores_labels(self):
        left = gen_mop(7, [(0, 2), (0, 3), (0, 4), (0, 5)])
        right = gen_mop(7, [(3, 5), (3, 6), (3, 0), (3, 1)])

        self.assertEqual(canonical_form(left), canonical_form(right))

    def test_canonical_form_separates_the_exceptions(self):
        self.assertNotEqual(
            canonical_form(gen_mop(12, H1_CHORDS)), canonical_form(gen_mop(12, H2_CHORDS))
        )

    def test_canonical_form_is_capped(self):
        with self.assertRaises(CanonicalFormTooLarge):
            canonical_form(gen_fan(CANONICAL_MAX_N + 1))

    def test_is_exception_without_cache(self):
        self.assertTrue(is_exception(fixture("h1.ntg")))
        self.assertTrue(is_exception(fixture("h2.ntg")))
        self.assertFalse(is_exception(gen_fan(12)))
        self.assertFalse(is_exception(gen_tight_mop(2)))

    def test_is_exception_consults_the_cache(self):
        H1 = gen_mop(12, H1_CHORDS)
        chords = [[list(chord) for chord in H1_CHORDS]]
        self.cache_path.write_text(json.dumps({"n": 12, "chords": chords}))

        self.assertTrue(is_exception(H1))
        self.assertFalse(is_exception(gen_mop(12, H2_CHORDS)))


@override_settings(NT_EXCEPTIONS_CACHE=SHIPPED_CACHE)
class ShippedCacheTests(SimpleTestCase):
    def setUp(self):
        super().setUp()
        reset_exception_forms()

    def tearDown(self):
        reset_exception_forms()
        super().tearDown()

    def test_cache_ships_with_the_app(self):
        self.assertTrue(SHIPPED_CACHE.exists())
        self.assertEqual(
            exception_forms(),
            {canonical_form(gen_mop(12, H1_CHORDS)), canonical_form(gen_mop(12, H2_CHORDS))},
        )

    def test_is_exception_with_the_shipped_cache(self):
        self.assertTrue(is_exception(fixture("h1.ntg")))
        self.assertTrue(is_exception(fixture("h2.ntg")))
        self.assertFalse(is_exception(gen_fan(12)))

    @tag("slow")
    def test_cache_matches_the_derived_exceptions(self):
        self.assertEqual(exception_forms(), {canonical_form(M) for M in derive_exceptions()})


class SurgeryTests(SimpleTestCase):
    def test_delete_ear_of_a_fan(self):
        rest = delete_vertex(gen_fan(5), 1)

        self.assertEqual(rest.graph.n, 4)
        self.assertEqual(rest.labels, (0, 2, 3, 4))
        self.assertIs(classify(rest.graph), GraphClass.MOP)

    def test_delete_interior_degree_three_vertex(self):
        rest = delete_vertex(gen_wheel(3), 3)

        self.assertEqual(rest.graph.n, 3)
        self.assertEqual(len(rest.graph.edges), 3)

    def test_delete_vertex_rejects_a_fan_centre(self):
        with self.assertRaises(SurgeryError):
            delete_vertex(gen_fan(6), 0)

    def test_delete_vertices_relabels_in_order(self):
        rest = delete_vertices(fixture("h7.ntg"), {1})

        self.assertEqual(rest.labels, (0, 2, 3, 4, 5, 6))
        self.assertEqual(rest.lift({0, 1}), frozenset({0, 2}))
        self.assertEqual(rest.lower({3, 5}), frozenset({2, 4}))

    def test_octahedron_has_no_separating_triangle(self):
        self.assertEqual(separating_triangles(fixture("octahedron.ntg")), [])

    def test_nested_octahedra_have_separating_triangles(self):
        self.assertTrue(separating_triangles(gen_octahedra(2)))

    def test_contractibility(self):
        T = fixture("h7.ntg")

        self.assertTrue(is_diagonal(T, (0, 2)))
        self.assertFalse(is_contractible(T, (0, 2)))
        self.assertTrue(is_contractible(T, (0, 6)))
        self.assertFalse(is_contractible(fixture("octahedron.ntg"), (0, 1)))

    def test_contract_edge_into_the_smaller_endpoint(self):
        contraction = contract_edge(fixture("h7.ntg"), (6, 0))

        self.assertEqual(contraction.graph.n, 6)
        self.assertEqual(contraction.merged, 0)
        self.assertEqual(contraction.mapping[6], 0)
        self.assertIs(classify(contraction.graph), GraphClass.MOP)

    def test_contract_edge_rejects_a_diagonal(self):
        with self.assertRaises(SurgeryError):
            contract_edge(fixture("h7.ntg"), (0, 2))

    def test_remove_boundary_edge_exposes_the_hub(self):
        T = fixture("w4.ntg")

        reduct = remove_boundary_edge(T, (0, 1))

        self.assertEqual(reduct.n, 5)
        self.assertEqual(reduct.h, 5)
        self.assertTrue(reduct.on_boundary(4))
        self.assertFalse(reduct.has_edge(0, 1))

    def test_remove_boundary_edge_needs_an_interior_apex(self):
        with self.assertRaises(SurgeryError):
            remove_boundary_edge(gen_fan(6), (0, 1))

    def test_glue_quadrilateral_adds_two_vertices(self):
        graph, w1, w2 = glue_quadrilateral(gen_fan(5), 0, 1)

        self.assertEqual((w1, w2), (5, 6))
        self.assertEqual(graph.n, 7)
        for u, v in ((0, w1), (0, w2), (w1, w2), (1, w2)):
            self.assertTrue(graph.has_edge(u, v))
        self.assertFalse(graph.has_edge(1, w1))

    def test_find_contractible_at_boundary_vertex(self):
        T = fixture("h7.ntg")

        edge = find_contractible_at(T, 0)

        self.assertIn(0, edge)
        self.assertTrue(is_contractible(T, tuple(edge)))

    def test_peel_ends_on_an_interior_vertex(self):
        T = fixture("octahedron.ntg")

        result = peel(T, 0)

        self.assertFalse(T.on_boundary(result.interior_partner))
        self.assertTrue(T.has_edge(result.anchor, result.interior_partner))
        self.assertTrue(is_contractible(T, (result.anchor, result.interior_partner)))

    def test_contract_edge_rejects_a_separating_triangle(self):
        with self.assertRaises(SurgeryError):
            contract_edge(fixture("octahedron.ntg"), (0, 1))
        T = gen_octahedra(2)
        u, v, _ = separating_triangles(T)[0]
        with self.assertRaises(SurgeryError):
            contract_edge(T, (u, v))

    def test_find_interior_pair_inside_the_outer_triangle(self):
        self.assertEqual(find_interior_pair(gen_wheel(3), 0, 2), 3)

        T = fixture("octahedron.ntg")
        v = find_interior_pair(T, 0, 2)

        self.assertFalse(T.on_boundary(v))
        self.assertTrue(T.has_edge(0, v))
        self.assertEqual(delete_vertices(T, {0, v}).graph.n, 4)

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(8, 18))
    def test_contractible_edges_contract_cleanly(self, seed, n):
        T = gen_random_neartri(n, n // 3, seed)
        for u, v in sorted(T.edges):
            if is_contractible(T, (u, v)):
                contraction = contract_edge(T, (u, v))
                self.assertEqual(contraction.graph.n, n - 1)
            else:
                with self.assertRaises(SurgeryError):
                    contract_edge(T, (u, v))

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), h=st.integers(4, 8), extra=st.integers(1, 10))
    def test_peel_pair_is_adjacent_and_contractible(self, seed, h, extra):
        T = subdivided_wheel(h, extra, seed)
        for start in T.boundary:
            result = peel(T, start)
            pair = (result.anchor, result.interior_partner)
            self.assertFalse(T.on_boundary(result.interior_partner))
            self.assertTrue(T.on_boundary(result.anchor))
            self.assertTrue(T.has_edge(*pair))
            self.assertTrue(is_contractible(T, pair))

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(5, 24))
    def test_boundary_subgraph_has_two_independent_ears(self, seed, n):
        T = gen_random_neartri(n, seed % (n - 3), seed)
        G = boundary_subgraph(T)
        ears = [v for v in G if G.degree(v) == 2]

        self.assertTrue(any(not G.has_edge(x, y) for x, y in combinations(ears, 2)))

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(5, 18))
    def test_every_boundary_vertex_has_a_contractible_edge(self, seed, n):
        T = gen_random_neartri(n, seed % (n - 3), seed)
        if T.h == 3:
            return
        for u in T.boundary:
            self.assertTrue(is_contractible(T, tuple(find_contractible_at(T, u))))


class DecompositionTests(SimpleTestCase):
    def test_h7_has_one_terminal_region(self):
        decomposition = decompose(fixture("h7.ntg"))

        self.assertEqual(len(decomposition.regions), 4)
        terminal = decomposition.terminal_regions
        self.assertEqual(len(terminal), 1)
        self.assertEqual(terminal[0].interior_count, 1)
        self.assertEqual(set(terminal[0].corners), {0, 2, 4})
        self.assertTrue(nx.is_tree(decomposition.dual))

    def test_mops_around_the_h7_triangle(self):
        T = fixture("h7.ntg")
        P = select_terminal(decompose(T))

        parts = mops_around(T, P)

        self.assertEqual([part.order for part in parts], [3, 3, 3])
        self.assertTrue(all(part.is_mop for part in parts))

    def test_boundary_arc_runs_clockwise(self):
        T = fixture("h7.ntg")

        self.assertEqual(boundary_arc(T, 0, 2), (0, 1, 2))
        self.assertEqual(boundary_arc(T, 4, 0), (4, 5, 0))

    def test_decompose_rejects_a_mop(self):
        with self.assertRaises(DecompositionError):
            decompose(gen_fan(6))

    def test_split_by_diagonal_shares_the_side(self):
        T = fixture("h7.ntg")
        P = select_terminal(decompose(T))

        pair = split_by_diagonal(T, (0, 2), P)

        self.assertEqual(len(pair.outer.labels), 3)
        self.assertEqual(len(pair.inner.labels), 6)

    def test_mop_split_diagonal_avoids_the_given_edge(self):
        chord = mop_split_diagonal(gen_fan(10), (0, 1))

        self.assertEqual(tuple(chord), (0, 5))

    def test_mop_split_diagonal_needs_ten_vertices(self):
        with self.assertRaises(DecompositionError):
            mop_split_diagonal(gen_fan(9), (0, 1))

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(10, 40))
    def test_mop_split_diagonal_exists_for_every_boundary_edge(self, seed, n):
        M = gen_random_mop(n, seed)
        pos = M.boundary_position
        for x, y in pairwise((*M.boundary, M.boundary[0])):
            chord = mop_split_diagonal(M, (x, y))
            self.assertTrue(is_diagonal(M, tuple(chord)))
            sides = []
            for start, end in (tuple(chord), tuple(chord)[::-1]):
                span = (pos[end] - pos[start]) % n
                sides.append(6 <= span + 1 <= 9 and (pos[x] - pos[start]) % n >= span)
            self.assertTrue(any(sides), (x, y, chord))

    def test_summary_of_a_decorated_wheel(self):
        summary = decomposition_summary(decorated_wheel((9, 5, 6, 8, 4, 3)))

        self.assertEqual(summary["class"], "Irreducible")
        self.assertEqual(sorted(part["order"] for part in summary["mops"]), [3, 4, 5, 6, 8, 9])
        self.assertEqual(sum(region["selected"] for region in summary["regions"]), 1)

    def test_summary_of_a_mop_has_no_regions(self):
        summary = decomposition_summary(gen_fan(7))

        self.assertEqual(summary["class"], "MOP")
        self.assertEqual(summary["regions"], [])

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(7, 24))
    def test_irreducible_instances_have_a_terminal_polygon(self, seed, n):
        T = gen_random_neartri(n, max(1, n // 4), seed)
        if classify(T) is not GraphClass.IRREDUCIBLE:
            return
        decomposition = decompose(T)
        self.assertTrue(decomposition.terminal_regions)
        parts = mops_around(T, select_terminal(decomposition))
        self.assertLessEqual(sum(not part.is_mop for part in parts), 1)


class MopSolverTests(MissingCacheMixin, SimpleTestCase):
    def test_small_fans(self):
        self.assertEqual(gamma_t_mop(fixture("f5.ntg")), 2)
        self.assertEqual(gamma_t_mop(gen_fan(12)), 2)

    def test_exceptions_need_five(self):
        self.assertEqual(gamma_t_mop(fixture("h1.ntg")), 5)
        self.assertEqual(gamma_t_mop(fixture("h2.ntg")), 5)

    def test_exact_tds_mop_is_lexicographically_smallest(self):
        certificate = exact_tds_mop(gen_fan(5))

        self.assertEqual(certificate.vertices, frozenset({0, 1}))

    def test_forced_out_vertex(self):
        certificate = mop_tds_with(gen_fan(5), forced_out={0})

        self.assertEqual(certificate.vertices, frozenset({2, 3}))

    def test_conflicting_constraints_have_no_solution(self):
        self.assertIsNone(mop_tds_with(gen_fan(5), forced_in={1}, forced_out={1}))

    def test_pentagon_pair_contains_the_anchor(self):
        M = gen_fan(5)
        for u in range(5):
            certificate = pentagon_tds_with(M, u)
            self.assertEqual(certificate.size, 2)
            self.assertIn(u, certificate.vertices)
            self.assertTrue(is_tds(M, certificate.vertices))

    def test_hexagon_pair_contains_an_endpoint(self):
        M = gen_mop(6, [(1, 3), (3, 5), (5, 1)])
        for i in range(6):
            certificate = hexagon_tds_pair(M, i, (i + 1) % 6)
            self.assertEqual(certificate.size, 2)
            self.assertTrue(certificate.vertices & {i, (i + 1) % 6})

    def test_hexagon_pair_rejects_a_chord(self):
        with self.assertRaises(ValueError):
            hexagon_tds_pair(gen_fan(6), 0, 3)

    def test_catalan_counts(self):
        self.assertEqual([catalan(m) for m in range(6)], [1, 1, 2, 5, 14, 42])
        self.assertEqual(catalan(10), 16796)
        self.assertEqual(sum(1 for _ in raw_mop_chords(7)), catalan(5))

    def test_enumerate_classes(self):
        self.assertEqual(len(enumerate_mops(5)), 1)
        self.assertEqual(len(enumerate_mops(6)), 3)
        self.assertEqual(len(enumerate_mops(7)), 4)
        self.assertEqual(len(enumerate_mops(8)), 12)

    def test_enumerate_is_capped(self):
        with self.assertRaises(GeneratorError):
            enumerate_mops(17)

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(5, 14))
    def test_dynamic_program_agrees_with_search(self, seed, n):
        M = gen_random_mop(n, seed)

        self.assertEqual(gamma_t_mop(M), gamma_t(M, SMALL_LIMITS))

    @tag("slow")
    def test_bound_holds_for_every_mop_up_to_fourteen(self):
        for n in range(5, 15):
            for M in enumerate_mops(n):
                if is_exception(M):
                    continue
                self.assertLessEqual(gamma_t_mop(M), budget(n), serialize(M))


class OracleTests(SimpleTestCase):
    def test_octahedron(self):
        self.assertEqual(gamma_t(fixture("octahedron.ntg"), SMALL_LIMITS), 2)

    def test_h7(self):
        certificate = exact_tds(fixture("h7.ntg"), limits=SMALL_LIMITS)

        self.assertEqual(certificate.vertices, frozenset({0, 2}))

    def test_must_contain(self):
        certificate = exact_tds(gen_fan(5), must_contain={1}, limits=SMALL_LIMITS)

        self.assertEqual(certificate.vertices, frozenset({0, 1}))

    def test_returned_sets_are_minimum(self):
        self.assertEqual(gamma_t(gen_octahedra(1), SMALL_LIMITS), 2)
        self.assertEqual(exact_tds(gen_fan(8), limits=SMALL_LIMITS).size, 2)
        self.assertEqual(naive_tds(gen_fan(8)).size, 2)

        certificate = exact_tds(fixture("f5.ntg"), must_contain={1}, max_size=2, limits=SMALL_LIMITS)

        self.assertEqual(certificate.size, 2)
        self.assertIn(1, certificate.vertices)

    def test_max_size_too_small(self):
        self.assertIsNone(exact_tds(fixture("octahedron.ntg"), max_size=1, limits=SMALL_LIMITS))

    def test_size_cap(self):
        with self.assertRaises(SearchBudgetExceeded):
            exact_tds(gen_fan(10), limits=SearchLimits(max_n=8))

    def test_node_budget(self):
        with self.assertRaises(SearchBudgetExceeded):
            exact_tds(fixture("h1.ntg"), limits=SearchLimits(node_budget=1))

    @override_settings(NT_ORACLE_MAX=6)
    def test_limits_come_from_settings(self):
        self.assertEqual(SearchLimits.from_settings().max_n, 6)
        with self.assertRaises(SearchBudgetExceeded):
            exact_tds(gen_fan(7))

    def test_complete_tds_keeps_the_partial_set(self):
        certificate = complete_tds(gen_fan(7), {1}, 2, SMALL_LIMITS)

        self.assertIn(1, certificate.vertices)
        self.assertTrue(is_tds(gen_fan(7), certificate.vertices))

    def test_complete_tds_respects_the_limit(self):
        self.assertIsNone(complete_tds(fixture("h1.ntg"), set(), 4, SMALL_LIMITS))

    def test_accepts_networkx_graphs(self):
        self.assertEqual(gamma_t(nx.cycle_graph(6), SMALL_LIMITS), 4)

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(5, 9))
    def test_search_agrees_with_enumeration(self, seed, n):
        T = gen_random_neartri(n, seed % (n - 3), seed)

        self.assertEqual(gamma_t(T, SMALL_LIMITS), naive_tds(T).size)


class GeneratorTests(MissingCacheMixin, SimpleTestCase):
    def test_fan_needs_three_vertices(self):
        with self.assertRaises(GeneratorError):
            gen_fan(2)

    def test_gen_mop_rejects_crossing_chords(self):
        with self.assertRaises(GeneratorError):
            gen_mop(6, [(0, 3), (1, 4), (2, 5)])

    def test_random_neartri_shape(self):
        T = gen_random_neartri(10, 3, seed=5)

        self.assertEqual(T.n, 10)
        self.assertEqual(len(T.interior), 3)
        self.assertEqual(serialize(T), serialize(gen_random_neartri(10, 3, seed=5)))

    def test_random_neartri_bounds(self):
        with self.assertRaises(GeneratorError):
            gen_random_neartri(8, 5, seed=0)

    def test_wheel(self):
        W = gen_wheel(5)

        self.assertEqual((W.n, W.h), (6, 5))
        self.assertEqual(W.degree(5), 5)

    def test_octahedron_generator_matches_fixture(self):
        self.assertEqual(gen_octahedra(1).edges, fixture("octahedron.ntg").edges)

    def test_two_octahedra(self):
        T = gen_octahedra(2)

        self.assertEqual(T.n, 12)
        self.assertEqual(T.h, 3)
        self.assertEqual(gamma_t(T, SMALL_LIMITS), 4)

    @tag("slow")
    def test_three_octahedra(self):
        self.assertEqual(gamma_t(gen_octahedra(3), SMALL_LIMITS), 6)

    def test_tight_family_meets_the_bound(self):
        for k in range(1, 5):
            M = gen_tight_mop(k)
            self.assertEqual(M.n, 5 * k)
            self.assertEqual(gamma_t_mop(M), 2 * k)
            self.assertEqual(budget(M.n), 2 * k)

    def test_generator_dispatch(self):
        self.assertEqual(GeneratorSpec(Family.FAN, n=8).build().n, 8)
        self.assertEqual(GeneratorSpec(Family.WHEEL, n=7).build().h, 6)
        self.assertEqual(GeneratorSpec(Family.H7).build().n, 7)

    def test_generator_requires_its_parameters(self):
        with self.assertRaises(GeneratorError):
            GeneratorSpec(Family.FAN).build()
        with self.assertRaises(GeneratorError):
            GeneratorSpec(Family.EXCEPTIONS, k=3).build()

    def test_sample_corpus(self):
        corpus = sample_corpus(6, seed=1, max_n=12)

        self.assertEqual(len(corpus), 6)
        self.assertTrue(all(5 <= T.n <= 12 for T in corpus))

    @tag("slow")
    def test_derive_exceptions_finds_the_two_classes(self):
        found = derive_exceptions()

        self.assertEqual(len(found), 2)
        forms = {canonical_form(M) for M in found}
        self.assertEqual(
            forms,
            {canonical_form(gen_mop(12, H1_CHORDS)), canonical_form(gen_mop(12, H2_CHORDS))},
        )


class ConstructorTests(MissingCacheMixin, SimpleTestCase):
    def assertCertified(self, T, certificate):
        self.assertTrue(is_tds(T.to_networkx(), certificate.vertices))
        self.assertLessEqual(certificate.size, budget(T.n))
        for step in certificate.trace:
            if step.size_removed:
                self.assertLessEqual(
                    budget(step.n - step.size_removed) + step.budget_spent, budget(step.n)
                )

    def case_ids(self, certificate):
        return {step.case_id for step in certificate.trace}

    def test_budget_identity(self):
        for n in range(5, 1001):
            self.assertEqual(budget(n - 5) + 2, budget(n))

    def test_fan_is_a_base_case(self):
        T = fixture("f5.ntg")

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertCertified(T, certificate)
        self.assertEqual(certificate.size, 2)
        self.assertEqual([step.case_id for step in certificate.trace], [CaseId.BASE_MOP])

    def test_wheel_is_reduced_first(self):
        T = fixture("w4.ntg")

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertCertified(T, certificate)
        self.assertEqual(certificate.trace[-1].case_id, CaseId.REDUCIBLE)

    def test_exceptional_input(self):
        with self.assertRaises(ExceptionalInput):
            tds_neartri(fixture("h1.ntg"), SMALL_LIMITS)
        with self.assertRaises(ExceptionalInput):
            tds_neartri(fixture("h2.ntg"), SMALL_LIMITS)

    def test_too_small(self):
        with self.assertRaises(NotApplicable):
            tds_neartri(gen_fan(4), SMALL_LIMITS)

    def test_h7(self):
        T = fixture("h7.ntg")

        self.assertCertified(T, tds_neartri(T, SMALL_LIMITS))

    def test_order_seven_outer_mop(self):
        T = decorated_wheel((7, 3, 3))

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertCertified(T, certificate)
        self.assertIn(CaseId.C3, self.case_ids(certificate))

    def test_pentagons_around_a_wheel(self):
        T = decorated_wheel((5, 5, 5))

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertCertified(T, certificate)
        self.assertIn(CaseId.C12, self.case_ids(certificate))

    def test_decorated_wheels(self):
        for orders in [(4, 3, 3), (6, 3, 3), (8, 3, 5), (9, 3, 3), (9, 5, 5), (5, 3, 5), (3, 3, 3, 3), (12, 3, 3)]:
            with self.subTest(orders=orders):
                T = decorated_wheel(orders)
                self.assertCertified(T, tds_neartri(T, SMALL_LIMITS))

    def test_pentagon_pair_below_the_induction_base(self):
        T = decorated_wheel((3, 3, 5))

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertEqual(T.n, 9)
        self.assertCertified(T, certificate)
        self.assertEqual([step.case_id for step in certificate.trace], [CaseId.ORACLE_FALLBACK])

    def test_two_centred_nonagons(self):
        T = decorated_wheel(("nonagon",) * 3)

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertEqual(T.n, 25)
        self.assertCertified(T, certificate)
        self.assertIn(CaseId.C11, self.case_ids(certificate))

    def test_centred_nonagon_next_to_an_ear(self):
        T = decorated_wheel(("nonagon", "heavy", 3))

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertEqual(T.n, 18)
        self.assertCertified(T, certificate)
        self.assertIn(CaseId.C8, self.case_ids(certificate))

    def test_completion_is_recorded(self):
        T = decorated_wheel((7, 3, 3))

        certificate = tds_neartri(T, SMALL_LIMITS)

        for step in certificate.trace:
            self.assertEqual(list(step.completed), sorted(step.completed))
            self.assertLessEqual(len(step.completed), step.bound)

    def test_regressions(self):
        for n, interior, seed in [
            (50, 8, 3467901563),
            (80, 44, 1199875875),
            (50, 16, 16),
            (23, 18, 899242145),
            (17, 3, 1703436809),
            (14, 9, 2450686540),
        ]:
            with self.subTest(n=n, interior=interior, seed=seed):
                T = gen_random_neartri(n, interior, seed)
                self.assertCertified(T, tds_neartri(T, SMALL_LIMITS))

    def test_solver_keeps_no_state_between_runs(self):
        solver = InductiveSolver(SMALL_LIMITS)

        first = solver.solve(fixture("h7.ntg"))
        second = solver.solve(fixture("h7.ntg"))

        self.assertEqual(first, second)

    def test_exact_method(self):
        certificate = solve_exact(fixture("octahedron.ntg"), SMALL_LIMITS)

        self.assertEqual(certificate.size, 2)
        self.assertEqual(certificate.trace[0].case_id, CaseId.ORACLE_FALLBACK)

    def test_rewrite_glued_tds(self):
        graph, w1, w2 = glue_quadrilateral(gen_fan(5), 0, 1)
        D = exact_tds(graph, must_contain={w2}, limits=SMALL_LIMITS).vertices

        rewritten = rewrite_glued_tds(D, 0, w1, w2, graph)

        self.assertIn(0, rewritten)
        self.assertNotIn(w1, rewritten)
        self.assertNotIn(w2, rewritten)
        self.assertLessEqual(len(rewritten), len(D))
        self.assertTrue(is_tds(gen_fan(5), rewritten))

    def test_lift_contraction_expands_the_merged_vertex(self):
        T = fixture("h7.ntg")
        contraction = contract_edge(T, (0, 6))

        lifted, merged = lift_contraction({0, 2}, contraction)

        self.assertTrue(merged)
        self.assertEqual(lifted, frozenset({0, 2, 6}))
        self.assertTrue(is_tds(T, lifted))

    def test_lift_contraction_adds_the_anchor(self):
        contraction = contract_edge(fixture("h7.ntg"), (0, 6))

        lifted, merged = lift_contraction({2, 3}, contraction, anchor=6)

        self.assertFalse(merged)
        self.assertEqual(lifted, frozenset({2, 3, 6}))

    @PROPERTY_SETTINGS
    @given(seed=st.integers(0, 2**32), n=st.integers(5, 18))
    def test_random_instances_are_certified(self, seed, n):
        T = gen_random_neartri(n, seed % (n - 3), seed)
        if is_exception(T):
            return

        certificate = tds_neartri(T, SMALL_LIMITS)

        self.assertCertified(T, certificate)
        self.assertGreaterEqual(certificate.size, gamma_t(T, SMALL_LIMITS))

    @tag("slow")
    def test_soundness_corpus(self):
        for n in (10, 15, 20, 30, 50, 80):
            for seed in range(500):
                T = gen_random_neartri(n, seed % (n - 3), seed)
                if is_exception(T):
                    continue
                with self.subTest(n=n, seed=seed):
                    self.assertCertified(T, tds_neartri(T, SMALL_LIMITS))


class CertificateTests(SimpleTestCase):
    def test_json_shape(self):
        step = ReductionStep(CaseId.C3, n=11, size_removed=5, budget_spent=2, bound=4, depth=1)
        certificate = TdsCertificate({3, 1}, (step,))

        data = certificate.to_dict(11)

        self.assertEqual(data["vertices"], [1, 3])
        self.assertEqual(data["bound"], 4)
        self.assertEqual(data["trace"][0]["case_id"], "C3")
        self.assertEqual(TdsCertificate.from_dict(data), certificate)

    def test_completed_vertices_survive_json(self):
        step = ReductionStep(CaseId.C7, n=13, size_removed=5, budget_spent=2, bound=5, completed=(4, 9))

        data = step.to_dict()

        self.assertEqual(data["completed"], [4, 9])
        self.assertEqual(ReductionStep.from_dict(data), step)
        self.assertEqual(ReductionStep.from_dict({**data, "completed": []}).completed, ())

    def test_duplicate_vertices_are_rejected(self):
        with self.assertRaises(ValueError):
            TdsCertificate.from_dict({"vertices": [1, 1], "size": 2})

    def test_undominated(self):
        self.assertEqual(undominated(gen_fan(5), {0}), frozenset({0}))


class ReportTests(MissingCacheMixin, SimpleTestCase):
    def test_check_instance_on_a_fan(self):
        record = check_instance(("fan", serialize(gen_fan(9)), SMALL_LIMITS))

        self.assertTrue(record.ok)
        self.assertEqual(record.graph_class, "MOP")
        self.assertEqual(record.gamma_t, 2)
        self.assertEqual(record.bound, 3)

    def test_exceptions_are_reported_not_failed(self):
        record = check_instance(("h1", (FIXTURES / "h1.ntg").read_text(), SMALL_LIMITS))

        self.assertTrue(record.ok)
        self.assertTrue(record.exception)
        self.assertEqual(record.size, 5)

    @patch("neartri.reports.tds_neartri")
    def test_oversized_certificate_fails(self, mock_tds_neartri):
        mock_tds_neartri.return_value = TdsCertificate(range(9))

        record = check_instance(("fan", serialize(gen_fan(9)), SMALL_LIMITS))

        self.assertFalse(record.ok)

    def test_report_summary(self):
        records = [
            check_instance((f"tight-{k}", serialize(gen_tight_mop(k)), SMALL_LIMITS))
            for k in (1, 2, 3)
        ]

        report = RunReport(records)

        self.assertEqual(report.summary()["failures"], 0)
        self.assertEqual(report.max_ratio, 1.0)
        lines = report.json_lines()
        self.assertEqual(len(lines), 4)
        self.assertEqual(json.loads(lines[0])["class"], "MOP")


class CommandTests(MissingCacheMixin, SimpleTestCase):
    def run_command(self, *args):
        stdout = io.StringIO()
        stderr = io.StringIO()
        call_command(*args, stdout=stdout, stderr=stderr)
        return stdout.getvalue()

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args)
        self.assertEqual(ctx.exception.returncode, code)

    def test_validate(self):
        output = self.run_command("validate", str(FIXTURES / "f5.ntg"))

        self.assertIn("valid MOP", output)
        self.assertIn("n=5", output)

    def test_validate_exit_codes(self):
        self.assertExitCode(1, "validate", str(FIXTURES / "quad_face.ntg"))
        self.assertExitCode(1, "validate", str(FIXTURES / "syntax_error.ntg"))
        self.assertExitCode(2, "validate", str(FIXTURES / "missing.ntg"))

    def test_solve_prints_a_certificate(self):
        data = json.loads(self.run_command("solve", str(FIXTURES / "f5.ntg")))

        self.assertEqual(data["n"], 5)
        self.assertLessEqual(data["size"], 2)
        self.assertEqual(data["trace"][0]["case_id"], "BaseMop")

    def test_solve_exact_octahedron(self):
        data = json.loads(
            self.run_command("solve", str(FIXTURES / "octahedron.ntg"), "--method", "exact")
        )

        self.assertEqual(data["size"], 2)

    def test_solve_exit_codes(self):
        self.assertExitCode(3, "solve", str(FIXTURES / "h1.ntg"))
        self.assertExitCode(1, "solve", str(FIXTURES / "h7.ntg"), "--method", "mop-dp")

    @override_settings(NT_ORACLE_MAX=10)
    def test_solve_exact_respects_the_cap(self):
        self.assertExitCode(1, "solve", str(FIXTURES / "h1.ntg"), "--method", "exact")

    def test_solve_pretty(self):
        output = self.run_command("solve", str(FIXTURES / "w4.ntg"), "--pretty")

        self.assertIn("Reducible", output)
        self.assertIn("bound=2", output)

    def test_inspect(self):
        data = json.loads(self.run_command("inspect", str(FIXTURES / "h7.ntg")))

        self.assertEqual(data["class"], "Irreducible")
        self.assertEqual([part["order"] for part in data["mops"]], [3, 3, 3])

    def test_inspect_dot(self):
        output = self.run_command("inspect", str(FIXTURES / "h7.ntg"), "--dot")

        self.assertTrue(output.startswith("graph T {"))

    def test_replay_accepts_a_solved_certificate(self):
        certificate = Path(self.temp_dir) / "h7.json"
        certificate.write_text(self.run_command("solve", str(FIXTURES / "h7.ntg")))

        output = self.run_command("replay", str(certificate), str(FIXTURES / "h7.ntg"))

        self.assertIn("ok", output)

    def test_replay_rejects_a_non_dominating_set(self):
        certificate = Path(self.temp_dir) / "bad.json"
        certificate.write_text(json.dumps({"n": 7, "size": 2, "vertices": [1, 3], "trace": []}))

        self.assertExitCode(1, "replay", str(certificate), str(FIXTURES / "h7.ntg"))

    def test_gen_writes_a_file(self):
        output = self.run_command("gen", "--family", "fan", "--n", "7", "-o", self.temp_dir)

        path = Path(self.temp_dir) / "fan_n7.ntg"
        self.assertIn("Wrote", output)
        self.assertEqual(parse(path.read_text()).edges, gen_fan(7).edges)

    def test_gen_missing_parameter(self):
        self.assertExitCode(1, "gen", "--family", "tight_mop")

    def test_verify_fans(self):
        output = self.run_command("verify", "--family", "fan", "--n-range", "5..8")

        lines = [json.loads(line) for line in output.splitlines()]
        self.assertEqual(len(lines), 5)
        self.assertTrue(all(line["ok"] for line in lines[:-1]))
        self.assertEqual(lines[-1]["failures"], 0)

    def test_verify_tight_family_ratio(self):
        output = self.run_command("verify", "--family", "tight_mop", "--n-range", "4")

        summary = json.loads(output.splitlines()[-1])
        self.assertEqual(summary["max_ratio"], 1.0)

    @patch("neartri.reports.tds_neartri")
    def test_verify_fails_on_a_bad_certificate(self, mock_tds_neartri):
        mock_tds_neartri.return_value = TdsCertificate({0})

        self.assertExitCode(4, "verify", "--family", "fan", "--n-range", "6")

    def test_enumeratemops(self):
        output = self.run_command("enumeratemops", "6", "-o", self.temp_dir)

        self.assertIn("3 classes", output)
        self.assertEqual(len(list(Path(self.temp_dir).glob("*.ntg"))), 3)

    @patch("neartri.management.commands.deriveexceptions.derive_exceptions")
    def test_deriveexceptions_writes_the_cache(self, mock_derive_exceptions):
        mock_derive_exceptions.return_value = (gen_mop(12, H1_CHORDS), gen_mop(12, H2_CHORDS))

        self.run_command("deriveexceptions")

        data = json.loads(self.cache_path.read_text())
        self.assertEqual(data["n"], 12)
        self.assertEqual(len(data["chords"]), 2)
        self.assertEqual(len(data["chords"][0]), 9)
        self.assertTrue(is_exception(fixture("h2.ntg")))

    @tag("slow")
    def test_verify_random_corpus(self):
        output = self.run_command(
            "verify", "--family", "random_neartri", "--n-range", "10..20", "--samples", "5"
        )

        self.assertEqual(json.loads(output.splitlines()[-1])["failures"], 0)

    @tag("slow")
    def test_enumerate_twelve_reports_two_exceptions(self):
        output = self.run_command("verify", "--family", "enumerate_mops", "--n-range", "12")

        self.assertEqual(json.loads(output.splitlines()[-1])["exceptions"], 2)
