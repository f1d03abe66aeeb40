import pytest

from speiserlab.errors import ScheduleError
from speiserlab.graph_core import (
    bfs_layers,
    canonical_form,
    classify,
    euler_characteristic,
    trace_faces,
)
from speiserlab.lattices import cycle_graph, grid_patch, triangular_ball
from speiserlab.speiser import (
    GrowthSchedule,
    build_octagonal_speiser,
    extend_speiser,
    extended_layer_counts,
    lambda_triangulation,
    speiser_ball,
    tree_replace,
)


# -- octagonal base graph ---------------------------------------------------


def test_octagonal_root_sphere():
    psi = build_octagonal_speiser(1)
    layers = bfs_layers(psi, 0)
    assert layers.sphere_sizes()[1] == 3


def test_octagonal_depth6():
    psi = build_octagonal_speiser(6)
    layers = bfs_layers(psi, 0)
    assert layers.reliable_depth >= 6
    sizes = layers.sphere_sizes()
    for n in range(1, 7):
        assert sizes[n] <= 3**n
    for v in psi.interior_vertices():
        assert psi.degree(v) == 3
    inner = [f for f in trace_faces(psi) if not f.touches_frontier]
    assert inner
    assert all(len(f) == 8 for f in inner)
    c = classify(psi)
    assert c.is_bipartite
    assert c.homogeneous_degree == 3
    assert psi.tags[0] == "circle"


def test_octagonal_dual_is_degree8_triangulation():
    from speiserlab.graph_core import dual

    psi = build_octagonal_speiser(4)
    d = dual(psi)
    c = classify(d)
    assert c.is_disk_triangulation
    assert c.homogeneous_degree == 8


def test_lambda_refinement_constants_against_dual():
    # the dual of the octagon patch has triangular faces, so its subdivision
    # is a bounded refinement: M_edge = 3 and M_face = 2q + 1 = 7
    from speiserlab.graph_core import dual
    from speiserlab.refinement import check_refinement

    tri = dual(build_octagonal_speiser(3))
    lam, rmap = lambda_triangulation(tri, with_map=True)
    report = check_refinement(tri, lam, rmap)
    assert report.is_refinement
    assert report.m_edge == 3
    assert report.m_face == 7


def test_speiser_ball_trims_to_exact_ball():
    ball, layers = speiser_ball(2)
    assert layers.depth == 2
    assert set(layers.spheres[2]) <= ball.frontier
    assert len(layers.cut_edges) == 2


# -- growth schedules -------------------------------------------------------


def test_schedule_rejects_even():
    with pytest.raises(ScheduleError):
        GrowthSchedule((4,))


def test_schedule_too_short():
    ball, layers = speiser_ball(2)
    with pytest.raises(ScheduleError):
        tree_replace(ball, layers, GrowthSchedule((3,)))


# -- tree replacement -------------------------------------------------------


def test_tree_replace_identity():
    ball, layers = speiser_ball(2)
    out = tree_replace(ball, layers, GrowthSchedule((1, 1)))
    assert canonical_form(out) == canonical_form(ball)


def test_tree_replace_single_edge_pattern():
    # path of length 1 between two vertices, replaced with l = 5:
    # vertices u, t1..t4, v and multiplicity pattern 1,2,1,2,1
    from speiserlab.lattices import path_graph

    g = path_graph(1)
    layers = bfs_layers(g, 0)
    out = tree_replace(g, layers, GrowthSchedule((5,)))
    assert out.n_vertices == 6
    assert out.n_edges == 7  # 3 singles + 2 doubles
    # internal vertices have degree 3 except the two endpoints (degree 1)
    degs = sorted(out.degree(v) for v in out.vertices())
    assert degs == [1, 1, 3, 3, 3, 3]
    # bigons show up as 2-gon faces
    assert sorted(len(f) for f in trace_faces(out))[:2] == [2, 2]
    assert euler_characteristic(out) == 2


def test_tree_replace_psi_depth2():
    ball, layers = speiser_ball(2)
    out = tree_replace(ball, layers, GrowthSchedule((3, 5)))
    c = classify(out)
    assert c.is_bipartite
    for v in out.interior_vertices():
        assert out.degree(v) == 3
    lay = bfs_layers(out, 0)
    # distances stretch: S(1..2) have 3 tree vertices each, first originals at 3
    assert lay.sphere_sizes()[1] == 3
    assert lay.sphere_sizes()[3] == 3
    # spacing: one internal vertex per replaced edge at each distance
    for k in range(1, 3):
        assert lay.sphere_sizes()[k] == 3


def test_tree_replace_internal_vertex_spacing():
    ball, layers = speiser_ball(1)
    out = tree_replace(ball, layers, GrowthSchedule((7,)))
    lay = bfs_layers(out, 0)
    for j in range(1, 7):
        assert lay.sphere_sizes()[j] == 3
    # endpoints keep degree 3 at the originals' new distance
    assert lay.sphere_sizes()[7] == 3


# -- lambda triangulation ---------------------------------------------------


def test_lambda_square_face():
    g = grid_patch(2, 2)  # one square face plus outer
    out = lambda_triangulation(g, outer_face=1)
    # one center + 4 midpoints added to 4 vertices
    assert out.n_vertices == 4 + 4 + 1
    tri = [f for f in trace_faces(out) if len(f) == 3]
    assert len(tri) == 8


def test_lambda_bigon():
    g = cycle_graph(2)
    out = lambda_triangulation(g)
    # both faces are bigons -> 2 centers, 2 midpoints, 4+4 triangles
    assert out.n_vertices == 2 + 2 + 2
    faces = trace_faces(out)
    assert sorted(len(f) for f in faces) == [3] * 8
    assert euler_characteristic(out) == 2


def test_lambda_on_psi_is_disk_triangulation():
    psi = build_octagonal_speiser(5)
    out = lambda_triangulation(psi)
    c = classify(out)
    assert c.is_disk_triangulation
    # |V_out| = |V| + |E| + |F_interior|
    inner = [f for f in trace_faces(psi) if not f.touches_frontier]
    assert inner
    assert out.n_vertices == psi.n_vertices + psi.n_edges + len(inner)
    # p(2q) for a degree-3 Speiser graph: p <= 6
    assert c.p_of <= 6


# -- extended graph ---------------------------------------------------------


def test_extend_single_square_face():
    g = grid_patch(2, 2)
    out = extend_speiser(g, 2, outer_face=1)
    # rings of size 4, two new rings -> 8 new vertices
    assert out.n_vertices == 4 + 8
    inner = [f for f in trace_faces(out) if not f.touches_frontier]
    assert all(len(f) == 4 for f in inner)
    assert euler_characteristic(out) == 2


def test_extend_degree_bound_and_columns():
    from speiserlab.graph_core import face_of_dart, interior_faces

    ball, layers = speiser_ball(2)
    gamma = tree_replace(ball, layers, GrowthSchedule((3, 5)))
    ups = extend_speiser(gamma, 3)
    for v in ups.interior_vertices():
        assert ups.degree(v) <= 6
    # base vertices keep their ids and distances under extension
    lay_g = bfs_layers(gamma, 0)
    lay_u = bfs_layers(ups, 0)
    for v in gamma.interior_vertices()[:10]:
        assert lay_u.dist[v] == lay_g.dist[v]
    # a vertex whose three corners all lie on extended faces carries exactly
    # 3 columns: its degree grows from 3 to 6, one vertex per height above it
    psi = build_octagonal_speiser(5)
    ups5 = extend_speiser(psi, 2)
    inner = {f.index for f in interior_faces(psi)}
    owner = face_of_dart(psi)
    checked = 0
    for v in psi.interior_vertices():
        if all(owner[d] in inner for d in psi.rotations[v]):
            assert ups5.degree(v) - psi.degree(v) == 3
            checked += 1
    assert checked > 0


def test_extended_layer_counts_match_materialized_sphere_graphs():
    # frontier-free maps: every face gets a grid, so the closed forms and the
    # materialized extension must agree exactly
    from speiserlab.lattices import cube, octahedron

    for g in (octahedron(), cube()):
        layers = bfs_layers(g, 0)
        k_max = 6
        counts = extended_layer_counts(g, layers, k_max)
        ups = extend_speiser(g, k_max + 1)
        lay_u = bfs_layers(ups, 0)
        for k in range(k_max + 1):
            assert lay_u.sphere_sizes()[k] == counts.sphere_sizes[k], f"sphere {k}"
        for k in range(k_max):
            assert lay_u.cut_sizes()[k] == counts.cut_sizes[k], f"cut {k}"


def test_extended_counts_on_triangulation_control():
    # on a truncation the materialized extension misses the grids of skipped
    # (frontier-touching) faces; agreement holds below their nearest position
    g = triangular_ball(6, 6)
    layers = bfs_layers(g, 0)
    skipped_min = min(
        min(layers.dist[v] for v in f.vertices)
        for f in trace_faces(g)
        if f.touches_frontier
    )
    k_ok = skipped_min  # spheres complete up to this radius
    assert k_ok >= 3, "control too shallow to be informative"
    counts = extended_layer_counts(g, layers, k_ok)
    ups = extend_speiser(g, k_ok + 1)
    lay_u = bfs_layers(ups, 0)
    for k in range(k_ok + 1):
        assert lay_u.sphere_sizes()[k] == counts.sphere_sizes[k]
    for k in range(k_ok - 1):
        assert lay_u.cut_sizes()[k] == counts.cut_sizes[k]
