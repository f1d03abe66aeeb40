"""Cross-module property tests."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from speiserlab.graph_core import bfs_layers
from speiserlab.lattices import triangular_ball
from speiserlab.refinement import VMetric, check_refinement, coarsen_metric, subdivide4
from speiserlab.vel import solve_vel

BASE = triangular_ball(8, 2)
REF, RMAP = subdivide4(BASE)
M_EDGE = check_refinement(BASE, REF, RMAP).m_edge

HEX = triangular_ball(6, 5)
HEX_LAYERS = bfs_layers(HEX, 0)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(
        st.floats(min_value=0.0, max_value=5.0, allow_nan=False),
        min_size=REF.n_vertices,
        max_size=REF.n_vertices,
    )
)
def test_coarsen_square_sum_inequality_holds(weights):
    m_ref = VMetric({v: w for v, w in enumerate(weights)})
    m = coarsen_metric(BASE, REF, RMAP, m_ref)
    lhs = sum(w * w for w in m.weights.values())
    assert lhs <= 8 * M_EDGE * M_EDGE * m_ref.area() + 1e-9


@settings(max_examples=10, deadline=None)
@given(
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=1, max_value=3),
)
def test_vel_bounds_bracket_on_hex_annuli(inner, width):
    outer = inner + width
    support = [v for v in HEX.vertices() if inner <= HEX_LAYERS.dist[v] <= outer]
    A = set(HEX_LAYERS.spheres[inner])
    B = set(HEX_LAYERS.spheres[outer])
    est = solve_vel(HEX, A, B, support=support)
    assert est.lower <= est.upper + 1e-9
    assert est.lower > 0
    # the certificate metric reproduces the bound
    if math.isfinite(est.lower):
        from speiserlab.vel import metric_objective

        obj = metric_objective(HEX, A, B, est.metric)
        assert abs(obj["ratio"] - est.lower) <= 1e-9 * max(1.0, est.lower)


@settings(max_examples=15, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=5.0, allow_nan=False),
    st.floats(min_value=0.1, max_value=5.0, allow_nan=False),
    st.floats(min_value=0.0, max_value=0.9, allow_nan=False),
    st.integers(min_value=0, max_value=2**31 - 1),
)
def test_union_fatness_never_below_quarter_of_tau(r1, r2, gap, seed):
    from speiserlab.fatness import PlanarSet, check_union_fat

    a = PlanarSet.disk(0j, r1)
    b = PlanarSet.disk(complex(gap * (r1 + r2), 0.0), r2)
    report = check_union_fat(
        a, b, tau=0.25, seed=seed, n_samples=2_000, n_radii=4, n_centers=6
    )
    assert report["passes"]
