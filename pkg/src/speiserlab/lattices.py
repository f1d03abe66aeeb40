"""Generators for the stock graphs used as controls and building blocks.

The main workhorse is the ring-by-ring generator for the triangulations
``{3,q}`` (every face a triangle, every interior vertex of degree ``q``);
``q = 6`` gives the flat hexagonal lattice and ``q >= 7`` the hyperbolic
triangulations.  Their duals supply the ``{q,3}`` tilings.
"""

from __future__ import annotations

from .errors import GraphError
from .graph_core import RotationGraph


def path_graph(n_edges: int) -> RotationGraph:
    """Path with ``n_edges`` edges; vertex 0 is one end."""
    if n_edges < 1:
        raise GraphError("path needs at least one edge")
    incidence = [[0]]
    for v in range(1, n_edges):
        incidence.append([v - 1, v])
    incidence.append([n_edges - 1])
    return RotationGraph.from_rotations(incidence)


def cycle_graph(n: int) -> RotationGraph:
    """Cycle with ``n >= 2`` vertices (n = 2 gives a doubled edge)."""
    if n < 2:
        raise GraphError("cycle needs at least 2 vertices")
    incidence = [[(v - 1) % n, v] for v in range(n)]
    return RotationGraph.from_rotations(incidence)


def regular_tree(degree: int, depth: int) -> RotationGraph:
    """Rooted tree, all non-leaf vertices of the given degree, leaves at ``depth``."""
    if degree < 2 or depth < 1:
        raise GraphError("need degree >= 2 and depth >= 1")
    incidence: list[list[int]] = [[]]
    level = [0]
    n_edges = 0
    for d in range(depth):
        nxt = []
        for v in level:
            n_child = degree if d == 0 else degree - 1
            for _ in range(n_child):
                w = len(incidence)
                incidence.append([n_edges])
                incidence[v].append(n_edges)
                n_edges += 1
                nxt.append(w)
        level = nxt
    return RotationGraph.from_rotations(incidence, frontier=set(level))


def octahedron() -> RotationGraph:
    faces = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
        (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4),
    ]
    return RotationGraph.from_face_cycles(faces, auto_close=False)


def cube() -> RotationGraph:
    faces = [
        (0, 3, 2, 1), (4, 5, 6, 7),
        (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7),
    ]
    return RotationGraph.from_face_cycles(faces, auto_close=False)


def grid_patch(cols: int, rows: int) -> RotationGraph:
    """Rectangular grid patch with ``cols x rows`` vertices."""
    if cols < 2 or rows < 2:
        raise GraphError("grid needs at least 2x2 vertices")

    def vid(i: int, j: int) -> int:
        return j * cols + i

    faces = []
    for j in range(rows - 1):
        for i in range(cols - 1):
            faces.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return RotationGraph.from_face_cycles(faces, auto_close=True)


def square_ball(radius: int) -> RotationGraph:
    """Ball of the square lattice: all vertices with |x| + |y| <= radius.

    Explicit counterclockwise rotations (E, N, W, S); the rim at distance
    ``radius`` is the frontier, so layers from the center are reliable up to
    ``radius``.
    """
    if radius < 1:
        raise GraphError("radius must be >= 1")
    coords = sorted(
        (
            (x, y)
            for y in range(-radius, radius + 1)
            for x in range(-radius, radius + 1)
            if abs(x) + abs(y) <= radius
        ),
        key=lambda c: (abs(c[0]) + abs(c[1]), c),
    )  # vertex 0 is the center
    vid = {c: i for i, c in enumerate(coords)}
    eid: dict[tuple, int] = {}
    for c in coords:
        x, y = c
        for other in ((x + 1, y), (x, y + 1)):
            if other in vid:
                eid[(c, other)] = len(eid)

    def edge_id(a: tuple, b: tuple) -> int | None:
        return eid.get((a, b), eid.get((b, a)))

    incidence = []
    for c in coords:
        x, y = c
        rot = []
        for other in ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)):
            e = edge_id(c, other) if other in vid else None
            if e is not None:
                rot.append(e)
        incidence.append(rot)
    frontier = {vid[c] for c in coords if abs(c[0]) + abs(c[1]) == radius}
    return RotationGraph.from_rotations(incidence, frontier=frontier)


def triangular_ball(q: int, depth: int) -> RotationGraph:
    """Ball of radius ``depth`` in the triangulation {3,q}, q >= 6.

    Built ring by ring; ring ``k`` holds exactly the vertices at combinatorial
    distance ``k`` from vertex 0, and the outermost ring is the frontier.
    Rotation convention per ring vertex: [next-on-ring, down-neighbors
    (reversed), prev-on-ring, up-neighbors (forward)], counterclockwise.
    """
    if q < 6:
        raise GraphError("triangular_ball needs q >= 6")
    if depth < 1:
        raise GraphError("depth must be >= 1")

    n_edges = 0

    def new_edge() -> int:
        nonlocal n_edges
        n_edges += 1
        return n_edges - 1

    # ring 1: q vertices around the center
    ring = list(range(1, q + 1))
    spokes = [new_edge() for _ in ring]
    ring_edges = [new_edge() for _ in ring]  # ring_edges[i]: ring[i] -- ring[i+1]
    incidence: list[list[int]] = [list(spokes)]
    downs: list[list[int]] = [[spokes[i]] for i in range(q)]
    n_vertices = q + 1

    for _k in range(1, depth):
        m = len(ring)
        up_counts = [q - 2 - len(downs[i]) for i in range(m)]
        if any(u < 2 for u in up_counts):
            raise GraphError("ring construction degenerated")

        # allocate the next ring; consecutive arcs share their junction vertex
        # and the last arc wraps around to the first new vertex
        arcs: list[list[int]] = []
        next_ring: list[int] = []
        first_new = n_vertices
        for i in range(m):
            if i == 0:
                arc = [n_vertices]
                next_ring.append(n_vertices)
                n_vertices += 1
            else:
                arc = [arcs[i - 1][-1]]
            fresh = up_counts[i] - 1 if i < m - 1 else up_counts[i] - 2
            for _ in range(fresh):
                arc.append(n_vertices)
                next_ring.append(n_vertices)
                n_vertices += 1
            if i == m - 1:
                arc.append(first_new)
            arcs.append(arc)

        mm = len(next_ring)
        next_ring_edges = [new_edge() for _ in range(mm)]
        up_edges: list[list[int]] = []
        new_downs: dict[int, list[int]] = {v: [] for v in next_ring}
        for i in range(m):
            ups = []
            for w in arcs[i]:
                e = new_edge()
                ups.append(e)
                new_downs[w].append(e)
            up_edges.append(ups)
        # the wrap vertex saw parents (u_0, u_{m-1}); ccw order is (u_{m-1}, u_0)
        new_downs[first_new].reverse()

        for i in range(m):
            rot = (
                [ring_edges[i]]
                + list(reversed(downs[i]))
                + [ring_edges[i - 1]]
                + up_edges[i]
            )
            incidence.append(rot)
        ring = next_ring
        downs = [new_downs[v] for v in next_ring]
        ring_edges = next_ring_edges

    for i in range(len(ring)):
        rot = [ring_edges[i]] + list(reversed(downs[i])) + [ring_edges[i - 1]]
        incidence.append(rot)

    assert len(incidence) == n_vertices
    return RotationGraph.from_rotations(incidence, frontier=set(ring))


def hex_flower() -> RotationGraph:
    """Single interior vertex with six unit petals (smallest packing test case)."""
    return triangular_ball(6, 1)
