"""Speiser-type graph generators and transformers.

The base graph is the 3-regular tiling with octagonal faces, obtained as the
dual of a ``{3,8}`` triangulation ball.  ``tree_replace`` stretches its cut
edges into unbranched trees with alternating doubled edges, which keeps the
result bipartite and 3-homogeneous; ``lambda_triangulation`` subdivides every
k-gon face into 2k triangles; ``extend_speiser`` glues a square-grid cylinder
into every interior face.

All transformations are expressed as full face-walk rewrites and rebuilt via
``RotationGraph.from_walks`` so rotation systems stay consistent by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FrontierError, GraphError, ScheduleError
from .graph_core import (
    LayerDecomposition,
    RotationGraph,
    bfs_layers,
    dual,
    induced_ball,
    interior_faces,
    trace_faces,
    two_coloring,
)
from .lattices import triangular_ball


@dataclass(frozen=True)
class GrowthSchedule:
    """Sequence of odd tree lengths, one per cut-edge layer."""

    lengths: tuple[int, ...]
    origin: str = "custom"  # "paper" or "custom"

    def __post_init__(self):
        if not self.lengths:
            raise ScheduleError("schedule must contain at least one length")
        for l in self.lengths:
            if l < 1 or l % 2 == 0:
                raise ScheduleError(f"tree length {l} must be an odd positive integer")

    def __len__(self) -> int:
        return len(self.lengths)

    def __getitem__(self, n: int) -> int:
        return self.lengths[n]


def build_octagonal_speiser(depth: int) -> RotationGraph:
    """Truncation of the 3-regular octagon tiling containing the full B(depth).

    Vertex 0 is the root; non-frontier vertices have degree 3, interior faces
    are octagons, and bipartite circle/cross tags are assigned from the root.
    """
    if depth < 1:
        raise GraphError("depth must be >= 1")
    rings = depth + 2
    while True:
        tri = triangular_ball(8, rings)
        psi = dual(tri, drop_frontier_faces=True)
        # root: the dual vertex of a face incident to the center of the ball;
        # dual vertex ids follow the face trace order, so take the smallest.
        faces = [f for f in trace_faces(tri) if not f.touches_frontier]
        root_candidates = [i for i, f in enumerate(faces) if 0 in f.vertices]
        root = min(root_candidates)
        layers = bfs_layers(psi, root)
        if layers.reliable_depth >= depth:
            break
        rings += 1
        if rings > depth + 8:
            raise GraphError("failed to cover the requested ball")
    if root != 0:
        psi = _relabel_root_first(psi, root)
    tags = two_coloring(psi)
    if tags is None:
        raise GraphError("octagon tiling patch is unexpectedly not bipartite")
    return RotationGraph(psi.rotations, frontier=psi.frontier, tags=tags)


def _relabel_root_first(g: RotationGraph, root: int) -> RotationGraph:
    """Swap vertex ids so the chosen root becomes vertex 0."""
    perm = list(range(g.n_vertices))
    perm[0], perm[root] = perm[root], perm[0]
    inv = perm  # swapping is its own inverse
    rotations = [g.rotations[perm[v]] for v in range(g.n_vertices)]
    frontier = {inv[v] for v in g.frontier}
    tags = {inv[v]: t for v, t in (g.tags or {}).items()} or None
    return RotationGraph(rotations, frontier=frontier, tags=tags)


def _edge_layer_map(g: RotationGraph, layers: LayerDecomposition) -> dict[int, int]:
    """Edge id -> BFS cut layer; rejects same-sphere edges."""
    out: dict[int, int] = {}
    for n, cut in enumerate(layers.cut_edges):
        for e in cut:
            out[e] = n
    for e in range(g.n_edges):
        if e not in out:
            raise GraphError(
                "tree replacement needs a bipartite layered graph; "
                f"edge {e} joins vertices in the same sphere"
            )
    return out


def tree_replace(
    g: RotationGraph, layers: LayerDecomposition, schedule: GrowthSchedule
) -> RotationGraph:
    """Replace every edge of cut layer n by an unbranched tree of length l_n.

    The tree alternates single, double, single, ... edges, starting and ending
    with a single edge, so odd l_n keeps the graph bipartite and the interior
    3-homogeneous.
    """
    edge_layer = _edge_layer_map(g, layers)
    n_layers = 1 + max(edge_layer.values()) if edge_layer else 0
    if len(schedule) < n_layers:
        raise ScheduleError(
            f"schedule has {len(schedule)} lengths but the graph has "
            f"{n_layers} cut layers"
        )

    def length_of(e: int) -> int:
        return schedule[edge_layer[e]]

    # Segment for the canonical direction (dart 2e): list of (tail, key) plus
    # the far endpoint is appended by the walk's next item.
    def forward_segment(e: int) -> list[tuple]:
        u, v = g.edge_ends(e)
        l = length_of(e)
        if l == 1:
            return [(("v", u), ("orig", e))]
        seg = []
        prev: tuple = ("v", u)
        for j in range(l):
            tail = prev
            head = ("t", e, j + 1) if j < l - 1 else ("v", v)
            if j % 2 == 0:
                key = ("p", e, j)
            else:
                key = ("p", e, j, 0)  # side-0 copy of the doubled position
            seg.append((tail, key))
            prev = head
        return seg

    def backward_segment(e: int) -> list[tuple]:
        u, v = g.edge_ends(e)
        l = length_of(e)
        if l == 1:
            return [(("v", v), ("orig", e))]
        seg = []
        for j in reversed(range(l)):
            tail = ("t", e, j + 1) if j < l - 1 else ("v", v)
            if j % 2 == 0:
                key = ("p", e, j)
            else:
                key = ("p", e, j, 1)  # side-1 copy
            seg.append((tail, key))
        return seg

    walks = []
    for face in trace_faces(g):
        walk = []
        for d in face.darts:
            e = d >> 1
            if d % 2 == 0:
                walk.extend(forward_segment(e))
            else:
                walk.extend(backward_segment(e))
        walks.append(walk)

    # bigon between the two copies of each doubled position
    for e in range(g.n_edges):
        l = length_of(e)
        for j in range(1, l, 2):
            a = ("t", e, j)
            b = ("t", e, j + 1) if j + 1 < l else ("v", g.edge_ends(e)[1])
            walks.append([(a, ("p", e, j, 1)), (b, ("p", e, j, 0))])

    frontier_keys = {("v", v) for v in g.frontier}
    out, vmap, _ = RotationGraph.from_walks(walks, frontier_keys=frontier_keys)
    order_fix = _dense_relabel(out, vmap, g)
    tags = two_coloring(order_fix)
    if tags is None:
        raise GraphError("tree replacement broke bipartiteness")
    return RotationGraph(order_fix.rotations, frontier=order_fix.frontier, tags=tags)


def _dense_relabel(
    out: RotationGraph, vmap: dict, original: RotationGraph
) -> RotationGraph:
    """Relabel so original vertices keep their ids, new vertices follow."""
    n = out.n_vertices
    new_id = [-1] * n
    for v in range(original.n_vertices):
        key = ("v", v)
        if key in vmap:
            new_id[vmap[key]] = v
    nxt = original.n_vertices
    for old in range(n):
        if new_id[old] == -1:
            new_id[old] = nxt
            nxt += 1
    rotations = [None] * n
    for old in range(n):
        rotations[new_id[old]] = out.rotations[old]
    frontier = {new_id[v] for v in out.frontier}
    return RotationGraph(rotations, frontier=frontier)


def lambda_triangulation(
    g: RotationGraph, outer_face: int | None = None, with_map: bool = False
):
    """Subdivide each interior k-gon face into 2k triangles.

    Every edge gets a midpoint vertex (each parallel copy its own); every
    interior face gets a center joined to the boundary vertices and midpoints.
    Frontier-touching faces (and the designated outer face, if any) are left
    unsubdivided apart from the midpoints on their edges, and their midpoints
    join the frontier.  With ``with_map`` the refinement cover structure is
    returned alongside the graph.
    """
    faces = trace_faces(g)
    inner = {f.index for f in interior_faces(g, outer_face=outer_face)}
    walks = []
    frontier_keys = {("v", v) for v in g.frontier}

    def half(d: int) -> list[tuple]:
        # dart d traversed tail -> midpoint -> head
        e = d >> 1
        tail = ("v", g.dart_vertex[d])
        head = ("v", g.dart_vertex[d ^ 1])
        return [(tail, ("h", e, d & 1)), (("m", e), ("h", e, (d & 1) ^ 1))], head

    for face in faces:
        if face.index not in inner:
            walk = []
            for d in face.darts:
                seg, _ = half(d)
                walk.extend(seg)
            walks.append(walk)
            for d in face.darts:
                frontier_keys.add(("m", d >> 1))
            continue
        c = ("c", face.index)
        for i, d in enumerate(face.darts):
            e = d >> 1
            tail = ("v", g.dart_vertex[d])
            mid = ("m", e)
            # two triangles per dart: (tail, mid, c) and (mid, head, c)
            walks.append(
                [
                    (tail, ("h", e, d & 1)),
                    (mid, ("s", face.index, 2 * i)),
                    (c, ("s", face.index, (2 * i - 1) % (2 * len(face.darts)))),
                ]
            )
            head = ("v", g.dart_vertex[d ^ 1])
            walks.append(
                [
                    (mid, ("h", e, (d & 1) ^ 1)),
                    (head, ("s", face.index, (2 * i + 1) % (2 * len(face.darts)))),
                    (c, ("s", face.index, 2 * i)),
                ]
            )
    out, vmap, emap = RotationGraph.from_walks(walks, frontier_keys=frontier_keys)
    relabeled = _dense_relabel(out, vmap, g)
    if not with_map:
        return relabeled
    from .refinement import RefinementMap

    # rebuild the same relabeling map used by _dense_relabel
    nxt = g.n_vertices
    inverse = [None] * out.n_vertices
    for key, old in vmap.items():
        inverse[old] = key
    assign = [-1] * out.n_vertices
    for v in range(g.n_vertices):
        if ("v", v) in vmap:
            assign[vmap[("v", v)]] = v
    for old in range(out.n_vertices):
        if assign[old] == -1:
            assign[old] = nxt
            nxt += 1
    vertex_origin = {}
    for old in range(out.n_vertices):
        key = inverse[old]
        if key[0] == "v":
            vertex_origin[assign[old]] = ("vertex", key[1])
        elif key[0] == "m":
            vertex_origin[assign[old]] = ("edge", key[1])
        else:
            vertex_origin[assign[old]] = ("face", key[1])
    edge_cover = {
        e: [emap[("h", e, 0)], emap[("h", e, 1)]] for e in g.edges()
    }
    face_cover: dict[int, list[int]] = {}
    ref_faces = trace_faces(relabeled)
    spoke_face = {}
    for key, eid in emap.items():
        if key[0] == "s":
            spoke_face[eid] = key[1]
    for rf in ref_faces:
        owners = {spoke_face[e] for e in rf.edges if e in spoke_face}
        if len(owners) == 1:
            face_cover.setdefault(owners.pop(), []).append(rf.index)
    rmap = RefinementMap(
        vertex_origin=vertex_origin, edge_cover=edge_cover, face_cover=face_cover
    )
    return relabeled, rmap


def extend_speiser(
    g: RotationGraph, grid_depth: int, outer_face: int | None = None
) -> RotationGraph:
    """Glue a square-grid cylinder of height ``grid_depth`` into each interior face.

    Ring 0 follows the face's boundary walk (a vertex visited twice gets two
    vertical neighbors); rings 1..grid_depth are new k-cycles, and the top
    ring joins the frontier.  Frontier-touching faces (and the designated
    outer face, if any) are skipped.
    """
    if grid_depth < 1:
        raise GraphError("grid_depth must be >= 1")
    faces = trace_faces(g)
    inner = {f.index for f in interior_faces(g, outer_face=outer_face)}
    walks = []
    frontier_keys = {("v", v) for v in g.frontier}

    for face in faces:
        if face.index not in inner:
            walks.append(
                [(("v", g.dart_vertex[d]), ("orig", d >> 1)) for d in face.darts]
            )
            continue
        k = len(face.darts)
        f = face.index

        def node(m: int, i: int):
            if m == 0:
                return ("v", g.dart_vertex[face.darts[i % k]])
            return ("g", f, m, i % k)

        def ring_key(m: int, i: int):
            if m == 0:
                return ("orig", face.darts[i % k] >> 1)
            return ("r", f, m, i % k)

        def vert_key(m: int, i: int):
            return ("u", f, m, i % k)  # joins ring m to ring m+1 at position i

        for m in range(grid_depth):
            for i in range(k):
                walks.append(
                    [
                        (node(m, i), ring_key(m, i)),
                        (node(m, i + 1), vert_key(m, i + 1)),
                        (node(m + 1, i + 1), ring_key(m + 1, i)),
                        (node(m + 1, i), vert_key(m, i)),
                    ]
                )
        # cap: the top ring traversed forward closes the cylinder
        walks.append(
            [(node(grid_depth, i), ring_key(grid_depth, i)) for i in range(k)]
        )
        for i in range(k):
            frontier_keys.add(("g", f, grid_depth, i))

    out, vmap, _ = RotationGraph.from_walks(walks, frontier_keys=frontier_keys)
    return _dense_relabel(out, vmap, g)


# -- exact layer counts for the infinite extension -------------------------


@dataclass
class ExtendedLayerCounts:
    """Sphere and cut sizes of the extended graph with unbounded grids.

    Computed from the base layer structure alone: a vertex at distance d with
    degree ``deg`` carries ``deg`` grid columns whose height-m vertices sit at
    distance d + m, and every base edge contributes a ladder of ring edges.
    Valid for k <= reliable_k.
    """

    sphere_sizes: list[int]
    ball_sizes: list[int]
    cut_sizes: list[int]
    base_sphere_sizes: list[int]
    reliable_k: int


def extended_layer_counts(
    g: RotationGraph,
    layers: LayerDecomposition,
    k_max: int,
    grid_depth: int | None = None,
) -> ExtendedLayerCounts:
    """Exact |S(k)|, |B(k)|, |E(k)| tables for the extension of ``g``.

    Requires the base layers to be reliable up to ``k_max``.  With
    ``grid_depth=None`` the grids are unbounded (the true extended graph);
    otherwise columns stop at that height.
    """
    if g.frontier and k_max > layers.reliable_depth:
        raise FrontierError(
            f"k_max {k_max} exceeds base reliable depth {layers.reliable_depth}"
        )
    gd = grid_depth if grid_depth is not None else k_max + 1
    # per-distance vertex degree sums (number of grid columns starting there)
    deg_at = [0] * (k_max + 1)
    for v in range(g.n_vertices):
        d = layers.dist[v]
        if 0 <= d <= k_max:
            deg_at[d] += g.degree(v)
    base_s = [len(s) for s in layers.spheres[: k_max + 1]]
    base_s += [0] * (k_max + 1 - len(base_s))
    base_cut = [len(c) for c in layers.cut_edges[:k_max]]
    base_cut += [0] * (k_max - len(base_cut))

    def windowed(hist: list[int], k: int, lo_off: int, hi_off: int) -> int:
        # sum of hist[d] over max(0, k - lo_off) <= d <= k - hi_off
        lo = max(0, k - lo_off)
        hi = k - hi_off
        return sum(hist[lo : hi + 1]) if hi >= lo else 0

    # |S_ext(k)| = |S(k)| + #(columns at height 1..gd): positions with
    # k - gd <= D <= k - 1
    sphere = [base_s[k] + windowed(deg_at, k, gd, 1) for k in range(k_max + 1)]
    ball = []
    acc = 0
    for k in range(k_max + 1):
        acc += sphere[k]
        ball.append(acc)
    # |E_ext(k)|: base cut + vertical edges m -> m+1 with m + D = k, m < gd
    #           + ring ladders at heights 1..gd over both sides of base edges
    cut = [
        base_cut[k]
        + windowed(deg_at, k, gd - 1, 0)
        + 2 * windowed(base_cut, k, gd, 1)
        for k in range(k_max)
    ]
    return ExtendedLayerCounts(
        sphere_sizes=sphere,
        ball_sizes=ball,
        cut_sizes=cut,
        base_sphere_sizes=base_s,
        reliable_k=k_max,
    )


def speiser_ball(depth: int) -> tuple[RotationGraph, LayerDecomposition]:
    """Octagonal base graph trimmed to exactly B(depth), plus its layers."""
    psi = build_octagonal_speiser(depth)
    layers = bfs_layers(psi, 0)
    ball = induced_ball(psi, layers, depth)
    tags = two_coloring(ball)
    ball = RotationGraph(ball.rotations, frontier=ball.frontier, tags=tags)
    return ball, bfs_layers(ball, 0)
