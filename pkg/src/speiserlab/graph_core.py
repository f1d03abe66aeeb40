"""Rotation-system representation of locally finite planar graphs.

A graph is stored as a list of vertex rotations, where each rotation is the
cyclic sequence of darts (half-edges) leaving that vertex.  Edge ``e`` always
owns the two darts ``2*e`` and ``2*e + 1``, so the twin of dart ``d`` is
``d ^ 1``.  Multiple edges are allowed, self-loops are not.  Infinite graphs
are represented by finite truncations whose incomplete rim vertices are listed
in ``frontier``.

Face tracing uses ``next(d) = rotation_successor(twin(d))``; its orbits
partition the darts.  The dual swaps the roles of the face permutation and the
rotation, which makes ``dual(dual(g))`` the identity on frontier-free graphs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import FrontierError, GraphError

TAG_CIRCLE = "circle"
TAG_CROSS = "cross"


class RotationGraph:
    """Planar multigraph with an explicit rotation system.

    Instances are immutable after construction; transformations build new
    graphs.  ``rotations[v]`` lists the darts at ``v`` in cyclic order, and
    dart ``d`` belongs to edge ``d // 2`` with twin ``d ^ 1``.
    """

    __slots__ = (
        "rotations",
        "frontier",
        "tags",
        "n_vertices",
        "n_edges",
        "n_darts",
        "dart_vertex",
        "_rot_next",
        "_faces",
    )

    def __init__(
        self,
        rotations: Sequence[Sequence[int]],
        frontier: Iterable[int] = (),
        tags: dict[int, str] | None = None,
        validate: bool = True,
    ):
        self.rotations = [list(r) for r in rotations]
        self.frontier = frozenset(frontier)
        self.tags = dict(tags) if tags else None
        self.n_vertices = len(self.rotations)
        self.n_darts = sum(len(r) for r in self.rotations)
        if self.n_darts % 2:
            raise GraphError("odd number of darts")
        self.n_edges = self.n_darts // 2

        self.dart_vertex = [-1] * self.n_darts
        self._rot_next = [-1] * self.n_darts
        for v, rot in enumerate(self.rotations):
            for i, d in enumerate(rot):
                if not (0 <= d < self.n_darts):
                    raise GraphError(f"malformed rotation: dart {d} out of range")
                if self.dart_vertex[d] != -1:
                    raise GraphError(f"malformed rotation: dart {d} appears twice")
                self.dart_vertex[d] = v
                self._rot_next[d] = rot[(i + 1) % len(rot)]
        self._faces = None
        if validate:
            self._validate()

    # -- basic queries ----------------------------------------------------

    def twin(self, d: int) -> int:
        return d ^ 1

    def edge_of(self, d: int) -> int:
        return d >> 1

    def edge_ends(self, e: int) -> tuple[int, int]:
        return self.dart_vertex[2 * e], self.dart_vertex[2 * e + 1]

    def rot_next(self, d: int) -> int:
        return self._rot_next[d]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbors in rotation order, one entry per incident edge copy."""
        return [self.dart_vertex[d ^ 1] for d in self.rotations[v]]

    def vertices(self) -> range:
        return range(self.n_vertices)

    def edges(self) -> range:
        return range(self.n_edges)

    def is_frontier(self, v: int) -> bool:
        return v in self.frontier

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if v not in self.frontier]

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        for d in range(self.n_darts):
            if self.dart_vertex[d] == -1:
                raise GraphError(f"dangling half-edge {d}: not in any rotation")
        for e in range(self.n_edges):
            u, v = self.edge_ends(e)
            if u == v:
                raise GraphError(f"self-loop: edge {e} joins vertex {u} to itself")
        if self.n_vertices == 0:
            raise GraphError("empty graph")
        seen = [False] * self.n_vertices
        queue = deque([0])
        seen[0] = True
        count = 1
        while queue:
            v = queue.popleft()
            for d in self.rotations[v]:
                w = self.dart_vertex[d ^ 1]
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    queue.append(w)
        if count != self.n_vertices:
            raise GraphError("disconnected graph")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rotations(
        cls,
        incidence: Sequence[Sequence[int]],
        frontier: Iterable[int] = (),
        tags: dict[int, str] | None = None,
    ) -> "RotationGraph":
        """Build from per-vertex ordered lists of edge ids.

        Every edge id must appear exactly twice over all lists (once per
        endpoint); the first appearance becomes dart ``2e``.
        """
        seen_once: dict[int, int] = {}
        rotations: list[list[int]] = []
        for v, inc in enumerate(incidence):
            rot = []
            for e in inc:
                if e in seen_once:
                    if seen_once[e] == -1:
                        raise GraphError(f"edge {e} appears more than twice")
                    rot.append(2 * e + 1)
                    seen_once[e] = -1
                else:
                    seen_once[e] = v
                    rot.append(2 * e)
            rotations.append(rot)
        unmatched = [e for e, s in seen_once.items() if s != -1]
        if unmatched:
            raise GraphError(f"edges with a single endpoint: {sorted(unmatched)}")
        return cls(rotations, frontier=frontier, tags=tags)

    @classmethod
    def from_walks(
        cls,
        walks: Sequence[Sequence[tuple[Hashable, Hashable]]],
        frontier_keys: Iterable[Hashable] = (),
        tag_keys: dict[Hashable, str] | None = None,
    ) -> tuple["RotationGraph", dict[Hashable, int], dict[Hashable, int]]:
        """Build a graph from its complete list of oriented face walks.

        Each walk is a list of ``(tail_vertex_key, edge_key)`` pairs; every
        edge key must occur exactly twice overall, with distinct tails.  The
        rotation system is recovered from the face structure, so callers
        describe transformations purely in terms of new faces.  Returns the
        graph plus key-to-id maps for vertices and edges.
        """
        vmap: dict[Hashable, int] = {}
        emap: dict[Hashable, int] = {}
        first_dart: dict[Hashable, int] = {}
        dart_tail: list[int] = []
        slots: list[tuple[int, int]] = []  # (walk index, position) per dart id is implicit
        dart_ids: list[list[int]] = []

        for wi, walk in enumerate(walks):
            if not walk:
                raise GraphError("empty face walk")
            ids = []
            for tail_key, edge_key in walk:
                if tail_key not in vmap:
                    vmap[tail_key] = len(vmap)
                tail = vmap[tail_key]
                if edge_key in emap:
                    e = emap[edge_key]
                    if first_dart[edge_key] == -1:
                        raise GraphError(f"edge key {edge_key!r} used more than twice")
                    d = 2 * e + 1
                    if dart_tail[2 * e] == tail:
                        raise GraphError(
                            f"self-loop: edge key {edge_key!r} has equal tails"
                        )
                    first_dart[edge_key] = -1
                else:
                    e = len(emap)
                    emap[edge_key] = e
                    first_dart[edge_key] = 1
                    d = 2 * e
                while len(dart_tail) <= d:
                    dart_tail.append(-1)
                dart_tail[d] = tail
                ids.append(d)
            dart_ids.append(ids)

        dangling = [k for k, s in first_dart.items() if s != -1]
        if dangling:
            raise GraphError(f"edge keys appearing once: {dangling[:5]}")

        n_darts = 2 * len(emap)
        face_next = [-1] * n_darts
        for ids in dart_ids:
            for i, d in enumerate(ids):
                face_next[d] = ids[(i + 1) % len(ids)]

        # sigma = face_next o twin; its orbits must be exactly the vertex stars
        sigma = [face_next[d ^ 1] for d in range(n_darts)]
        rotations: list[list[int]] = [[] for _ in range(len(vmap))]
        placed = [False] * n_darts
        for d0 in range(n_darts):
            if placed[d0]:
                continue
            v = dart_tail[d0]
            cyc = []
            d = d0
            while True:
                if dart_tail[d] != v:
                    raise GraphError("inconsistent walks: rotation mixes vertices")
                placed[d] = True
                cyc.append(d)
                d = sigma[d]
                if d == d0:
                    break
            if rotations[v]:
                raise GraphError(
                    f"inconsistent walks: vertex key has a disconnected star"
                )
            rotations[v] = cyc

        frontier = {vmap[k] for k in frontier_keys if k in vmap}
        tags = None
        if tag_keys:
            tags = {vmap[k]: t for k, t in tag_keys.items() if k in vmap}
        g = cls(rotations, frontier=frontier, tags=tags)
        return g, vmap, emap

    @classmethod
    def from_face_cycles(
        cls,
        faces: Sequence[Sequence[int]],
        auto_close: bool = True,
        frontier: Iterable[int] = (),
        tags: dict[int, str] | None = None,
    ) -> "RotationGraph":
        """Build a simple graph from oriented faces given as vertex cycles.

        Edges are identified by their unordered endpoint pair, so this helper
        rejects multigraphs.  With ``auto_close`` the missing outer walk is
        derived from the edges traversed only once.
        """
        walks = [
            [(f[i], frozenset((f[i], f[(i + 1) % len(f)]))) for i in range(len(f))]
            for f in faces
        ]
        if auto_close:
            once: dict[frozenset, int] = {}
            for walk in walks:
                for tail, key in walk:
                    if key in once:
                        del once[key]
                    else:
                        once[key] = tail
            if once:
                # unmatched directions reversed: head -> tail
                succ: dict[int, tuple[int, frozenset]] = {}
                for key, tail in once.items():
                    (head,) = set(key) - {tail}
                    if head in succ:
                        raise GraphError("auto_close: boundary is not a single walk")
                    succ[head] = (tail, key)
                start = min(succ)
                walk = []
                v = start
                while True:
                    nxt, key = succ.pop(v)
                    walk.append((v, key))
                    v = nxt
                    if v == start:
                        break
                if succ:
                    raise GraphError("auto_close: boundary is not a single walk")
                walks.append(walk)
        g, _, _ = cls.from_walks(walks, frontier_keys=frontier, tag_keys=tags)
        return g


@dataclass
class FaceWalk:
    """One traced face: darts in walk order plus derived vertex/edge walks."""

    index: int
    darts: list[int]
    vertices: list[int]
    edges: list[int]
    touches_frontier: bool

    def __len__(self) -> int:
        return len(self.darts)


def trace_faces(g: RotationGraph) -> list[FaceWalk]:
    """Partition all darts into face walks (cached on the graph)."""
    if g._faces is not None:
        return g._faces
    n = g.n_darts
    seen = [False] * n
    faces: list[FaceWalk] = []
    for d0 in range(n):
        if seen[d0]:
            continue
        walk = []
        d = d0
        while not seen[d]:
            seen[d] = True
            walk.append(d)
            d = g._rot_next[d ^ 1]
        verts = [g.dart_vertex[d] for d in walk]
        faces.append(
            FaceWalk(
                index=len(faces),
                darts=walk,
                vertices=verts,
                edges=[d >> 1 for d in walk],
                touches_frontier=any(v in g.frontier for v in verts),
            )
        )
    g._faces = faces
    return faces


def face_of_dart(g: RotationGraph) -> list[int]:
    """Map dart id -> face index."""
    owner = [-1] * g.n_darts
    for f in trace_faces(g):
        for d in f.darts:
            owner[d] = f.index
    return owner


def euler_characteristic(g: RotationGraph) -> int:
    return g.n_vertices - g.n_edges + len(trace_faces(g))


def dual(g: RotationGraph, drop_frontier_faces: bool | None = None) -> RotationGraph:
    """Dual graph: one vertex per face, one edge per primal edge.

    For truncations (``frontier`` nonempty) the faces touching the frontier
    are ambiguous; they are dropped when ``drop_frontier_faces`` is true
    (the default in that case), and the surviving faces adjacent to a dropped
    face are marked as the dual's frontier.
    """
    faces = trace_faces(g)
    if drop_frontier_faces is None:
        drop_frontier_faces = bool(g.frontier)
    owner = face_of_dart(g)

    if not drop_frontier_faces:
        if g.frontier:
            raise GraphError(
                "duality is ambiguous at the truncation boundary; "
                "pass drop_frontier_faces=True to drop those faces"
            )
        rotations = []
        for f in faces:
            rotations.append(list(f.darts))
        for e in range(g.n_edges):
            if owner[2 * e] == owner[2 * e + 1]:
                raise GraphError(f"edge {e} has the same face on both sides")
        # darts keep their ids; dart 2e/2e+1 now live at the face vertices
        return RotationGraph(rotations)

    kept = [f.index for f in faces if not f.touches_frontier]
    kept_set = set(kept)
    if not kept:
        raise GraphError("no faces left after dropping frontier faces")
    # edges kept: both sides are kept faces
    kept_edges = [
        e
        for e in range(g.n_edges)
        if owner[2 * e] in kept_set and owner[2 * e + 1] in kept_set
    ]
    new_eid = {e: i for i, e in enumerate(kept_edges)}
    new_vid = {f: i for i, f in enumerate(kept)}
    rotations = [[] for _ in kept]
    frontier = set()
    for f in faces:
        if f.index not in kept_set:
            continue
        rot = []
        for d in f.darts:
            e = d >> 1
            if e in new_eid:
                rot.append(2 * new_eid[e] + (d & 1))
            else:
                frontier.add(new_vid[f.index])
        rotations[new_vid[f.index]] = rot
    gd = RotationGraph(rotations, frontier=frontier)
    for e in range(gd.n_edges):
        u, v = gd.edge_ends(e)
        if u == v:
            raise GraphError(f"dual would have a self-loop at face {u}")
    return gd


@dataclass
class LayerDecomposition:
    """Combinatorial spheres S(n), cut-edge sets E(n) and distances from a root.

    ``reliable_depth`` is the largest n for which S(0..n) equal the spheres of
    the non-truncated graph; cut sets are reliable up to ``reliable_depth - 1``.
    """

    root: int
    spheres: list[list[int]]
    cut_edges: list[list[int]]
    depth: int
    reliable_depth: int
    dist: list[int]
    warnings: list[str] = field(default_factory=list)

    def sphere_sizes(self) -> list[int]:
        return [len(s) for s in self.spheres]

    def ball_sizes(self) -> list[int]:
        out, acc = [], 0
        for s in self.spheres:
            acc += len(s)
            out.append(acc)
        return out

    def cut_sizes(self) -> list[int]:
        return [len(c) for c in self.cut_edges]


def bfs_layers(g: RotationGraph, root: int, n_max: int | None = None) -> LayerDecomposition:
    """BFS spheres, balls and cut-edge sets from ``root`` (multiplicity kept)."""
    if not (0 <= root < g.n_vertices):
        raise GraphError(f"root {root} not in graph")
    if n_max is not None and n_max < 0:
        raise GraphError("n_max must be >= 0")
    dist = [-1] * g.n_vertices
    dist[root] = 0
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        if n_max is not None and dist[v] >= n_max:
            continue
        for d in g.rotations[v]:
            w = g.dart_vertex[d ^ 1]
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    depth = max(dist[v] for v in order)
    spheres: list[list[int]] = [[] for _ in range(depth + 1)]
    for v in order:
        spheres[dist[v]].append(v)
    for s in spheres:
        s.sort()
    cut_edges: list[list[int]] = [[] for _ in range(depth)]
    for e in range(g.n_edges):
        u, v = g.edge_ends(e)
        du, dv = dist[u], dist[v]
        if du == -1 or dv == -1:
            continue
        if abs(du - dv) == 1:
            cut_edges[min(du, dv)].append(e)
        elif du != dv:
            raise GraphError("BFS layering broken: edge skips a sphere")
    warnings: list[str] = []
    frontier_dists = [dist[v] for v in g.frontier if dist[v] != -1]
    reliable = min(frontier_dists) if frontier_dists else depth
    if n_max is not None:
        reliable = min(reliable, depth)
    if frontier_dists and (n_max is None or reliable < n_max):
        warnings.append(
            f"frontier reached at distance {reliable}; "
            f"layers beyond are unreliable"
        )
    return LayerDecomposition(
        root=root,
        spheres=spheres,
        cut_edges=cut_edges,
        depth=depth,
        reliable_depth=reliable,
        dist=dist,
        warnings=warnings,
    )


@dataclass
class GraphClassification:
    is_bipartite: bool
    homogeneous_degree: int | None
    is_disk_triangulation: bool
    max_degree: int | None
    p_of: int | None


def two_coloring(g: RotationGraph) -> dict[int, str] | None:
    """BFS 2-coloring with the circle/cross tags, or None if an odd cycle exists."""
    color = [None] * g.n_vertices
    color[0] = TAG_CIRCLE
    queue = deque([0])
    while queue:
        v = queue.popleft()
        mine = color[v]
        other = TAG_CROSS if mine == TAG_CIRCLE else TAG_CIRCLE
        for d in g.rotations[v]:
            w = g.dart_vertex[d ^ 1]
            if color[w] is None:
                color[w] = other
                queue.append(w)
            elif color[w] == mine:
                return None
    return {v: c for v, c in enumerate(color)}


def interior_faces(g: RotationGraph, outer_face: int | None = None) -> list[FaceWalk]:
    """Faces that are not the designated outer face and avoid the frontier.

    With no frontier and no explicit outer face, a unique non-triangular face
    is taken as the outer one; if all faces are triangles the map is treated
    as a sphere triangulation and every face is interior.
    """
    faces = trace_faces(g)
    if outer_face is not None:
        return [f for f in faces if f.index != outer_face and not f.touches_frontier]
    if g.frontier:
        return [f for f in faces if not f.touches_frontier]
    non_tri = [f for f in faces if len(f) != 3]
    if len(non_tri) == 1:
        return [f for f in faces if f.index != non_tri[0].index]
    return faces


def classify(g: RotationGraph, outer_face: int | None = None) -> GraphClassification:
    """Structural flags computed on the non-frontier part of the graph."""
    colors = two_coloring(g)
    interior = [v for v in range(g.n_vertices) if v not in g.frontier]
    degrees = [g.degree(v) for v in interior]
    homogeneous = degrees[0] if degrees and len(set(degrees)) == 1 else None
    max_degree = max(degrees) if degrees else None

    inner = interior_faces(g, outer_face=outer_face)
    non_tri = [f for f in inner if len(f) != 3]
    is_tri = bool(inner) and not non_tri
    if not g.frontier and outer_face is None:
        faces = trace_faces(g)
        big = [f for f in faces if len(f) != 3]
        is_tri = len(big) <= 1 and len(faces) > len(big)

    p_of = None
    frontier = g.frontier
    best = -1
    for e in range(g.n_edges):
        u, v = g.edge_ends(e)
        if u in frontier or v in frontier:
            continue
        best = max(best, min(g.degree(u), g.degree(v)))
    if best >= 0:
        p_of = best

    return GraphClassification(
        is_bipartite=colors is not None,
        homogeneous_degree=homogeneous,
        is_disk_triangulation=is_tri,
        max_degree=max_degree,
        p_of=p_of,
    )


def induced_ball(g: RotationGraph, layers: LayerDecomposition, n: int) -> RotationGraph:
    """Induced subgraph on B(n); S(n) plus any clipped vertex joins the frontier."""
    if n > layers.reliable_depth:
        raise FrontierError(
            f"ball of radius {n} exceeds reliable depth {layers.reliable_depth}"
        )
    keep = [v for v in range(g.n_vertices) if 0 <= layers.dist[v] <= n]
    new_vid = {v: i for i, v in enumerate(keep)}
    kept_edges = []
    for e in range(g.n_edges):
        u, v = g.edge_ends(e)
        if u in new_vid and v in new_vid:
            kept_edges.append(e)
    new_eid = {e: i for i, e in enumerate(kept_edges)}
    rotations = []
    frontier = set()
    for v in keep:
        rot = []
        clipped = False
        for d in g.rotations[v]:
            e = d >> 1
            if e in new_eid:
                rot.append(2 * new_eid[e] + (d & 1))
            else:
                clipped = True
        rotations.append(rot)
        if clipped or layers.dist[v] == n or v in g.frontier:
            frontier.add(new_vid[v])
    tags = None
    if g.tags:
        tags = {new_vid[v]: t for v, t in g.tags.items() if v in new_vid}
    return RotationGraph(rotations, frontier=frontier, tags=tags)


# -- canonical labeling --------------------------------------------------


def _signature_from(g: RotationGraph, d0: int, mirror: bool) -> tuple:
    """Canonical traversal signature starting at dart ``d0``."""
    rot_at = {}
    for v, rot in enumerate(g.rotations):
        use = rot[::-1] if mirror else rot
        rot_at[v] = {d: use[(i + 1) % len(use)] for i, d in enumerate(use)}
    dart_label: dict[int, int] = {}
    order: list[int] = []

    def visit_vertex(entry: int) -> None:
        v = g.dart_vertex[entry]
        d = entry
        while True:
            dart_label[d] = len(dart_label)
            order.append(d)
            d = rot_at[v][d]
            if d == entry:
                break

    visit_vertex(d0)
    i = 0
    seen_vertices = {g.dart_vertex[d0]}
    while i < len(order):
        d = order[i]
        i += 1
        t = d ^ 1
        v = g.dart_vertex[t]
        if v not in seen_vertices:
            seen_vertices.add(v)
            visit_vertex(t)
    sig_twins = tuple(dart_label[d ^ 1] for d in order)
    sig_front = tuple(
        1 if g.dart_vertex[d] in g.frontier else 0 for d in order
    )
    return sig_twins, sig_front


def canonical_form(g: RotationGraph, mirror: bool = False) -> tuple:
    """Minimum traversal signature over all root darts (O(darts^2))."""
    best = None
    for d0 in range(g.n_darts):
        sig = _signature_from(g, d0, mirror)
        if best is None or sig < best:
            best = sig
    return best


def is_isomorphic(
    a: RotationGraph, b: RotationGraph, allow_reflection: bool = False
) -> bool:
    if a.n_darts != b.n_darts or a.n_vertices != b.n_vertices:
        return False
    ca = canonical_form(a)
    if ca == canonical_form(b):
        return True
    if allow_reflection:
        return ca == canonical_form(b, mirror=True)
    return False


# -- JSON graph format v1 ------------------------------------------------


def to_json_dict(g: RotationGraph) -> dict:
    return {
        "version": 1,
        "vertices": [
            {"id": v, "rotation": list(g.rotations[v])} for v in range(g.n_vertices)
        ],
        "edges": [
            {"id": e, "halfedges": [2 * e, 2 * e + 1]} for e in range(g.n_edges)
        ],
        "frontier": sorted(g.frontier),
        "tags": {str(v): t for v, t in sorted((g.tags or {}).items())},
    }


def to_json(g: RotationGraph) -> str:
    return json.dumps(to_json_dict(g), sort_keys=True, indent=2) + "\n"


def build_graph(spec: dict | str) -> RotationGraph:
    """Validate a serialized rotation-system description (JSON graph format v1)."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    if spec.get("version") != 1:
        raise GraphError("unsupported graph format version")
    edges = spec.get("edges", [])
    vertices = spec.get("vertices", [])
    halfedge_to_dart: dict[int, int] = {}
    for i, erec in enumerate(edges):
        hs = erec.get("halfedges", [])
        if len(hs) != 2:
            raise GraphError(f"edge {erec.get('id')} must list exactly two half-edges")
        for j, h in enumerate(hs):
            if h in halfedge_to_dart:
                raise GraphError(f"half-edge {h} listed by two edges")
            halfedge_to_dart[h] = 2 * i + j
    vid_map = {}
    for i, vrec in enumerate(vertices):
        vid_map[vrec["id"]] = i
    rotations: list[list[int]] = []
    for vrec in vertices:
        rot = []
        for h in vrec.get("rotation", []):
            if h not in halfedge_to_dart:
                raise GraphError(f"dangling half-edge {h} in rotation")
            rot.append(halfedge_to_dart[h])
        rotations.append(rot)
    frontier = {vid_map[v] for v in spec.get("frontier", [])}
    tags_in = spec.get("tags") or {}
    tags = {vid_map[int(k)]: v for k, v in tags_in.items()} or None
    return RotationGraph(rotations, frontier=frontier, tags=tags)
