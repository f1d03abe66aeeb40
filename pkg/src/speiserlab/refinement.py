"""Midpoint subdivision, refinement-relation checking, and the two v-metric
transfer constructions between a graph and its refinement.

``subdivide4`` splits every interior triangle into four by connecting edge
midpoints; the refined vertex set is the disjoint union of the original
vertices and edges.  ``coarsen_metric`` pushes a metric from the refinement
down to the base, ``refine_metric`` lifts one up; both come with exact
square-sum inequalities that the tests enforce on every instance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import RefinementError
from .graph_core import RotationGraph, classify, interior_faces, trace_faces


@dataclass
class VMetric:
    """Nonnegative weight per vertex."""

    weights: dict[int, float]

    def __post_init__(self):
        for v, w in self.weights.items():
            if w < 0:
                raise RefinementError(f"negative weight {w} at vertex {v}")

    def __getitem__(self, v: int) -> float:
        return self.weights.get(v, 0.0)

    def area(self) -> float:
        return sum(w * w for w in self.weights.values())

    def to_json(self) -> str:
        return json.dumps(
            {str(v): w for v, w in sorted(self.weights.items())}, sort_keys=True
        )

    @classmethod
    def from_json(cls, s: str) -> "VMetric":
        return cls({int(k): float(v) for k, v in json.loads(s).items()})

    @classmethod
    def constant(cls, g: RotationGraph, value: float = 1.0) -> "VMetric":
        return cls({v: value for v in g.vertices()})


@dataclass
class RefinementMap:
    """How a refined graph covers the original.

    ``vertex_origin`` maps each refined vertex to ``("vertex", v)``,
    ``("edge", e)`` or ``("face", f)`` of the original; ``edge_cover`` maps
    each original edge to the ordered path of refined edges along it;
    ``face_cover`` maps each original interior face to its refined faces.
    """

    vertex_origin: dict[int, tuple[str, int]]
    edge_cover: dict[int, list[int]]
    face_cover: dict[int, list[int]] = field(default_factory=dict)

    @classmethod
    def identity(cls, g: RotationGraph) -> "RefinementMap":
        return cls(
            vertex_origin={v: ("vertex", v) for v in g.vertices()},
            edge_cover={e: [e] for e in g.edges()},
            face_cover={
                f.index: [f.index] for f in trace_faces(g)
            },
        )


def subdivide4(
    g: RotationGraph, outer_face: int | None = None
) -> tuple[RotationGraph, RefinementMap]:
    """Divide each interior triangle into four by connecting edge midpoints.

    The refined vertex set is V plus one midpoint per edge; original vertices
    keep their ids.  Rejects non-triangular interior faces.
    """
    faces = trace_faces(g)
    inner = {f.index for f in interior_faces(g, outer_face=outer_face)}
    for f in faces:
        if f.index in inner and len(f) != 3:
            raise RefinementError(
                f"face {f.index} has {len(f)} sides; subdivide4 needs triangles"
            )
    walks = []
    face_key_of = {}
    frontier_keys = {("v", v) for v in g.frontier}

    for face in faces:
        if face.index not in inner:
            walk = []
            for d in face.darts:
                e = d >> 1
                walk.append((("v", g.dart_vertex[d]), ("h", e, d & 1)))
                walk.append((("m", e), ("h", e, (d & 1) ^ 1)))
            walks.append(("big", face.index, walk))
            for d in face.darts:
                frontier_keys.add(("m", d >> 1))
            continue
        d0, d1, d2 = face.darts
        e0, e1, e2 = d0 >> 1, d1 >> 1, d2 >> 1
        u, v, w = (g.dart_vertex[d] for d in (d0, d1, d2))
        m0, m1, m2 = ("m", e0), ("m", e1), ("m", e2)
        fi = face.index
        corner = [
            (("v", u), ("h", e0, d0 & 1)),
            (m0, ("t", fi, 0)),
            (m2, ("h", e2, (d2 & 1) ^ 1)),
        ]
        walks.append(("tri", fi, corner))
        corner = [
            (("v", v), ("h", e1, d1 & 1)),
            (m1, ("t", fi, 1)),
            (m0, ("h", e0, (d0 & 1) ^ 1)),
        ]
        walks.append(("tri", fi, corner))
        corner = [
            (("v", w), ("h", e2, d2 & 1)),
            (m2, ("t", fi, 2)),
            (m1, ("h", e1, (d1 & 1) ^ 1)),
        ]
        walks.append(("tri", fi, corner))
        center = [(m0, ("t", fi, 1)), (m1, ("t", fi, 2)), (m2, ("t", fi, 0))]
        walks.append(("tri", fi, center))

    out, vmap, emap = RotationGraph.from_walks(
        [w for _, _, w in walks], frontier_keys=frontier_keys
    )
    out = _relabel_keep_originals(out, vmap, g)
    # rebuild key maps after relabeling
    new_vid = _vertex_ids_after_relabel(vmap, g)

    vertex_origin = {}
    for key, old in vmap.items():
        nid = new_vid[old]
        if key[0] == "v":
            vertex_origin[nid] = ("vertex", key[1])
        else:
            vertex_origin[nid] = ("edge", key[1])
    edge_cover = {
        e: [emap[("h", e, 0)], emap[("h", e, 1)]] for e in g.edges()
    }
    # face covering uses the refined trace order
    ref_faces = trace_faces(out)
    slot_of = {}
    pos = 0
    for kind, fi, walk in walks:
        slot_of[pos] = (kind, fi)
        pos += 1
    # from_walks preserves walk list order as face order only implicitly; match
    # by dart content instead: map each refined face to the walk that built it
    face_cover: dict[int, list[int]] = {}
    key_dart = {}
    for key, e in emap.items():
        key_dart[key] = e
    # identify each refined face by its set of edge ids
    walk_edges = []
    for _, fi, walk in walks:
        walk_edges.append(frozenset(emap[k] for _, k in walk))
    by_edges: dict[frozenset, list[int]] = {}
    for i, we in enumerate(walk_edges):
        by_edges.setdefault(we, []).append(i)
    for rf in ref_faces:
        es = frozenset(rf.edges)
        cands = by_edges.get(es, [])
        if len(cands) == 1:
            kind, fi = walks[cands[0]][0], walks[cands[0]][1]
            if kind == "tri" and fi in inner:
                face_cover.setdefault(fi, []).append(rf.index)
    rmap = RefinementMap(
        vertex_origin=vertex_origin, edge_cover=edge_cover, face_cover=face_cover
    )
    return out, rmap


def _vertex_ids_after_relabel(vmap: dict, original: RotationGraph) -> list[int]:
    n = len(vmap)
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
    return new_id


def _relabel_keep_originals(
    out: RotationGraph, vmap: dict, original: RotationGraph
) -> RotationGraph:
    new_id = _vertex_ids_after_relabel(vmap, original)
    rotations = [None] * out.n_vertices
    for old in range(out.n_vertices):
        rotations[new_id[old]] = out.rotations[old]
    frontier = {new_id[v] for v in out.frontier}
    return RotationGraph(rotations, frontier=frontier)


@dataclass
class RefinementReport:
    is_refinement: bool
    is_semi_bounded: bool
    m_edge: int
    is_bounded: bool
    m_face: int
    violations: list[str] = field(default_factory=list)


def check_refinement(
    g: RotationGraph, g_ref: RotationGraph, rmap: RefinementMap
) -> RefinementReport:
    """Verify the cover structure and measure the boundedness constants.

    ``m_edge`` counts all refined vertices on a closed original edge
    (endpoints included); ``m_face`` counts refined vertices on a closed
    original face.  Violations are reported, not raised.
    """
    violations = []
    m_edge = 0
    for e in g.edges():
        u, v = g.edge_ends(e)
        cover = rmap.edge_cover.get(e)
        if not cover:
            violations.append(f"edge {e} has no cover")
            continue
        chain_ok, n_vertices = _check_chain(g_ref, cover, rmap, u, v)
        if not chain_ok:
            violations.append(f"edge {e} cover is not a path from {u} to {v}")
        m_edge = max(m_edge, n_vertices)

    m_face = 0
    seen_refined = set()
    ref_faces = trace_faces(g_ref)
    for f, cover in rmap.face_cover.items():
        verts = set()
        for rf in cover:
            if rf in seen_refined:
                violations.append(f"refined face {rf} covers two faces")
            seen_refined.add(rf)
            verts.update(ref_faces[rf].vertices)
        # vertices of the closed face: everything on its refined faces
        m_face = max(m_face, len(verts))

    ok = not violations
    return RefinementReport(
        is_refinement=ok,
        is_semi_bounded=ok and m_edge > 0,
        m_edge=m_edge,
        is_bounded=ok and m_face > 0,
        m_face=m_face,
        violations=violations,
    )


def _check_chain(g_ref, cover, rmap, u, v):
    """cover must be a refined-edge path from original vertex u to v."""
    u_id = _refined_id_of_vertex(rmap, u)
    v_id = _refined_id_of_vertex(rmap, v)
    if u_id is None or v_id is None:
        return False, 0
    at = u_id
    seen = {at}
    for e in cover:
        a, b = g_ref.edge_ends(e)
        if a == at:
            at = b
        elif b == at:
            at = a
        else:
            return False, len(seen)
        seen.add(at)
    return at == v_id, len(seen)


def _refined_id_of_vertex(rmap: RefinementMap, v: int) -> int | None:
    # original vertices keep their ids in our constructions; fall back to scan
    origin = rmap.vertex_origin.get(v)
    if origin == ("vertex", v):
        return v
    for nid, org in rmap.vertex_origin.items():
        if org == ("vertex", v):
            return nid
    return None


def _edge_interior_vertices(
    g_ref: RotationGraph, rmap: RefinementMap, e: int, u: int, v: int
) -> list[int]:
    """Refined vertices strictly inside the closed edge e = [u, v]."""
    out = []
    at = _refined_id_of_vertex(rmap, u)
    for re in rmap.edge_cover[e]:
        a, b = g_ref.edge_ends(re)
        at = b if a == at else a
        if rmap.vertex_origin.get(at, ("",))[0] != "vertex":
            out.append(at)
    return out


def coarsen_metric(
    g: RotationGraph,
    g_ref: RotationGraph,
    rmap: RefinementMap,
    m_ref: VMetric,
) -> VMetric:
    """Push a refinement metric down: m(v) = 2M * max over the half-open star.

    The star at v consists of v itself plus the interior cover vertices of
    every edge at v (far endpoints excluded).  Satisfies
    ``sum m^2 <= 8 M^2 sum m_ref^2`` and, for every original edge [u, v],
    ``sum of m_ref over the closed edge <= (m(u) + m(v)) / 2``.
    """
    report = check_refinement(g, g_ref, rmap)
    if not report.is_refinement:
        raise RefinementError(f"not a refinement: {report.violations[:3]}")
    M = report.m_edge
    weights = {}
    for v in g.vertices():
        star = [_refined_id_of_vertex(rmap, v)]
        for d in g.rotations[v]:
            e = d >> 1
            u, w = g.edge_ends(e)
            far = w if u == v else u
            star.extend(_edge_interior_vertices(g_ref, rmap, e, v, far))
        weights[v] = 2.0 * M * max(m_ref[x] for x in star)
    return VMetric(weights)


def refine_metric(
    g: RotationGraph,
    g_ref: RotationGraph,
    rmap: RefinementMap,
    m: VMetric,
    K: int,
) -> VMetric:
    """Lift a base metric to the refinement, guided by the low-degree set.

    With Z the vertices of degree exceeding K: original vertices in Z keep
    their weight; any other refined vertex on the 1-skeleton gets three times
    the largest base weight among its incident low-degree vertices; vertices
    interior to faces get zero.  Requires g to satisfy p(K) (otherwise some
    skeleton vertex sees only Z and the construction is undefined), and
    satisfies ``sum m_ref^2 <= 9 K M sum m^2``.
    """
    cls = classify(g)
    if not cls.is_disk_triangulation:
        raise RefinementError("refine_metric needs a disk triangulation base")
    report = check_refinement(g, g_ref, rmap)
    if not report.is_refinement:
        raise RefinementError(f"not a refinement: {report.violations[:3]}")
    Z = {v for v in g.vertices() if g.degree(v) > K}

    weights = {}
    for w_id, origin in rmap.vertex_origin.items():
        kind, ref = origin
        if kind == "vertex":
            v = ref
            if v in Z:
                weights[w_id] = m[v]
            else:
                pool = [x for x in [v] + g.neighbors(v) if x not in Z]
                weights[w_id] = 3.0 * max(m[x] for x in pool)
        elif kind == "edge":
            u, v = g.edge_ends(ref)
            pool = [x for x in (u, v) if x not in Z]
            if not pool:
                raise RefinementError(
                    f"edge {ref} has both endpoints of degree > {K}; p({K}) fails"
                )
            weights[w_id] = 3.0 * max(m[x] for x in pool)
        else:
            weights[w_id] = 0.0
    return VMetric(weights)
