"""Polygonal meshes of the unit square: data structures, structured families, I/O.

Conventions:
- Edge tangents point from the lower to the higher global vertex id; the normal
  is the tangent rotated by +pi/2, so (t, n) is right-handed (det[t n] = +1).
- Element edge loops are stored counter-clockwise.  For a CCW loop the outward
  normal of a traversed edge is the right of the traversal direction, hence the
  relative orientation sign of an edge is -1 exactly when the loop traverses it
  along its global tangent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SNAP_DECIMALS = 12


class MeshTopologyError(Exception):
    """Raised when mesh connectivity violates an invariant."""


class MeshParseError(Exception):
    """Raised on malformed mesh files; carries the offending line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Vertex:
    id: int
    x: np.ndarray  # shape (2,)


@dataclass(frozen=True)
class Edge:
    id: int
    v0: int
    v1: int
    t: np.ndarray  # unit tangent, v0 -> v1
    n: np.ndarray  # unit normal, (t, n) right-handed
    length: float
    boundary: bool


@dataclass(frozen=True)
class Element:
    id: int
    edges: tuple          # edge ids, CCW loop order
    signs: tuple          # relative orientation per edge, +-1
    vertices: tuple       # vertex ids, CCW loop order (start vertex of each edge)
    x_T: np.ndarray       # interior point
    h_T: float            # diameter
    area: float


@dataclass
class Mesh:
    vertices: list
    edges: list
    elements: list
    h: float = field(init=False)

    def __post_init__(self):
        self.h = max(T.h_T for T in self.elements)

    @property
    def vertex_coords(self):
        return np.array([v.x for v in self.vertices])

    def boundary_edges(self):
        return [E.id for E in self.edges if E.boundary]

    def boundary_vertices(self):
        out = set()
        for E in self.edges:
            if E.boundary:
                out.add(E.v0)
                out.add(E.v1)
        return sorted(out)


def _polygon_area_centroid(pts):
    x, y = pts[:, 0], pts[:, 1]
    xs, ys = np.roll(x, -1), np.roll(y, -1)
    cross = x * ys - xs * y
    area = 0.5 * cross.sum()
    cx = ((x + xs) * cross).sum() / (6.0 * area)
    cy = ((y + ys) * cross).sum() / (6.0 * area)
    return area, np.array([cx, cy])


def _diameter(pts):
    d = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((d ** 2).sum(-1)).max())


def build_from_polygons(polygons, interior_points=None):
    """Assemble a Mesh from a list of simple polygons given as (n, 2) arrays.

    Vertices are deduplicated by rounding coordinates to SNAP_DECIMALS.
    Polygons are reoriented CCW if needed.  interior_points may supply a
    per-element override of the centroid.
    """
    vid = {}
    verts = []

    def vertex_id(p):
        key = (round(float(p[0]), SNAP_DECIMALS), round(float(p[1]), SNAP_DECIMALS))
        if key not in vid:
            vid[key] = len(verts)
            verts.append(np.array(key))
        return vid[key]

    eid = {}
    edge_pairs = []
    edge_count = []

    def edge_id(a, b):
        key = (min(a, b), max(a, b))
        if key not in eid:
            eid[key] = len(edge_pairs)
            edge_pairs.append(key)
            edge_count.append(0)
        return eid[key]

    elements = []
    for ti, poly in enumerate(polygons):
        pts = np.asarray(poly, dtype=float)
        area, centroid = _polygon_area_centroid(pts)
        if area < 0:
            pts = pts[::-1]
            area = -area
        ids = [vertex_id(p) for p in pts]
        if len(set(ids)) != len(ids):
            raise MeshTopologyError(f"element {ti}: degenerate polygon after vertex snapping")
        loop_edges, loop_signs = [], []
        for a, b in zip(ids, ids[1:] + ids[:1]):
            e = edge_id(a, b)
            edge_count[e] += 1
            # CCW traversal along the global tangent means the outward normal
            # is -n_E, hence sign -1.
            loop_edges.append(e)
            loop_signs.append(-1 if a < b else +1)
        x_T = centroid if interior_points is None or interior_points[ti] is None \
            else np.asarray(interior_points[ti], dtype=float)
        elements.append(Element(
            id=ti, edges=tuple(loop_edges), signs=tuple(loop_signs),
            vertices=tuple(ids), x_T=x_T, h_T=_diameter(pts), area=float(area)))

    vertices = [Vertex(i, x) for i, x in enumerate(verts)]
    edges = []
    for i, (a, b) in enumerate(edge_pairs):
        d = verts[b] - verts[a]
        length = float(np.hypot(*d))
        t = d / length
        n = np.array([-t[1], t[0]])
        if edge_count[i] > 2:
            raise MeshTopologyError(f"edge {i} shared by {edge_count[i]} elements")
        edges.append(Edge(i, a, b, t, n, length, boundary=edge_count[i] == 1))

    mesh = Mesh(vertices, edges, elements)
    validate_mesh(mesh)
    return mesh


def validate_mesh(mesh):
    """Check loop closure, orientation sums, and sign consistency."""
    sign_sum = np.zeros(len(mesh.edges), dtype=int)
    incidence = np.zeros(len(mesh.edges), dtype=int)
    for T in mesh.elements:
        prev_end = None
        first_start = None
        for e, s, vstart in zip(T.edges, T.signs, T.vertices):
            E = mesh.edges[e]
            a, b = (E.v0, E.v1) if s == -1 else (E.v1, E.v0)
            if a != vstart:
                raise MeshTopologyError(f"element {T.id}: edge {e} does not start at loop vertex")
            if prev_end is not None and a != prev_end:
                raise MeshTopologyError(f"element {T.id}: edge loop does not close at edge {e}")
            if first_start is None:
                first_start = a
            prev_end = b
            sign_sum[e] += s
            incidence[e] += 1
        if prev_end != first_start:
            raise MeshTopologyError(f"element {T.id}: edge loop is open")
        if T.area <= 0:
            raise MeshTopologyError(f"element {T.id}: nonpositive area")
    for E in mesh.edges:
        if incidence[E.id] == 2 and sign_sum[E.id] != 0:
            raise MeshTopologyError(f"edge {E.id}: interior orientation signs do not cancel")
        if (incidence[E.id] == 1) != E.boundary:
            raise MeshTopologyError(f"edge {E.id}: boundary flag inconsistent with incidence")


def _cartesian_polys(n):
    xs = np.linspace(0.0, 1.0, n + 1)
    polys = []
    for j in range(n):
        for i in range(n):
            x0, x1 = xs[i], xs[i + 1]
            y0, y1 = xs[j], xs[j + 1]
            polys.append([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    return polys


def _triangular_polys(n):
    xs = np.linspace(0.0, 1.0, n + 1)
    polys = []
    for j in range(n):
        for i in range(n):
            x0, x1 = xs[i], xs[i + 1]
            y0, y1 = xs[j], xs[j + 1]
            polys.append([(x0, y0), (x1, y0), (x1, y1)])
            polys.append([(x0, y0), (x1, y1), (x0, y1)])
    return polys


def _clip_halfplane(pts, inside, intersect):
    out = []
    m = len(pts)
    for i in range(m):
        cur, nxt = pts[i], pts[(i + 1) % m]
        cin, nin = inside(cur), inside(nxt)
        if cin:
            out.append(cur)
            if not nin:
                out.append(intersect(cur, nxt))
        elif nin:
            out.append(intersect(cur, nxt))
    return out


def _clip_to_unit_square(pts):
    """Sutherland-Hodgman clip of a convex polygon against (0,1)^2."""
    planes = [
        (lambda p: p[0] >= 0.0, 0, 0.0),
        (lambda p: p[0] <= 1.0, 0, 1.0),
        (lambda p: p[1] >= 0.0, 1, 0.0),
        (lambda p: p[1] <= 1.0, 1, 1.0),
    ]
    for inside, axis, level in planes:
        def intersect(a, b, axis=axis, level=level):
            ta = (level - a[axis]) / (b[axis] - a[axis])
            p = a + ta * (b - a)
            p[axis] = level
            return p
        pts = _clip_halfplane([np.asarray(p, dtype=float) for p in pts], inside, intersect)
        if len(pts) < 3:
            return []
    # drop near-duplicate consecutive points created by grazing clips
    clean = []
    for p in pts:
        if not clean or np.hypot(*(p - clean[-1])) > 1e-12:
            clean.append(p)
    if len(clean) >= 3 and np.hypot(*(clean[0] - clean[-1])) <= 1e-12:
        clean.pop()
    return clean if len(clean) >= 3 else []


def _hexagonal_polys(n):
    # Flat-top hexagons of width 1/n (circumradius a = 1/(2n)), clipped to the
    # unit square; boundary cells may degenerate to pentagons/quads.
    a = 1.0 / (2 * n)
    dx = 1.5 * a
    dy = math.sqrt(3.0) * a
    corners = np.array([(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3))
                        for k in range(6)]) * a
    polys = []
    ncols = int(math.ceil(1.0 / dx)) + 2
    nrows = int(math.ceil(1.0 / dy)) + 2
    for i in range(-1, ncols):
        cx = i * dx
        off = 0.5 * dy if i % 2 else 0.0
        for j in range(-1, nrows):
            cy = j * dy + off
            pts = corners + np.array([cx, cy])
            clipped = _clip_to_unit_square(list(pts))
            if clipped:
                area, _ = _polygon_area_centroid(np.array(clipped))
                if abs(area) > 1e-14:
                    polys.append(clipped)
    return polys


def build_structured_mesh(family, n):
    """Build a structured mesh of (0,1)^2: 'cartesian', 'triangular', or 'hexagonal'."""
    if n < 1:
        raise ValueError("subdivision count must be >= 1")
    builders = {
        "cartesian": _cartesian_polys,
        "triangular": _triangular_polys,
        "hexagonal": _hexagonal_polys,
    }
    if family not in builders:
        raise ValueError(f"unknown mesh family {family!r}")
    return build_from_polygons(builders[family](n))


def mesh_diagnostics(mesh):
    """Geometry and orientation summary; violations reported, not raised."""
    h_T = np.array([T.h_T for T in mesh.elements])
    orientation_ok = True
    sign_sum = {}
    for T in mesh.elements:
        for e, s in zip(T.edges, T.signs):
            sign_sum[e] = sign_sum.get(e, 0) + s
    for E in mesh.edges:
        if not E.boundary and sign_sum.get(E.id, 0) != 0:
            orientation_ok = False
    return {
        "h": mesh.h,
        "min_h_T": float(h_T.min()),
        "max_h_T": float(h_T.max()),
        "max_edges_per_element": max(len(T.edges) for T in mesh.elements),
        "orientation_ok": orientation_ok,
        "n_boundary_edges": sum(1 for E in mesh.edges if E.boundary),
        "n_elements": len(mesh.elements),
        "n_edges": len(mesh.edges),
        "n_vertices": len(mesh.vertices),
        "total_area": float(sum(T.area for T in mesh.elements)),
    }


def save_mesh(mesh, path):
    with open(path, "w") as f:
        f.write(f"VERTICES {len(mesh.vertices)}\n")
        for v in mesh.vertices:
            f.write(f"{v.x[0]:.17g} {v.x[1]:.17g}\n")
        f.write(f"EDGES {len(mesh.edges)}\n")
        for E in mesh.edges:
            f.write(f"{E.v0} {E.v1}\n")
        f.write(f"ELEMENTS {len(mesh.elements)}\n")
        for T in mesh.elements:
            parts = [str(len(T.edges))]
            for e, s in zip(T.edges, T.signs):
                parts.append(str(e))
                parts.append(f"{s:+d}")
            parts.append(f"{T.x_T[0]:.17g}")
            parts.append(f"{T.x_T[1]:.17g}")
            f.write(" ".join(parts) + "\n")


def load_mesh(path):
    with open(path) as f:
        lines = f.read().splitlines()
    pos = 0

    def next_line():
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise MeshParseError(len(lines), "unexpected end of file")
        pos += 1
        return pos, lines[pos - 1].split()

    def header(tag):
        ln, tok = next_line()
        if len(tok) != 2 or tok[0] != tag:
            raise MeshParseError(ln, f"expected '{tag} <count>'")
        try:
            return int(tok[1])
        except ValueError:
            raise MeshParseError(ln, f"bad count {tok[1]!r}") from None

    nv = header("VERTICES")
    coords = []
    for _ in range(nv):
        ln, tok = next_line()
        if len(tok) != 2:
            raise MeshParseError(ln, "expected two coordinates")
        coords.append(np.array([float(tok[0]), float(tok[1])]))

    ne = header("EDGES")
    pairs = []
    seen = set()
    for _ in range(ne):
        ln, tok = next_line()
        if len(tok) != 2:
            raise MeshParseError(ln, "expected two vertex ids")
        a, b = int(tok[0]), int(tok[1])
        if not (0 <= a < nv and 0 <= b < nv) or a == b:
            raise MeshParseError(ln, f"bad edge endpoints {a} {b}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise MeshTopologyError(f"duplicate edge ({a}, {b})")
        seen.add(key)
        pairs.append((a, b))

    nt = header("ELEMENTS")
    elem_rows = []
    for _ in range(nt):
        ln, tok = next_line()
        try:
            cnt = int(tok[0])
            body = tok[1:]
            if len(body) not in (2 * cnt, 2 * cnt + 2):
                raise MeshParseError(ln, f"expected {2*cnt} or {2*cnt+2} entries after count")
            loop = [(int(body[2 * i]), int(body[2 * i + 1])) for i in range(cnt)]
            x_T = np.array([float(body[-2]), float(body[-1])]) if len(body) == 2 * cnt + 2 else None
        except (ValueError, IndexError):
            raise MeshParseError(ln, "malformed element row") from None
        elem_rows.append((ln, loop, x_T))

    # rebuild geometry from connectivity
    incidence = [0] * ne
    elements = []
    for ti, (ln, loop, x_T) in enumerate(elem_rows):
        verts_loop = []
        pts = []
        for e, s in loop:
            if not (0 <= e < ne) or s not in (-1, 1):
                raise MeshParseError(ln, f"bad edge reference {e} {s}")
            a, b = pairs[e]
            start = a if s == -1 else b
            verts_loop.append(start)
            pts.append(coords[start])
            incidence[e] += 1
        pts = np.array(pts)
        prev = None
        for (e, s), vstart in zip(loop, verts_loop):
            a, b = pairs[e]
            end = b if s == -1 else a
            if prev is not None and vstart != prev:
                raise MeshTopologyError(f"element {ti}: loop does not close at edge {e}")
            prev = end
        if prev != verts_loop[0]:
            raise MeshTopologyError(f"element {ti}: edge loop is open")
        area, centroid = _polygon_area_centroid(pts)
        if area <= 0:
            raise MeshTopologyError(f"element {ti}: loop not counter-clockwise")
        elements.append(Element(
            id=ti, edges=tuple(e for e, _ in loop), signs=tuple(s for _, s in loop),
            vertices=tuple(verts_loop), x_T=centroid if x_T is None else x_T,
            h_T=_diameter(pts), area=float(area)))

    vertices = [Vertex(i, x) for i, x in enumerate(coords)]
    edges = []
    for i, (a, b) in enumerate(pairs):
        d = coords[b] - coords[a]
        length = float(np.hypot(*d))
        t = d / length
        n = np.array([-t[1], t[0]])
        edges.append(Edge(i, a, b, t, n, length, boundary=incidence[i] == 1))

    mesh = Mesh(vertices, edges, elements)
    validate_mesh(mesh)
    return mesh
