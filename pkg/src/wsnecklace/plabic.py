"""Plane embedding of set-systems and the plabic tiling built from it.

``ξ_k = (sin 2πk/n, cos 2πk/n)`` puts ξ_n at the top and runs clockwise; a
set X is drawn at ``ξ(X) = Σ_{k∈X} ξ_k``.  All geometry is double precision
with the tolerances below, scaled by the circumradius of the figure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable, NamedTuple, Sequence

from .cyclic_core import Subset
from .errors import InputError, InvalidComplexError, ValidationError
from .necklace import GeneralizedNecklace, Necklace, SimplicityError, in_interior
from .purity import CheckReport
from .regions import Collection, separated_fan

POINT_TOL = 1e-9
REL_TOL = 1e-6


class PlanePoint(NamedTuple):
    x: float
    y: float

    def __sub__(self, o):
        return PlanePoint(self.x - o.x, self.y - o.y)

    def __add__(self, o):
        return PlanePoint(self.x + o.x, self.y + o.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@lru_cache(maxsize=None)
def roots(n: int) -> tuple[PlanePoint, ...]:
    """``roots(n)[k-1] = ξ_k``."""
    return tuple(
        PlanePoint(math.sin(2 * math.pi * k / n), math.cos(2 * math.pi * k / n))
        for k in range(1, n + 1)
    )


def embed(x: Subset) -> PlanePoint:
    xs = roots(x.n)
    sx = sy = 0.0
    for e in x.elements:
        sx += xs[e - 1].x
        sy += xs[e - 1].y
    return PlanePoint(sx, sy)


# ---------------------------------------------------------------- primitives


def cross(o: PlanePoint, a: PlanePoint, b: PlanePoint) -> float:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def polygon_area(points: Sequence[PlanePoint]) -> float:
    m = len(points)
    s = 0.0
    for t in range(m):
        a, b = points[t], points[(t + 1) % m]
        s += a.x * b.y - b.x * a.y
    return abs(s) / 2


def point_segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return (p - a).norm()
    t = max(0.0, min(1.0, ((p.x - a.x) * dx + (p.y - a.y) * dy) / L2))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def _proper_cross(p1, p2, q1, q2, eps: float) -> bool:
    d1, d2 = cross(q1, q2, p1), cross(q1, q2, p2)
    d3, d4 = cross(p1, p2, q1), cross(p1, p2, q2)
    return ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    )


def segment_distance(p1, p2, q1, q2) -> float:
    if _proper_cross(p1, p2, q1, q2, 0.0):
        return 0.0
    return min(
        point_segment_distance(p1, q1, q2),
        point_segment_distance(p2, q1, q2),
        point_segment_distance(q1, p1, p2),
        point_segment_distance(q2, p1, p2),
    )


def convex_order(points: Sequence[PlanePoint]) -> list[int]:
    """Indices of points in counterclockwise order around their centroid."""
    cx = sum(p.x for p in points) / len(points)
    cy = sum(p.y for p in points) / len(points)
    return sorted(range(len(points)), key=lambda t: math.atan2(points[t].y - cy, points[t].x - cx))


def in_convex(p: PlanePoint, poly: Sequence[PlanePoint], eps: float) -> bool:
    """Closed containment in a counterclockwise convex polygon, with slack ``eps``."""
    m = len(poly)
    for t in range(m):
        a, b = poly[t], poly[(t + 1) % m]
        L = (b - a).norm()
        if L and cross(a, b, p) / L < -eps:
            return False
    return True


def clip_segment(a: PlanePoint, b: PlanePoint, poly: Sequence[PlanePoint], slack: float) -> float:
    """Length of ``[a, b] ∩ poly`` (poly convex, counterclockwise), each edge pushed out by ``slack``."""
    t0, t1 = 0.0, 1.0
    d = b - a
    m = len(poly)
    for t in range(m):
        p, q = poly[t], poly[(t + 1) % m]
        e = q - p
        L = e.norm()
        if not L:
            continue
        # signed distance of a + s*d to the edge line, positive inside
        f0 = cross(p, q, a) / L + slack
        fd = (e.x * d.y - e.y * d.x) / L
        if abs(fd) < 1e-15:
            if f0 < 0:
                return 0.0
            continue
        s = -f0 / fd
        if fd > 0:
            t0 = max(t0, s)
        else:
            t1 = min(t1, s)
        if t0 > t1:
            return 0.0
    return (t1 - t0) * d.norm()


# ---------------------------------------------------------------- tiling


@dataclass
class Tiling:
    """The complex Σ(C): embedded vertices, edges and coloured 2-cells keyed by K or L."""

    n: int
    r: int
    vertices: dict[Subset, PlanePoint]
    edges: frozenset[tuple[Subset, Subset]]
    white_cells: dict[Subset, tuple[Subset, ...]]
    black_cells: dict[Subset, tuple[Subset, ...]]

    def cells(self) -> list[tuple[str, Subset, tuple[Subset, ...]]]:
        out = [("white", k, v) for k, v in sorted(self.white_cells.items())]
        out += [("black", k, v) for k, v in sorted(self.black_cells.items())]
        return out

    def polygon(self, cell: Sequence[Subset]) -> list[PlanePoint]:
        return [self.vertices[s] for s in cell]

    def cell_area(self) -> float:
        return sum(polygon_area(self.polygon(c)) for _, _, c in self.cells())

    @property
    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.white_cells) + len(self.black_cells)

    @property
    def scale(self) -> float:
        return max((p.norm() for p in self.vertices.values()), default=1.0) or 1.0

    def with_vertex(self, x: Subset, p: PlanePoint) -> "Tiling":
        verts = dict(self.vertices)
        verts[x] = PlanePoint(*p)
        return Tiling(self.n, self.r, verts, self.edges, self.white_cells, self.black_cells)


def _edge(a: Subset, b: Subset) -> tuple[Subset, Subset]:
    return (a, b) if a < b else (b, a)


def build_tiling(C: Collection) -> Tiling:
    if not C.is_separated():
        raise InputError("the plabic tiling needs a separated collection")
    n, r = C.ctx.n, C.ctx.r
    members = C.sorted()
    verts = {x: embed(x) for x in members}
    white: dict[int, list[Subset]] = {}
    black: dict[int, list[Subset]] = {}
    for x in members:
        for e in x.elements:
            white.setdefault(x.mask & ~(1 << (e - 1)), []).append(x)
        for e in range(1, n + 1):
            if e not in x:
                black.setdefault(x.mask | 1 << (e - 1), []).append(x)

    def cells_of(cliques: dict[int, list[Subset]]) -> dict[Subset, tuple[Subset, ...]]:
        out = {}
        for key, sets in cliques.items():
            if len(sets) >= 3:
                order = convex_order([verts[s] for s in sets])
                out[Subset(key, n)] = tuple(sets[t] for t in order)
        return out

    white_cells, black_cells = cells_of(white), cells_of(black)
    edges = set()
    for cell in list(white_cells.values()) + list(black_cells.values()):
        for t in range(len(cell)):
            edges.add(_edge(cell[t], cell[(t + 1) % len(cell)]))
    for s, x in enumerate(members):
        for y in members[s + 1:]:
            if (x.mask ^ y.mask).bit_count() != 2:
                continue
            if len(white.get(x.mask & y.mask, ())) == 2 and len(black.get(x.mask | y.mask, ())) == 2:
                edges.add(_edge(x, y))
    return Tiling(n, r, verts, frozenset(edges), white_cells, black_cells)


@dataclass
class ComplexReport:
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, **info):
        self.violations.append({"kind": kind, **info})


def _pt(p: PlanePoint) -> list[float]:
    return [round(p.x, 9), round(p.y, 9)]


def complex_check(T: Tiling) -> ComplexReport:
    """Check that Σ(C) is a polygonal complex.

    (a) a segment between neighbours meeting a cell in more than a point has
    both ends among the cell's vertices; (b) cell interiors are disjoint;
    (c) two cells meet in a common vertex, a common edge, or not at all; plus
    vertex injectivity and no crossing edges.
    """
    rep = ComplexReport()
    eps = REL_TOL * T.scale
    slack = POINT_TOL * T.scale
    verts = sorted(T.vertices)
    for s, x in enumerate(verts):
        for y in verts[s + 1:]:
            if (T.vertices[x] - T.vertices[y]).norm() <= POINT_TOL:
                rep.add("coincident_vertices", sets=[str(x), str(y)], at=_pt(T.vertices[x]))

    cells = T.cells()
    polys = [T.polygon(c) for _, _, c in cells]

    for s, x in enumerate(verts):
        for y in verts[s + 1:]:
            if (x.mask ^ y.mask).bit_count() != 2:
                continue
            a, b = T.vertices[x], T.vertices[y]
            for (color, key, cell), poly in zip(cells, polys):
                if clip_segment(a, b, poly, slack) > eps and not (x in cell and y in cell):
                    rep.add("segment_meets_cell", segment=[str(x), str(y)], cell=f"{color}:{key}",
                            at=[_pt(a), _pt(b)])

    for s in range(len(cells)):
        for t in range(s + 1, len(cells)):
            _check_cell_pair(rep, cells[s], cells[t], polys[s], polys[t], eps)

    edges = sorted(T.edges)
    for s, (x1, y1) in enumerate(edges):
        p1, p2 = T.vertices[x1], T.vertices[y1]
        for x2, y2 in edges[s + 1:]:
            q1, q2 = T.vertices[x2], T.vertices[y2]
            if _proper_cross(p1, p2, q1, q2, eps * eps):
                rep.add("edges_cross", edges=[[str(x1), str(y1)], [str(x2), str(y2)]])
    return rep


def _separated_by_axis(P, Q, eps: float) -> bool:
    for poly in (P, Q):
        m = len(poly)
        for t in range(m):
            a, b = poly[t], poly[(t + 1) % m]
            nx, ny = a.y - b.y, b.x - a.x
            L = math.hypot(nx, ny)
            if not L:
                continue
            pa = [(p.x * nx + p.y * ny) / L for p in P]
            qa = [(q.x * nx + q.y * ny) / L for q in Q]
            if max(pa) <= min(qa) + eps or max(qa) <= min(pa) + eps:
                return True
    return False


def _check_cell_pair(rep: ComplexReport, c1, c2, P, Q, eps: float):
    name1, name2 = f"{c1[0]}:{c1[1]}", f"{c2[0]}:{c2[1]}"
    if not _separated_by_axis(P, Q, eps):
        rep.add("cells_overlap", cells=[name1, name2])
        return
    v1, v2 = c1[2], c2[2]
    for verts, poly, other in ((v1, Q, v2), (v2, P, v1)):
        for x in verts:
            p = _vertex_point(x, v1, v2, P, Q)
            if in_convex(p, poly, eps) and x not in other:
                rep.add("vertex_on_foreign_cell", vertex=str(x), cells=[name1, name2], at=_pt(p))
    shared = [x for x in v1 if x in v2]
    if len(shared) > 2:
        rep.add("cells_share_too_much", cells=[name1, name2], shared=[str(x) for x in shared])
    elif len(shared) == 2:
        a, b = shared
        for cell in (v1, v2):
            ia, ib = cell.index(a), cell.index(b)
            if (ia - ib) % len(cell) not in (1, len(cell) - 1):
                rep.add("shared_pair_not_edge", cells=[name1, name2], shared=[str(a), str(b)])
                break
    for s in range(len(P)):
        for t in range(len(Q)):
            if _proper_cross(P[s], P[(s + 1) % len(P)], Q[t], Q[(t + 1) % len(Q)], eps * eps):
                rep.add("cell_edges_cross", cells=[name1, name2])
                return


def _vertex_point(x, v1, v2, P, Q) -> PlanePoint:
    return P[v1.index(x)] if x in v1 else Q[v2.index(x)]


def geometry_report(T: Tiling, curve: "PolyCurve | None" = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "vertices": len(T.vertices),
        "edges": len(T.edges),
        "white_cells": len(T.white_cells),
        "black_cells": len(T.black_cells),
        "euler": T.euler,
        "fills": None,
        "simple_curve": None,
    }
    if curve is not None:
        out["simple_curve"] = is_simple_curve(curve)
        if out["simple_curve"]:
            try:
                out["fills"] = fills_region(T, curve)
            except InvalidComplexError:
                out["fills"] = False
    return out


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class PolyCurve:
    points: tuple[PlanePoint, ...]
    source: tuple[Subset, ...]

    @property
    def scale(self) -> float:
        return max((p.norm() for p in self.points), default=1.0) or 1.0

    def segments(self):
        m = len(self.points)
        for t in range(m):
            yield self.points[t], self.points[(t + 1) % m]


def curve_of(sets: Iterable[Subset]) -> PolyCurve:
    sets = tuple(sets)
    return PolyCurve(tuple(embed(s) for s in sets), sets)


@lru_cache(maxsize=4096)
def is_simple_curve(curve: PolyCurve) -> bool:
    """No self-intersection: distinct points, disjoint non-adjacent segments, no backtracking.

    Curves through one or two points are accepted as degenerate simple curves.
    """
    pts = curve.points
    m = len(pts)
    eps = REL_TOL * curve.scale
    for s in range(m):
        for t in range(s + 1, m):
            if (pts[s] - pts[t]).norm() <= eps:
                return False
    if m <= 2:
        return True
    for s in range(m):
        a, b = pts[s], pts[(s + 1) % m]
        for t in range(s + 1, m):
            c, d = pts[t], pts[(t + 1) % m]
            if t == s + 1:
                # share b == c: the far ends must stay off the other segment
                if point_segment_distance(a, c, d) <= eps or point_segment_distance(d, a, b) <= eps:
                    return False
            elif s == 0 and t == m - 1:
                # share a == d
                if point_segment_distance(b, c, d) <= eps or point_segment_distance(c, a, b) <= eps:
                    return False
            elif segment_distance(a, b, c, d) <= eps:
                return False
    return True


def necklace_curve(N: Necklace | GeneralizedNecklace) -> PolyCurve:
    if isinstance(N, Necklace) and not N.connected:
        raise ValidationError(f"necklace {N} is not connected (repeated sets)")
    curve = curve_of(N.sets)
    if not is_simple_curve(curve):
        raise SimplicityError(f"the curve of {N} intersects itself")
    return curve


def point_inside(curve: PolyCurve, p: PlanePoint) -> bool:
    """Closed even-odd test: points within tolerance of the curve count as inside."""
    if not is_simple_curve(curve):
        raise InputError("point_inside needs a simple curve")
    eps = REL_TOL * curve.scale
    for a, b in curve.segments():
        if point_segment_distance(p, a, b) <= eps:
            return True
    if len(curve.points) <= 2:
        return False
    inside = False
    for a, b in curve.segments():
        if (a.y <= p.y) != (b.y <= p.y):
            xs = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < xs:
                inside = not inside
    return inside


# ---------------------------------------------------------------- criteria


def verify_prop5(N: Necklace) -> CheckReport:
    """Combinatorial membership in Int(N) agrees with ξ(X) ∈ in(N) on all of S(N)."""
    curve = necklace_curve(N)
    mismatches = []
    fan = separated_fan(N)
    for x in fan.sorted():
        comb = in_interior(N, x)
        geo = point_inside(curve, embed(x))
        if comb != geo:
            mismatches.append({"set": str(x), "interior": comb, "inside": geo})
    ok = not mismatches
    return CheckReport("prop5", ok, {"N": str(N), "checked": len(fan)},
                       None if ok else {"N": str(N), "mismatches": mismatches})


def _covered(T: Tiling, p: PlanePoint, eps: float) -> bool:
    for _, _, cell in T.cells():
        if in_convex(p, T.polygon(cell), eps):
            return True
    for x, y in T.edges:
        if point_segment_distance(p, T.vertices[x], T.vertices[y]) <= eps:
            return True
    return any((p - q).norm() <= eps for q in T.vertices.values())


def sample_points(curve: PolyCurve) -> list[PlanePoint]:
    pts = list(curve.points)
    for a, b in curve.segments():
        for s in (0.25, 0.5, 0.75):
            pts.append(PlanePoint(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)))
    return pts


def fills_region(T: Tiling, curve: PolyCurve, *, validate: bool = True) -> bool:
    """Σ(C) fills the closed region bounded by ``curve``.

    Decided by area: the cells are interior-disjoint and lie inside the curve,
    so their total area matches the polygon area exactly when they cover it.
    A deficit is conclusive on its own; a match is confirmed by the complex
    check.  Regions of zero area fall back to sampling points of the curve.
    """
    if not is_simple_curve(curve):
        raise InputError("fills_region needs a simple curve")
    region = polygon_area(curve.points)
    scale = max(curve.scale, T.scale)
    covered = T.cell_area()
    degenerate = region <= REL_TOL * scale * scale
    if not degenerate:
        tol = REL_TOL * region
        if covered < region - tol or covered > region + tol:
            return False
    if validate:
        rep = complex_check(T)
        if not rep.ok:
            raise InvalidComplexError(f"tiling is not a complex: {rep.violations[:3]}")
    if degenerate:
        eps = REL_TOL * scale
        return all(_covered(T, p, eps) for p in sample_points(curve))
    return True


# ---------------------------------------------------------------- svg


def svg_string(T: Tiling, curve: PolyCurve | None = None, size: int = 1000) -> str:
    pts = list(T.vertices.values()) + (list(curve.points) if curve else [])
    R = max((p.norm() for p in pts), default=1.0) or 1.0
    half = size / 2
    k = 0.85 * half / R

    def xy(p: PlanePoint) -> str:
        return f"{half + k * p.x:.3f},{half - k * p.y:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    for color, key, cell in T.cells():
        fill = "#ffffff" if color == "white" else "#808080"
        out.append(
            f'<polygon class="{color}" data-key="{key}" points="{" ".join(xy(T.vertices[s]) for s in cell)}" '
            f'fill="{fill}" stroke="black" stroke-width="2"/>'
        )
    for x, y in sorted(T.edges):
        a, b = xy(T.vertices[x]).split(","), xy(T.vertices[y]).split(",")
        out.append(
            f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="black" stroke-width="2"/>'
        )
    if curve is not None and curve.points:
        ring = " ".join(xy(p) for p in curve.points + curve.points[:1])
        out.append(
            f'<polyline class="curve" points="{ring}" fill="none" stroke="#c00000" '
            f'stroke-width="3" stroke-dasharray="10,8"/>'
        )
    for x in sorted(T.vertices):
        px, py = xy(T.vertices[x]).split(",")
        out.append(f'<circle cx="{px}" cy="{py}" r="6" fill="black"/>')
        out.append(
            f'<text x="{float(px) + 9:.3f}" y="{float(py) - 9:.3f}" font-family="monospace" '
            f'font-size="20">{x}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(T: Tiling, curve: PolyCurve | None, path: str | Path) -> None:
    try:
        Path(path).write_text(svg_string(T, curve), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
