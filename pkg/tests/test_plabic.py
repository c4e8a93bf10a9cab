import random
import xml.etree.ElementTree as ET
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from wsnecklace.cyclic_core import GroundContext, Subset
from wsnecklace.errors import InputError, ValidationError
from wsnecklace.necklace import (
    Permutation,
    SimplicityError,
    all_permutations,
    largest_necklace,
    permutation_to_necklace,
    validate_generalized,
)
from wsnecklace.plabic import (
    PlanePoint,
    build_tiling,
    clip_segment,
    complex_check,
    curve_of,
    embed,
    fills_region,
    geometry_report,
    is_simple_curve,
    necklace_curve,
    point_inside,
    polygon_area,
    render_svg,
    roots,
    svg_string,
    verify_prop5,
)
from wsnecklace.purity import greedy_maximal, maximal_separated_collections
from wsnecklace.regions import Collection, interior

C73_LITS = ["127", "123", "234", "345", "456", "567", "167", "126", "124", "134", "346", "467", "146"]
N7 = largest_necklace(GroundContext(7, 3))


def col(n, *lits):
    sets = [Subset.parse(t, n) for t in lits]
    return Collection.of(GroundContext(n, len(sets[0])), sets)


C73 = col(7, *C73_LITS)


def test_roots_are_clockwise_from_top():
    xs = roots(4)
    assert xs[3] == pytest.approx((0.0, 1.0), abs=1e-12)  # ξ_n at the top
    assert xs[0] == pytest.approx((1.0, 0.0), abs=1e-12)  # ξ_1 a quarter turn clockwise


def test_embed_examples():
    assert embed(Subset(0, 5)) == (0.0, 0.0)
    p = embed(Subset((1 << 5) - 1, 5))
    assert abs(p.x) < 1e-12 and abs(p.y) < 1e-12


def test_primitives():
    sq = [PlanePoint(0, 0), PlanePoint(1, 0), PlanePoint(1, 1), PlanePoint(0, 1)]
    assert polygon_area(sq) == 1.0
    assert clip_segment(PlanePoint(-1, 0.5), PlanePoint(2, 0.5), sq, 0.0) == pytest.approx(1.0)
    assert clip_segment(PlanePoint(2, 2), PlanePoint(3, 3), sq, 0.0) == 0.0


def test_single_set_tiling():
    T = build_tiling(col(4, "12"))
    assert len(T.vertices) == 1 and not T.edges and not T.cells()
    assert complex_check(T).ok


def test_gr24_tiling_cliques():
    T = build_tiling(col(4, "12", "23", "34", "14", "13"))
    assert len(T.vertices) == 5
    assert sorted(str(k) for k in T.white_cells) == ["1", "3"]
    assert sorted(str(k) for k in T.black_cells) == ["123", "134"]
    assert T.euler == 1
    assert complex_check(T).ok


def test_tiling_needs_separation():
    with pytest.raises(InputError):
        build_tiling(col(4, "13", "24"))


def test_cells_are_counterclockwise_convex():
    T = build_tiling(C73)
    for _, _, cell in T.cells():
        poly = T.polygon(cell)
        m = len(poly)
        assert m >= 3
        for t in range(m):
            a, b, c = poly[t], poly[(t + 1) % m], poly[(t + 2) % m]
            assert (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x) > 0


def test_c73_fixture():
    T = build_tiling(C73)
    assert len(T.vertices) == 13
    assert len(T.white_cells) + len(T.black_cells) == 13
    assert T.euler == 1
    assert complex_check(T).ok
    curve = necklace_curve(N7)
    assert fills_region(T, curve)
    assert point_inside(curve, embed(Subset.parse("146", 7)))
    rep = geometry_report(T, curve)
    assert rep == {"vertices": 13, "edges": 25, "white_cells": 6, "black_cells": 7, "euler": 1,
                   "fills": True, "simple_curve": True}


def test_corrupted_vertex_is_reported():
    T = build_tiling(C73)
    x = Subset.parse("146", 7)
    bad = T.with_vertex(x, embed(Subset.parse("123", 7)))
    rep = complex_check(bad)
    assert not rep.ok
    kinds = {v["kind"] for v in rep.violations}
    assert "coincident_vertices" in kinds
    # a vertex pushed outside the figure breaks the cells instead
    far = T.with_vertex(x, PlanePoint(0.0, -3.0))
    assert not complex_check(far).ok
    # the area no longer matches, which settles the fill question before validation
    assert not fills_region(far, necklace_curve(N7))


def test_point_inside_examples():
    curve = necklace_curve(N7)
    cx = sum(p.x for p in curve.points) / 7
    cy = sum(p.y for p in curve.points) / 7
    assert point_inside(curve, PlanePoint(cx, cy))
    R = curve.scale
    assert not point_inside(curve, PlanePoint(10 * R, 0.0))
    assert point_inside(curve, curve.points[0])  # the boundary counts as inside


def test_curve_errors():
    N = permutation_to_necklace(Permutation((1, 2, 3)))
    with pytest.raises(ValidationError):
        necklace_curve(N)  # repeated sets
    bow = curve_of([Subset.parse(t, 5) for t in ("12", "13", "15", "14")])
    assert not is_simple_curve(bow)
    with pytest.raises(InputError):
        point_inside(bow, PlanePoint(0, 0))


def test_triangle_curves_are_simple():
    for n in range(3, 8):
        for tri in combinations(range(1, n + 1), 3):
            c = curve_of([Subset.of([e], n) for e in tri])
            assert is_simple_curve(c)


def test_prop5_examples():
    rep = verify_prop5(N7)
    assert rep.passed
    N = permutation_to_necklace(Permutation.parse("4,3,1,2"))
    curve = necklace_curve(N)
    assert not point_inside(curve, embed(Subset.parse("23", 4)))
    for t in ("12", "24", "34", "14"):
        assert point_inside(curve, embed(Subset.parse(t, 4)))


def test_fill_and_one_removed():
    curve = necklace_curve(N7)
    T = build_tiling(C73)
    assert fills_region(T, curve)
    for x in C73.sorted():
        assert not fills_region(build_tiling(C73.remove(x)), curve, validate=False)


def test_fills_needs_simple_curve():
    bow = curve_of([Subset.parse(t, 5) for t in ("12", "13", "15", "14")])
    with pytest.raises(InputError):
        fills_region(build_tiling(col(5, "12")), bow)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_strict_subsystems_never_fill(n):
    # every proper subfamily of every maximal system of Int(N), not only one-element deletions
    for pi in all_permutations(n):
        N = permutation_to_necklace(pi)
        if not N.connected:
            continue
        curve = necklace_curve(N)
        for C in maximal_separated_collections(interior(N)):
            members = C.sorted()
            for k in range(len(members)):
                for keep in combinations(members, k):
                    sub = Collection.of(C.ctx, keep)
                    assert not fills_region(build_tiling(sub), curve, validate=False), (str(N), sub.literals())


def test_generalized_curves():
    K = validate_generalized([Subset.parse(t, 4) for t in ("12", "23", "34", "14")])
    assert is_simple_curve(necklace_curve(K))
    with pytest.raises(SimplicityError):
        validate_generalized([Subset.parse(t, 5) for t in ("12", "13", "15", "14")])


# ---------------------------------------------------------------- svg


def test_svg_is_deterministic_and_well_formed(tmp_path):
    T = build_tiling(C73)
    curve = necklace_curve(N7)
    s1 = svg_string(T, curve)
    assert s1 == svg_string(build_tiling(col(7, *reversed(C73_LITS))), curve)
    root = ET.fromstring(s1)
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}polygon")) == 13
    assert len(root.findall(f"{ns}circle")) == 13
    assert sorted(t.text for t in root.findall(f"{ns}text")) == sorted(C73_LITS)
    assert root.find(f"{ns}polyline").get("stroke-dasharray")
    out = tmp_path / "fig.svg"
    render_svg(T, curve, out)
    assert out.read_text(encoding="utf-8") == s1


def test_empty_svg():
    T = build_tiling(Collection.of(GroundContext(4, 2)))
    root = ET.fromstring(svg_string(T))
    assert root.tag.endswith("svg")
    assert not root.findall("{http://www.w3.org/2000/svg}polygon")


def test_render_svg_bad_path(tmp_path):
    with pytest.raises(OSError):
        render_svg(build_tiling(C73), None, tmp_path / "missing" / "x.svg")


# ---------------------------------------------------------------- properties


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(5, 2), (6, 3), (7, 2), (7, 3), (8, 3), (8, 4)]))
def test_random_maximal_tilings_fill_the_polygon(seed, nr):
    ctx = GroundContext(*nr)
    C = greedy_maximal(largest_necklace(ctx).sets, Collection.grassmannian(ctx), random.Random(seed))
    T = build_tiling(C)
    rep = complex_check(T)
    assert rep.ok, rep.violations[:3]
    assert T.euler == 1
    assert fills_region(T, necklace_curve(largest_necklace(ctx)), validate=False)


@settings(max_examples=60, deadline=None)
@given(st.permutations(list(range(1, 8))).map(tuple))
def test_connected_necklace_curves_are_simple(image):
    N = permutation_to_necklace(Permutation(image))
    if N.connected:
        assert is_simple_curve(curve_of(N.sets))
        assert verify_prop5(N).passed
