"""Tests for double-point detection, tiles, tree extraction, modulus bounds."""

import math

import numpy as np
import pytest

import tabledata as td
from droplets.droplet import (
    DoublePoint,
    ExtremalityError,
    analyze,
    arc_min_gap,
    arc_of_angle,
    droplet_contains,
    extract_biangled_tree,
    extract_rooted_binary_tree,
    find_double_points,
    forming_pairs,
    fundamental_tiles,
    intersecting_arc_pairs,
    quad_modulus_bounds,
    tile_polygons,
)
from droplets.polyfamily import (
    ExtPolynomial,
    NotInClassError,
    critical_points,
    suffridge_base,
)
from droplets.trees import (
    RootedBinaryTree,
    biangled_isomorphic,
    rooted_binary_isomorphic,
)
from tabledata import tree_path3, tree_single, tree_star4, tree_two


def f0(d):
    coeffs = [0.0] * d
    coeffs[-1] = -1.0 / d
    return ExtPolynomial(d, tuple(coeffs))


# ---------------------------------------------------------------------------
# double points
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_hypocycloid_has_no_doubles(d):
    assert find_double_points(f0(d)) == []


def test_table_d3_double_at_origin():
    dps = find_double_points(td.EXT_D3)
    assert len(dps) == 1
    dp = dps[0]
    assert dp.s == pytest.approx(math.pi / 2, abs=1e-9)
    assert dp.t == pytest.approx(3 * math.pi / 2, abs=1e-9)
    assert abs(dp.point) < 1e-12
    assert dp.tangency_residual < 1e-6


def test_table_d4_two_doubles():
    dps = find_double_points(td.EXT_D4)
    assert len(dps) == 2
    assert all(dp.tangency_residual < 1e-6 for dp in dps)


def test_table_d5_star_three_doubles_symmetric():
    dps = find_double_points(td.EXT_D5_STAR)
    assert len(dps) == 3
    pts = sorted(abs(dp.point) for dp in dps)
    assert pts[0] == pytest.approx(pts[-1], abs=1e-10)  # threefold symmetry


def test_transversal_crossing_rejected():
    bad = ExtPolynomial.__new__(ExtPolynomial)
    object.__setattr__(bad, "d", 2)
    object.__setattr__(bad, "coeffs", (0j, complex(-1.0)))
    with pytest.raises(NotInClassError):
        find_double_points(bad)


def test_no_false_positives_near_cusps():
    # cusp-adjacent sample pairs are geometrically close; none may polish
    # into a reported double point on any valid member
    for f in (f0(6), td.EXT_D5_STAR, td.BDD_D5):
        dps = find_double_points(f)
        cusp_angles = critical_points(f).angles
        for dp in dps:
            for a in (dp.s, dp.t):
                assert min(abs(a - c) for c in cusp_angles) > 1e-3


def test_suffridge_base_real_double_counts():
    # the base family has floor((d-1)/2) real double points
    for d in range(4, 8):
        dps = find_double_points(suffridge_base(d, 1))
        assert len(dps) == (d - 1) // 2
        assert all(abs(dp.point.imag) < 1e-9 for dp in dps)


# ---------------------------------------------------------------------------
# forming pairs and arc bookkeeping
# ---------------------------------------------------------------------------


def test_forming_pair_near_extremal():
    # slightly below the pinching value a_1 = 2/3 the gap is small but open
    f = ExtPolynomial(3, (2 / 3 - 1e-5, 0, -1 / 3))
    assert find_double_points(f) == []
    pairs = forming_pairs(f)
    assert len(pairs) == 1
    assert 1e-12 < pairs[0].gap < 1e-4
    assert pairs[0].arcs in {(1, 3), (2, 4)}


def test_no_forming_pairs_on_hypocycloid():
    assert forming_pairs(f0(4)) == []


def test_arc_of_angle_roundtrip():
    crit = critical_points(f0(4))
    ca = crit.angles
    for j in range(1, 6):
        a0 = ca[j - 1]
        mid = a0 + 0.3
        assert arc_of_angle(mid, ca) == j


def test_arc_min_gap_touching():
    f = td.EXT_D3
    crit = critical_points(f)
    dps = find_double_points(f, crit=crit)
    j = arc_of_angle(dps[0].s, crit.angles)
    k = arc_of_angle(dps[0].t, crit.angles)
    gap, s, t = arc_min_gap(f, crit.angles, j, k)
    assert gap < 1e-10


def test_intersecting_arc_pairs_d4():
    pairs = intersecting_arc_pairs(td.EXT_D4)
    assert len(pairs) == 2


# ---------------------------------------------------------------------------
# tiles
# ---------------------------------------------------------------------------


def test_deltoid_single_tile():
    tiles = fundamental_tiles(td.EXT_D2)
    assert len(tiles) == 1
    assert [k for k, _ in tiles[0].corners].count("cusp") == 3


def test_d3_two_tiles_share_double():
    tiles = fundamental_tiles(td.EXT_D3)
    assert len(tiles) == 2
    for t in tiles:
        kinds = sorted(k for k, _ in t.corners)
        assert kinds == ["cusp", "cusp", "double"]
        assert t.bounded


def test_d5_star_tile_adjacency():
    tiles = fundamental_tiles(td.EXT_D5_STAR)
    assert len(tiles) == 4
    n_double_corners = sorted(
        sum(1 for k, _ in t.corners if k == "double") for t in tiles
    )
    assert n_double_corners == [1, 1, 1, 3]  # one central tile meets the rest


def test_tile_count_equals_doubles_plus_one():
    for f in (td.EXT_D3, td.EXT_D4, td.EXT_D5_STAR):
        tiles = fundamental_tiles(f)
        dps = find_double_points(f)
        assert len(tiles) == len(dps) + 1


def test_nonextremal_tiles_precondition():
    with pytest.raises(ExtremalityError):
        fundamental_tiles(f0(4))


def test_bounded_tiles_orientation():
    tiles = fundamental_tiles(td.BDD_D3)
    flags = sorted(t.bounded for t in tiles)
    assert flags == [False, True]


# ---------------------------------------------------------------------------
# tree extraction
# ---------------------------------------------------------------------------


def test_extract_deltoid_single_vertex():
    assert biangled_isomorphic(extract_biangled_tree(td.EXT_D2), tree_single())


def test_extract_d3_two_vertex():
    assert biangled_isomorphic(extract_biangled_tree(td.EXT_D3), tree_two())


def test_extract_d4_path():
    assert biangled_isomorphic(extract_biangled_tree(td.EXT_D4), tree_path3())


def test_extract_d5_star():
    assert biangled_isomorphic(extract_biangled_tree(td.EXT_D5_STAR), tree_star4())


def test_extract_equivariant_under_rotation():
    base = extract_biangled_tree(td.EXT_D4)
    for i in range(1, 5):
        t = extract_biangled_tree(td.EXT_D4.rotated(i))
        assert biangled_isomorphic(t, base)


def test_extract_rooted_d2_empty():
    assert extract_rooted_binary_tree(td.BDD_D2).n == 0


def test_extract_rooted_d3_single():
    rt = extract_rooted_binary_tree(td.BDD_D3)
    assert rt.code() == (None, None)


def test_extract_rooted_d4_chirality():
    first = extract_rooted_binary_tree(td.BDD_D4_FIRST)
    second = extract_rooted_binary_tree(td.BDD_D4_SECOND)
    # the printed pair are mirror droplets and must give the two distinct
    # one-child trees; the first carries the left child
    assert first.code() == ((None, None), None)
    assert second.code() == (None, (None, None))
    assert not rooted_binary_isomorphic(first, second)


def test_extract_rooted_d5():
    rt = extract_rooted_binary_tree(td.BDD_D5)
    assert rt.n == 3
    # real coefficients give a mirror-symmetric droplet, so the tree is the
    # balanced one with both children present
    assert rt.code() == ((None, None), (None, None))


# ---------------------------------------------------------------------------
# modulus bounds
# ---------------------------------------------------------------------------


def test_quad_modulus_bounds_unit():
    lower, upper = quad_modulus_bounds(1.0, 1.0)
    L = math.log(3.0)
    assert lower == pytest.approx(L * L / (math.pi * (1 + 2 * L)), rel=1e-12)
    assert lower == pytest.approx(0.1202, abs=5e-4)
    assert upper == pytest.approx(math.pi * (1 + 2 * L) / (L * L), rel=1e-12)
    assert upper == pytest.approx(8.323, abs=2e-3)


def test_quad_modulus_bounds_ratio_only():
    for s in (0.1, 2.0, 17.0):
        assert quad_modulus_bounds(s, s) == pytest.approx(quad_modulus_bounds(1, 1))


def test_quad_modulus_lower_exceeds_one_at_high_ratio():
    # the lower bound passes 1 once log(1 + 2 s_b/s_a) clears the root of
    # L^2 = pi (1 + 2L), i.e. around s_b/s_a ~ 430
    lower, _ = quad_modulus_bounds(0.01, 10.0)
    assert lower > 1.0
    lower_small, _ = quad_modulus_bounds(10.0, 0.1)
    assert lower_small < 1e-3


def test_quad_modulus_monotone_and_ordered():
    prev = None
    for ratio in (0.25, 0.5, 1.0, 2.0, 4.0):
        lo, up = quad_modulus_bounds(1.0, ratio)
        assert lo <= up
        if prev is not None:
            assert lo >= prev[0] and up >= prev[1]  # increasing in s_b/s_a
        prev = (lo, up)
    with pytest.raises(ValueError):
        quad_modulus_bounds(0.0, 1.0)


# ---------------------------------------------------------------------------
# full reports and membership
# ---------------------------------------------------------------------------


def test_analyze_extremal_report():
    rep = analyze(td.EXT_D4)
    assert rep.is_extremal and rep.univalent
    assert rep.n_cusps == 5 and len(rep.doubles) == 2
    assert rep.curvature_mean == pytest.approx(-1.5, abs=1e-9)
    assert rep.curvature_std < 1e-9
    assert rep.tree is not None


def test_analyze_nonextremal_report():
    rep = analyze(f0(4))
    assert not rep.is_extremal
    assert rep.tiles is None and rep.tree is None


def test_droplet_membership_deltoid():
    f = td.EXT_D2
    tiles = fundamental_tiles(f)
    polys = tile_polygons(f, tiles)
    # the deltoid droplet contains the origin but not far points
    assert droplet_contains(polys, np.array([0.0 + 0.0j]))[0]
    assert not droplet_contains(polys, np.array([5.0 + 0.0j]))[0]
    # area via membership grid matches the shoelace area of the tile
    xs = np.linspace(-1.8, 1.8, 400)
    X, Y = np.meshgrid(xs, xs)
    pts = X + 1j * Y
    frac = droplet_contains(polys, pts).mean()
    grid_area = frac * (3.6 * 3.6)
    assert grid_area == pytest.approx(tiles[0].signed_area, rel=0.02)
