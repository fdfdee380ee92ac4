import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from finmode import freq as fq
from finmode.fixtures import random_sphere_points
from finmode.geometry import (
    DegenerateInput,
    PlaneCoordinates,
    angle_sum,
    convex_hull_3d,
    convex_hull_planar,
    face_polygons,
    interior_angles,
    is_sip,
    minkowski_functional,
    plane_hull,
    rotation_loop,
    spherical_polygon_area,
    sum_pairs,
)

pt2 = st.tuples(st.integers(-6, 6), st.integers(-6, 6))
pt3 = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))

# ---------------------------------------------------------------- planar hulls


def test_diamond_gauge_is_l1_norm():
    hull = convex_hull_planar([(1, 0), (0, 1), (-1, 0), (0, -1), (0, 0)])
    assert len(hull.vertices) == 4
    for x, y in [(1, 1), (3, -2), (Fraction(1, 3), 0), (-2, -5)]:
        assert minkowski_functional(hull, (x, y)) == abs(Fraction(x)) + abs(Fraction(y))


def test_planar_hull_drops_collinear_boundary_points():
    hull = convex_hull_planar([(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 2)])
    assert set(hull.vertices) == {(0, 0), (2, 0), (2, 2), (0, 2)}
    assert not hull.origin_interior()
    with pytest.raises(ValueError):
        minkowski_functional(hull, (1, 1))


def test_planar_hull_degenerate():
    with pytest.raises(DegenerateInput):
        convex_hull_planar([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(DegenerateInput):
        convex_hull_planar([(0, 0), (1, 1)])


@settings(max_examples=100)
@given(st.lists(pt2, min_size=3, max_size=25, unique=True))
def test_planar_hull_matches_scipy(pts):
    arr = np.array(pts, float)
    assume(np.linalg.matrix_rank(arr - arr[0]) == 2)
    hull = convex_hull_planar(pts)
    ref = ConvexHull(arr)
    assert {tuple(map(int, arr[i])) for i in ref.vertices} == {(int(x), int(y)) for x, y in hull.vertices}
    for p in pts:
        assert hull.contains(p)


@given(st.lists(pt2, min_size=3, max_size=15, unique=True), pt2)
def test_gauge_agrees_with_membership(pts, q):
    pts = pts + [(-x, -y) for x, y in pts]
    arr = np.array(pts, float)
    assume(np.linalg.matrix_rank(arr) == 2)
    hull = convex_hull_planar(pts)
    assume(hull.origin_interior())
    assert (minkowski_functional(hull, q) <= 1) == hull.contains(q)


def test_plane_coordinates_are_rational():
    pts = [fq.freq(1, 2, 2), fq.freq(2, -2, 1), fq.freq(-1, -2, -2), fq.freq(-2, 2, -1)]
    hull, pc = plane_hull(pts)
    assert all(isinstance(c, Fraction) for v in hull.vertices for c in v)
    assert pc.contains(fq.freq(3, 0, 3))
    assert not pc.contains(fq.freq(0, 0, 1))
    with pytest.raises(ValueError):
        plane_hull(pts + [fq.freq(0, 0, 1)])
    with pytest.raises(DegenerateInput):
        PlaneCoordinates.from_points([fq.freq(1, 0, 0), fq.freq(2, 0, 0)])


# ---------------------------------------------------------------- spatial hulls


CUBE = list(itertools.product([-1, 1], repeat=3))


def test_cube_faces_merge():
    extras = [(0, 0, 0), (1, 0, 0), (0, -1, 0), (1, 1, 0), (0, 0, 1)]
    hull = convex_hull_3d(CUBE + extras)
    assert len(hull.vertices) == 8
    assert len(hull.faces) == 6
    assert all(len(f) == 4 for f in hull.faces)
    assert len(hull.edges) == 12
    assert hull.euler_characteristic() == 2


def test_octahedron_orientation():
    pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    hull = convex_hull_3d(pts)
    assert len(hull.faces) == 8
    for (a, c), f in zip(hull.face_planes(), hull.faces):
        centroid = [sum(hull.vertices[i][k] for i in f) for k in range(3)]
        assert fq.dot(a, centroid) > 0  # outward
        assert c > 0


def test_spatial_hull_degenerate():
    with pytest.raises(DegenerateInput):
        convex_hull_3d([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    with pytest.raises(DegenerateInput):
        convex_hull_3d([(0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0)])


@settings(max_examples=60, deadline=None)
@given(st.lists(pt3, min_size=4, max_size=30, unique=True))
def test_spatial_hull_matches_scipy(pts):
    arr = np.array(pts, float)
    assume(np.linalg.matrix_rank(arr - arr[0]) == 3)
    hull = convex_hull_3d(pts)
    ref = ConvexHull(arr)
    assert {tuple(map(int, arr[i])) for i in ref.vertices} == {tuple(int(c) for c in v) for v in hull.vertices}
    assert hull.euler_characteristic() == 2
    for p in pts:
        assert hull.contains(p)
    # interior angles of each face sum to (k - 2) pi
    for f in hull.faces:
        assert len(f) >= 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(6, 14))
def test_sphere_hull_faces_tile_the_sphere(seed, count):
    rng = np.random.default_rng(seed)
    pts = random_sphere_points(rng, count)
    pts = pts + [fq.neg(p) for p in pts]
    hull = convex_hull_3d(pts)
    areas = [spherical_polygon_area(V) for V in face_polygons(hull)]
    assert sum(areas) == pytest.approx(4 * math.pi, abs=1e-9)


# ---------------------------------------------------------------- simply interacting pairs


def test_parallelogram_is_not_sip():
    S = [fq.freq(*v) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 1)]]
    assert not is_sip(S, S[0], S[2])
    assert is_sip(S, S[0], S[1])


def test_sip_argument_checks():
    S = [fq.freq(1, 0, 0), fq.freq(0, 1, 0)]
    with pytest.raises(ValueError):
        is_sip(S, S[0], fq.freq(0, 0, 1))
    with pytest.raises(ValueError):
        is_sip(S, S[0], S[0])


@given(st.lists(pt3.filter(any), min_size=2, max_size=14, unique=True), st.data())
def test_sip_matches_sum_pairs(S, data):
    S = [fq.as_freq(v) for v in S]
    i, j = data.draw(st.lists(st.integers(0, len(S) - 1), min_size=2, max_size=2, unique=True))
    s = fq.add(S[i], S[j])
    if fq.is_zero(s):  # sum_pairs leaves out zero sums
        count = sum(1 for a, b in itertools.combinations(S, 2) if fq.is_zero(fq.add(a, b)))
    else:
        count = len(sum_pairs(S).get(s, []))
    expected = s not in set(S) and count == 1
    assert is_sip(S, S[i], S[j]) == expected


# ---------------------------------------------------------------- spherical polygons


OCTANT = np.eye(3)


def test_octant_triangle():
    assert np.allclose(interior_angles(OCTANT), [math.pi / 2] * 3)
    assert angle_sum(OCTANT) == pytest.approx(3 * math.pi / 2)
    assert spherical_polygon_area(OCTANT) == pytest.approx(math.pi / 2)
    loop = rotation_loop(OCTANT)
    assert loop.angle == pytest.approx(math.pi / 2)
    assert rotation_loop(OCTANT[::-1]).angle == pytest.approx(-math.pi / 2)
    assert loop.fixes_axis_error < 1e-14


def test_cap_polygon_area():
    # regular p-gon on the circle of polar angle rho, checked against the cap for large p
    rho = 0.8
    for p, tol in ((64, 5e-3), (400, 2e-4)):
        th = 2 * math.pi * np.arange(p) / p
        V = np.stack([math.sin(rho) * np.cos(th), math.sin(rho) * np.sin(th), math.cos(rho) * np.ones(p)], 1)
        cap = 2 * math.pi * (1 - math.cos(rho))
        assert spherical_polygon_area(V) == pytest.approx(cap, rel=tol)


def test_large_polygon_angle_is_lifted():
    # area beyond pi: the loop angle must not wrap into (-pi, pi]
    rho = 1.3
    th = 2 * math.pi * np.arange(6) / 6
    V = np.stack([math.sin(rho) * np.cos(th), math.sin(rho) * np.sin(th), math.cos(rho) * np.ones(6)], 1)
    loop = rotation_loop(V)
    assert loop.area > math.pi
    assert loop.angle == pytest.approx(loop.area)


def test_great_circle_and_order_rejected():
    eq = np.array([[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]], float)
    with pytest.raises(ValueError, match="great circle"):
        spherical_polygon_area(eq)
    th = 2 * math.pi * np.arange(5) / 5
    V = np.stack([np.cos(th), np.sin(th), np.ones(5)], 1)
    assert spherical_polygon_area(V) > 0
    with pytest.raises(ValueError, match="cyclic"):
        spherical_polygon_area(V[[0, 1, 3, 2, 4]])
    bowtie = np.array([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], float)
    with pytest.raises(ValueError, match="degenerate"):
        spherical_polygon_area(bowtie)
    with pytest.raises(ValueError):
        spherical_polygon_area(V[:2])
