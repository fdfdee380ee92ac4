"""Exact hulls, the Minkowski gauge, simply interacting pairs, and spherical polygons.

Hull combinatorics run on exact rationals (or integers after clearing
denominators). Only spherical areas and angles are floating point.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import freq as fq
from .freq import Frequency
from .interaction import Rotation, rotation_geodesic

Point2 = tuple[Fraction, Fraction]


class DegenerateInput(ValueError):
    """Points are collinear (planar hull) or coplanar (spatial hull)."""


# --------------------------------------------------------------------------
# planar


def _orient2(o: Point2, a: Point2, b: Point2) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class PlanarHull:
    """Counter-clockwise vertex cycle and one ``a.x <= c`` inequality per edge."""

    vertices: tuple[Point2, ...]
    normals: tuple[Point2, ...]
    offsets: tuple[Fraction, ...]

    def contains(self, p) -> bool:
        p = (Fraction(p[0]), Fraction(p[1]))
        return all(a[0] * p[0] + a[1] * p[1] <= c for a, c in zip(self.normals, self.offsets))

    def origin_interior(self) -> bool:
        return all(c > 0 for c in self.offsets)


def convex_hull_planar(points: Iterable) -> PlanarHull:
    """Strictly convex hull by monotone chain in exact arithmetic."""
    pts = sorted({(Fraction(p[0]), Fraction(p[1])) for p in points})
    if len(pts) < 3:
        raise DegenerateInput("need at least three distinct points")

    def chain(seq):
        out: list[Point2] = []
        for p in seq:
            while len(out) >= 2 and _orient2(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = chain(pts), chain(reversed(pts))
    verts = lower[:-1] + upper[:-1]
    if len(verts) < 3:
        raise DegenerateInput("points are collinear")
    normals, offsets = [], []
    for i, a in enumerate(verts):
        b = verts[(i + 1) % len(verts)]
        nrm = (b[1] - a[1], a[0] - b[0])  # outward for a ccw cycle
        normals.append(nrm)
        offsets.append(nrm[0] * a[0] + nrm[1] * a[1])
    return PlanarHull(tuple(verts), tuple(normals), tuple(offsets))


def minkowski_functional(hull: PlanarHull, n) -> Fraction:
    """Gauge ``N(n) = inf{r > 0 : n in r * hull}``, exact."""
    if not hull.origin_interior():
        raise ValueError("origin is not interior to the hull")
    x, y = Fraction(n[0]), Fraction(n[1])
    best = Fraction(0)
    for a, c in zip(hull.normals, hull.offsets):
        v = (a[0] * x + a[1] * y) / c
        if v > best:
            best = v
    return best


@dataclass(frozen=True)
class PlaneCoordinates:
    """Linear (not isometric) rational coordinates on a plane through the origin.

    ``b1`` is the lexicographically smallest support point and ``b2`` is the
    next independent one with its ``b1`` component removed (unnormalized
    Gram-Schmidt), so coordinates of rational points stay rational.
    """

    b1: Frequency
    b2: Frequency

    @classmethod
    def from_points(cls, points: Sequence[Frequency]) -> "PlaneCoordinates":
        pair = fq.spanning_pair(points)
        if pair is None:
            raise DegenerateInput("points span at most a line")
        a, b = pair
        b2 = fq.sub(b, fq.scale(fq.dot(a, b) / fq.norm2(a), a))
        return cls(a, b2)

    @property
    def normal(self) -> Frequency:
        return fq.cross(self.b1, self.b2)

    def coords(self, p: Frequency) -> Point2:
        return (fq.dot(p, self.b1), fq.dot(p, self.b2))

    def contains(self, p: Frequency) -> bool:
        return fq.dot(p, self.normal) == 0


def plane_hull(points: Sequence[Frequency]) -> tuple[PlanarHull, PlaneCoordinates]:
    """Hull of coplanar 3D frequencies, in :class:`PlaneCoordinates`."""
    pc = PlaneCoordinates.from_points(points)
    for p in points:
        if not pc.contains(p):
            raise ValueError(f"{fq.fmt(p)} is off the plane")
    return convex_hull_planar([pc.coords(p) for p in points]), pc


# --------------------------------------------------------------------------
# spatial


@dataclass(frozen=True)
class SpatialHull:
    """Polytope with faces as outward (counter-clockwise seen from outside) vertex cycles."""

    vertices: tuple[Frequency, ...]
    faces: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        es = set()
        for f in self.faces:
            for i, a in enumerate(f):
                b = f[(i + 1) % len(f)]
                es.add((min(a, b), max(a, b)))
        return frozenset(es)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def face_planes(self) -> list[tuple[Frequency, Fraction]]:
        """Outward normal ``a`` and offset ``c`` with ``a.x <= c`` on the hull."""
        out = []
        for f in self.faces:
            p0, p1, p2 = (self.vertices[i] for i in f[:3])
            a = fq.cross(fq.sub(p1, p0), fq.sub(p2, p0))
            out.append((a, fq.dot(a, p0)))
        return out

    def contains(self, p) -> bool:
        p = fq.as_freq(p)
        return all(fq.dot(a, p) <= c for a, c in self.face_planes())


def _orient3(a, b, c, d) -> int:
    # sign of det[b-a, c-a, d-a], integers
    bx, by, bz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    cx, cy, cz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    dx, dy, dz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)


def _initial_simplex(P) -> list[int]:
    n = len(P)
    i0 = 0
    i1 = next((i for i in range(n) if P[i] != P[i0]), None)
    if i1 is None:
        raise DegenerateInput("all points coincide")
    a, b = P[i0], P[i1]
    ab = (b[0] - a[0], b[1] - a[1], b[2] - a[2])
    i2 = None
    for i in range(n):
        c = P[i]
        ac = (c[0] - a[0], c[1] - a[1], c[2] - a[2])
        cr = (ab[1] * ac[2] - ab[2] * ac[1], ab[2] * ac[0] - ab[0] * ac[2], ab[0] * ac[1] - ab[1] * ac[0])
        if cr != (0, 0, 0):
            i2 = i
            break
    if i2 is None:
        raise DegenerateInput("points are collinear")
    i3 = next((i for i in range(n) if _orient3(P[i0], P[i1], P[i2], P[i]) != 0), None)
    if i3 is None:
        raise DegenerateInput("points are coplanar")
    return [i0, i1, i2, i3]


def convex_hull_3d(points: Sequence) -> SpatialHull:
    """Incremental hull with exact integer predicates, coplanar facets merged."""
    pts = list(dict.fromkeys(fq.as_freq(p) for p in points))
    if len(pts) < 4:
        raise DegenerateInput("need at least four distinct points")
    P, _ = fq.to_integer_vectors(pts)
    i0, i1, i2, i3 = _initial_simplex(P)
    if _orient3(P[i0], P[i1], P[i2], P[i3]) > 0:
        i1, i2 = i2, i1
    # triangles (a, b, c) oriented so that orient3(a, b, c, interior) < 0
    tris = {(i0, i1, i2), (i0, i3, i1), (i1, i3, i2), (i0, i2, i3)}
    for k in range(len(P)):
        if k in (i0, i1, i2, i3):
            continue
        p = P[k]
        visible = [t for t in tris if _orient3(P[t[0]], P[t[1]], P[t[2]], p) > 0]
        if not visible:
            continue
        edge_count: dict[tuple[int, int], int] = {}
        for a, b, c in visible:
            for e in ((a, b), (b, c), (c, a)):
                edge_count[e] = edge_count.get(e, 0) + 1
        horizon = [e for e in edge_count if (e[1], e[0]) not in edge_count]
        tris.difference_update(visible)
        for a, b in horizon:
            tris.add((a, b, k))
    return _merge_faces(pts, P, tris)


def _merge_faces(pts, P, tris) -> SpatialHull:
    groups: dict[tuple, set[int]] = {}
    for a, b, c in tris:
        pa, pb, pc = P[a], P[b], P[c]
        nrm = fq.primitive(
            (
                (pb[1] - pa[1]) * (pc[2] - pa[2]) - (pb[2] - pa[2]) * (pc[1] - pa[1]),
                (pb[2] - pa[2]) * (pc[0] - pa[0]) - (pb[0] - pa[0]) * (pc[2] - pa[2]),
                (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]),
            )
        )
        off = nrm[0] * pa[0] + nrm[1] * pa[1] + nrm[2] * pa[2]
        groups.setdefault((nrm, off), set()).update((a, b, c))
    used = sorted({i for g in groups.values() for i in g})
    remap = {old: new for new, old in enumerate(used)}
    faces = []
    for (nrm, _), idx in sorted(groups.items()):
        faces.append(tuple(remap[i] for i in _ccw_face(P, sorted(idx), nrm)))
    # drop points that only sat inside a merged face
    on_boundary = sorted({i for f in faces for i in f})
    if len(on_boundary) != len(used):
        keep = {old: new for new, old in enumerate(on_boundary)}
        faces = [tuple(keep[i] for i in f) for f in faces]
        used = [used[i] for i in on_boundary]
    return SpatialHull(tuple(pts[i] for i in used), tuple(faces))


def _ccw_face(P, idx: list[int], nrm) -> list[int]:
    """Strict 2D hull of a facet's points, ccw seen from the outward normal."""
    k = max(range(3), key=lambda j: abs(nrm[j]))
    u, v = [j for j in range(3) if j != k]
    # dropping axis 1 reverses handedness of (u, v)
    flip = (nrm[k] < 0) != (k == 1)
    proj = {}
    for i in idx:
        x, y = P[i][u], P[i][v]
        proj[(x, -y) if flip else (x, y)] = i
    hull = convex_hull_planar(list(proj))
    return [proj[(int(x), int(y))] for x, y in hull.vertices]


# --------------------------------------------------------------------------
# simply interacting pairs


def is_sip(S: Iterable, n1, n2) -> bool:
    """``n1 + n2`` lies outside ``S`` and ``{n1, n2}`` is its only decomposition in ``S``."""
    Sset = {fq.as_freq(n) for n in S}
    a, b = fq.as_freq(n1), fq.as_freq(n2)
    if a not in Sset or b not in Sset:
        raise ValueError("n1 and n2 must belong to S")
    if a == b:
        raise ValueError("n1 and n2 must be distinct")
    s = fq.add(a, b)
    if s in Sset:
        return False
    for m in Sset:
        if m in (a, b):
            continue
        other = fq.sub(s, m)
        if other != m and other in Sset:
            return False
    return True


# --------------------------------------------------------------------------
# spherical polygons


def _unit_rows(vertices) -> np.ndarray:
    V = np.asarray(vertices, float)
    if V.ndim != 2 or V.shape[1] != 3 or V.shape[0] < 3:
        raise ValueError("need at least three 3D vertices")
    return V / np.linalg.norm(V, axis=1)[:, None]


def _check_small_circle(V: np.ndarray, tol: float = 1e-9) -> None:
    """Vertices must be coplanar on a plane missing the origin, in cyclic order."""
    c = V.mean(axis=0)
    # Newell normal of the cycle
    nrm = np.zeros(3)
    for i in range(len(V)):
        nrm += np.cross(V[i], V[(i + 1) % len(V)])
    if np.linalg.norm(nrm) < tol:
        raise ValueError("degenerate vertex cycle")
    nrm /= np.linalg.norm(nrm)
    d = V @ nrm
    if np.ptp(d) > tol:
        raise ValueError("vertices are not on a common circle")
    if abs(d.mean()) < tol:
        raise ValueError("vertices lie on a great circle")
    for i in range(len(V)):
        a, b = V[i], V[(i + 1) % len(V)]
        if float(a @ b) < -1 + 1e-12:
            raise ValueError("consecutive vertices are antipodal")
        if float(np.cross(a - c, b - c) @ nrm) <= 0:
            raise ValueError("vertices are not in cyclic order")


def interior_angles(vertices) -> np.ndarray:
    V = _unit_rows(vertices)
    _check_small_circle(V)
    p = len(V)
    out = np.empty(p)
    for k in range(p):
        w, prev, nxt = V[k], V[k - 1], V[(k + 1) % p]
        t1 = prev - (prev @ w) * w
        t2 = nxt - (nxt @ w) * w
        out[k] = math.atan2(float(np.linalg.norm(np.cross(t1, t2))), float(t1 @ t2))
    return out


def angle_sum(vertices) -> float:
    return float(interior_angles(vertices).sum())


def spherical_polygon_area(vertices) -> float:
    """Area from the angle sum: ``A = Theta - (p - 2) pi``."""
    ang = interior_angles(vertices)
    return float(ang.sum() - (len(ang) - 2) * math.pi)


@dataclass(frozen=True)
class LoopResult:
    rotation: Rotation
    axis: np.ndarray
    angle: float
    area: float

    @property
    def fixes_axis_error(self) -> float:
        return float(np.linalg.norm(self.rotation.apply(self.axis) - self.axis))


def rotation_loop(vertices) -> LoopResult:
    """Compose ``R(w_p -> w_1) o ... o R(w_1 -> w_2)``; returns axis ``w_1`` and signed angle.

    The angle is ``+A`` for a counterclockwise cycle around its enclosed cap
    and ``-A`` for a clockwise one, with ``A`` the cap polygon's area.
    """
    V = _unit_rows(vertices)
    area = spherical_polygon_area(V)
    M = Rotation(np.eye(3))
    p = len(V)
    for k in range(p):
        M = rotation_geodesic(V[k], V[(k + 1) % p]) @ M
    # the matrix fixes the angle only mod 2 pi; the area lies in (0, 2 pi), so
    # lift to the branch whose sign is the orientation of the cycle
    newell = sum(np.cross(V[k], V[(k + 1) % p]) for k in range(p))
    orient = 1.0 if float(newell @ V[0]) > 0 else -1.0
    angle = M.angle_about(V[0])
    if angle * orient < 0:
        angle += orient * 2 * math.pi
    return LoopResult(M, V[0].copy(), angle, area)


def face_polygons(hull: SpatialHull) -> list[np.ndarray]:
    """Each face's vertices projected to the unit sphere, in face order."""
    out = []
    for f in hull.faces:
        V = np.array([fq.to_float(hull.vertices[i]) for i in f])
        out.append(V / np.linalg.norm(V, axis=1)[:, None])
    return out


def sum_pairs(S: Iterable[Frequency]) -> dict[Frequency, list[tuple[Frequency, Frequency]]]:
    """Map each nonzero ``n1 + n2`` (distinct ``n1, n2`` in ``S``) to its unordered decompositions."""
    pts = sorted({fq.as_freq(n) for n in S}, key=fq.sort_key)
    out: dict[Frequency, list] = {}
    for a, b in itertools.combinations(pts, 2):
        s = fq.add(a, b)
        if not fq.is_zero(s):
            out.setdefault(s, []).append((a, b))
    return out
