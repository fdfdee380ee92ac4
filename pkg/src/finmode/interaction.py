"""Two-mode algebra: projection, the interaction bracket, and its trichotomy."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import freq as fq

DEFAULT_TOL = 1e-10


def cross3(a, b) -> np.ndarray:
    """Cross product of two 3-vectors (real or complex); much cheaper than ``np.cross`` here."""
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _fvec(n) -> np.ndarray:
    if isinstance(n, tuple) and len(n) == 3 and all(hasattr(c, "denominator") for c in n):
        return fq.to_float(n)
    return np.asarray(n, dtype=float).reshape(3)


def _cvec(u) -> np.ndarray:
    return np.asarray(u, dtype=complex).reshape(3)


def helmholtz_project(n, v) -> np.ndarray:
    """Project ``v`` onto the plane ``{w : n.w = 0}`` (bilinear dot, no conjugation)."""
    nv = _fvec(n)
    nn = float(nv @ nv)
    if nn == 0.0:
        raise ValueError("projection onto a zero frequency is undefined")
    v = _cvec(v)
    return v - (nv @ v) / nn * nv


def pair_bracket(n1, u1, n2, u2) -> np.ndarray:
    """``P_{n1+n2}[(u1.n2) u2 + (u2.n1) u1]``, without the ``i/2`` prefactor."""
    a, b = _fvec(n1), _fvec(n2)
    s = a + b
    if not np.any(s):
        raise ValueError("antipodal pair: n1 + n2 = 0 feeds only the zero mode")
    u1, u2 = _cvec(u1), _cvec(u2)
    raw = (u1 @ b) * u2 + (u2 @ a) * u1
    return raw - (s @ raw) / float(s @ s) * s


# --------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class PlanarFrame:
    """Unit normal ``e_perp`` of a plane and the tangents ``e_par(n) = e_perp x n_hat``."""

    e_perp: np.ndarray

    @classmethod
    def from_pair(cls, n1, n2) -> "PlanarFrame":
        c = cross3(_fvec(n1), _fvec(n2))
        norm = float(np.linalg.norm(c))
        if norm == 0.0:
            raise ValueError("frequencies are linearly dependent")
        return cls(c / norm)

    @classmethod
    def from_normal(cls, m) -> "PlanarFrame":
        """Frame for the plane with normal ``m``; the sign follows the canonical representative."""
        if isinstance(m, tuple) and all(hasattr(c, "denominator") for c in m):
            m = fq.canonical(m)
            mv = fq.to_float(m)
        else:
            mv = np.asarray(m, float)
            nz = np.flatnonzero(mv)
            if nz.size and mv[nz[0]] < 0:
                mv = -mv
        return cls(mv / np.linalg.norm(mv))

    def e_par(self, n) -> np.ndarray:
        nv = _fvec(n)
        return cross3(self.e_perp, nv / np.linalg.norm(nv))

    def split(self, n, u) -> tuple[complex, complex]:
        """Components ``(u_par, u_perp)`` of a tangent coefficient ``u`` at ``n``."""
        u = _cvec(u)
        return complex(self.e_par(n) @ u), complex(self.e_perp @ u)


def pair_bracket_decomposed(n1, u1, n2, u2, frame: PlanarFrame | None = None
                            ) -> tuple[complex, complex]:
    """Bracket components along ``e_par(n1+n2)`` and ``e_perp`` in closed form.

    Uses the two-mode identity rather than projecting the bracket, so that
    the two routes can check each other.
    """
    a, b = _fvec(n1), _fvec(n2)
    cr = cross3(a, b)
    if not np.any(cr):
        raise ValueError("frequencies are linearly dependent")
    frame = frame or PlanarFrame.from_pair(a, b)
    r1, r2 = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    rs = float(np.linalg.norm(a + b))
    p1, q1 = frame.split(a, u1)
    p2, q2 = frame.split(b, u2)
    f = float(cr @ frame.e_perp) / (r1 * r2)
    par = f * p1 * p2 * (r2 * r2 - r1 * r1) / rs
    perp = f * (p1 * q2 * r2 - p2 * q1 * r1)
    return par, perp


def recombine(n1, n2, frame: PlanarFrame, par: complex, perp: complex) -> np.ndarray:
    return par * frame.e_par(_fvec(n1) + _fvec(n2)) + perp * frame.e_perp


# --------------------------------------------------------------------------
# geodesic rotations


@dataclass(frozen=True)
class Rotation:
    matrix: np.ndarray

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(self.matrix @ other.matrix)

    def apply(self, v) -> np.ndarray:
        """Act on real vectors, or on complex ones through real and imaginary parts."""
        return self.matrix @ np.asarray(v)

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T)

    def angle_about(self, axis) -> float:
        """Signed angle of the rotation about ``axis`` (assumed fixed by it)."""
        w = np.asarray(axis, float)
        w = w / np.linalg.norm(w)
        probe = np.eye(3)[int(np.argmin(np.abs(w)))]
        t = probe - (probe @ w) * w
        t /= np.linalg.norm(t)
        rt = self.matrix @ t
        return math.atan2(float(cross3(t, rt) @ w), float(t @ rt))

    def axis_angle(self) -> tuple[np.ndarray, float]:
        """Axis (unit, sign chosen so the angle lies in [0, pi]) and angle."""
        m = self.matrix
        v = np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
        s = float(np.linalg.norm(v)) / 2
        c = (float(np.trace(m)) - 1) / 2
        ang = math.atan2(s, c)
        if s > 1e-12:
            return v / (2 * s), ang
        # angle 0 or pi: take the dominant column of (M + I)
        w = m + np.eye(3)
        k = int(np.argmax(np.linalg.norm(w, axis=0)))
        axis = w[:, k] / np.linalg.norm(w[:, k]) if np.any(w[:, k]) else np.array([0.0, 0.0, 1.0])
        return axis, ang


def _skew(v: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def rotation_geodesic(w1, w2, tol: float = 1e-10) -> Rotation:
    """Rotation carrying ``w1`` to ``w2`` along the great circle through them."""
    a, b = np.asarray(w1, float), np.asarray(w2, float)
    if abs(np.linalg.norm(a) - 1) > tol or abs(np.linalg.norm(b) - 1) > tol:
        raise ValueError("rotation_geodesic expects unit vectors")
    v = cross3(a, b)
    c = float(a @ b)
    if float(np.linalg.norm(v)) < tol:
        raise ValueError("equal or antipodal endpoints: rotation is not unique")
    k = _skew(v)
    return Rotation(np.eye(3) + k + (k @ k) / (1.0 + c))


# --------------------------------------------------------------------------
# Beltrami vectors


class BeltramiSign(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    NEITHER = "neither"

    @property
    def sign(self) -> int:
        return {"plus": 1, "minus": -1, "neither": 0}[self.value]

    @classmethod
    def parse(cls, s) -> "BeltramiSign":
        if isinstance(s, cls):
            return s
        key = str(s).lower()
        aliases = {"+": "plus", "+1": "plus", "1": "plus", "-": "minus", "-1": "minus"}
        return cls(aliases.get(key, key))


def beltrami_sign(n, u, tol: float = DEFAULT_TOL) -> BeltramiSign:
    nv, u = _fvec(n), _cvec(u)
    r = float(np.linalg.norm(nv))
    un = float(np.linalg.norm(u))
    if r == 0.0 or un == 0.0:
        raise ValueError("beltrami_sign needs nonzero n and u")
    if abs(complex(nv @ u)) > tol * r * un:
        raise ValueError("coefficient is not divergence free")
    w = 1j * cross3(nv, u)
    if np.linalg.norm(w - r * u) <= tol * r * un:
        return BeltramiSign.PLUS
    if np.linalg.norm(w + r * u) <= tol * r * un:
        return BeltramiSign.MINUS
    return BeltramiSign.NEITHER


def beltrami_sign_geometric(n, u, tol: float = DEFAULT_TOL) -> BeltramiSign:
    """Same verdict from real geometry: |Re u| = |Im u|, Re u _|_ Im u, and handedness."""
    nv, u = _fvec(n), _cvec(u)
    a, b = u.real, u.imag
    un2 = float(np.vdot(u, u).real)
    if abs(a @ a - b @ b) > tol * un2 or abs(a @ b) > tol * un2:
        return BeltramiSign.NEITHER
    h = float(cross3(a, b) @ nv) / float(np.linalg.norm(nv))
    if h > 0:
        return BeltramiSign.PLUS
    if h < 0:
        return BeltramiSign.MINUS
    return BeltramiSign.NEITHER


def tangent_basis(n) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal ``(e1, e2)`` with ``e2 = n_hat x e1``.

    ``e1`` is the normalized projection of the standard basis vector least
    aligned with ``n`` (lowest index on ties).
    """
    nv = _fvec(n)
    nh = nv / np.linalg.norm(nv)
    k = int(np.argmin(np.abs(nh)))
    e = np.eye(3)[k]
    e1 = e - (e @ nh) * nh
    e1 /= np.linalg.norm(e1)
    return e1, cross3(nh, e1)


def make_beltrami_coeff(n, sign, amplitude: complex) -> np.ndarray:
    """A coefficient ``u`` at ``n`` with ``i n x u = +-|n| u`` and ``|u| = sqrt(2)|amplitude|``."""
    nv = _fvec(n)
    if not np.any(nv):
        raise ValueError("zero frequency")
    if amplitude == 0:
        raise ValueError("zero amplitude")
    s = BeltramiSign.parse(sign)
    if s is BeltramiSign.NEITHER:
        raise ValueError("sign must be plus or minus")
    e1, e2 = tangent_basis(nv)
    return complex(amplitude) * (e1 + 1j * s.sign * e2)


# --------------------------------------------------------------------------
# the trichotomy


@dataclass(frozen=True)
class Interacting:
    bracket_norm: float


@dataclass(frozen=True)
class CaseParallel:
    pass


@dataclass(frozen=True)
class CasePerpendicular:
    defect: float = 0.0


@dataclass(frozen=True)
class CaseEqualRadius:
    gamma: complex
    defect: float = 0.0


InteractionCase = Interacting | CaseParallel | CasePerpendicular | CaseEqualRadius


def equal_radius_gamma(n1, u1, n2, u2) -> tuple[complex, float]:
    """Least-squares ``gamma`` in ``u2 = gamma R u1`` and the relative misfit."""
    a, b = _fvec(n1), _fvec(n2)
    R = rotation_geodesic(a / np.linalg.norm(a), b / np.linalg.norm(b))
    ru1 = R.apply(_cvec(u1))
    u2 = _cvec(u2)
    gamma = complex(np.vdot(ru1, u2) / np.vdot(ru1, ru1).real)
    misfit = float(np.linalg.norm(u2 - gamma * ru1) / np.linalg.norm(u2))
    return gamma, misfit


def classify_pair(n1, u1, n2, u2, tol: float = DEFAULT_TOL) -> InteractionCase:
    """Decide whether two modes interact and, if not, which case explains it.

    Linear dependence and equal radii are decided exactly; whether the
    bracket vanishes is decided against ``tol * |u1||u2| max(|n1|, |n2|)``.
    """
    f1, f2 = fq.as_freq(n1), fq.as_freq(n2)
    a, b = fq.to_float(f1), fq.to_float(f2)
    u1, u2 = _cvec(u1), _cvec(u2)
    m1, m2 = float(np.linalg.norm(u1)), float(np.linalg.norm(u2))
    if m1 == 0.0 or m2 == 0.0:
        raise ValueError("coefficients must be nonzero")
    r1, r2 = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if abs(complex(a @ u1)) > tol * r1 * m1 or abs(complex(b @ u2)) > tol * r2 * m2:
        raise ValueError("coefficient is not divergence free")
    if fq.parallel(f1, f2):
        return CaseParallel()
    br = float(np.linalg.norm(pair_bracket(a, u1, b, u2)))
    if br >= tol * m1 * m2 * max(r1, r2):
        return Interacting(br)
    frame = PlanarFrame.from_pair(a, b)
    p1, _ = frame.split(a, u1)
    p2, _ = frame.split(b, u2)
    perp_defect = max(abs(p1) / m1, abs(p2) / m2)
    if fq.norm2(f1) != fq.norm2(f2):
        return CasePerpendicular(perp_defect)
    gamma, misfit = equal_radius_gamma(a, u1, b, u2)
    if perp_defect <= misfit or gamma == 0:
        return CasePerpendicular(perp_defect)
    return CaseEqualRadius(gamma, misfit)


def case_name(case: InteractionCase) -> str:
    return {
        Interacting: "interacting",
        CaseParallel: "parallel",
        CasePerpendicular: "perpendicular",
        CaseEqualRadius: "equal_radius",
    }[type(case)]
