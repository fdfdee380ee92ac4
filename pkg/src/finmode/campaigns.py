"""Randomized verification campaigns, each pairing the library with a brute-force oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import freq as fq
from .fixtures import random_sphere_points
from .geometry import is_sip, rotation_loop, spherical_polygon_area
from .interaction import (
    CaseEqualRadius,
    CaseParallel,
    CasePerpendicular,
    Interacting,
    PlanarFrame,
    classify_pair,
    make_beltrami_coeff,
    pair_bracket,
    pair_bracket_decomposed,
    recombine,
    rotation_geodesic,
    tangent_basis,
)

TOL = 1e-10


@dataclass
class CampaignResult:
    lemma: str
    trials: int
    failures: int = 0
    max_deviation: float = 0.0
    counterexample: str | None = None
    notes: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def fail(self, msg: str) -> None:
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = msg

    def dev(self, x: float) -> None:
        self.max_deviation = max(self.max_deviation, float(x))

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        s = f"{self.lemma}: {status} ({self.trials} trials, {self.failures} failures, max deviation {self.max_deviation:.3e})"
        if self.counterexample:
            s += f"\n  counterexample: {self.counterexample}"
        return s


# --------------------------------------------------------------------------
# oracles


def triangle_area(a, b, c) -> float:
    """Solid angle of a spherical triangle (Van Oosterom and Strackee)."""
    num = abs(float(np.dot(a, np.cross(b, c))))
    den = 1.0 + float(a @ b) + float(b @ c) + float(c @ a)
    return 2.0 * math.atan2(num, den)


def fan_area(V) -> float:
    V = np.asarray(V, float)
    V = V / np.linalg.norm(V, axis=1)[:, None]
    return sum(triangle_area(V[0], V[k], V[k + 1]) for k in range(1, len(V) - 1))


def brute_sip(S, a, b) -> bool:
    Sset = set(S)
    s = fq.add(a, b)
    if s in Sset:
        return False
    pts = sorted(Sset, key=fq.sort_key)
    count = 0
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            if fq.add(x, y) == s:
                count += 1
    return count == 1


# --------------------------------------------------------------------------
# generators


def _int_freq(rng, span=3) -> tuple:
    while True:
        v = rng.integers(-span, span + 1, size=3)
        if v.any():
            return fq.as_freq(tuple(int(c) for c in v))


def _tangent(rng, n) -> np.ndarray:
    e1, e2 = tangent_basis(fq.to_float(n))
    c = rng.normal(size=2) + 1j * rng.normal(size=2)
    return c[0] * e1 + c[1] * e2


def _equal_radius_partner(rng, n):
    """Signed permutation of ``n`` that is not collinear with it."""
    for _ in range(100):
        perm = rng.permutation(3)
        signs = rng.choice([-1, 1], size=3)
        m = tuple(Fraction(int(signs[i])) * n[perm[i]] for i in range(3))
        if not fq.parallel(m, n):
            return m
    return None


def random_pair(rng, kind: int | None = None):
    """Draw ``(kind, n1, u1, n2, u2)``; kinds 0-3 never interact, 4-5 do."""
    kind = int(rng.integers(0, 6)) if kind is None else kind
    while True:
        n1 = _int_freq(rng)
        if kind == 0:
            k = Fraction(int(rng.choice([-3, -2, 2, 3])), int(rng.choice([1, 2])))
            n2 = fq.scale(k, n1)
            if fq.is_zero(fq.add(n1, n2)):
                continue
            return kind, n1, _tangent(rng, n1), n2, _tangent(rng, n2)
        n2 = _equal_radius_partner(rng, n1) if kind in (2, 3) else _int_freq(rng)
        if n2 is None or fq.parallel(n1, n2):
            continue
        a, b = fq.to_float(n1), fq.to_float(n2)
        if kind == 1:
            e = PlanarFrame.from_pair(a, b).e_perp
            return kind, n1, complex(*rng.normal(size=2)) * e, n2, complex(*rng.normal(size=2)) * e
        if kind == 2:
            u1 = _tangent(rng, n1)
            R = rotation_geodesic(a / np.linalg.norm(a), b / np.linalg.norm(b))
            g = complex(*rng.normal(size=2))
            return kind, n1, u1, n2, g * R.apply(u1)
        if kind == 3:
            s = "plus" if rng.random() < 0.5 else "minus"
            return (kind, n1, make_beltrami_coeff(n1, s, complex(*rng.normal(size=2))),
                    n2, make_beltrami_coeff(n2, s, complex(*rng.normal(size=2))))
        if kind == 4:
            return kind, n1, _tangent(rng, n1), n2, _tangent(rng, n2)
        # perturb a non-interacting construction
        _, n1, u1, n2, u2 = random_pair(rng, int(rng.integers(1, 4)))
        u2 = u2 + 1e-6 * _tangent(rng, n2) * np.linalg.norm(u2)
        return 5, n1, u1, n2, u2


def circle_polygon(rng, p: int):
    """``p`` unit vectors in cyclic order on a random small circle (not a great circle)."""
    c = rng.normal(size=3)
    c /= np.linalg.norm(c)
    rho = rng.uniform(0.1, math.pi / 2 - 0.1)
    e1 = np.cross(c, np.eye(3)[int(np.argmin(np.abs(c)))])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    while True:
        th = np.sort(rng.uniform(0, 2 * math.pi, size=p))
        gaps = np.diff(np.concatenate([th, [th[0] + 2 * math.pi]]))
        if gaps.min() > 0.05:
            break
    return np.array([math.cos(rho) * c + math.sin(rho) * (math.cos(t) * e1 + math.sin(t) * e2)
                     for t in th])


# --------------------------------------------------------------------------
# campaigns


def two_mode(trials: int, seed: int = 0) -> CampaignResult:
    rng = np.random.default_rng(seed)
    res = CampaignResult("two-mode", trials)
    for _ in range(trials):
        kind, n1, u1, n2, u2 = random_pair(rng)
        case = classify_pair(n1, u1, n2, u2, TOL)
        a, b = fq.to_float(n1), fq.to_float(n2)
        scale = np.linalg.norm(u1) * np.linalg.norm(u2) * max(np.linalg.norm(a), np.linalg.norm(b))
        br = float(np.linalg.norm(pair_bracket(a, u1, b, u2)))
        quiet = fq.parallel(n1, n2) or br < TOL * scale
        if quiet == isinstance(case, Interacting):
            res.fail(f"verdict {case} disagrees with bracket norm {br:.3e}")
            continue
        if quiet != (kind <= 3):
            res.fail(f"kind {kind} construction gave {type(case).__name__} for {n1}, {n2}")
            continue
        if isinstance(case, CaseParallel) and not fq.parallel(n1, n2):
            res.fail("CaseParallel on independent frequencies")
        if isinstance(case, CasePerpendicular):
            res.dev(case.defect)
            if case.defect > 1e-9:
                res.fail(f"perpendicular defect {case.defect:.3e}")
        if isinstance(case, CaseEqualRadius):
            if fq.norm2(n1) != fq.norm2(n2):
                res.fail("equal-radius verdict on unequal radii")
            R = rotation_geodesic(a / np.linalg.norm(a), b / np.linalg.norm(b))
            err = float(np.linalg.norm(u2 - case.gamma * R.apply(u1)) / np.linalg.norm(u2))
            res.dev(err)
            if err >= 1e-10:
                res.fail(f"gamma reconstruction error {err:.3e}")
        if not fq.parallel(n1, n2):
            frame = PlanarFrame.from_pair(a, b)
            par, perp = pair_bracket_decomposed(a, u1, b, u2, frame)
            err = float(np.linalg.norm(recombine(a, b, frame, par, perp) - pair_bracket(a, u1, b, u2)))
            if err > 1e-12 * max(scale, 1.0):
                res.fail(f"decomposition mismatch {err:.3e}")
    return res


def rotation_loop_campaign(trials: int, seed: int = 0) -> CampaignResult:
    rng = np.random.default_rng(seed)
    res = CampaignResult("rotation-loop", trials)
    for _ in range(trials):
        p = int(rng.integers(3, 9))
        V = circle_polygon(rng, p)
        loop = rotation_loop(V)
        area = fan_area(V)
        dev = abs(abs(loop.angle) - area)
        res.dev(dev)
        if dev >= 1e-9:
            res.fail(f"p={p}: |angle|={abs(loop.angle):.12f} but area={area:.12f}")
        if loop.fixes_axis_error >= 1e-10:
            res.fail(f"loop moves w1 by {loop.fixes_axis_error:.3e}")
        back = rotation_loop(V[::-1][np.r_[p - 1, 0:p - 1]])  # reversed, still starting at w1
        if abs(back.angle + loop.angle) >= 1e-9:
            res.fail("reversing the loop did not negate the angle")
    return res


def gauss_bonnet(trials: int, seed: int = 0) -> CampaignResult:
    rng = np.random.default_rng(seed)
    res = CampaignResult("gauss-bonnet", trials)
    for _ in range(trials):
        p = int(rng.integers(3, 9))
        V = circle_polygon(rng, p)
        dev = abs(spherical_polygon_area(V) - fan_area(V))
        res.dev(dev)
        if dev >= 1e-10:
            res.fail(f"p={p}: angle-sum area differs from triangulation by {dev:.3e}")
    return res


def random_frequency_set(rng, size: int, span: int = 3, symmetric: bool | None = None) -> list:
    symmetric = bool(rng.random() < 0.5) if symmetric is None else symmetric
    out: set = set()
    while len(out) < size:
        n = _int_freq(rng, span)
        out.add(n)
        if symmetric and len(out) < size:
            out.add(fq.neg(n))
    return sorted(out, key=fq.sort_key)


def parallelogram_set() -> tuple[list, tuple, tuple]:
    """``n1 + n3 = n2 + n4`` with all four in ``S``: ``(n1, n3)`` is not simply interacting."""
    n1, n2, n3 = fq.freq(1, 0, 0), fq.freq(0, 1, 0), fq.freq(0, 0, 1)
    n4 = fq.sub(fq.add(n1, n3), n2)
    S = [n1, n2, n3, n4]
    return S + [fq.neg(n) for n in S], n1, n3


def sip(trials: int, seed: int = 0) -> CampaignResult:
    rng = np.random.default_rng(seed)
    res = CampaignResult("sip", trials)
    S, a, b = parallelogram_set()
    if is_sip(S, a, b) or brute_sip(S, a, b):
        res.fail("parallelogram pair reported as simply interacting")
    for _ in range(trials):
        S = random_frequency_set(rng, int(rng.integers(2, 31)))
        i, j = rng.choice(len(S), size=2, replace=False)
        a, b = S[i], S[j]
        if is_sip(S, a, b) != brute_sip(S, a, b):
            res.fail(f"S={[fq.fmt(n) for n in S]}, pair {fq.fmt(a)}, {fq.fmt(b)}")
    return res


def beltrami_noninteraction(trials: int, seed: int = 0) -> CampaignResult:
    rng = np.random.default_rng(seed)
    res = CampaignResult("beltrami-noninteraction", trials)
    for _ in range(trials):
        n1, n2 = random_sphere_points(rng, 2, radius=int(rng.integers(1, 4)))
        if fq.parallel(n1, n2):
            continue
        if rng.random() < 0.5:
            n2 = fq.neg(n2)
        s = "plus" if rng.random() < 0.5 else "minus"
        u1 = make_beltrami_coeff(n1, s, complex(*rng.normal(size=2)))
        u2 = make_beltrami_coeff(n2, s, complex(*rng.normal(size=2)))
        sc = np.linalg.norm(u1) * np.linalg.norm(u2) * math.sqrt(float(fq.norm2(n1)))
        dev = float(np.linalg.norm(pair_bracket(n1, u1, n2, u2))) / sc
        res.dev(dev)
        if dev >= 1e-12:
            res.fail(f"same-sign Beltrami pair interacts: {dev:.3e}")
        other = "minus" if s == "plus" else "plus"
        u3 = make_beltrami_coeff(n2, other, complex(*rng.normal(size=2)))
        if np.linalg.norm(pair_bracket(n1, u1, n2, u3)) < TOL * sc:
            res.fail("opposite-sign Beltrami pair does not interact")
        a, b = fq.to_float(n1), fq.to_float(n2)
        R = rotation_geodesic(a / np.linalg.norm(a), b / np.linalg.norm(b))
        w = R.apply(u1)
        if np.linalg.norm(1j * np.cross(b, w) - (1 if s == "plus" else -1) * np.linalg.norm(b) * w) > 1e-12 * sc:
            res.fail("rotation does not carry Beltrami vectors to Beltrami vectors")
    return res


CAMPAIGNS = {
    "two-mode": two_mode,
    "rotation-loop": rotation_loop_campaign,
    "sip": sip,
    "beltrami-noninteraction": beltrami_noninteraction,
    "gauss-bonnet": gauss_bonnet,
}


def run(lemma: str, trials: int, seed: int = 0) -> CampaignResult:
    if lemma not in CAMPAIGNS:
        raise KeyError(lemma)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return CAMPAIGNS[lemma](trials, seed)
