"""Field constructors for each family, plus generic and perturbed test data.

``modes`` counts conjugate pairs throughout, so a field built with
``modes=6`` has twelve stored coefficients.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import freq as fq
from .classifier import q_of_omega
from .field import SpectralField
from .freq import Frequency
from .interaction import PlanarFrame, make_beltrami_coeff, tangent_basis


def abc(A: float = 1.0, B: float = 1.0, C: float = 1.0) -> SpectralField:
    """``(B cos y + C sin z, C cos z + A sin x, A cos x + B sin y)``."""
    h = 0.5
    modes = {
        (1, 0, 0): A * np.array([0, -0.5j, h]),
        (0, 1, 0): B * np.array([h, 0, -0.5j]),
        (0, 0, 1): C * np.array([-0.5j, h, 0]),
    }
    return SpectralField.from_modes(modes, complete=True)


def perturbed_abc(A: float = 1.0, B: float = 1.0, C: float = 1.0, factor: float = 2.0) -> SpectralField:
    """ABC with the ``A cos x`` term scaled by ``factor``; real, divergence-free, not stationary.

    Rescaling a whole coefficient would leave a Beltrami field, so only one
    of the two trigonometric terms carried by the ``(1, 0, 0)`` pair changes.
    """
    f = abc(A, B, C)
    modes = dict(f.modes)
    u = modes[fq.freq(1, 0, 0)].copy()
    u[2] *= factor
    modes[fq.freq(1, 0, 0)] = u
    modes[fq.freq(-1, 0, 0)] = np.conj(u)
    return f.replace_modes(modes)


def tetrahedron() -> SpectralField:
    """Complex stationary field on four tetrahedral frequencies (not real-valued)."""
    modes = {}
    for s in (1, -1):
        modes[(s, s, 1)] = s * np.array([1, -1, 0]) / 2j
        modes[(s, -s, -1)] = s * np.array([1, 1, 0]) / 2j
    return SpectralField(modes, None, real_valued=False)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _random_tangent(rng, n) -> np.ndarray:
    e1, e2 = tangent_basis(n)
    c = rng.normal(size=2) + 1j * rng.normal(size=2)
    return c[0] * e1 + c[1] * e2


def line(direction=(1, 0, 0), modes: int = 2, seed: int = 0) -> SpectralField:
    """Multiples ``k d`` (k = 1..modes) with random coefficients normal to ``d``."""
    rng = _rng(seed)
    d = fq.as_freq(direction)
    if fq.is_zero(d):
        raise ValueError("direction must be nonzero")
    out = {}
    for k in range(1, modes + 1):
        n = fq.scale(k, d)
        out[n] = _random_tangent(rng, n)
    return SpectralField.from_modes(out, complete=True)


def _plane_basis(normal) -> tuple[Frequency, Frequency, Frequency]:
    """Integer ``b1 _|_ m`` and ``b2 = m x b1`` for the canonical normal ``m``."""
    m = fq.canonical(fq.as_freq(normal))
    if fq.is_zero(m):
        raise ValueError("normal must be nonzero")
    mi = fq.primitive_direction(m)
    m = tuple(Fraction(c) for c in mi)
    k = min(range(3), key=lambda i: (abs(mi[i]), i))
    e = tuple(Fraction(int(i == k)) for i in range(3))
    b1 = fq.cross(m, fq.cross(e, m))  # projection of e, scaled to stay integral
    ints, _ = fq.to_integer_vectors([b1])
    b1 = tuple(Fraction(c) for c in fq.primitive(ints[0]))
    return b1, fq.cross(m, b1), m


def plane_points(normal, count: int) -> list[Frequency]:
    """``count`` (even) rational points on one circle in the plane, symmetric under negation."""
    if count < 2 or count % 2:
        raise ValueError("count must be a positive even number")
    b1, b2, m = _plane_basis(normal)
    d = fq.norm2(m)
    params = [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(2), Fraction(1, 3), Fraction(3),
              Fraction(2, 3), Fraction(3, 2), Fraction(1, 4), Fraction(4)]
    chosen: list[Frequency] = []
    for t in params:
        x = (1 - d * t * t) / (1 + d * t * t)
        y = 2 * t / (1 + d * t * t)
        p = fq.add(fq.scale(x, b1), fq.scale(y, b2))
        if p in chosen or fq.neg(p) in chosen:
            continue
        chosen.append(p)
        if len(chosen) == count // 2:
            break
    else:
        raise ValueError("not enough circle points for this count")
    return chosen + [fq.neg(p) for p in chosen]


def planar_perp(normal=(0, 0, 1), modes: int = 3, seed: int = 0) -> SpectralField:
    """Field normal to a plane, on in-plane frequencies of varied radii."""
    rng = _rng(seed)
    b1, b2, m = _plane_basis(normal)
    e = fq.to_float(m) / math.sqrt(float(fq.norm2(m)))
    combos = [(1, 0), (0, 1), (1, 1), (2, -1), (1, 2), (3, 1), (2, 3)]
    if modes < 2 or modes > len(combos):
        raise ValueError(f"modes must be between 2 and {len(combos)}")
    out = {}
    for a, b in combos[:modes]:
        n = fq.add(fq.scale(a, b1), fq.scale(b, b2))
        out[n] = (rng.normal() + 1j * rng.normal()) * e
    return SpectralField.from_modes(out, complete=True)


def circle_alphas(p: int, seed=None) -> list[complex]:
    """Horizontal amplitudes with ``i alpha_{j+p/2} = conj(i alpha_j)``; default all ``-i``."""
    if seed is None:
        half = [-1j] * (p // 2)
    else:
        rng = _rng(seed)
        half = list(rng.normal(size=p // 2) + 1j * rng.normal(size=p // 2))
    rest = [np.conj(1j * a) / 1j for a in half]
    return half + rest


def _ccw(points, normal) -> list[Frequency]:
    frame = PlanarFrame.from_normal(fq.canonical(fq.as_freq(normal)))
    ref = fq.to_float(points[0])
    ref /= np.linalg.norm(ref)
    e2 = np.cross(frame.e_perp, ref)
    return sorted(points, key=lambda n: math.atan2(float(fq.to_float(n) @ e2),
                                                   float(fq.to_float(n) @ ref)) % (2 * math.pi))


def planar_q(normal=(0, 0, 1), q=(), p: int = 4, seed=None, alphas=None) -> SpectralField:
    """Planar family member: ``u_par`` on a ``p``-point circle plus ``u_perp = Q(w) - <Q(w)>``.

    ``q`` lists ``[beta_1, beta_2, ...]``; there is no constant term.
    """
    if p < 4 or p % 2:
        raise ValueError("p must be an even number >= 4")
    pts = plane_points(normal, p)
    circle = _ccw(pts, normal)
    # reorder so that circle[j + p/2] = -circle[j]
    circle = circle[: p // 2] + [fq.neg(n) for n in circle[: p // 2]]
    if alphas is None:
        alphas = circle_alphas(p, seed)
    frame = PlanarFrame.from_normal(fq.canonical(fq.as_freq(normal)))
    out: dict = {}
    for n, a in zip(circle, alphas):
        out[n] = a * frame.e_par(n)
    perp = q_of_omega(circle, alphas, list(q))
    for n, c in perp.items():
        out[n] = out.get(n, np.zeros(3, complex)) + c * frame.e_perp
    return SpectralField.from_modes(out)


def sphere_point(a: Fraction, b: Fraction) -> Frequency:
    """Inverse stereographic projection: a rational point on the unit sphere."""
    s = a * a + b * b
    return (2 * a / (s + 1), 2 * b / (s + 1), (s - 1) / (s + 1))


def random_sphere_points(rng, count: int, max_den: int = 4, radius: int = 1) -> list[Frequency]:
    """``count`` canonical rational points on a sphere, no two equal or antipodal."""
    seen: set = set()
    out: list[Frequency] = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 10000:
            raise RuntimeError("could not draw enough sphere points")
        a = Fraction(int(rng.integers(-3 * max_den, 3 * max_den + 1)), int(rng.integers(1, max_den + 1)))
        b = Fraction(int(rng.integers(-3 * max_den, 3 * max_den + 1)), int(rng.integers(1, max_den + 1)))
        p = fq.canonical(fq.scale(radius, sphere_point(a, b)))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def beltrami_random(seed: int = 0, modes: int = 6, sign="plus", radius: int = 1) -> SpectralField:
    """Random Beltrami field on ``modes`` rational sphere points spanning 3D."""
    if modes < 3:
        raise ValueError("a Beltrami field spanning 3D needs at least three mode pairs")
    rng = _rng(seed)
    while True:
        pts = random_sphere_points(rng, modes, radius=radius)
        if fq.rank(pts) == 3:
            break
    out = {}
    for n in pts:
        amp = complex(rng.normal(), rng.normal())
        out[n] = make_beltrami_coeff(n, sign, amp)
    return SpectralField.from_modes(out, complete=True)


def random_generic(seed: int = 0, modes: int = 6, span: int = 1) -> SpectralField:
    """Random divergence-free field on ``modes`` pairs of small integer frequencies."""
    if modes < 2:
        raise ValueError("need at least two mode pairs")
    if modes > ((2 * span + 1) ** 3 - 1) // 2:
        raise ValueError(f"span {span} has fewer than {modes} frequency pairs")
    rng = _rng(seed)
    while True:
        seen: set = set()
        while len(seen) < modes:
            v = tuple(int(c) for c in rng.integers(-span, span + 1, size=3))
            if any(v):
                seen.add(fq.canonical(fq.as_freq(v)))
        pts = sorted(seen, key=fq.sort_key)
        if fq.rank(pts) >= 2:
            break
    out = {n: _random_tangent(rng, n) for n in pts}
    return SpectralField.from_modes(out, complete=True)


def scaled_pair(field: SpectralField, n, factor: complex) -> SpectralField:
    """Scale the coefficients at ``n`` and ``-n`` (keeping conjugacy for real factors)."""
    n = fq.as_freq(n)
    modes = dict(field.modes)
    modes[n] = modes[n] * factor
    modes[fq.neg(n)] = np.conj(modes[n])
    return field.replace_modes(modes)


KINDS = ("abc", "perturbed-abc", "tetrahedron", "line", "planar-perp", "planar-q", "beltrami-random")
