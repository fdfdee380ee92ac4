"""Structure classification of finite-mode stationary flows.

Decisions are structural first: collinearity, coplanarity, circle and
sphere membership are exact on rational supports. Coefficient conditions
are toleranced, and the stationarity residual is only a cross-check.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

import numpy as np

from . import freq as fq
from .field import DEFAULT_TOL, SpectralField, validate
from .freq import Frequency
from .geometry import PlaneCoordinates, convex_hull_planar, minkowski_functional
from .interaction import BeltramiSign, PlanarFrame, beltrami_sign, pair_bracket

SCHEMA_VERSION = 1
NSC_PROBE_TIMES = (0.1, 0.37, 1.0)


class RefusesComplexField(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """A structural certificate failed its residual cross-check."""


class NotRepresentable(ValueError):
    """The vertical component is not ``Q(omega) - <Q(omega)>`` for any real ``Q``."""

    def __init__(self, message: str, level=None, frequency: Frequency | None = None):
        super().__init__(message)
        self.level = level
        self.frequency = frequency


# --------------------------------------------------------------------------
# residual


@dataclass(frozen=True)
class ResidualReport:
    norm: float
    absolute: float
    worst: Frequency | None
    residuals: dict

    def __float__(self) -> float:
        return self.norm


def residual_scale(field: SpectralField) -> float:
    s = field.scale()
    return s * s * field.max_radius()


def stationarity_residual(field: SpectralField) -> ResidualReport:
    """Nonlinear term of the Fourier-side Euler system over ``S + (S+S) \\ {0}``.

    The ordered-pair sum with factor ``i/2`` equals ``i`` times the sum over
    unordered distinct pairs; diagonal pairs vanish by incompressibility.
    ``norm`` is the largest output relative to ``max|u|^2 max|n|``.
    """
    pts = field.support
    ints, d = fq.to_integer_vectors(pts)
    key_of = {v: n for v, n in zip(ints, pts)}
    acc: dict = {v: np.zeros(3, complex) for v in ints}
    if len(pts) > 1:
        K = np.array([fq.to_float(n) for n in pts])
        U = np.array([field.modes[n] for n in pts])
        i, j = np.triu_indices(len(pts), 1)
        a, b, u1, u2 = K[i], K[j], U[i], U[j]
        sv = a + b
        raw = np.einsum("pk,pk->p", u1, b)[:, None] * u2 + np.einsum("pk,pk->p", u2, a)[:, None] * u1
        s2 = np.einsum("pk,pk->p", sv, sv)
        live = s2 > 0
        br = raw.copy()
        br[live] -= (np.einsum("pk,pk->p", sv[live], raw[live]) / s2[live])[:, None] * sv[live]
        for p_, (x, y) in enumerate(zip(i.tolist(), j.tolist())):
            v = (ints[x][0] + ints[y][0], ints[x][1] + ints[y][1], ints[x][2] + ints[y][2])
            if v == (0, 0, 0):
                continue
            if v in acc:
                acc[v] = acc[v] + br[p_]
            else:
                acc[v] = br[p_].copy()
    res = {}
    for v, val in acc.items():
        n = key_of.get(v)
        if n is None:
            n = (Fraction(v[0], d), Fraction(v[1], d), Fraction(v[2], d))
        res[n] = 1j * val
    worst, top = None, 0.0
    for n in sorted(res, key=fq.sort_key):
        m = float(np.linalg.norm(res[n]))
        if m > top:
            worst, top = n, m
    sc = residual_scale(field)
    return ResidualReport(top / sc if sc > 0 else 0.0, top, worst, res)


# --------------------------------------------------------------------------
# certificates


def _fj(n: Frequency | None):
    return None if n is None else [[c.numerator, c.denominator] for c in n]


@dataclass(frozen=True)
class Line:
    direction: tuple[int, int, int]

    def to_dict(self) -> dict:
        return {"tag": "Line", "direction": list(self.direction)}


@dataclass(frozen=True)
class PlanarPerp:
    normal: tuple[int, int, int]

    def to_dict(self) -> dict:
        return {"tag": "PlanarPerp", "normal": list(self.normal)}


@dataclass(frozen=True)
class LadderStep:
    level: int
    beta: float
    frequencies: tuple[Frequency, ...]


@dataclass(frozen=True)
class QPolynomial:
    """``Q(w) = sum_k coeffs[k-1] w^k``; no constant term by construction."""

    coeffs: tuple[float, ...]
    ladder: tuple[LadderStep, ...] = ()

    @property
    def degree(self) -> int:
        for k in range(len(self.coeffs), 0, -1):
            if self.coeffs[k - 1] != 0:
                return k
        return 0

    def __call__(self, w):
        return sum(c * w ** (k + 1) for k, c in enumerate(self.coeffs))

    def trimmed(self) -> tuple[float, ...]:
        return tuple(self.coeffs[: self.degree])

    def to_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "ladder": [{"level": s.level, "beta": s.beta, "n": [_fj(n) for n in s.frequencies]}
                       for s in self.ladder],
        }


@dataclass(frozen=True)
class PlanarDecomposition:
    normal: tuple[int, int, int]
    e_perp: np.ndarray
    radius2: Fraction
    circle: tuple[Frequency, ...]
    alphas: tuple[complex, ...]
    u_perp: dict

    @property
    def radius(self) -> float:
        return math.sqrt(float(self.radius2))

    @property
    def omega_coeffs(self) -> dict:
        """Fourier coefficients ``i alpha_j`` of the scalar vorticity."""
        return {n: 1j * a for n, a in zip(self.circle, self.alphas)}

    def to_dict(self) -> dict:
        return {
            "normal": list(self.normal),
            "radius2": [self.radius2.numerator, self.radius2.denominator],
            "circle": [_fj(n) for n in self.circle],
            "alpha_re": [a.real for a in self.alphas],
            "alpha_im": [a.imag for a in self.alphas],
        }


@dataclass(frozen=True)
class PlanarQ:
    decomposition: PlanarDecomposition
    q: QPolynomial
    also_beltrami: BeltramiSign | None = None

    def to_dict(self) -> dict:
        return {
            "tag": "PlanarQ",
            "decomposition": self.decomposition.to_dict(),
            "Q": self.q.to_dict(),
            "also_beltrami": None if self.also_beltrami is None else self.also_beltrami.value,
        }


@dataclass(frozen=True)
class Beltrami:
    """Curl eigenfield; ``planar`` holds the Q = +-omega data when the support is planar."""

    lam: float
    sign: BeltramiSign
    planar: PlanarQ | None = None

    def to_dict(self) -> dict:
        return {"tag": "Beltrami", "lambda": self.lam, "sign": self.sign.value,
                "planar": None if self.planar is None else self.planar.to_dict()}


@dataclass(frozen=True)
class NonSolution:
    residual: float
    frequency: Frequency | None
    reason: str = ""

    def to_dict(self) -> dict:
        return {"tag": "NonSolution", "residual": self.residual,
                "frequency": _fj(self.frequency), "reason": self.reason}


FlowCertificate = Line | PlanarPerp | PlanarQ | Beltrami | NonSolution


@dataclass(frozen=True)
class NscCertificate:
    certificate: FlowCertificate
    nu: float
    omega: float
    q_class: str | None = None  # "any" | "linear" | "pm_omega"
    kappa: float | None = None

    def to_dict(self) -> dict:
        return {"certificate": self.certificate.to_dict(), "nu": self.nu, "omega": self.omega,
                "q_class": self.q_class, "kappa": self.kappa}


def certificate_to_dict(cert) -> dict:
    d = cert.to_dict()
    d["schema"] = SCHEMA_VERSION
    return d


def family(cert) -> str:
    if isinstance(cert, NscCertificate):
        cert = cert.certificate
    return type(cert).__name__


# --------------------------------------------------------------------------
# planar decomposition and Q extraction


def plane_normal(support) -> tuple[int, int, int]:
    pair = fq.spanning_pair(support)
    if pair is None:
        raise ValueError("support spans at most a line")
    return fq.primitive_direction(fq.cross(*pair))


def _angle_order(circle, normal) -> list[Frequency]:
    frame = PlanarFrame.from_normal(tuple(Fraction(c) for c in normal))
    ref = min(circle, key=fq.sort_key)
    e1 = fq.to_float(ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(frame.e_perp, e1)

    def ang(n):
        v = fq.to_float(n)
        a = math.atan2(float(v @ e2), float(v @ e1))
        return a + 2 * math.pi if a < -1e-15 else max(a, 0.0)

    return sorted(circle, key=ang)


def planar_decomposition(field: SpectralField, tol: float = DEFAULT_TOL) -> PlanarDecomposition:
    """Split a planar field into ``u_par`` on a circle and the scalar ``u_perp``.

    Raises ``ValueError`` when ``u_par`` is not supported on one circle of at
    least four points.
    """
    normal = plane_normal(field.support)
    frame = PlanarFrame.from_normal(tuple(Fraction(c) for c in normal))
    sc = field.scale()
    par, perp = {}, {}
    for n, u in field.modes.items():
        p, q = frame.split(n, u)
        if abs(p) > tol * sc:
            par[n] = p
        if abs(q) > tol * sc:
            perp[n] = q
    if not par:
        raise ValueError("field has no horizontal component")
    radii = {fq.norm2(n) for n in par}
    if len(radii) != 1:
        raise ValueError("horizontal support is not on one circle")
    if len(par) < 4 or fq.rank(list(par)) < 2:
        raise ValueError("horizontal support has fewer than four points or lies on a line")
    circle = _angle_order(list(par), normal)
    return PlanarDecomposition(
        normal=normal,
        e_perp=frame.e_perp,
        radius2=radii.pop(),
        circle=tuple(circle),
        alphas=tuple(par[n] for n in circle),
        u_perp=perp,
    )


def convolve(a: dict, b: dict) -> dict:
    out: dict = {}
    for n1, c1 in a.items():
        for n2, c2 in b.items():
            s = fq.add(n1, n2)
            out[s] = out.get(s, 0j) + c1 * c2
    return out


def omega_powers(omega: dict, q: int) -> list[dict]:
    """``[omega^0, ..., omega^q]`` as exact-frequency coefficient maps."""
    pows = [{fq.ZERO: 1 + 0j}]
    for _ in range(q):
        pows.append(convolve(pows[-1], omega))
    return pows


def ladder(circle, q: int) -> dict:
    """``{n~_{j,k}: (j, k)}`` with ``n~_{j,k} = (q-k) n_j + k n_{j+1}``."""
    p = len(circle)
    out = {}
    for j in range(p):
        a, b = circle[j], circle[(j + 1) % p]
        for k in range(q):
            out[fq.add(fq.scale(q - k, a), fq.scale(k, b))] = (j, k)
    return out


def extract_Q(dec: PlanarDecomposition, u_perp: dict | None = None,
              tol: float = DEFAULT_TOL) -> QPolynomial:
    """Peel ``u_perp`` level by level into ``sum beta_q (omega^q - <omega^q>)``."""
    rem = dict(dec.u_perp if u_perp is None else u_perp)
    alphas = {n: a for n, a in zip(dec.circle, dec.alphas)}
    ia = [1j * a for a in dec.alphas]
    sc = max([abs(a) for a in dec.alphas] + [abs(v) for v in rem.values()])
    cut = tol * sc
    rem = {n: v for n, v in rem.items() if abs(v) > cut and not fq.is_zero(n)}
    pc = PlaneCoordinates.from_points(dec.circle)
    hull = convex_hull_planar([pc.coords(n) for n in dec.circle])
    for n in rem:
        if not pc.contains(n):
            raise NotRepresentable("vertical support leaves the plane", None, n)
    betas: dict[int, float] = {}
    steps: list[LadderStep] = []
    omega = {n: 1j * a for n, a in alphas.items()}
    pows = [{fq.ZERO: 1 + 0j}]
    prev_level = None
    while rem:
        levels = {n: minkowski_functional(hull, pc.coords(n)) for n in rem}
        top = max(levels.values())
        worst = max((n for n in rem if levels[n] == top), key=fq.sort_key)
        if top.denominator != 1:
            raise NotRepresentable(f"level {top} is not an integer", top, worst)
        q = int(top)
        if prev_level is not None and q >= prev_level:
            raise NotRepresentable(f"remainder did not drop below level {prev_level}", top, worst)
        lad = ladder(dec.circle, q)
        on_level = {n for n in rem if levels[n] == top}
        if on_level != set(lad):
            missing = sorted(set(lad) - on_level, key=fq.sort_key)
            extra = sorted(on_level - set(lad), key=fq.sort_key)
            bad = (extra or missing)[0]
            raise NotRepresentable(f"level-{q} support is not the ladder", q, bad)
        n00 = dec.circle[0] if q == 1 else fq.scale(q, dec.circle[0])
        beta_c = rem[n00] / ia[0] ** q
        if abs(beta_c.imag) > tol * max(abs(beta_c), 1e-300) and abs(beta_c.imag) > cut:
            raise NotRepresentable(f"beta_{q} is not real ({beta_c})", q, n00)
        beta = beta_c.real
        p = len(dec.circle)
        for n, (j, k) in lad.items():
            expect = comb(q, k) * ia[j] ** (q - k) * ia[(j + 1) % p] ** k * beta
            if abs(rem[n] - expect) > tol * max(sc, abs(expect)):
                raise NotRepresentable(
                    f"ladder ratio fails at level {q} (got {rem[n]:.6g}, expected {expect:.6g})", q, n)
        while len(pows) <= q:
            pows.append(convolve(pows[-1], omega))
        for n, c in pows[q].items():
            if fq.is_zero(n):
                continue
            rem[n] = rem.get(n, 0j) - beta * c
        rem = {n: v for n, v in rem.items() if abs(v) > cut}
        betas[q] = beta
        steps.append(LadderStep(q, beta, tuple(sorted(lad, key=fq.sort_key))))
        prev_level = q
    deg = max(betas, default=0)
    coeffs = tuple(betas.get(k, 0.0) for k in range(1, deg + 1))
    return QPolynomial(coeffs, tuple(steps))


def q_of_omega(circle, alphas, coeffs) -> dict:
    """Coefficients of ``Q(omega) - <Q(omega)>`` (zero mode dropped)."""
    omega = {n: 1j * a for n, a in zip(circle, alphas)}
    out: dict = {}
    cur = {fq.ZERO: 1 + 0j}
    for beta in coeffs:
        cur = convolve(cur, omega)
        if beta == 0:
            continue
        for n, c in cur.items():
            if not fq.is_zero(n):
                out[n] = out.get(n, 0j) + beta * c
    return out


def reconstruct_u_perp(dec: PlanarDecomposition, q: QPolynomial) -> dict:
    return q_of_omega(dec.circle, dec.alphas, q.coeffs)


# --------------------------------------------------------------------------
# classification


def _require_classifiable(field: SpectralField) -> None:
    if not field.real_valued:
        raise RefusesComplexField("classification is defined for real-valued fields only")
    if field.zero_mode is not None:
        raise ValueError("remove the mean drift before classifying")
    if not field.modes:
        raise ValueError("cannot classify the empty field")
    report = validate(field)
    if not report.ok:
        raise ValueError("invalid field: " + "; ".join(str(v) for v in report))


def _structural(field: SpectralField, tol: float) -> FlowCertificate | str:
    S = field.support
    r = fq.rank(S)
    sc = field.scale()
    if r == 1:
        return Line(fq.primitive_direction(S[0]))
    if r == 2:
        normal = plane_normal(S)
        frame = PlanarFrame.from_normal(tuple(Fraction(c) for c in normal))
        if all(abs(frame.split(n, u)[0]) <= tol * sc for n, u in field.modes.items()):
            return PlanarPerp(normal)
        try:
            dec = planar_decomposition(field, tol)
            q = extract_Q(dec, tol=tol)
        except NotRepresentable as exc:
            return f"not representable: {exc}"
        except ValueError as exc:
            return str(exc)
        if _is_pm_omega(q, tol):
            sign = BeltramiSign.PLUS if q.coeffs[0] > 0 else BeltramiSign.MINUS
            # Q = +-omega is exactly a planar Beltrami flow; report that family
            return Beltrami(sign.sign * dec.radius, sign, PlanarQ(dec, q, sign))
        return PlanarQ(dec, q)
    radii = {fq.norm2(n) for n in S}
    if len(radii) != 1:
        return "support spans 3D but is not on one sphere"
    signs = {beltrami_sign(n, u, tol) for n, u in field.modes.items()}
    if signs == {BeltramiSign.PLUS}:
        return Beltrami(math.sqrt(float(radii.pop())), BeltramiSign.PLUS)
    if signs == {BeltramiSign.MINUS}:
        return Beltrami(-math.sqrt(float(radii.pop())), BeltramiSign.MINUS)
    return "coefficients are not Beltrami vectors of one sign"


def classify_euler(field: SpectralField, tol: float = DEFAULT_TOL) -> FlowCertificate:
    """Which family of stationary finite-mode Euler flows ``field`` belongs to."""
    _require_classifiable(field)
    out = _structural(field, tol)
    res = stationarity_residual(field)
    if isinstance(out, str):
        return NonSolution(res.norm, res.worst, out)
    if res.norm >= tol:
        raise InternalInconsistency(
            f"{type(out).__name__} certificate but residual {res.norm:.3e} at {fq.fmt(res.worst)}")
    return out


def _is_pm_omega(q: QPolynomial, tol: float) -> bool:
    return q.degree == 1 and abs(abs(q.coeffs[0]) - 1) <= tol * 10


def _in_p3(normal) -> bool:
    return tuple(normal) == (0, 0, 1)


def _evolution_witness(field: SpectralField, nu: float, omega: float) -> ResidualReport:
    from .dynamics import nsc_linear_evolution

    best = stationarity_residual(field)
    for t in NSC_PROBE_TIMES:
        r = stationarity_residual(nsc_linear_evolution(field, nu, omega, t))
        if r.norm > best.norm:
            best = r
    return best


def classify_nsc(field: SpectralField, nu: float, omega: float,
                 tol: float = DEFAULT_TOL) -> NscCertificate:
    """Classification for the rotating, viscous system (viscosity ``nu``, Coriolis ``omega``)."""
    base = classify_euler(field, tol)
    nu, omega = float(nu), float(omega)

    def reject(reason: str) -> NscCertificate:
        w = _evolution_witness(field, nu, omega)
        return NscCertificate(NonSolution(w.norm, w.worst, reason), nu, omega)

    if isinstance(base, Beltrami) and base.planar is not None:
        flat = omega == 0 or _in_p3(base.planar.decomposition.normal)
        cls = "pm_omega" if not flat else ("linear" if nu != 0 else "any")
        return NscCertificate(base, nu, omega, cls, float(base.sign.sign))
    if isinstance(base, (NonSolution, Line, Beltrami)):
        return NscCertificate(base, nu, omega)
    if isinstance(base, PlanarPerp):
        if omega == 0 or _in_p3(base.normal):
            return NscCertificate(base, nu, omega)
        return reject("perpendicular planar flow off the horizontal plane is rotated by the Coriolis term")
    flat = omega == 0 or _in_p3(base.decomposition.normal)
    q = base.q
    if flat and nu == 0:
        return NscCertificate(base, nu, omega, "any")
    if flat:
        if q.degree > 1:
            return reject(f"viscosity requires Q linear, got degree {q.degree}")
        kappa = q.coeffs[0] if q.degree == 1 else 0.0
        return NscCertificate(base, nu, omega, "linear", kappa)
    return reject("rotation off the horizontal plane requires Q = +omega or -omega")


# --------------------------------------------------------------------------
# verification


@dataclass
class Verification:
    ok: bool = True
    defects: list = dc_field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.defects.append(msg)

    def __bool__(self) -> bool:
        return self.ok


def _check_residual(field, tol, out: Verification) -> None:
    r = stationarity_residual(field)
    if r.norm >= tol:
        out.fail(f"residual {r.norm:.3e} at {fq.fmt(r.worst)}")


def verify_certificate(field: SpectralField, cert, tol: float = DEFAULT_TOL) -> Verification:
    """Re-derive every claim in ``cert`` from ``field`` without reusing the classifier."""
    out = Verification()
    if isinstance(cert, NscCertificate):
        return _verify_nsc(field, cert, tol)
    if not field.real_valued:
        out.fail("field is not real-valued")
        return out
    S = field.support
    if not S:
        out.fail("empty field")
        return out
    sc = field.scale()
    if isinstance(cert, NonSolution):
        r = stationarity_residual(field)
        if r.norm < tol:
            out.fail(f"residual {r.norm:.3e} is below tolerance")
        return out
    if isinstance(cert, Line):
        d = tuple(Fraction(c) for c in cert.direction)
        for n in S:
            if not fq.parallel(n, d):
                out.fail(f"{fq.fmt(n)} is off the line")
    elif isinstance(cert, PlanarPerp):
        m = tuple(Fraction(c) for c in cert.normal)
        e = fq.to_float(m) / math.sqrt(float(fq.norm2(m)))
        for n, u in field.modes.items():
            if fq.dot(n, m) != 0:
                out.fail(f"{fq.fmt(n)} is off the plane")
            if np.linalg.norm(u - (e @ u) * e) > tol * sc:
                out.fail(f"coefficient at {fq.fmt(n)} is not normal to the plane")
    elif isinstance(cert, Beltrami):
        r2 = cert.lam * cert.lam
        if cert.planar is not None:
            _verify_planar_q(field, cert.planar, tol, out)
            if not _is_pm_omega(cert.planar.q, tol):
                out.fail("planar Beltrami certificate needs Q = +omega or -omega")
        elif fq.rank(S) < 3:
            out.fail("support does not span three dimensions")
        if cert.sign.sign * cert.lam <= 0:
            out.fail("sign of lambda disagrees with the Beltrami sign")
        for n, u in field.modes.items():
            nv = fq.to_float(n)
            if abs(float(nv @ nv) - r2) > 1e-12 * r2:
                out.fail(f"{fq.fmt(n)} is off the sphere of radius {abs(cert.lam)}")
            if np.linalg.norm(1j * np.cross(nv, u) - cert.lam * u) > tol * sc * abs(cert.lam):
                out.fail(f"curl eigen-relation fails at {fq.fmt(n)}")
    elif isinstance(cert, PlanarQ):
        _verify_planar_q(field, cert, tol, out)
    else:
        out.fail(f"unknown certificate {cert!r}")
        return out
    _check_residual(field, tol, out)
    return out


def _verify_planar_q(field, cert: PlanarQ, tol, out: Verification) -> None:
    dec = cert.decomposition
    m = tuple(Fraction(c) for c in dec.normal)
    e = fq.to_float(m) / math.sqrt(float(fq.norm2(m)))
    sc = field.scale()
    for n in field.support:
        if fq.dot(n, m) != 0:
            out.fail(f"{fq.fmt(n)} is off the plane")
    if len(dec.circle) < 4:
        out.fail("circle has fewer than four points")
    p = len(dec.circle)
    for j, n in enumerate(dec.circle):
        if fq.norm2(n) != dec.radius2:
            out.fail(f"{fq.fmt(n)} is off the circle")
        partner = dec.circle[(j + p // 2) % p]
        if partner != fq.neg(n):
            out.fail("circle is not symmetric in order")
        elif abs(1j * dec.alphas[(j + p // 2) % p] - np.conj(1j * dec.alphas[j])) > tol * sc:
            out.fail(f"alpha conjugacy fails at {fq.fmt(n)}")
    expected_perp = q_of_omega(dec.circle, dec.alphas, cert.q.coeffs)
    circle = set(dec.circle)
    freqs = set(field.modes) | set(expected_perp) | circle
    for n in sorted(freqs, key=fq.sort_key):
        u = field.modes.get(n, np.zeros(3, complex))
        nv = fq.to_float(n)
        epar = np.cross(e, nv / np.linalg.norm(nv))
        want_par = dec.alphas[dec.circle.index(n)] if n in circle else 0j
        want = want_par * epar + expected_perp.get(n, 0j) * e
        if np.linalg.norm(u - want) > tol * max(sc, 1.0):
            out.fail(f"coefficient mismatch at {fq.fmt(n)}: {np.linalg.norm(u - want):.3e}")


def _verify_nsc(field, cert: NscCertificate, tol) -> Verification:
    base = cert.certificate
    if isinstance(base, NonSolution):
        redo = classify_nsc(field, cert.nu, cert.omega, tol)
        out = Verification()
        if not isinstance(redo.certificate, NonSolution):
            out.fail("field satisfies the rotating-frame table")
        return out
    out = verify_certificate(field, base, tol)
    if isinstance(base, PlanarPerp) and cert.omega != 0 and not _in_p3(base.normal):
        out.fail("perpendicular planar flow needs omega = 0 or the horizontal plane")
    if isinstance(base, PlanarQ):
        flat = cert.omega == 0 or _in_p3(base.decomposition.normal)
        deg = base.q.degree
        if not flat:
            out.fail("Q must be +omega or -omega off the horizontal plane")
        if flat and cert.nu != 0 and deg > 1:
            out.fail("Q must be linear when viscosity is present")
    return out
