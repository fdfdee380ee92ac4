"""Finite-mode divergence-free vector fields.

A :class:`SpectralField` stores ``u(x) = sum_n u_n exp(i n.x)`` as a map from
exact rational frequencies to complex 3-vectors, plus an optional real zero
mode. Instances are immutable: the coefficient arrays are read-only and the
map itself is never mutated after construction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from . import freq as fq
from .freq import Frequency

DEFAULT_TOL = 1e-10
PRUNE_REL = 1e-13
SCHEMA_VERSION = 1


def _frozen_vec(v, dtype=complex) -> np.ndarray:
    a = np.array(v, dtype=dtype).reshape(3)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpectralField:
    modes: Mapping[Frequency, np.ndarray]
    zero_mode: np.ndarray | None = None
    real_valued: bool = True

    def __post_init__(self):
        modes = {fq.as_freq(n): _frozen_vec(u) for n, u in dict(self.modes).items()}
        object.__setattr__(self, "modes", MappingProxyType(modes))
        if self.zero_mode is not None:
            object.__setattr__(self, "zero_mode", _frozen_vec(self.zero_mode, float))

    @classmethod
    def from_modes(cls, modes: Mapping, zero_mode=None, real_valued: bool = True,
                   prune: bool = True, complete: bool = False) -> "SpectralField":
        """Build a field, optionally adding conjugate partners and pruning zeros.

        With ``complete=True`` every listed frequency ``n`` gets ``-n`` set to
        the conjugate coefficient (so only one member of each pair is needed).
        """
        out: dict[Frequency, np.ndarray] = {}
        for n, u in modes.items():
            n = fq.as_freq(n)
            out[n] = np.asarray(u, dtype=complex).reshape(3)
            if complete:
                out[fq.neg(n)] = np.conj(out[n])
        if prune:
            out = prune_modes(out)
        return cls(out, zero_mode=zero_mode, real_valued=real_valued)

    @property
    def support(self) -> list[Frequency]:
        return sorted(self.modes, key=fq.sort_key)

    def __len__(self) -> int:
        return len(self.modes)

    def __contains__(self, n) -> bool:
        return fq.as_freq(n) in self.modes

    def __getitem__(self, n) -> np.ndarray:
        return self.modes[fq.as_freq(n)]

    def scale(self) -> float:
        """Largest coefficient norm (0 for the empty field)."""
        if not self.modes:
            return 0.0
        return max(float(np.linalg.norm(u)) for u in self.modes.values())

    def max_radius(self) -> float:
        if not self.modes:
            return 0.0
        return math.sqrt(float(max(fq.norm2(n) for n in self.modes)))

    def without_zero_mode(self) -> "SpectralField":
        return SpectralField(dict(self.modes), None, self.real_valued)

    def with_zero_mode(self, u0) -> "SpectralField":
        return SpectralField(dict(self.modes), u0, self.real_valued)

    def replace_modes(self, modes: Mapping) -> "SpectralField":
        return SpectralField(modes, self.zero_mode, self.real_valued)

    def map_coefficients(self, fn) -> "SpectralField":
        """Apply ``fn(n, u) -> u'`` to every coefficient."""
        return self.replace_modes({n: fn(n, u) for n, u in self.modes.items()})

    def __add__(self, other: "SpectralField") -> "SpectralField":
        modes = dict(self.modes)
        for n, u in other.modes.items():
            modes[n] = modes[n] + u if n in modes else u
        z = _add_zero(self.zero_mode, other.zero_mode)
        return SpectralField(modes, z, self.real_valued and other.real_valued)

    def __mul__(self, a) -> "SpectralField":
        z = None if self.zero_mode is None else np.real(a) * self.zero_mode
        return SpectralField({n: a * u for n, u in self.modes.items()}, z,
                             self.real_valued and np.isreal(a))

    __rmul__ = __mul__


def _add_zero(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def prune_modes(modes: Mapping[Frequency, np.ndarray], rel: float = PRUNE_REL) -> dict:
    """Drop coefficients below ``rel`` times the largest coefficient norm."""
    if not modes:
        return {}
    norms = {n: float(np.linalg.norm(u)) for n, u in modes.items()}
    top = max(norms.values())
    if top == 0.0:
        return {}
    return {n: u for n, u in modes.items() if norms[n] >= rel * top}


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    frequency: Frequency
    defect: float

    def __str__(self) -> str:
        return f"{self.kind} at {fq.fmt(self.frequency)}: {self.defect:.3e}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        # truthy when the field is valid
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "n": _freq_to_json(v.frequency), "defect": v.defect}
                for v in self.violations
            ],
        }


def validate(field: SpectralField, tol: float = DEFAULT_TOL,
             real_valued: bool | None = None) -> ValidationReport:
    """Check membership in the space of real finite-mode divergence-free fields.

    Never raises on bad data. ``tol`` is relative to the largest coefficient.
    Passing ``real_valued`` overrides the field's own flag (to force the
    real-valuedness checks on a complex field).
    """
    real = field.real_valued if real_valued is None else real_valued
    scale = field.scale()
    found: list[Violation] = []
    for n in field.support:
        u = field.modes[n]
        unorm = float(np.linalg.norm(u))
        if fq.is_zero(n):
            found.append(Violation("zero_frequency", n, unorm))
            continue
        if unorm == 0.0 or unorm < PRUNE_REL * scale:
            found.append(Violation("zero_coefficient", n, unorm))
            continue
        partner = fq.neg(n)
        conj_ok = True
        if real:
            if partner not in field.modes:
                found.append(Violation("asymmetric_support", n, unorm))
                conj_ok = False
            else:
                d = float(np.linalg.norm(field.modes[partner] - np.conj(u)))
                if d > tol * scale:
                    conj_ok = False
                    if fq.is_canonical(n):
                        found.append(Violation("broken_conjugacy", n, d))
        # report divergence once per conjugate pair when the pair is consistent
        if real and conj_ok and not fq.is_canonical(n):
            continue
        nv = fq.to_float(n)
        div = abs(complex(np.dot(nv, u)))
        if div > tol * float(np.linalg.norm(nv)) * scale:
            found.append(Violation("divergence", n, div))
    return ValidationReport(tuple(found))


# --------------------------------------------------------------------------
# zero mode (Galilean drift)


@dataclass(frozen=True)
class ZeroModeTrajectory:
    """The spatial mean ``u_0(t)``: constant for Omega = 0, else rotating."""

    u0_star: np.ndarray
    t_star: float = 0.0
    omega: float = 0.0

    def velocity(self, t: float) -> np.ndarray:
        a, b, c = self.u0_star
        ph = self.omega * (t - self.t_star)
        cs, sn = math.cos(ph), math.sin(ph)
        return np.array([a * cs + b * sn, b * cs - a * sn, c])

    def displacement(self, t: float) -> np.ndarray:
        """Integral of the velocity from ``t_star`` to ``t``."""
        a, b, c = self.u0_star
        s = t - self.t_star
        if self.omega == 0.0:
            return np.array([a * s, b * s, c * s])
        w = self.omega
        sn, one_m_cs = math.sin(w * s), 1.0 - math.cos(w * s)
        return np.array([(a * sn + b * one_m_cs) / w, (b * sn - a * one_m_cs) / w, c * s])

    def negated(self) -> "ZeroModeTrajectory":
        return ZeroModeTrajectory(-np.asarray(self.u0_star), self.t_star, self.omega)


def _shift(field: SpectralField, X: np.ndarray, sign: float) -> dict:
    out = {}
    for n, u in field.modes.items():
        ph = sign * float(np.dot(fq.to_float(n), X))
        out[n] = u * complex(math.cos(ph), math.sin(ph))
    return out


def remove_mean_drift(field: SpectralField, t_star: float = 0.0, omega: float = 0.0,
                      t: float | None = None) -> tuple[SpectralField, ZeroModeTrajectory]:
    """Move to the frame advected by the spatial mean.

    ``field`` is the snapshot at time ``t`` (default ``t_star``) and its zero
    mode is ``u_0(t)``. Returns the mean-zero field ``v_n = u_n e^{i n.X(t)}``
    with ``X(t) = int_{t_star}^t u_0``, and the zero-mode trajectory.
    """
    if field.zero_mode is None:
        raise ValueError("field has no zero mode")
    t = t_star if t is None else t
    # undo the rotation to recover u_0(t_star)
    back = ZeroModeTrajectory(np.asarray(field.zero_mode, float), t, omega).velocity(t_star)
    traj = ZeroModeTrajectory(back, t_star, omega)
    X = traj.displacement(t)
    return SpectralField(_shift(field, X, +1.0), None, field.real_valued), traj


def restore_mean_drift(field: SpectralField, traj: ZeroModeTrajectory,
                       t: float | None = None) -> SpectralField:
    """Inverse of :func:`remove_mean_drift`."""
    if field.zero_mode is not None:
        raise ValueError("field already carries a zero mode")
    t = traj.t_star if t is None else t
    X = traj.displacement(t)
    return SpectralField(_shift(field, X, -1.0), traj.velocity(t), field.real_valued)


# --------------------------------------------------------------------------
# physical space and calculus


def evaluate(field: SpectralField, x) -> np.ndarray:
    if not field.real_valued:
        raise ValueError("evaluate needs a real-valued field")
    x = np.asarray(x, float)
    total = np.zeros(3, complex)
    weight = 0.0
    for n, u in field.modes.items():
        ph = float(np.dot(fq.to_float(n), x))
        total += u * complex(math.cos(ph), math.sin(ph))
        weight += float(np.linalg.norm(u))
    resid = float(np.max(np.abs(total.imag))) if field.modes else 0.0
    if resid > 1e-12 * max(1.0, weight):
        raise ValueError(f"imaginary residual {resid:.3e}; field is not real")
    out = total.real
    if field.zero_mode is not None:
        out = out + field.zero_mode
    return out


def curl(field: SpectralField) -> SpectralField:
    """Coefficient-wise ``u_n -> i n x u_n``; the zero mode has no curl."""
    modes = {n: 1j * np.cross(fq.to_float(n), u) for n, u in field.modes.items()}
    return SpectralField(modes, None, field.real_valued)


def energy(field: SpectralField) -> float:
    e = 0.5 * sum(float(np.vdot(u, u).real) for u in field.modes.values())
    if field.zero_mode is not None:
        e += 0.5 * float(np.dot(field.zero_mode, field.zero_mode))
    return e


def helicity(field: SpectralField) -> float:
    h = 0j
    for n, u in field.modes.items():
        h += np.vdot(u, 1j * np.cross(fq.to_float(n), u))
    if field.real_valued and abs(h.imag) > 1e-12 * max(1.0, abs(h)):
        raise ValueError(f"helicity has imaginary part {h.imag:.3e}")
    return float(h.real)


# --------------------------------------------------------------------------
# JSON


class SchemaError(ValueError):
    """A field document violates the schema; the message names the location."""


def _freq_to_json(n: Frequency) -> list[list[int]]:
    return [[c.numerator, c.denominator] for c in n]


def _num(x: float):
    return float(x)


def field_to_dict(field: SpectralField) -> dict:
    modes = []
    for n in field.support:
        u = field.modes[n]
        modes.append({
            "n": _freq_to_json(n),
            "re": [_num(c) for c in u.real],
            "im": [_num(c) for c in u.imag],
        })
    z = None if field.zero_mode is None else [_num(c) for c in field.zero_mode]
    return {"real_valued": bool(field.real_valued), "zero_mode": z, "modes": modes}


def serialize(field: SpectralField) -> str:
    return json.dumps(field_to_dict(field), indent=2) + "\n"


def _vec3(obj, where: str) -> list[float]:
    if not isinstance(obj, list) or len(obj) != 3:
        raise SchemaError(f"{where}: expected a list of three numbers")
    out = []
    for c in obj:
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise SchemaError(f"{where}: non-numeric entry {c!r}")
        if not math.isfinite(c):
            raise SchemaError(f"{where}: non-finite entry")
        out.append(float(c))
    return out


def _parse_freq(obj, where: str) -> Frequency:
    if not isinstance(obj, list) or len(obj) != 3:
        raise SchemaError(f"{where}: frequency must be three [num, den] pairs")
    comps = []
    for k, pair in enumerate(obj):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(c, int) and not isinstance(c, bool) for c in pair)):
            raise SchemaError(f"{where}[{k}]: expected [num, den] integers")
        num, den = pair
        if den == 0:
            raise SchemaError(f"{where}[{k}]: denominator is zero")
        comps.append(Fraction(num, den))
    return tuple(comps)


def field_from_dict(doc, conj_tol: float = 1e-12) -> SpectralField:
    if not isinstance(doc, dict):
        raise SchemaError("document root must be an object")
    for key in ("real_valued", "zero_mode", "modes"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    extra = set(doc) - {"real_valued", "zero_mode", "modes"}
    if extra:
        raise SchemaError(f"unknown keys {sorted(extra)}")
    real = doc["real_valued"]
    if not isinstance(real, bool):
        raise SchemaError("real_valued must be a boolean")
    z = None if doc["zero_mode"] is None else _vec3(doc["zero_mode"], "zero_mode")
    if not isinstance(doc["modes"], list):
        raise SchemaError("modes must be a list")
    modes: dict[Frequency, np.ndarray] = {}
    for i, m in enumerate(doc["modes"]):
        where = f"modes[{i}]"
        if not isinstance(m, dict) or set(m) != {"n", "re", "im"}:
            raise SchemaError(f"{where}: expected keys n, re, im")
        n = _parse_freq(m["n"], f"{where}.n")
        if fq.is_zero(n):
            raise SchemaError(f"{where}.n: zero frequency belongs in zero_mode")
        if n in modes:
            raise SchemaError(f"{where}.n: duplicate frequency {fq.fmt(n)}")
        re = _vec3(m["re"], f"{where}.re")
        im = _vec3(m["im"], f"{where}.im")
        modes[n] = np.array(re) + 1j * np.array(im)
    if real:
        scale = max((float(np.linalg.norm(u)) for u in modes.values()), default=0.0)
        index = {n: i for i, n in enumerate(modes)}
        for n, u in modes.items():
            partner = fq.neg(n)
            if partner not in modes:
                raise SchemaError(f"modes[{index[n]}]: conjugate partner {fq.fmt(partner)} not listed")
            if np.linalg.norm(modes[partner] - np.conj(u)) > conj_tol * scale:
                raise SchemaError(f"modes[{index[n]}]: partner {fq.fmt(partner)} is not the conjugate")
    return SpectralField(modes, z, real)


def parse(text: str) -> SpectralField:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}: {exc.msg}") from exc
    return field_from_dict(doc)


def load(path) -> SpectralField:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(field: SpectralField, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(field))


def conjugate_pairs(support: Iterable[Frequency]) -> list[Frequency]:
    """Canonical representatives of the ``{n, -n}`` pairs in ``support``."""
    return sorted({fq.canonical(n) for n in support}, key=fq.sort_key)
