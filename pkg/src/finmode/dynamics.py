"""Galerkin dynamics for the Euler and rotating Navier-Stokes mode systems.

A :class:`GalerkinSystem` evolves coefficients on a fixed symmetric
frequency set ``T``. Finite-mode solutions show up as trajectories whose
support never grows beyond the initial ``S``.
"""
from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from . import freq as fq
from .field import SpectralField, field_to_dict
from .freq import Frequency

ACTIVATION_REL = 1e-9


def _ext_ints(ints) -> set:
    out = set(ints)
    out.update((a[0] + b[0], a[1] + b[1], a[2] + b[2]) for a in ints for b in ints)
    out.discard((0, 0, 0))
    return out


def _as_frequencies(ints, d: int) -> list[Frequency]:
    """Sorted frequencies from integer vectors on the grid ``Z^3 / d`` (``d > 0`` keeps the order)."""
    return [(Fraction(v[0], d), Fraction(v[1], d), Fraction(v[2], d)) for v in sorted(ints)]


def extended_support(S: Iterable) -> list[Frequency]:
    """``S`` together with all nonzero sums ``n1 + n2`` (``n1, n2`` in ``S``)."""
    pts = [fq.as_freq(n) for n in S]
    if not pts:
        return []
    ints, d = fq.to_integer_vectors(pts)
    return _as_frequencies(_ext_ints(ints), d)


# --------------------------------------------------------------------------
# default truncation


def _hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-reduce integer vectors to a basis of the lattice they generate."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    col = 0
    while rows and col < 3:
        rows = [r for r in rows if any(r)]
        piv = [r for r in rows if r[col] != 0]
        if not piv:
            col += 1
            continue
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            for r in piv[1:]:
                q = r[col] // p[col]
                for k in range(3):
                    r[k] -= q * p[k]
            piv = [r for r in piv if r[col] != 0]
        p = piv[0]
        basis.append(p)
        rows = [r for r in rows if r is not p and any(r)]
        col += 1
    return basis


def default_truncation(S: Iterable, factor: int = 2, max_points: int = 20000) -> list[Frequency]:
    """Nonzero points of the lattice generated by ``S`` within radius ``factor * max|n|``.

    Rational supports can generate lattices so fine that the ball holds
    billions of points; when the volume estimate exceeds ``max_points`` the
    extended support is used instead. Either way the result contains it.
    """
    pts = [fq.as_freq(n) for n in S]
    if not pts:
        return []
    ints, d = fq.to_integer_vectors(pts)
    out = _ext_ints(ints)
    out |= {(-v[0], -v[1], -v[2]) for v in out}
    Bi = _hermite_rows([list(v) for v in set(ints)])
    R2 = max(sum(c * c for c in v) for v in ints) * factor * factor
    r = len(Bi)
    gram = [[sum(a * b for a, b in zip(u, v)) for v in Bi] for u in Bi]
    if r == 3:
        vol2 = fq.det3(*gram)
    elif r == 2:
        vol2 = gram[0][0] * gram[1][1] - gram[0][1] ** 2
    else:
        vol2 = gram[0][0]
    ball = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}[r] * R2 ** (r / 2)
    if ball / math.sqrt(float(abs(vol2))) > max_points:
        return _as_frequencies(out, d)
    R = math.sqrt(R2)
    pinv = np.linalg.pinv(np.array(Bi, dtype=float))
    bounds = [int(math.floor(R * np.linalg.norm(pinv[:, i]) + 1e-9)) + 1 for i in range(r)]
    if max(abs(c) for row in Bi for c in row) * sum(bounds) < 2**31:
        grids = np.meshgrid(*[np.arange(-b, b + 1) for b in bounds], indexing="ij")
        C = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        V = C @ np.array(Bi, dtype=np.int64)
        r2 = np.einsum("ij,ij->i", V, V)
        out.update(map(tuple, V[(r2 > 0) & (r2 <= R2)].tolist()))
    else:
        for coeffs in itertools.product(*[range(-b, b + 1) for b in bounds]):
            v = tuple(sum(c * Bi[i][k] for i, c in enumerate(coeffs)) for k in range(3))
            if 0 < v[0] * v[0] + v[1] * v[1] + v[2] * v[2] <= R2:
                out.add(v)
    return _as_frequencies(out, d)


# --------------------------------------------------------------------------
# Coriolis


def coriolis_matrix(n) -> np.ndarray:
    """``J_n = (n3 / |n|^2) [n]_x``, which is ``P_n (e3 x P_n .)`` on the tangent plane."""
    nv = fq.to_float(fq.as_freq(n))
    r2 = float(nv @ nv)
    if r2 == 0.0:
        raise ValueError("zero frequency")
    n1, n2, n3 = nv
    return (n3 / r2) * np.array([[0.0, -n3, n2], [n3, 0.0, -n1], [-n2, n1, 0.0]])


def evolve_mode(n, u, nu: float, omega: float, t: float) -> np.ndarray:
    """Closed-form linear evolution of one tangent coefficient."""
    nv = fq.to_float(fq.as_freq(n))
    r = float(np.linalg.norm(nv))
    u = np.asarray(u, complex)
    th = omega * t * nv[2] / r
    rot = math.cos(th) * u - math.sin(th) * np.cross(nv / r, u)
    return math.exp(-nu * t * r * r) * rot


def nsc_linear_evolution(field: SpectralField, nu: float, omega: float, t: float,
                         t_star: float = 0.0) -> SpectralField:
    """``u_n(t) = exp(-nu (t - t*) |n|^2) exp(-Omega (t - t*) J_n) u_n(t*)`` mode by mode."""
    if field.zero_mode is not None:
        raise ValueError("remove the mean drift before evolving")
    s = t - t_star
    return field.replace_modes({n: evolve_mode(n, u, nu, omega, s) for n, u in field.modes.items()})


# --------------------------------------------------------------------------
# pressure


def pressure(field: SpectralField, n, omega: float = 0.0) -> complex:
    """Pressure coefficient at ``n``, summing over ordered pairs ``n1 + n2 = n`` in ``S``."""
    n = fq.as_freq(n)
    if fq.is_zero(n):
        raise ValueError("zero frequency")
    nv = fq.to_float(n)
    total = 0j
    for a, ua in field.modes.items():
        b = fq.sub(n, a)
        ub = field.modes.get(b)
        if ub is None:
            continue
        total += complex(ua @ fq.to_float(b)) * complex(ub @ fq.to_float(a))
    cor = 0j
    u = field.modes.get(n)
    if omega and u is not None:
        cor = 1j * omega * (nv[1] * u[0] - nv[0] * u[1])
    return (cor - total) / float(fq.norm2(n))


def pressure_field(field: SpectralField, omega: float = 0.0, tol: float = 1e-14) -> dict:
    out = {}
    for n in extended_support(field.support):
        p = pressure(field, n, omega)
        if abs(p) > tol:
            out[n] = p
    return out


# --------------------------------------------------------------------------
# Galerkin system


def _encode(P: np.ndarray) -> tuple[np.ndarray, int, int]:
    off = int(np.abs(P).max()) * 2 + 1
    base = 2 * off + 1
    keys = ((P[..., 0] + off) * base + (P[..., 1] + off)) * base + (P[..., 2] + off)
    return keys, off, base


class GalerkinSystem:
    """Symmetric truncation ``T`` with parameters ``nu`` and ``omega`` and its triad index."""

    def __init__(self, T: Iterable, nu: float = 0.0, omega: float = 0.0):
        pts = sorted({fq.as_freq(n) for n in T}, key=fq.sort_key)
        if any(fq.is_zero(n) for n in pts):
            raise ValueError("truncation must not contain 0")
        index = {n: i for i, n in enumerate(pts)}
        for n in pts:
            if fq.neg(n) not in index:
                raise ValueError(f"truncation is not symmetric: missing {fq.fmt(fq.neg(n))}")
        self.T = pts
        self.index = index
        self.nu = float(nu)
        self.omega = float(omega)
        N = len(pts)
        self.K = np.array([fq.to_float(n) for n in pts]).reshape(N, 3)
        self.knorm2 = np.array([float(fq.norm2(n)) for n in pts])
        self.neg = np.array([index[fq.neg(n)] for n in pts], dtype=np.int64)
        self.out, self.i1, self.i2 = self._triads()
        L = np.zeros((N, 3, 3))
        for i, n in enumerate(pts):
            L[i] = -self.nu * self.knorm2[i] * np.eye(3)
            if self.omega:
                L[i] -= self.omega * coriolis_matrix(n)
        self.L = np.ascontiguousarray(L)

    def _triads(self):
        N = len(self.T)
        if N == 0:
            z = np.zeros(0, np.int64)
            return z, z, z
        ints, _ = fq.to_integer_vectors(self.T)
        P = np.array(ints, dtype=np.int64)
        i1, i2 = np.triu_indices(N, k=1)
        S = P[i1] + P[i2]
        keys, off, base = _encode(np.concatenate([P, S]))
        tkeys, skeys = keys[:N], keys[N:]
        order = np.argsort(tkeys)
        pos = np.searchsorted(tkeys[order], skeys)
        pos = np.minimum(pos, N - 1)
        hit = tkeys[order][pos] == skeys
        out = order[pos[hit]]
        i1, i2 = i1[hit], i2[hit]
        # stable order by output index keeps summation deterministic
        srt = np.lexsort((i2, i1, out))
        return (np.ascontiguousarray(out[srt], np.int64), np.ascontiguousarray(i1[srt], np.int64),
                np.ascontiguousarray(i2[srt], np.int64))

    def __len__(self) -> int:
        return len(self.T)

    @property
    def n_triads(self) -> int:
        return int(self.out.size)

    def triads_of(self, n) -> list[tuple[Frequency, Frequency]]:
        k = self.index[fq.as_freq(n)]
        sel = self.out == k
        return [(self.T[a], self.T[b]) for a, b in zip(self.i1[sel], self.i2[sel])]

    def to_array(self, field: SpectralField) -> np.ndarray:
        U = np.zeros((len(self.T), 3), complex)
        for n, u in field.modes.items():
            i = self.index.get(n)
            if i is None:
                raise ValueError(f"{fq.fmt(n)} is outside the truncation")
            U[i] = u
        return U

    def from_array(self, U: np.ndarray, real_valued: bool = True) -> SpectralField:
        return SpectralField.from_modes({n: U[i] for i, n in enumerate(self.T)},
                                        real_valued=real_valued)

    def nonlinear(self, U: np.ndarray) -> np.ndarray:
        U = np.ascontiguousarray(U, complex)
        return _kernels.nonlinear_term(self.K, self.knorm2, U, self.out, self.i1, self.i2)

    def rhs_array(self, U: np.ndarray) -> np.ndarray:
        U = np.ascontiguousarray(U, complex)
        du = np.asarray(self.nonlinear(U))
        if self.nu or self.omega:
            du = du + np.asarray(_kernels.apply_linear(self.L, U))
        return du

    def rhs(self, field: SpectralField) -> dict:
        du = self.rhs_array(self.to_array(field))
        return {n: du[i] for i, n in enumerate(self.T)}

    def energy(self, U) -> float:
        return 0.5 * float(np.sum(np.abs(U) ** 2))

    def helicity(self, U) -> float:
        w = 1j * np.cross(self.K, U)
        return float(np.sum(np.conj(U) * w).real)

    def realness_drift(self, U) -> float:
        return float(np.max(np.abs(U - np.conj(U[self.neg])))) if len(U) else 0.0

    def symmetrize(self, U) -> np.ndarray:
        return 0.5 * (U + np.conj(U[self.neg]))

    def step(self, U, dt: float) -> np.ndarray:
        k1 = self.rhs_array(U)
        k2 = self.rhs_array(U + 0.5 * dt * k1)
        k3 = self.rhs_array(U + 0.5 * dt * k2)
        k4 = self.rhs_array(U + dt * k3)
        return U + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def rhs(system: GalerkinSystem, field: SpectralField) -> dict:
    return system.rhs(field)


# --------------------------------------------------------------------------
# integration


@dataclass
class ActivationEvent:
    frequency: Frequency
    time: float
    peak: float = 0.0


@dataclass
class Trajectory:
    system: GalerkinSystem
    times: list = dc_field(default_factory=list)
    states: list = dc_field(default_factory=list)
    diagnostics: list = dc_field(default_factory=list)
    events: dict = dc_field(default_factory=dict)
    real_valued: bool = True

    def snapshot(self, i: int = -1) -> SpectralField:
        return self.system.from_array(self.states[i], self.real_valued)

    @property
    def final(self) -> SpectralField:
        return self.snapshot(-1)

    def write_jsonl(self, fh) -> None:
        for t, U in zip(self.times, self.states):
            doc = field_to_dict(self.system.from_array(U, self.real_valued))
            doc["t"] = t
            fh.write(json.dumps(doc) + "\n")

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "energy", "helicity", "realness_drift", "active_modes"])
        for row in self.diagnostics:
            w.writerow([repr(row["t"]), repr(row["energy"]), repr(row["helicity"]),
                        repr(row["realness_drift"]), row["active_modes"]])


class IntegrationError(RuntimeError):
    def __init__(self, message: str, trajectory: Trajectory):
        super().__init__(message)
        self.trajectory = trajectory


def integrate(system: GalerkinSystem, initial: SpectralField, t_end: float, dt: float,
              save_every: int = 1, symmetrize: bool = True) -> Trajectory:
    """Classic fixed-step RK4 from ``t = 0`` to ``t_end``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    steps = int(round(t_end / dt))
    U = system.to_array(initial)
    real = initial.real_valued
    traj = Trajectory(system, real_valued=real)
    norms = np.linalg.norm(U, axis=1)
    thresh = ACTIVATION_REL * (float(norms.max()) if norms.size else 0.0)

    def record(k: int, U, drift: float, save: bool):
        t = k * dt
        nrm = np.linalg.norm(U, axis=1)
        active = np.flatnonzero(nrm > thresh)
        for i in active:
            n = system.T[i]
            ev = traj.events.get(n)
            if ev is None:
                traj.events[n] = ActivationEvent(n, t, float(nrm[i]))
            elif nrm[i] > ev.peak:
                ev.peak = float(nrm[i])
        traj.diagnostics.append({
            "t": t, "energy": system.energy(U), "helicity": system.helicity(U),
            "realness_drift": drift, "active_modes": int(active.size),
        })
        if save:
            traj.times.append(t)
            traj.states.append(U.copy())

    record(0, U, system.realness_drift(U) if real else 0.0, True)
    for k in range(1, steps + 1):
        V = system.step(U, dt)
        if not np.all(np.isfinite(V)):
            raise IntegrationError(f"non-finite state at step {k}", traj)
        drift = 0.0
        if real:
            drift = system.realness_drift(V)
            if symmetrize:
                V = system.symmetrize(V)
        U = V
        record(k, U, drift, k % save_every == 0 or k == steps)
    return traj


def support_growth_report(traj: Trajectory, S: Iterable) -> list[ActivationEvent]:
    """Activation events at frequencies outside ``S``, ordered by time then frequency."""
    Sset = {fq.as_freq(n) for n in S}
    evs = [e for n, e in traj.events.items() if n not in Sset]
    return sorted(evs, key=lambda e: (e.time, fq.sort_key(e.frequency)))
