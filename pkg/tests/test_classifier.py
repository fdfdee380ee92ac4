import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finmode import fixtures
from finmode import freq as fq
from finmode.classifier import (
    Beltrami,
    Line,
    NonSolution,
    NotRepresentable,
    NscCertificate,
    PlanarPerp,
    PlanarQ,
    QPolynomial,
    RefusesComplexField,
    certificate_to_dict,
    classify_euler,
    classify_nsc,
    extract_Q,
    family,
    planar_decomposition,
    q_of_omega,
    stationarity_residual,
    verify_certificate,
)
from finmode.field import SpectralField
from finmode.interaction import BeltramiSign

TILT = (1, 2, 2)
HORIZONTAL = (0, 0, 1)


# ---------------------------------------------------------------- families


def test_line_family():
    f = fixtures.line((1, 2, 0), modes=3, seed=4)
    cert = classify_euler(f)
    assert isinstance(cert, Line) and cert.direction == (1, 2, 0)
    assert verify_certificate(f, cert)


def test_perp_family():
    f = fixtures.planar_perp(TILT, modes=4, seed=1)
    cert = classify_euler(f)
    assert isinstance(cert, PlanarPerp) and cert.normal == TILT
    assert verify_certificate(f, cert)


def test_three_dimensional_beltrami():
    f = fixtures.beltrami_random(3, 6, sign="minus")
    cert = classify_euler(f)
    assert isinstance(cert, Beltrami) and cert.sign is BeltramiSign.MINUS
    assert cert.lam == pytest.approx(-1.0) and cert.planar is None


def test_planar_pm_omega_is_reported_as_beltrami():
    for beta, sign in ((1.0, BeltramiSign.PLUS), (-1.0, BeltramiSign.MINUS)):
        f = fixtures.planar_q(TILT, [beta], 6)
        cert = classify_euler(f)
        assert isinstance(cert, Beltrami) and cert.sign is sign
        r = math.sqrt(float(fq.norm2(f.support[0])))
        assert cert.lam == pytest.approx(sign.sign * r)
        assert cert.planar.q.coeffs == pytest.approx((beta,))
        assert verify_certificate(f, cert)


def test_complex_field_is_refused():
    # the tetrahedron flow is a complex-valued solution
    with pytest.raises(RefusesComplexField):
        classify_euler(fixtures.tetrahedron())


def test_refuses_zero_mode_and_empty():
    f = fixtures.abc().with_zero_mode(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError, match="drift"):
        classify_euler(f)
    with pytest.raises(ValueError):
        classify_euler(SpectralField({}))


def test_non_solution_reports_worst_frequency():
    f = fixtures.random_generic(7, 6, span=1)
    cert = classify_euler(f)
    assert isinstance(cert, NonSolution)
    res = stationarity_residual(f)
    assert cert.residual == pytest.approx(res.norm) and cert.frequency == res.worst
    assert verify_certificate(f, cert)


def test_certificate_dicts_are_json():
    for f in (fixtures.abc(), fixtures.planar_q(TILT, [0, 1], 4), fixtures.line(),
              fixtures.planar_perp(), fixtures.random_generic(1, 5)):
        d = certificate_to_dict(classify_euler(f))
        assert "schema" in d and d["tag"] == family(classify_euler(f))
        json.dumps(d)


# ---------------------------------------------------------------- Q extraction


coef = st.floats(-2, 2, allow_nan=False).map(lambda x: round(x, 3))


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=0, max_size=3), st.sampled_from([4, 6]),
       st.sampled_from([HORIZONTAL, TILT, (1, 1, 0)]), st.integers(0, 1000))
def test_extract_Q_recovers_coefficients(q, p, normal, seed):
    f = fixtures.planar_q(normal, q, p, seed=seed)
    dec = planar_decomposition(f)
    got = extract_Q(dec)
    want = list(q)
    while want and want[-1] == 0:
        want.pop()
    assert np.allclose(got.trimmed(), want, atol=1e-9)


def test_reconstruction_matches_u_perp():
    f = fixtures.planar_q(TILT, [0.5, -1, 0.25], 6, seed=3)
    dec = planar_decomposition(f)
    q = extract_Q(dec)
    rebuilt = q_of_omega(dec.circle, dec.alphas, q.coeffs)
    for n, c in dec.u_perp.items():
        assert abs(rebuilt.get(n, 0) - c) < 1e-10


def test_extract_Q_rejects_off_ladder_remainders():
    f = fixtures.planar_q(HORIZONTAL, [0, 1], 4)
    dec = planar_decomposition(f)
    # spoil one ladder coefficient at level 2
    top = max(dec.u_perp, key=fq.norm2)
    bad = dict(dec.u_perp)
    bad[top] = bad[top] * 1.5
    bad[fq.neg(top)] = bad[fq.neg(top)] * 1.5
    with pytest.raises(NotRepresentable) as exc:
        extract_Q(dec, bad)
    assert exc.value.level == 2
    # a stray in-plane frequency of fractional level
    stray = dict(dec.u_perp)
    n = fq.freq("1/2", 0, 0)
    stray[n] = 0.3 + 0j
    stray[fq.neg(n)] = 0.3 + 0j
    with pytest.raises(NotRepresentable, match="not an integer"):
        extract_Q(dec, stray)
    # off the plane
    off = {fq.freq(0, 0, 1): 1.0 + 0j, fq.freq(0, 0, -1): 1.0 + 0j}
    with pytest.raises(NotRepresentable, match="plane"):
        extract_Q(dec, off)


def test_q_polynomial_degree_and_call():
    q = QPolynomial((1.0, 0.0, 2.0, 0.0))
    assert q.degree == 3 and q.trimmed() == (1.0, 0.0, 2.0)
    assert q(2.0) == pytest.approx(2 + 16)
    assert QPolynomial(()).degree == 0


# ---------------------------------------------------------------- verification


def test_tampered_certificates_fail():
    f = fixtures.abc(1, 2, 3)
    cert = classify_euler(f)
    assert verify_certificate(f, cert)
    assert not verify_certificate(f, replace(cert, lam=2.0))
    assert not verify_certificate(f, replace(cert, lam=-1.0, sign=BeltramiSign.MINUS))
    assert not verify_certificate(f, Line((1, 0, 0)))
    assert not verify_certificate(f, PlanarPerp((0, 0, 1)))
    assert not verify_certificate(f, NonSolution(0.0, None))

    g = fixtures.planar_q(TILT, [0, 1], 6, seed=2)
    pc = classify_euler(g)
    assert isinstance(pc, PlanarQ) and verify_certificate(g, pc)
    wrong_q = replace(pc, q=QPolynomial((0.0, 1.1)))
    assert not verify_certificate(g, wrong_q)
    alphas = list(pc.decomposition.alphas)
    alphas[0] *= 1.01
    wrong_alpha = replace(pc, decomposition=replace(pc.decomposition, alphas=tuple(alphas)))
    assert not verify_certificate(g, wrong_alpha)


def test_verify_catches_non_solution_passed_off_as_family():
    f = fixtures.random_generic(3, 6)
    assert not verify_certificate(f, Beltrami(1.0, BeltramiSign.PLUS))


# ---------------------------------------------------------------- rotating, viscous table


@pytest.mark.parametrize("nu,omega", [(0.0, 0.0), (1.0, 0.0), (0.0, 2.0), (0.5, 2.0)])
def test_nsc_planar_table(nu, omega):
    for normal in (HORIZONTAL, TILT):
        flat = omega == 0 or normal == HORIZONTAL
        for q, allowed in (([0, 1], flat and nu == 0), ([0.7], flat), ([1.0], True)):
            f = fixtures.planar_q(normal, q, 4, seed=1 if q != [1.0] else None)
            cert = classify_nsc(f, nu, omega)
            assert isinstance(cert, NscCertificate)
            assert (not isinstance(cert.certificate, NonSolution)) == allowed, (normal, q)
            assert verify_certificate(f, cert)


def test_nsc_q_class_and_kappa():
    f = fixtures.planar_q(TILT, [-1.0], 4)
    c = classify_nsc(f, 0.3, 1.0)
    assert c.q_class == "pm_omega" and c.kappa == -1.0
    g = fixtures.planar_q(HORIZONTAL, [0.7], 4, seed=2)
    c = classify_nsc(g, 0.3, 1.0)
    assert c.q_class == "linear" and c.kappa == pytest.approx(0.7)
    assert classify_nsc(g, 0.0, 1.0).q_class == "any"


def test_nsc_perp_and_line():
    tilted = fixtures.planar_perp(TILT, 3)
    assert isinstance(classify_nsc(tilted, 0.0, 1.0).certificate, NonSolution)
    assert isinstance(classify_nsc(tilted, 1.0, 0.0).certificate, PlanarPerp)
    assert isinstance(classify_nsc(fixtures.planar_perp(HORIZONTAL, 3), 1.0, 1.0).certificate, PlanarPerp)
    assert isinstance(classify_nsc(fixtures.line((1, 1, 1)), 1.0, 3.0).certificate, Line)


def test_nsc_rejection_has_evolution_witness():
    f = fixtures.planar_perp(TILT, 3)
    cert = classify_nsc(f, 0.0, 1.0)
    assert cert.certificate.residual > 1e-6
    assert verify_certificate(f, cert)
    # forging an acceptance is caught
    assert not verify_certificate(f, NscCertificate(classify_euler(f), 0.0, 1.0))


def test_nsc_dict():
    d = classify_nsc(fixtures.abc(), 0.1, 0.0).to_dict()
    assert d["certificate"]["tag"] == "Beltrami" and math.isclose(d["nu"], 0.1)
