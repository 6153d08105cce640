import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pinchflow import geometry as geo
from pinchflow import thresholds as th

CTX7 = th.SphereContext(7)


def test_equator():
    s = geo.curvature_of(geo.Equator(7), CTX7)
    assert (s.H, s.normA2, s.normAring2, s.P2, s.normRmPerp2) == (0, 0, 0, 0, 0)
    assert geo.classify(s, th.SQRT_A, CTX7) is geo.Classification.STRICTLY_INSIDE
    assert geo.ricci_lower_bound(s, CTX7) == pytest.approx(6)
    U, f = geo.pinching_margin_U(s, th.SQRT_A, CTX7, 0.0, 0.3)
    assert U == pytest.approx(-th.ring_value(th.SQRT_A, CTX7, 0.0)) and f == 0
    assert all(v >= 0 for v in geo.estimate_checks(s, CTX7, 0.01).values())


def test_clifford_examples():
    s = geo.curvature_of(geo.CliffordTorus(2, math.pi / 4), th.SphereContext(2))
    assert [k for k, _ in s.principal] == pytest.approx([1, -1])
    assert s.normA2 == pytest.approx(2) and abs(s.H) < 1e-15
    s = geo.curvature_of(geo.CliffordTorus(4, math.pi / 3), th.SphereContext(4))
    assert s.principal[0][0] == pytest.approx(math.sqrt(3))
    assert s.principal[1] == (pytest.approx(-1 / math.sqrt(3)), 3)
    assert s.normA2 == pytest.approx(4) and abs(s.H) < 1e-14


def test_sphere_example():
    s = geo.curvature_of(geo.GeodesicSphere(7, math.pi / 4), CTX7)
    assert s.normA2 == pytest.approx(7) and s.H == pytest.approx(7) and s.normAring2 == 0
    # a(49) evaluated in 30 digits
    mp.mp.dps = 30
    a49 = mp.sqrt((mp.mpf(49) / 6 + 2) ** 2 + 10)
    assert float(a49) == pytest.approx(math.sqrt(113.36111111111111), rel=1e-12)
    assert geo.classify(s, th.SQRT_A, CTX7) is geo.Classification.STRICTLY_INSIDE
    assert geo.ricci_lower_bound(s, CTX7) == pytest.approx(12)
    assert geo.estimate_checks(s, CTX7, 0.001)["lemma43"] == 0.0
    assert geo.pinching_margin_U(s, th.SQRT_A, CTX7, 0.01, 0.5)[1] == 0


@settings(max_examples=100)
@given(st.integers(2, 30), st.floats(0.01, math.pi - 0.01), st.floats(0.1, 10))
def test_sphere_closed_form(n, t, kbar):
    ctx = th.SphereContext(n, kbar)
    rho = t / math.sqrt(kbar)
    s = geo.curvature_of(geo.GeodesicSphere(n, rho), ctx)
    cot = math.sqrt(kbar) / math.tan(t)
    assert s.normA2 == pytest.approx(n * cot * cot, rel=1e-12, abs=1e-12)
    assert s.normAring2 == 0 and s.R2 == pytest.approx(s.normH2 * s.normA2, rel=1e-12, abs=1e-12)
    # umbilic spheres: the Ricci bound is the intrinsic Ricci (n-1)(K + cot^2)
    assert geo.ricci_lower_bound(s, ctx) == pytest.approx((n - 1) * (kbar + cot * cot), rel=1e-12)


@settings(max_examples=100)
@given(st.integers(2, 30), st.floats(0.02, math.pi / 2 - 0.02), st.floats(0.1, 10))
def test_torus_invariants(n, psi, kbar):
    ctx = th.SphereContext(n, kbar)
    s = geo.curvature_of(geo.CliffordTorus(n, psi), ctx)
    t = math.tan(psi)
    assert s.H == pytest.approx(math.sqrt(kbar) * (t - (n - 1) / t), rel=1e-12, abs=1e-9)
    assert s.normA2 == pytest.approx(kbar * (t * t + (n - 1) / t ** 2), rel=1e-12)
    assert s.normAring2 >= 0
    assert s.normAring2 == pytest.approx(s.normA2 - s.normH2 / n, rel=1e-9, abs=1e-9 * s.normA2)
    cubes = sum(k ** 3 * m for k, m in s.principal)
    assert s.R3 == pytest.approx(s.H * cubes, rel=1e-12, abs=1e-12)
    assert s.R1 == pytest.approx(s.normA2 ** 2, rel=1e-12)


@pytest.mark.parametrize("n", range(2, 31))
def test_minimal_clifford(n):
    s = geo.curvature_of(geo.CliffordTorus(n, geo.minimal_clifford_psi(n)), th.SphereContext(n))
    assert abs(s.H) < 1e-13 * n and s.normA2 == pytest.approx(n, rel=1e-14)


def test_sharpness_examples():
    lhs, rhs = geo.sharpness_gap(geo.CliffordTorus(4, math.pi / 4), th.SphereContext(4))
    assert lhs == pytest.approx(8 / 9, rel=1e-14) and rhs == pytest.approx(8 / 9, rel=1e-14)
    for psi in np.linspace(0.05, 1.5, 20):
        lhs, rhs = geo.sharpness_gap(geo.CliffordTorus(2, psi), th.SphereContext(2))
        assert lhs == 0 and rhs == 0
    with pytest.raises(ValueError):
        geo.sharpness_gap(geo.CliffordTorus(4, 0.5), th.SphereContext(4, 2.0))


def test_sharpness_identity_from_independent_fractions():
    # rebuild |A|^2 and |H|^2 from tan psi with exact rationals, independently of the module
    for n in (3, 7, 12):
        for psi in (0.2, 0.7, 1.3):
            t = Fraction(math.tan(psi))
            A2 = t * t + (n - 1) / (t * t)
            H2 = (t - (n - 1) / t) ** 2
            gap = A2 * A2 - (H2 / (n - 1) + 2) ** 2 - (2 * n - 4)
            lhs, rhs = geo.sharpness_gap(geo.CliffordTorus(n, psi), th.SphereContext(n))
            assert lhs == float(gap) and rhs == pytest.approx(float(gap), rel=1e-14)
            assert lhs > 0


def test_float_path_agrees_where_well_conditioned():
    lhs_x, rhs_x = geo.sharpness_gap(geo.CliffordTorus(7, 0.9), CTX7)
    lhs_f, rhs_f = geo.sharpness_gap(geo.CliffordTorus(7, 0.9), CTX7, exact=False)
    assert lhs_f == pytest.approx(lhs_x, rel=1e-10) and rhs_f == pytest.approx(rhs_x, rel=1e-14)


def test_torus_classification():
    for n in range(3, 12):
        for psi in np.linspace(0.15, 1.5, 15):
            ctx = th.SphereContext(n)
            s = geo.curvature_of(geo.CliffordTorus(n, psi), ctx)
            assert geo.classify(s, th.SQRT_A, ctx) is geo.Classification.OUTSIDE
    # the coefficient (n-1)^2 - 1 vanishes for n = 2: tori sit on the boundary
    ctx2 = th.SphereContext(2)
    s = geo.curvature_of(geo.CliffordTorus(2, 0.8), ctx2)
    assert geo.classify(s, th.SQRT_A, ctx2) is geo.Classification.BOUNDARY


def test_torus_margin_positive():
    ctx = th.SphereContext(7)
    s = geo.curvature_of(geo.CliffordTorus(7, math.pi / 4), ctx)
    U, _ = geo.pinching_margin_U(s, th.SQRT_A, ctx, 0.0, 0.0)
    assert U > 0
    assert geo.ricci_lower_bound(geo.curvature_of(geo.CliffordTorus(4, math.pi / 4), th.SphereContext(4)),
                                 th.SphereContext(4)) == pytest.approx(0, abs=1e-14)


def test_classify_profile_dimension_mismatch():
    s = geo.curvature_of(geo.Equator(4), th.SphereContext(4))
    with pytest.raises(th.DimensionError):
        geo.classify(s, th.ThresholdProfile(th.Kind.GAMMA), th.SphereContext(4))


def test_parameter_validation():
    with pytest.raises(ValueError):
        geo.curvature_of(geo.GeodesicSphere(4, 4.0), th.SphereContext(4))
    with pytest.raises(ValueError):
        geo.curvature_of(geo.CliffordTorus(4, 1.6), th.SphereContext(4))
    with pytest.raises(ValueError):
        geo.pinching_margin_U(geo.curvature_of(geo.Equator(4), th.SphereContext(4)), th.SQRT_A,
                              th.SphereContext(4), 0.1, 0.0)
    with pytest.raises(ValueError):
        geo.parse_model("cube:side=1", 4)
    assert geo.parse_model("sphere:rho=0.5", 4) == geo.GeodesicSphere(4, 0.5)
    assert geo.parse_model("clifford:psi=0.3", 4) == geo.CliffordTorus(4, 0.3)
    assert geo.parse_model("equator", 4) == geo.Equator(4)


def test_r1_factor_is_configurable():
    s1 = geo.curvature_of(geo.GeodesicSphere(5, 1.0), th.SphereContext(5))
    s2 = geo.curvature_of(geo.GeodesicSphere(5, 1.0), th.SphereContext(5), r1_factor=2.0)
    assert s2.R1 == pytest.approx(2 * s1.R1)
