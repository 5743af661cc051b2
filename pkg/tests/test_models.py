import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from deltacasimir.errors import CapabilityError, DomainError, PoleError
from deltacasimir.models import (ALL_GEOMETRIES, H1, H2, H3, R1, R2, R3, ExtensionParam, Geometry,
                                 Model, an_bn_constants, dn_cutoff, gn_function, jn_integral,
                                 resolvent_kernel_correction, scattering, trace_closed_form,
                                 trace_resolvent_diff, trace_resolvent_diff_alpha)
from deltacasimir.oracles import quartic_norm_integral

PI = math.pi
SQ2 = math.sqrt(2)
LAMBDAS = (-1.0, -4.0, 1 + 1j, -2 + 3j)


class TestGeometry:
    @pytest.mark.parametrize("label, geo", [("R1", R1), ("H3", H3), ("h2", H2)])
    def test_parse(self, label, geo):
        assert Geometry.parse(label) == geo

    def test_label_roundtrip(self):
        for g in ALL_GEOMETRIES:
            assert Geometry.parse(g.label) == g

    def test_bad_label(self):
        with pytest.raises((DomainError, ValueError)):
            Geometry.parse("X4")


class TestModel:
    @pytest.mark.parametrize("geo, g, b", [(R1, 1.0, 1 / PI), (H3, 1.0, 2 / PI**2), (H1, 1.0, PI / 2)])
    def test_reduced_coupling(self, geo, g, b):
        assert Model(geo, g).b == pytest.approx(b)

    @pytest.mark.parametrize("geo", [R1, H3, H1])
    def test_from_b_roundtrip(self, geo):
        m = Model.from_b(geo, 0.7, 2.0)
        assert m.b == pytest.approx(0.7)
        assert m.a == 2.0

    @pytest.mark.parametrize("kw", [dict(g_R=0.0), dict(a=0.0), dict(a=-1.0)])
    def test_invalid(self, kw):
        base = dict(geometry=H3, g_R=1.0, a=1.0)
        base.update(kw)
        with pytest.raises(DomainError):
            Model(**base)

    def test_r2_not_physical(self):
        with pytest.raises(CapabilityError):
            trace_resolvent_diff(Model(R2, 1.0), -1.0)

    def test_h2_not_zeta(self):
        with pytest.raises(CapabilityError):
            Model(H2, 1.0).require_zeta()

    def test_with_a(self):
        m = Model(H3, 2.0, 1.0).with_a(3.0)
        assert (m.g_R, m.a) == (2.0, 3.0)


class TestExtensionParam:
    @pytest.mark.parametrize("theta", [0.3, 1.0, PI, 4.0])
    def test_cot_relation(self, theta):
        e = ExtensionParam.from_theta(theta)
        assert e.alpha == pytest.approx(1 / math.tan(theta / 2), abs=1e-14)
        assert e.theta == pytest.approx(theta)

    def test_maximal(self):
        assert ExtensionParam.from_theta(PI).alpha == pytest.approx(0, abs=1e-15)


class TestGn:
    def test_whole_examples(self):
        assert gn_function(R3, -1.0) == pytest.approx(-2 * PI**2)
        assert gn_function(R1, -1.0) == pytest.approx(PI)
        assert gn_function(R2, -1.0) == pytest.approx(0, abs=1e-15)

    def test_half_line_example(self):
        assert gn_function(H1, -1.0, 1.0) == pytest.approx(PI * (1 - math.exp(-2)) / 4)

    def test_lambda_zero(self):
        with pytest.raises(DomainError):
            gn_function(R1, 0.0)

    @pytest.mark.parametrize("geo", ALL_GEOMETRIES)
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_conjugation(self, geo, lam):
        a = 0.8 if geo.half else None
        z = complex(lam)
        assert gn_function(geo, z.conjugate(), a) == pytest.approx(np.conj(gn_function(geo, z, a)), rel=1e-13)

    def test_half_line_cutoff_integral(self):
        # int_0^N sin^2(x)/(x^2+1) dx + 1/(2N) tends to the constant term
        cells = int(1e4 / PI)
        f = lambda x: math.sin(x) ** 2 / (x * x + 1)
        q = sum(integrate.quad(f, k * PI, (k + 1) * PI)[0] for k in range(cells))
        closed = gn_function(H1, -1.0, 1.0).real
        assert closed == pytest.approx(PI * (1 - math.exp(-2)) / 4, rel=1e-14)
        assert q + 1 / (2 * cells * PI) == pytest.approx(closed, abs=1e-6)


class TestConstants:
    def test_whole(self):
        assert an_bn_constants(R3) == pytest.approx((SQ2 * PI**2, -SQ2 * PI**2))
        assert an_bn_constants(R1) == pytest.approx((PI / SQ2, PI / SQ2))
        assert an_bn_constants(R2) == pytest.approx((PI**2 / 2, 0.0))

    def test_a3_quadrature(self):
        assert quartic_norm_integral(3, "numeric") == pytest.approx(an_bn_constants(R3)[0], rel=1e-9)

    @pytest.mark.parametrize("geo", [R1, R2, R3, H1, H2, H3])
    def test_definition(self, geo):
        a = 1.3 if geo.half else None
        an, bn = an_bn_constants(geo, a)
        g = complex(gn_function(geo, 1j, a))
        assert an == pytest.approx(g.imag)
        assert bn == pytest.approx(g.real)

    def test_half_needs_a(self):
        with pytest.raises(DomainError):
            an_bn_constants(H3)

    def test_h1_displayed_matches(self):
        assert an_bn_constants(H1, 0.9, "paper") == pytest.approx(an_bn_constants(H1, 0.9), rel=1e-12)


class TestCutoff:
    @pytest.mark.parametrize("geo, N, expected", [(R2, 100, 2 * PI * math.log(100)), (H3, 10, 10 * PI),
                                                  (R1, 10, -0.2), (R3, 2, 8 * PI), (H2, math.e, PI / 2)])
    def test_examples(self, geo, N, expected):
        assert dn_cutoff(geo, N) == pytest.approx(expected)

    def test_half_line_variants(self):
        assert dn_cutoff(H1, 10) == pytest.approx(-0.05)
        assert dn_cutoff(H1, 10, "paper") == pytest.approx(-0.2)

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            dn_cutoff(R1, 0)


class TestTrace:
    def test_r1_example(self):
        assert trace_resolvent_diff(Model.from_b(R1, 2.0), -1.0) == pytest.approx(-0.5)

    def test_h3_example(self):
        m = Model.from_b(H3, 1.0, 1.0)
        expected = -(1 - math.exp(-2)) / (2 + math.exp(-2) / 2)
        assert trace_resolvent_diff(m, -1.0) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("geo", [R1, R3, H3, H1])
    def test_weak_coupling(self, geo):
        assert abs(trace_resolvent_diff(Model(geo, 1e-12, 1.0), -1.0)) < 1e-9

    @pytest.mark.parametrize("geo", [R1, H3, H1])
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_closed_form(self, geo, lam):
        m = Model(geo, 0.7, 1.2)
        assert trace_closed_form(m, lam) == pytest.approx(trace_resolvent_diff(m, lam), rel=1e-12)

    @pytest.mark.parametrize("geo", [R1, R3, H3, H1])
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_conjugation(self, geo, lam):
        m = Model(geo, 0.7, 1.2)
        z = complex(lam)
        assert trace_resolvent_diff(m, z.conjugate()) == pytest.approx(np.conj(trace_resolvent_diff(m, z)),
                                                                       rel=1e-13, abs=1e-300)

    @pytest.mark.parametrize("geo", [R1, R3])
    def test_whole_space_independent_of_a(self, geo):
        vals = [trace_resolvent_diff(Model(geo, 0.7, a), -2 + 1j) for a in (0.5, 1.0, 2.0)]
        assert vals[0] == vals[1] == vals[2]

    @pytest.mark.parametrize("geo", [R1, R3, H3, H1])
    def test_large_lambda_decay(self, geo):
        m = Model(geo, 0.7, 1.2)
        t = np.geomspace(1e2, 1e6, 20)
        prod = np.abs(t * trace_resolvent_diff(m, -t))
        assert np.all(prod < 10)

    def test_pole(self):
        m = Model(R1, 1.0)
        with pytest.raises(PoleError) as exc:
            trace_resolvent_diff(m, -PI**2)
        assert exc.value.location == pytest.approx(-PI**2)

    @pytest.mark.parametrize("geo", [R1, R3, H1, H3])
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_numeric_jn(self, geo, lam):
        """Trace against direct quadrature of the rank-one integrand."""
        a = 0.9
        m = Model(geo, 0.7, a)
        n = geo.dim
        w = {1: lambda r: 2.0, 3: lambda r: 4 * PI * r * r}[n]
        if geo.half:
            ang = (lambda r: np.cos(2 * a * r)) if n == 1 else (lambda r: np.sinc(2 * a * r / PI))
            # sin^2 = (1 - cos(2 a x_1)) / 2, integrated over the whole space
            f = lambda r: w(r) * 0.5 * (1 - ang(r)) / (r * r - lam) ** 2
        else:
            f = lambda r: w(r) / (r * r - lam) ** 2
        re = integrate.quad(lambda r: f(r).real, 0, np.inf, limit=2000, epsabs=1e-13)[0]
        im = integrate.quad(lambda r: f(r).imag, 0, np.inf, limit=2000, epsabs=1e-13)[0]
        J = complex(re, im)
        expected = -J / (m.inv_g - gn_function(geo, lam, a if geo.half else None))
        assert trace_resolvent_diff(m, lam) == pytest.approx(expected, rel=1e-7)

    def test_identity_rim(self):
        m = Model.from_b(H3, 1.0, 1.0)
        lam = -2 + 0.5j
        r = trace_resolvent_diff(m, lam)
        J = jn_integral(H3, lam, 1.0)
        assert r * (m.inv_g - gn_function(H3, lam, 1.0)) + J == pytest.approx(0, abs=1e-13)


class TestAlphaForm:
    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from([R1, R3, H1, H3]), st.floats(-5, 5).filter(lambda x: abs(x) > 0.05),
           st.floats(-10, 10), st.floats(0.1, 10), st.floats(0.2, 3))
    def test_alpha_vs_physical(self, geo, alpha, re, im, a):
        lam = complex(re, im)
        an, bn = an_bn_constants(geo, a if geo.half else None)
        inv_g = an / alpha + bn
        assume(abs(inv_g) > 1e-6)
        m = Model(geo, 1 / inv_g, a)
        try:
            rhs = trace_resolvent_diff(m, lam)
        except PoleError:
            assume(False)
        lhs = trace_resolvent_diff_alpha(geo, alpha, lam, a if geo.half else None)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    @pytest.mark.parametrize("geo", [R2, H2])
    def test_dimension_two_available(self, geo):
        r = trace_resolvent_diff_alpha(geo, ExtensionParam(0.5), -1.0, 1.0 if geo.half else None)
        assert np.isfinite(r)


class TestKernel:
    def test_r1_origin(self):
        m = Model.from_b(R1, 2.0)
        assert resolvent_kernel_correction(m, -1.0, [0.0], [0.0]) == pytest.approx(-1 / PI)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 5), st.floats(0, 5))
    def test_hermitian(self, x1, x2, y1, y2):
        m = Model(H3, 0.8, 1.1)
        x, y = [x1, x2, 0.3], [y1, y2, -0.2]
        k1 = resolvent_kernel_correction(m, -1.5, x, y)
        k2 = resolvent_kernel_correction(m, -1.5, y, x)
        assert k1 == pytest.approx(np.conj(k2), rel=1e-13, abs=1e-300)

    def test_half_space_nodes(self):
        m = Model(H1, 1.0, 2.0)
        assert abs(resolvent_kernel_correction(m, -1.0, [PI / 2], [0.3])) < 1e-15

    def test_bad_point(self):
        with pytest.raises(DomainError):
            resolvent_kernel_correction(Model(H3, 1.0), -1.0, [1.0], [1.0, 2.0, 3.0])


class TestScattering:
    def test_zero_k(self):
        assert scattering(1.0, 0.3, 0.0).amplitude == pytest.approx(0.6)

    def test_cross_section(self):
        assert scattering(1.0, 1.0, 1.0).cross_section == pytest.approx(0.8)

    def test_length(self):
        assert scattering(1.0, 0.5, 2.0).scattering_length_sq == pytest.approx(1.0)

    def test_bad_mass(self):
        with pytest.raises(DomainError):
            scattering(0.0, 1.0, 1.0)
