import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltacasimir.bound_states import (dirichlet_levels, eigenvalue_residual, point_spectrum,
                                       spectrum_threshold, verify_pole)
from deltacasimir.errors import CapabilityError
from deltacasimir.models import H1, H2, H3, R1, R3, Model

PI = math.pi


class TestWholeSpace:
    def test_r1_root(self):
        res = point_spectrum(Model(R1, 1.0))
        # 1/g_R = pi/y has the root y = pi g_R
        assert res.has_bound_state
        assert res.eigenvalues == pytest.approx([-PI**2])
        assert res.statement_has_bound_state is False

    def test_r1_negative_coupling(self):
        assert not point_spectrum(Model(R1, -1.0)).has_bound_state

    def test_r3(self):
        assert not point_spectrum(Model(R3, 1.0)).has_bound_state
        res = point_spectrum(Model(R3, -1.0))
        assert res.eigenvalues == pytest.approx([-1 / (4 * PI**4)])

    def test_r1_residual_example(self):
        assert eigenvalue_residual(Model(R1, 1.0), -1.0) == pytest.approx(PI - 1)


class TestHalfSpace:
    def test_dirichlet(self):
        res = point_spectrum(Model(H1, math.inf, 1.0))
        assert res.eigenvalues == pytest.approx([(PI * k) ** 2 for k in range(1, 6)], rel=1e-10)

    @pytest.mark.parametrize("a", [0.3, 1.0, 2.5])
    def test_dirichlet_levels(self, a):
        for k, lam in enumerate(dirichlet_levels(a, 5), 1):
            assert lam == pytest.approx((PI * k / a) ** 2, rel=1e-10)

    def test_dirichlet_residual(self):
        m = Model(H1, math.inf, 1.3)
        for lam in point_spectrum(m).eigenvalues:
            assert eigenvalue_residual(m, lam) <= 1e-10

    def test_h3_example(self):
        m = Model(H3, -1.0, 5.0)
        assert m.b == pytest.approx(-0.2026, abs=1e-4)
        assert m.b + 1 / (2 * m.a) == pytest.approx(-0.1026, abs=1e-4)
        res = point_spectrum(m)
        y = math.sqrt(-res.eigenvalues[0])
        # the root solves y + b + exp(-10 y)/10 = 0
        assert y + m.b + math.exp(-10 * y) / 10 == pytest.approx(0, abs=1e-13)
        assert y == pytest.approx(0.187272, abs=1e-6)
        assert res.eigenvalues[0] == pytest.approx(-0.0350707, abs=1e-7)

    def test_h3_no_bound_state_close_to_wall(self):
        assert not point_spectrum(Model(H3, -1.0, 1.0)).has_bound_state

    def test_h3_positive_coupling(self):
        assert not point_spectrum(Model(H3, 1.0, 5.0)).has_bound_state

    @pytest.mark.parametrize("a, expected", [(0.5, False), (0.8, True)])
    def test_h1_flip(self, a, expected):
        res = point_spectrum(Model(H1, 1.0, a))
        assert res.has_bound_state is expected

    def test_h1_example(self):
        res = point_spectrum(Model(H1, 1.0, 0.8))
        assert res.eigenvalues[0] == pytest.approx(-0.0883949, abs=1e-6)

    def test_h2_unsupported(self):
        with pytest.raises(CapabilityError):
            point_spectrum(Model(H2, 1.0))


class TestThreshold:
    def test_h3(self):
        thr = spectrum_threshold(H3, -1.0)
        assert thr.proof == pytest.approx(PI**2 / 4)
        assert thr.statement == pytest.approx(2 / PI**2)

    def test_h1(self):
        thr = spectrum_threshold(H1, 1.0)
        assert thr.proof == pytest.approx(2 / PI)

    def test_no_threshold(self):
        assert math.isnan(spectrum_threshold(H3, 1.0).proof)
        assert math.isnan(spectrum_threshold(H1, -1.0).proof)

    def test_whole_space(self):
        with pytest.raises(CapabilityError):
            spectrum_threshold(R1, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.2, 5), st.floats(0.05, 3))
    def test_h3_classification_matches_threshold(self, g, a):
        thr = spectrum_threshold(H3, -g).proof
        if abs(a - thr) < 1e-9:
            return
        assert point_spectrum(Model(H3, -g, a)).has_bound_state is (a > thr)


class TestInvariants:
    MODELS = [Model(R1, 1.0), Model(R1, 0.3), Model(R3, -1.0), Model(R3, -0.2), Model(H3, -1.0, 5.0),
              Model(H3, -0.5, 3.0), Model(H1, 1.0, 0.8), Model(H1, 2.0, 1.5), Model(H1, math.inf, 1.0)]

    @pytest.mark.parametrize("m", MODELS, ids=lambda m: f"{m.geometry.label}-{m.g_R}-{m.a}")
    def test_residual_and_pole(self, m):
        res = point_spectrum(m)
        assert res.eigenvalues
        for lam in res.eigenvalues:
            assert eigenvalue_residual(m, lam) <= 1e-10
            assert verify_pole(m, lam)

    def test_not_a_pole(self):
        assert not verify_pole(Model(R1, 1.0), -3.0)

    def test_continuity_in_a(self):
        a = np.linspace(0.8, 3.0, 400)
        lam = np.array([point_spectrum(Model(H1, 1.0, x)).eigenvalues[0] for x in a])
        steps = np.abs(np.diff(lam))
        assert steps.max() <= 10 * (a[1] - a[0])

    def test_h3_continuity_in_a(self):
        a = np.linspace(2.6, 8.0, 400)
        lam = np.array([point_spectrum(Model(H3, -1.0, x)).eigenvalues[0] for x in a])
        assert np.abs(np.diff(lam)).max() <= 10 * (a[1] - a[0])
