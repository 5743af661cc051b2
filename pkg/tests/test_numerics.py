import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltacasimir.errors import BracketError, ConvergenceError, DomainError, OrderError
from deltacasimir.numerics import (QuadratureSpec, bessel_k, find_root, gamma_fn, integrate_interval,
                                   integrate_semi_infinite, laurent_extract, levin_u, log_neg,
                                   sqrt_upper)

PI = math.pi

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
off_cut = st.builds(complex, finite, finite).filter(
    lambda z: abs(z) > 1e-8 and not (z.imag == 0 and z.real >= 0))


class TestSqrtUpper:
    @pytest.mark.parametrize("lam, expected", [(-1, 1j), (3 + 4j, 2 + 1j), (-4, 2j), (-1e-6, 1e-3j)])
    def test_examples(self, lam, expected):
        assert sqrt_upper(lam) == pytest.approx(expected, rel=1e-15)

    def test_rims(self):
        assert sqrt_upper(4, rim="upper") == pytest.approx(2)
        assert sqrt_upper(4, rim="lower") == pytest.approx(-2)

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            sqrt_upper(0)

    def test_bad_rim(self):
        with pytest.raises(DomainError):
            sqrt_upper(-1, rim="middle")

    @settings(max_examples=300, deadline=None)
    @given(off_cut)
    def test_square_and_branch(self, lam):
        w = sqrt_upper(lam)
        assert abs(w * w - lam) <= 1e-14 * abs(lam)
        assert w.imag > 0

    def test_random_batch(self):
        rng = np.random.default_rng(7)
        lam = rng.normal(size=10**4) * 10 ** rng.uniform(-3, 3, 10**4) + 1j * rng.normal(size=10**4)
        w = sqrt_upper(lam)
        assert np.all(np.abs(w * w - lam) <= 1e-14 * np.abs(lam))
        assert np.all(w.imag > 0)

    def test_vectorised_shape(self):
        assert sqrt_upper(np.array([-1.0, -4.0])).shape == (2,)


class TestLogNeg:
    @pytest.mark.parametrize("lam, expected", [(-1, 0), (-math.e**2, 2), (1j, -0.5j * PI)])
    def test_examples(self, lam, expected):
        assert log_neg(lam) == pytest.approx(expected, abs=1e-15)

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            log_neg(0)

    @settings(max_examples=200, deadline=None)
    @given(off_cut)
    def test_exp_inverts(self, lam):
        assert np.exp(log_neg(lam)) == pytest.approx(-lam, rel=1e-12)


class TestGamma:
    @pytest.mark.parametrize("z, expected", [(5, 24), (0.5, math.sqrt(PI)),
                                             (-1.5, 4 * math.sqrt(PI) / 3), (1, 1)])
    def test_examples(self, z, expected):
        assert gamma_fn(z) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(DomainError) as exc:
            gamma_fn(z)
        assert exc.value.pole_order == 1

    def test_recursion_grid(self):
        xs = np.linspace(-9.7, 40.3, 10)
        ys = np.linspace(-3, 3, 10)
        for x in xs:
            for y in ys:
                z = complex(x, y)
                assert gamma_fn(z + 1) == pytest.approx(z * gamma_fn(z), rel=1e-11)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-20, 20), st.floats(-10, 10))
    def test_against_mpmath(self, x, y):
        z = complex(x, y)
        if abs(y) < 1e-6 and abs(x - round(x)) < 1e-6 and round(x) <= 0:
            return
        ref = complex(mp.gamma(mp.mpc(x, y)))
        assert gamma_fn(z) == pytest.approx(ref, rel=1e-12)


class TestBessel:
    @pytest.mark.parametrize("order, z, expected", [(0, 1, 0.42102443824071), (1, 1, 0.60190723019723)])
    def test_examples(self, order, z, expected):
        assert bessel_k(order, z) == pytest.approx(expected, rel=1e-12)

    def test_large_argument(self):
        # leading asymptotics plus the first two corrections 1 - 1/(8z) + 9/(128 z^2)
        ratio = bessel_k(0, 10) * math.sqrt(20 / PI) * math.exp(10)
        assert ratio == pytest.approx(1 - 1 / 80 + 9 / 12800, abs=1e-4)
        assert abs(ratio - 1) < 0.0125

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            bessel_k(0, 0)

    @pytest.mark.parametrize("z", [0.3, 1.0, 2.0, 2.5 + 1j, 3j, -4j, 0.01 + 0.5j, 50])
    def test_derivative_identity(self, z):
        # step along the imaginary direction so both points stay in Re z >= 0
        h = 1e-5j
        d = (bessel_k(0, z + h) - bessel_k(0, z - h)) / (2 * h)
        assert abs(d + bessel_k(1, z)) <= 1e-6 * max(1, abs(bessel_k(1, z)))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 1), st.floats(1e-3, 100), st.floats(-math.pi / 2, math.pi / 2))
    def test_against_mpmath(self, order, r, phi):
        z = r * complex(math.cos(phi), math.sin(phi))
        ref = complex(mp.besselk(order, mp.mpc(z.real, z.imag)))
        assert bessel_k(order, z) == pytest.approx(ref, rel=1e-10)

    def test_conjugation(self):
        z = 1.3 + 2.1j
        assert bessel_k(0, z.conjugate()) == pytest.approx(np.conj(bessel_k(0, z)), rel=1e-14)


class TestQuadrature:
    @pytest.mark.parametrize("f, period, exact", [
        (lambda x: np.exp(-x), None, 1.0),
        (lambda x: 1 / (1 + x * x), None, PI / 2),
        (lambda x: np.sinc(2 * x / PI) * 2, PI / 2, PI / 2),
    ], ids=["exp", "lorentz", "sinc"])
    def test_examples_and_error_bound(self, f, period, exact):
        spec = QuadratureSpec()
        val, err = integrate_semi_infinite(f, spec, period=period)
        assert abs(val - exact) <= max(spec.abs_tol, spec.rel_tol * abs(exact))
        assert abs(val - exact) <= err

    def test_complex_interval(self):
        val, _ = integrate_interval(lambda x: np.exp(1j * x), 0, PI)
        assert val == pytest.approx(2j, abs=1e-12)

    def test_slow_tail(self):
        val, _ = integrate_semi_infinite(lambda x: np.cos(x) / (1 + x), period=PI)
        ref = float(mp.quadosc(lambda x: mp.cos(x) / (1 + x), [0, mp.inf], omega=1))
        assert val == pytest.approx(ref, abs=1e-8)

    def test_nonconvergence(self):
        spec = QuadratureSpec(max_subdivisions=1)
        with pytest.raises(ConvergenceError) as exc:
            integrate_interval(lambda x: np.sin(50 * x * x), 0, 10, spec, period=1.0)
        assert exc.value.partial is not None

    @pytest.mark.parametrize("kw", [dict(abs_tol=0), dict(max_subdivisions=0), dict(tail_cutoff=-1),
                                    dict(tail_order=2)])
    def test_spec_validation(self, kw):
        with pytest.raises(DomainError):
            QuadratureSpec(**kw)

    def test_levin_alternating(self):
        terms = [(-1) ** k / (k + 1) for k in range(15)]
        assert levin_u(terms) == pytest.approx(math.log(2), abs=1e-10)


class TestFindRoot:
    @pytest.mark.parametrize("f, lo, hi, root", [
        (lambda x: x - 1, 0, 2, 1.0),
        (math.cos, 1, 2, PI / 2),
    ])
    def test_examples(self, f, lo, hi, root):
        assert find_root(f, lo, hi) == pytest.approx(root, abs=1e-12)

    def test_transcendental(self):
        y = find_root(lambda y: y - 0.2026 + 0.1 * math.exp(-10 * y), 0, 1)
        assert y == pytest.approx(0.1873, abs=1e-3)
        # fixed-point iteration oracle
        x = 0.2
        for _ in range(200):
            x = 0.2026 - 0.1 * math.exp(-10 * x)
        assert y == pytest.approx(x, abs=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            find_root(lambda x: x * x + 1, -1, 1)


class TestLaurent:
    def test_simple_pole(self):
        lz = laurent_extract(lambda s: 1 / s, 0)
        assert lz.residue == pytest.approx(1, abs=1e-13)
        assert abs(lz.finite_part) < 1e-13

    def test_shifted(self):
        lz = laurent_extract(lambda s: 1 / s + 3, 0)
        assert lz.finite_part == pytest.approx(3, abs=1e-13)

    def test_regular_point(self):
        f = lambda s: -(PI * 1.0) ** (-2 * s) / (2 * np.sin(PI * s))
        lz = laurent_extract(f, -0.5)
        assert abs(lz.residue) <= 1e-10
        assert lz.finite_part == pytest.approx(PI / 2, rel=1e-12)

    @pytest.mark.parametrize("f", [np.exp, np.cos, lambda s: s**3 - 2 * s])
    def test_analytic_has_no_residue(self, f):
        assert abs(laurent_extract(f, 0.3 + 0.1j).residue) <= 1e-10

    def test_gamma_pole(self):
        lz = laurent_extract(gamma_fn, 0.0)
        assert lz.residue == pytest.approx(1, rel=1e-10)
        assert lz.finite_part == pytest.approx(-np.euler_gamma, rel=1e-9)

    def test_double_pole_rejected(self):
        with pytest.raises(OrderError):
            laurent_extract(lambda s: 1 / s**2, 0)
