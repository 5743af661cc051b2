r"""Relative zeta function :math:`\zeta(s) = \int_0^\infty v^{-2s} e(v)\,dv`.

Whole-space models have closed forms. Half-space models split the density
as :math:`e = e_0 + e_\infty`; the :math:`e_\infty` part integrates in closed
form (and continues meromorphically), the :math:`e_0` part is integrated
numerically and is regular for :math:`-1 < \operatorname{Re} s < 1/2`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, PoleError, StripError
from .models import H1, H3, R1, R3, Geometry, Model, Variant
from .numerics import QuadratureSpec, ZetaLaurent, gamma_fn, integrate_semi_infinite, laurent_extract
from .spectral import e_infinity, spectral_measure

PI = math.pi
EULER_GAMMA = float(np.euler_gamma)
S_POLE = -0.5


@dataclass(frozen=True)
class ZetaEvaluation:
    """Value of the relative zeta function with its two parts.

    ``measure_value`` holds the direct measure integral for whole-space
    models when ``s`` lies inside the strip where it converges.
    """

    s: complex
    value: complex
    zeta0: complex
    zeta_inf: complex
    strip_ok: bool
    measure_value: complex | None = None
    err_est: float = 0.0


def _cpow(base: float, expo: complex) -> complex:
    return cmath.exp(expo * math.log(base))


def _in_strip(s: complex, lo: float = -0.5, hi: float = 0.5) -> bool:
    return lo < complex(s).real < hi


def sin_gamma(s: complex) -> complex:
    r""":math:`\sin(\pi s)\Gamma(-2s-1)` written as :math:`\pi / (2\cos(\pi s)\Gamma(2s+2))`.

    The rewritten form is regular at ``s = 0`` (value :math:`\pi/2`), so no
    limit has to be taken there.
    """
    s = complex(s)
    c = cmath.cos(PI * s)
    if abs(c) < 1e-15:
        raise PoleError("sin(pi s) Gamma(-2s-1) has a pole", location=s)
    return PI / (2 * c * gamma_fn(2 * s + 2))


def zeta_closed_whole(geometry: Geometry, g_R: float, s: complex, variant: Variant = "derived") -> complex:
    r"""Closed-form relative zeta function on the line and in 3-space.

    R3: :math:`\tfrac12 (2\pi^2 g_R)^{2s} / \cos\pi s`.
    R1: :math:`-(\pi g_R)^{-2s} / (2\cos\pi s)`, which is what the spectral
    measure integrates to. ``variant="paper"`` gives the displayed
    :math:`-(\pi g_R)^{-2s}/(2\sin\pi s)`.

    Negative couplings carry the sign of :math:`g_R` in front.
    """
    s = complex(s)
    sign = 1.0 if g_R > 0 else -1.0
    if geometry == R3:
        c = cmath.cos(PI * s)
        if abs(c) < 1e-15:
            raise PoleError("cos(pi s) = 0", location=s)
        return sign * 0.5 * _cpow(2 * PI**2 * abs(g_R), 2 * s) / c
    if geometry == R1:
        if math.isinf(g_R):
            raise CapabilityError("R1 with g_R = inf has no relative zeta function")
        trig = cmath.sin(PI * s) if variant == "paper" else cmath.cos(PI * s)
        if abs(trig) < 1e-15:
            raise PoleError("closed form has a pole", location=s)
        return -sign * _cpow(PI * abs(g_R), -2 * s) / (2 * trig)
    raise CapabilityError(f"no whole-space closed form for {geometry}")


def zeta_inf_closed(model: Model, s: complex, allow_continuation: bool = False) -> complex:
    r"""Integral of :math:`v^{-2s} e_\infty(v)` in closed form (H3, H1).

    Inside :math:`-1/2 < \operatorname{Re} s < 1/2` this is the integral
    itself; outside it is its meromorphic continuation, available only with
    ``allow_continuation=True``.
    """
    s = complex(s)
    if not allow_continuation and not _in_strip(s):
        raise StripError(f"Re s = {s.real} outside (-1/2, 1/2)")
    a, b = model.a, model.b
    h = sin_gamma(s)
    if model.geometry == H3:
        return 4 / PI * _cpow(2 * a, 2 * s) * h * (a * b + s + _cpow(2, 2 * s))
    if model.geometry == H1:
        return _cpow(2 * a, 2 * s + 1) * b * (2 * s + (_cpow(2, 2 * s + 1) - 1) * a * b) / PI * h
    raise CapabilityError(f"no e_inf split for {model.geometry}")


def _natural_scale(model: Model) -> float:
    """Frequency scale used to make the quadrature variable dimensionless."""
    geo = model.geometry
    if geo.half:
        return model.a
    if geo == R1:
        return abs(model.b)
    return 2 * PI**2 * abs(model.g_R)


def zeta0_quadrature(model: Model, s: complex, spec: QuadratureSpec | None = None,
                     with_error: bool = False):
    r""":math:`\int_0^\infty v^{-2s} e_0(v)\,dv` for :math:`-1 < \operatorname{Re} s < 1/2`.

    The integral is taken in :math:`x = c v` with ``c`` the natural scale of
    the model (``a`` in the half space), so the oscillation period in ``x``
    is :math:`\pi` independently of the parameters. For whole-space models
    :math:`e_0 = e` and the integral is the direct measure route.
    """
    model.require_zeta()
    s = complex(s)
    geo = model.geometry
    lo = -1.0 if geo.half else -0.5
    if not _in_strip(s, lo, 0.5):
        raise StripError(f"Re s = {s.real} outside ({lo}, 1/2)")
    spec = spec or QuadratureSpec()
    c = _natural_scale(model)

    # x**(-2 Re s) goes to the algebraic weight; the imaginary part stays a phase
    phase = -2j * s.imag

    def integrand(x):
        # near ab = 1 (H1) the v = 0 value is a spike of width |1 - ab|;
        # the algebraic rule samples the endpoint, so stay just off it
        v = np.maximum(x, 1e-10) / c
        e0 = spectral_measure(model, v) - e_infinity(model, v)
        if phase == 0:
            return e0
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(x > 0, np.exp(phase * np.log(np.where(x > 0, x, 1.0))), 1.0) * e0

    period = PI if geo.half else None
    val, err = integrate_semi_infinite(integrand, spec, period=period, real=False,
                                       endpoint_power=-2 * s.real)
    pref = _cpow(c, 2 * s - 1)
    val, err = val * pref, err * abs(pref)
    return (val, err) if with_error else val


def relative_zeta(model: Model, s: complex, spec: QuadratureSpec | None = None,
                  variant: Variant = "derived") -> ZetaEvaluation:
    """Relative zeta function with its parts and bookkeeping.

    Half space: ``zeta0 + zeta_inf`` for ``-1 < Re s < 1/2``, with
    ``strip_ok`` set when ``-1/2 < Re s < 1/2``. Whole space: the closed
    form, cross-checked against the measure integral when it converges.
    """
    model.require_zeta()
    s = complex(s)
    if model.geometry.half:
        z0, err = zeta0_quadrature(model, s, spec, with_error=True)
        zi = zeta_inf_closed(model, s, allow_continuation=True)
        return ZetaEvaluation(s, z0 + zi, z0, zi, _in_strip(s), err_est=err)
    closed = zeta_closed_whole(model.geometry, model.g_R, s, variant)
    measure, err = None, 0.0
    if _in_strip(s):
        measure, err = zeta0_quadrature(model, s, spec, with_error=True)
    return ZetaEvaluation(s, closed, closed, 0.0, True, measure_value=measure, err_est=err)


def zeta_inf_laurent(model: Model) -> ZetaLaurent:
    """Laurent data of the closed-form e_inf part at s = -1/2."""
    return laurent_extract(lambda s: zeta_inf_closed(model, s, allow_continuation=True), S_POLE)


def laurent_at_minus_half(model: Model, spec: QuadratureSpec | None = None,
                          variant: Variant = "derived") -> ZetaLaurent:
    """Residue and finite part of the relative zeta function at s = -1/2.

    Half space: contour extraction on the closed-form e_inf part plus the
    regular e_0 integral at -1/2. Whole space: contour extraction on the
    closed form of the chosen variant.
    """
    model.require_zeta()
    if model.geometry.half:
        lz = zeta_inf_laurent(model)
        z0 = zeta0_quadrature(model, S_POLE, spec)
        return ZetaLaurent(complex(S_POLE), lz.residue, lz.finite_part + z0)
    return laurent_extract(lambda s: zeta_closed_whole(model.geometry, model.g_R, s, variant), S_POLE)


def residue_closed(model: Model, variant: Variant = "derived") -> float:
    r"""Closed-form residue at s = -1/2.

    H3 gives :math:`b/\pi` (``variant="paper"``: :math:`2/(\pi^2 g_R)`),
    H1 gives :math:`-b/(2\pi) = -g_R/4`, R1 gives :math:`-g_R/2` (the sin
    form of ``variant="paper"`` is regular there) and R3 gives
    :math:`1/(4\pi^3 g_R)`.
    """
    geo = model.geometry
    if geo == H3:
        return 2 / (PI**2 * model.g_R) if variant == "paper" else model.b / PI
    if geo == H1:
        return -model.b / (2 * PI)
    if geo == R1:
        return 0.0 if variant == "paper" else -model.g_R / 2
    if geo == R3:
        # cos(pi s) ~ pi (s + 1/2) near -1/2
        return 1 / (4 * PI**3 * model.g_R)
    raise CapabilityError(f"no residue for {geo}")


def finite_part_inf_closed(model: Model) -> float:
    """Closed-form finite part of the e_inf contribution at s = -1/2."""
    a, b = model.a, model.b
    if model.geometry == H3:
        return (1 + math.log(2)) / (PI * a) + 2 * b * (EULER_GAMMA + math.log(2 * a)) / PI
    if model.geometry == H1:
        return b * (1 - EULER_GAMMA - math.log(2 * a) + a * b * math.log(2)) / PI
    raise CapabilityError(f"no e_inf split for {model.geometry}")
