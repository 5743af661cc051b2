r"""Relative eta function, partition function, Casimir energy and force.

With :math:`R` and :math:`F` the residue and finite part of the relative
zeta function at :math:`s=-1/2`,

.. math::
    \log Z = -\tfrac{\beta}{2} F - \beta(1 - \log 2\ell) R - \log\eta(\beta),
    \qquad E_c = \tfrac12 F + (1 - \log 2\ell) R,

and :math:`p = -\partial E_c/\partial a`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from .errors import CapabilityError, DomainError, SpectrumError
from .models import H1, H3, R1, R3, Model, Variant
from .numerics import QuadratureSpec, ZetaLaurent, integrate_interval, integrate_semi_infinite
from .report import VerificationReport
from .spectral import spectral_measure
from .zeta import EULER_GAMMA, laurent_at_minus_half, zeta0_quadrature

PI = math.pi
LOG2 = math.log(2.0)
# log(1 - e^{-u}) is below 1e-26 in size beyond this point
_ETA_CUTOFF = 60.0


@dataclass(frozen=True)
class ThermalParams:
    """Inverse temperature ``beta`` and renormalisation scale ``ell``."""

    beta: float
    ell: float = 1.0

    def __post_init__(self):
        if not (self.beta > 0 and self.ell > 0):
            raise DomainError("beta and ell must be positive")


# ---------------------------------------------------------------------------
# eta function


def eta_integral(model: Model, tau: float, spec: QuadratureSpec | None = None,
                 measure: Callable | None = None, with_error: bool = False):
    r""":math:`\int_0^\infty \log(1-e^{-\tau v})\,e(v)\,dv` with no spectrum check.

    Integrated in :math:`u = \tau v`; the logarithmic singularity at 0 is
    handled by the endpoint-robust first cell. ``measure`` replaces the
    closed-form density (e.g. by the cross-cut limit).
    """
    if not tau > 0:
        raise DomainError("tau must be positive")
    spec = spec or QuadratureSpec()
    dens = measure or (lambda v: spectral_measure(model, v))
    period = None
    if model.geometry.half:
        period = min(PI * tau / model.a, _ETA_CUTOFF / 8)

    def f(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            lg = np.log(-np.expm1(-u))
        return lg * dens(u / tau) / tau

    if measure is not None:
        f = np.vectorize(lambda u: math.log(-math.expm1(-u)) * dens(u / tau) / tau)
    val, err = integrate_interval(f, 0.0, _ETA_CUTOFF, spec, period=period)
    val = float(val.real)
    return (val, err) if with_error else val


def log_eta(model: Model, tau: float, spec: QuadratureSpec | None = None,
            allow_bound_state: bool = False) -> float:
    """Relative eta function for a model with purely continuous spectrum.

    Raises
    ------
    SpectrumError
        If the model has a bound state, unless ``allow_bound_state`` is set,
        in which case only the continuum contribution is returned.
    """
    if not allow_bound_state and model.has_bound_state:
        raise SpectrumError(f"{model.geometry} with g_R={model.g_R}, a={model.a} has a bound state")
    return eta_integral(model, tau, spec)


def _binet(x: float) -> float:
    """Binet remainder log Gamma(x) - (x - 1/2) log x + x - log(2 pi)/2."""
    return float(special.gammaln(x) - (x - 0.5) * math.log(x) + x - 0.5 * math.log(2 * PI))


def log_eta_closed(model: Model, tau: float, variant: Variant = "derived") -> float:
    r"""Gamma-function closed form of the eta function on R1 and R3.

    Both displayed forms reduce to a Binet remainder: R1 to
    :math:`-\mu(g_R\tau/2)`, R3 to :math:`+\mu(\tau/(4\pi^3 g_R))`. The
    measure integral gives the opposite sign in both cases, which is what
    ``variant="derived"`` returns.
    """
    g = model.g_R
    if model.geometry == R1:
        x = g * tau / 2
        shown = -special.gammaln(x) - 0.5 * math.log(x) + x * (math.log(x) - 1) + 0.5 * math.log(2 * PI)
    elif model.geometry == R3:
        y = tau / (4 * PI**3 * g)
        shown = special.gammaln(y) + 0.5 * math.log(y) - y * (math.log(y) - 1) - 0.5 * math.log(2 * PI)
    else:
        raise CapabilityError(f"no closed eta function for {model.geometry}")
    if not g > 0:
        raise DomainError("closed form needs g_R > 0")
    return float(shown) if variant == "paper" else -float(shown)


# ---------------------------------------------------------------------------
# Laurent data, partition function, energy


def laurent_data(model: Model, spec: QuadratureSpec | None = None,
                 variant: Variant = "derived") -> ZetaLaurent:
    """Residue and finite part at s = -1/2 used by the thermodynamic formulas.

    ``variant="paper"`` uses the displayed whole-space zeta functions and,
    for H3, the displayed residue ``2/(pi^2 g_R)``.
    """
    lz = laurent_at_minus_half(model, spec, variant)
    if variant == "paper" and model.geometry == H3:
        return ZetaLaurent(lz.location, complex(2 / (PI**2 * model.g_R)), lz.finite_part)
    return lz


def log_partition(model: Model, thermal: ThermalParams, spec: QuadratureSpec | None = None,
                  variant: Variant = "derived", allow_bound_state: bool = False) -> float:
    """Relative partition function log Z."""
    lz = laurent_data(model, spec, variant)
    res, fp = lz.residue.real, lz.finite_part.real
    beta, ell = thermal.beta, thermal.ell
    eta = log_eta(model, beta, spec, allow_bound_state)
    return -0.5 * beta * fp - beta * (1 - math.log(2 * ell)) * res - eta


def _energy_displayed(model: Model, ell: float, spec: QuadratureSpec | None) -> float:
    g, a = model.g_R, model.a
    if model.geometry == H3:
        z0 = zeta0_quadrature(model, -0.5, spec).real
        return (1 + LOG2) / (2 * PI * a) + 2 / (PI**2 * g) * (EULER_GAMMA + 1 + math.log(a / ell)) + z0 / 2
    if model.geometry == H1:
        z0 = zeta0_quadrature(model, -0.5, spec).real
        return -g / 8 * (2 * EULER_GAMMA - a * g * PI * LOG2 + 2 * math.log(a / ell)) + z0 / 2
    if model.geometry == R1:
        return PI * g / 4
    if model.geometry == R3:
        return -2 * (math.log(ell / (2 * PI**2 * g)) - 1) / (8 * PI**3 * g)
    raise CapabilityError(f"no energy for {model.geometry}")


def casimir_energy(model: Model, ell: float = 1.0, spec: QuadratureSpec | None = None,
                   variant: Variant = "derived", allow_bound_state: bool = False) -> float:
    """Casimir energy, the beta-linear part of -log Z.

    ``variant="derived"`` composes the Laurent data; ``variant="paper"``
    evaluates the displayed energy formulas.
    """
    if not ell > 0:
        raise DomainError("ell must be positive")
    if not allow_bound_state and model.has_bound_state:
        raise SpectrumError(f"{model.geometry} with g_R={model.g_R}, a={model.a} has a bound state")
    if variant == "paper":
        return _energy_displayed(model, ell, spec)
    lz = laurent_data(model, spec, variant)
    return 0.5 * lz.finite_part.real + (1 - math.log(2 * ell)) * lz.residue.real


def casimir_force(model: Model, ell: float = 1.0, spec: QuadratureSpec | None = None,
                  variant: Variant = "derived", with_error: bool = False):
    """Force ``-dE_c/da`` by a Richardson-refined central difference.

    Steps ``h`` and ``h/2`` with ``h = max(1e-4 a, 1e-6)``; the difference
    of the two estimates is returned as the error estimate.
    """
    if not model.geometry.half:
        raise CapabilityError("the energy does not depend on a in the whole space")
    a = model.a
    h = max(1e-4 * a, 1e-6)
    if h >= a:
        raise DomainError("a too small for the difference step")

    def energy(x):
        return casimir_energy(model.with_a(x), ell, spec, variant)

    def central(k):
        return -(energy(a + k) - energy(a - k)) / (2 * k)

    d1, d2 = central(h), central(h / 2)
    p = (4 * d2 - d1) / 3
    return (p, abs(d2 - d1)) if with_error else p


# ---------------------------------------------------------------------------
# small-a constants and force expansion


def _den(u):
    return 1 + 4 * u * u - 4 * u * np.sin(2 * u)


def _i0_integrand(u):
    u = np.asarray(u, dtype=float)
    su = np.sinc(u / PI)  # sin(u)/u
    return -2 / PI * su * (np.sin(3 * u) + 2 * u * np.cos(5 * u)) / _den(u)


def _i1_integrand(u):
    u = np.asarray(u, dtype=float)
    su = np.sinc(u / PI)
    num = 4 * u * (1 + 4 * u * u) * np.cos(3 * u) - 4 * u * np.cos(u) - 4 * u * u * np.sin(5 * u) \
        + (1 + 16 * u * u) * np.sin(u)
    return -4 / PI * su * num / _den(u) ** 2


def _i2_integrand(u):
    u = np.asarray(u, dtype=float)
    num = u * np.sin(u) * (8 * u**3 * np.cos(u) - 6 * u * np.cos(3 * u) - 12 * u * u * np.sin(u)
                           + np.sin(5 * u))
    return -32 / PI * num / _den(u) ** 3


@dataclass(frozen=True)
class InConstants:
    I0: float
    I1: float
    I2: float
    err_est: float

    def __iter__(self):
        return iter((self.I0, self.I1, self.I2))


@lru_cache(maxsize=8)
def _in_cached(spec: QuadratureSpec) -> InConstants:
    vals, errs = [], []
    for f in (_i0_integrand, _i1_integrand, _i2_integrand):
        v, e = integrate_semi_infinite(f, spec, period=PI, real=True)
        vals.append(v)
        errs.append(e)
    return InConstants(*vals, err_est=max(errs))


def In_constants(spec: QuadratureSpec | None = None) -> InConstants:
    """The three small-a integrals of the H3 force expansion."""
    return _in_cached(spec or QuadratureSpec())


@dataclass(frozen=True)
class ForceExpansion:
    """Small-a force as ``sum coefficients[k] * a**k``."""

    geometry: str
    coefficients: dict = field(default_factory=dict)

    def __call__(self, a: float) -> float:
        return sum(c * a**k for k, c in self.coefficients.items())


def force_small_a(model: Model, spec: QuadratureSpec | None = None,
                  variant: Variant = "derived") -> ForceExpansion:
    r"""Leading small-a terms of the force.

    H3: :math:`(1+\log2+\pi I_0)/(2\pi)\,a^{-2} - 2/(\pi^3 g_R)\,a^{-1}
    - 2I_2/(\pi^4 g_R^2)`; the displayed form (``variant="paper"``) has
    :math:`2\pi I_0` and :math:`2/(\pi^2 g_R)`.
    H1: :math:`g_R/(4a) + \pi g_R^2\log2/8` in both variants.
    """
    g = model.g_R
    if model.geometry == H3:
        I0, _, I2 = In_constants(spec)
        if variant == "paper":
            c2, c1 = (1 + LOG2 + 2 * PI * I0) / (2 * PI), -2 / (PI**2 * g)
        else:
            c2, c1 = (1 + LOG2 + PI * I0) / (2 * PI), -2 / (PI**3 * g)
        return ForceExpansion("H3", {-2: c2, -1: c1, 0: -2 * I2 / (PI**4 * g * g)})
    if model.geometry == H1:
        return ForceExpansion("H1", {-1: g / 4, 0: g * g * PI * LOG2 / 8})
    raise CapabilityError(f"no force expansion for {model.geometry}")


def zeta0_small_a(model: Model, spec: QuadratureSpec | None = None) -> float:
    """Leading small-a form of zeta0(-1/2): H3 ``(I0 + ab I1 + a^2b^2 I2)/a``, H1 ``-(2 log2/pi) a b^2``."""
    a, b = model.a, model.b
    if model.geometry == H3:
        I0, I1, I2 = In_constants(spec)
        return (I0 + a * b * I1 + (a * b) ** 2 * I2) / a
    if model.geometry == H1:
        return -2 * LOG2 / PI * a * b * b
    raise CapabilityError(f"no small-a expansion for {model.geometry}")


# ---------------------------------------------------------------------------
# uniform integrability bound


def scaled_denominator(x, a: float, b: float):
    """Denominator of the H3 integrand in the scaled variable x = a v."""
    x = np.asarray(x, dtype=float)
    return PI * x * (1 + 4 * a * a * b * b + 4 * x * x + 4 * a * b * np.cos(2 * x) - 4 * x * np.sin(2 * x))


def denominator_lower_bound(x, variant: Variant = "derived"):
    r"""Minimum over ``a`` of :func:`scaled_denominator`.

    Minimising the quadratic in ``a`` gives :math:`\pi x(\sin 2x - 2x)^2`;
    ``variant="paper"`` returns the displayed
    :math:`\pi x(1 + \cos^2(2x)/2 + 4x^2 - 4x\sin 2x)`.
    """
    x = np.asarray(x, dtype=float)
    if variant == "paper":
        return PI * x * (1 + np.cos(2 * x) ** 2 / 2 + 4 * x * x - 4 * x * np.sin(2 * x))
    return PI * x * (np.sin(2 * x) - 2 * x) ** 2


def uniform_bound_check(b: float, a_values, x_values, variant: Variant = "derived") -> VerificationReport:
    """Check the a-uniform lower bound of the scaled denominator on a grid."""
    rep = VerificationReport(title=f"uniform denominator bound b={b} ({variant})")
    x = np.asarray(x_values, dtype=float)
    lower = denominator_lower_bound(x, variant)
    worst = math.inf
    for a in a_values:
        gap = scaled_denominator(x, a, b) - lower
        worst = min(worst, float(np.min(gap / np.maximum(np.abs(lower), 1e-300))))
    rep.add("min relative gap D(x,a) - D(x,a0)", worst, 0.0, ok=worst >= -1e-12)
    pos = bool(np.all(lower[x > 0] > 0))
    rep.add("lower bound positive for x > 0", pos, True, ok=pos)
    return rep
