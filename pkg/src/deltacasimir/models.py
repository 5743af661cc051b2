r"""Operator pairs for the point-perturbed Laplacian.

Six geometries are covered: the whole space :math:`\mathbb{R}^n` and the half
space :math:`\mathbb{H}^n = [0,\infty)\times\mathbb{R}^{n-1}` with a Dirichlet
wall, for ``n = 1, 2, 3``. Everything is expressed in momentum space where the
free operator is multiplication by :math:`|x|^2` and the perturbation is
rank one along :math:`e(x) = e^{iax}` (whole space) or :math:`\sin(ax)` (half
space, ``a`` on the wall normal).

The trace of the resolvent difference is

.. math:: r(\lambda) = -\bigl(1/g_R - g_n(\lambda)\bigr)^{-1} J_n(\lambda),

with :math:`J_n(\lambda) = \int |e|^2 (|x|^2-\lambda)^{-2}`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import CapabilityError, DomainError, PoleError
from .numerics import bessel_k, log_neg, sqrt_upper

Variant = Literal["derived", "paper"]

PI = math.pi
SQRT2 = math.sqrt(2.0)


class Space(str, Enum):
    WHOLE = "whole"
    HALF = "half"


@dataclass(frozen=True)
class Geometry:
    """Whole or half space in dimension 1, 2 or 3."""

    space: Space
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "space", Space(self.space))
        if self.dim not in (1, 2, 3):
            raise DomainError(f"dimension must be 1, 2 or 3, got {self.dim}")

    @property
    def half(self) -> bool:
        return self.space is Space.HALF

    @property
    def label(self) -> str:
        return ("H" if self.half else "R") + str(self.dim)

    @classmethod
    def parse(cls, label: str) -> "Geometry":
        """Build from labels like ``"R1"`` or ``"H3"``."""
        label = label.strip().upper()
        if len(label) != 2 or label[0] not in "RH":
            raise DomainError(f"bad geometry label {label!r}")
        return cls(Space.HALF if label[0] == "H" else Space.WHOLE, int(label[1]))

    def __str__(self):
        return self.label


R1 = Geometry(Space.WHOLE, 1)
R2 = Geometry(Space.WHOLE, 2)
R3 = Geometry(Space.WHOLE, 3)
H1 = Geometry(Space.HALF, 1)
H2 = Geometry(Space.HALF, 2)
H3 = Geometry(Space.HALF, 3)
ALL_GEOMETRIES = (R1, R2, R3, H1, H2, H3)
ZETA_GEOMETRIES = (R1, R3, H3, H1)


@dataclass(frozen=True)
class ExtensionParam:
    r"""Self-adjoint extension parameter :math:`\alpha = \cot(\theta/2)`.

    ``alpha = 0`` (``theta = pi``) is the maximal operator side of the family.
    """

    alpha: float

    @classmethod
    def from_theta(cls, theta: float) -> "ExtensionParam":
        if not 0 < theta < 2 * PI:
            raise DomainError("theta must lie in (0, 2*pi)")
        half = theta / 2
        return cls(math.cos(half) / math.sin(half))

    @property
    def theta(self) -> float:
        return 2.0 * math.atan2(1.0, self.alpha)


@dataclass(frozen=True)
class Model:
    """A physical point-interaction model.

    Parameters
    ----------
    geometry : Geometry
    g_R : float
        Renormalised coupling; ``math.inf`` is accepted in dimension one
        (Dirichlet limit on the half line, vanishing perturbation on the line).
    a : float
        Position of the point interaction. In the half space this is the
        distance to the wall; in the whole space it only enters as a phase.
    """

    geometry: Geometry
    g_R: float
    a: float = 1.0
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.geometry, Geometry):
            object.__setattr__(self, "geometry", Geometry.parse(str(self.geometry)))
        g = float(self.g_R)
        if math.isnan(g) or g == 0:
            raise DomainError("g_R must be non-zero")
        if math.isinf(g) and (g < 0 or self.geometry.dim != 1):
            raise DomainError("g_R = +inf is only meaningful in dimension one")
        a = float(self.a)
        if not (a > 0 and math.isfinite(a)):
            raise DomainError("a must be a positive finite number")
        object.__setattr__(self, "g_R", g)
        object.__setattr__(self, "a", a)

    @property
    def inv_g(self) -> float:
        return 0.0 if math.isinf(self.g_R) else 1.0 / self.g_R

    @property
    def b(self) -> float:
        """Reduced coupling used by the closed forms (R1, H3, H1 only)."""
        geo = self.geometry
        if geo == R1:
            return self.inv_g / PI
        if geo == H3:
            return 2.0 * self.inv_g / PI**2
        if geo == H1:
            return PI * self.g_R / 2.0
        raise CapabilityError(f"no reduced coupling b for {geo}")

    @classmethod
    def from_b(cls, geometry: Geometry, b: float, a: float = 1.0) -> "Model":
        """Inverse of :attr:`b`."""
        if geometry == R1:
            g = math.inf if b == 0 else 1.0 / (PI * b)
        elif geometry == H3:
            g = 2.0 / (PI**2 * b)
        elif geometry == H1:
            g = 2.0 * b / PI
        else:
            raise CapabilityError(f"no reduced coupling b for {geometry}")
        return cls(geometry, g, a)

    def with_a(self, a: float) -> "Model":
        return replace(self, a=a)

    @property
    def has_bound_state(self) -> bool:
        """Whether the point spectrum is non-empty (cached)."""
        if "bound" not in self._cache:
            from .bound_states import point_spectrum

            self._cache["bound"] = point_spectrum(self).has_bound_state
        return self._cache["bound"]

    def require_physical(self):
        if self.geometry == R2:
            raise CapabilityError("no renormalised point interaction exists on R2")

    def require_zeta(self):
        self.require_physical()
        if self.geometry == H2:
            raise CapabilityError("the zeta pipeline is not available on H2")
        if math.isinf(self.g_R):
            raise CapabilityError(
                "g_R = inf violates the consistency condition between the large- and "
                "small-lambda expansions; the relative zeta function is undefined"
            )


# ---------------------------------------------------------------------------
# g_n, J_n and constants


def _half_exp(lam, a, rim):
    w = sqrt_upper(lam, rim)
    return w, np.exp(2j * a * w)


def gn_function(geometry: Geometry, lam, a: float | None = None, rim="upper",
                variant: Variant = "derived"):
    r"""The function :math:`g_n(\lambda)` (or its half-space analogue).

    Parameters
    ----------
    geometry : Geometry
    lam : complex or array_like
    a : float, optional
        Wall distance; required in the half space.
    rim : {"upper", "lower"}
        Rim used for points on the positive real axis.
    variant : {"derived", "paper"}
        Only affects the two-dimensional half space, where the displayed
        formula carries the opposite sign on the Bessel term.
    """
    d = geometry.dim
    if not geometry.half:
        if d == 3:
            return 2j * PI**2 * sqrt_upper(lam, rim)
        if d == 2:
            return -PI * log_neg(lam, rim)
        return 1j * PI / sqrt_upper(lam, rim)
    if a is None or not a > 0:
        raise DomainError("half-space g_n needs a > 0")
    w, E = _half_exp(lam, a, rim)
    if d == 3:
        return 0.5j * PI**2 * w - PI**2 * E / (4 * a)
    if d == 2:
        sign = 1.0 if variant == "paper" else -1.0
        return -PI / 4 * log_neg(lam, rim) + sign * PI / 2 * bessel_k(0, -2j * a * w)
    return 1j * PI * (1 - E) / (4 * w)


def jn_integral(geometry: Geometry, lam, a: float | None = None, rim="upper"):
    r"""Closed form of :math:`\int |e(x)|^2 (|x|^2-\lambda)^{-2}\,d^nx`."""
    d = geometry.dim
    w = sqrt_upper(lam, rim)
    lam = w * w
    if not geometry.half:
        if d == 3:
            return 1j * PI**2 / w
        if d == 2:
            return -PI / lam
        return -0.5j * PI / w**3
    if a is None or not a > 0:
        raise DomainError("half-space integrals need a > 0")
    E = np.exp(2j * a * w)
    if d == 3:
        return 0.5j * PI**2 * (1 - E) / w
    if d == 2:
        return -PI / (2 * lam) - (1j * PI * a / w) * bessel_k(1, -2j * a * w)
    return -0.25j * PI * (1 - E) / w**3 + PI * a * E / (2 * lam)


def an_bn_constants(geometry: Geometry, a: float | None = None, variant: Variant = "derived"):
    r"""Constants :math:`a_n, b_n` with :math:`g_n(\pm i) = b_n \pm i a_n`.

    Whole-space values are the exact table entries. Half-space values are
    computed from :math:`a_n = \operatorname{Im} g_n(i)`,
    :math:`b_n = \operatorname{Re} g_n(i)`; ``variant="paper"`` returns the
    displayed expressions instead, which differ for ``n = 2, 3``.
    """
    if not geometry.half:
        return {
            3: (SQRT2 * PI**2, -SQRT2 * PI**2),
            2: (PI**2 / 2, 0.0),
            1: (PI / SQRT2, PI / SQRT2),
        }[geometry.dim]
    if a is None or not a > 0:
        raise DomainError("half-space constants need a > 0")
    if variant == "paper":
        return _hatted_displayed(geometry.dim, a)
    g = complex(gn_function(geometry, 1j, a))
    return g.imag, g.real


def _hatted_displayed(dim: int, a: float):
    t = SQRT2 * a
    damp = math.exp(-t)
    if dim == 3:
        return (PI**2 / 4 * (SQRT2 + damp * math.sin(t) / (2 * a)),
                -PI**2 / 4 * (SQRT2 + damp * math.cos(t) / (2 * a)))
    if dim == 1:
        return (PI / (4 * SQRT2) * (1 - damp * (math.cos(t) + math.sin(t))),
                PI / (4 * SQRT2) * (1 - damp * (math.cos(t) - math.sin(t))))
    kp = complex(bessel_k(0, 2 * a * np.sqrt(1j)))
    km = complex(bessel_k(0, 2 * a * np.sqrt(-1j)))
    return (PI / 4 * (PI / 2 + 1j * kp - 1j * km), -0.25j * PI * (kp + km))


def dn_cutoff(geometry: Geometry, N: float, variant: Variant = "derived") -> float:
    r"""Divergent part of :math:`\int_{|x|<N} |e|^2/(|x|^2-\lambda)`.

    In the half line the tail of :math:`\int \sin^2(ax)/x^2` gives
    :math:`-1/(2N)`; ``variant="paper"`` returns the tabulated ``-2/N``.
    """
    if not N > 0:
        raise DomainError("N must be positive")
    d = geometry.dim
    if not geometry.half:
        return {3: 4 * PI * N, 2: 2 * PI * math.log(N), 1: -2.0 / N}[d]
    if d == 3:
        return PI * N
    if d == 2:
        return PI / 2 * math.log(N)
    return -2.0 / N if variant == "paper" else -0.5 / N


# ---------------------------------------------------------------------------
# traces and kernels


def _pole_guard(denominator, lam):
    den = np.asarray(denominator)
    if np.any(den == 0) or np.any(~np.isfinite(den)):
        raise PoleError("resolvent difference has a pole (bound state)", location=lam)


def trace_resolvent_diff(model: Model, lam, rim="upper", variant: Variant = "derived"):
    r"""Trace :math:`r(\lambda)` of the resolvent difference.

    Vectorised over ``lam``. Raises :class:`PoleError` at a bound state.

    Examples
    --------
    >>> m = Model.from_b(R1, 2.0)
    >>> round(trace_resolvent_diff(m, -1.0).real, 12)
    -0.5
    """
    model.require_physical()
    geo = model.geometry
    a = model.a if geo.half else None
    den = model.inv_g - gn_function(geo, lam, a, rim, variant)
    _pole_guard(den, lam)
    return -jn_integral(geo, lam, a, rim) / den


def trace_resolvent_diff_alpha(geometry: Geometry, ext: ExtensionParam | float, lam,
                               a: float | None = None, rim="upper",
                               variant: Variant = "derived"):
    r"""Trace of the resolvent difference in the extension parameterisation.

    Uses :math:`a_n/\alpha + b_n` in place of :math:`1/g_R`; available in
    all six geometries.
    """
    alpha = ext.alpha if isinstance(ext, ExtensionParam) else float(ext)
    an, bn = an_bn_constants(geometry, a, variant)
    a_eff = a if geometry.half else None
    den = an / alpha + bn - gn_function(geometry, lam, a_eff, rim, variant)
    _pole_guard(den, lam)
    return -jn_integral(geometry, lam, a_eff, rim) / den


def trace_alpha_displayed(dim: int, alpha: float, lam):
    """Whole-space extension-parameter traces in their displayed reduced form."""
    w = sqrt_upper(lam)
    if dim == 3:
        s2l = SQRT2 * w
        return 1.0 / (1j * s2l * (1.0 / alpha - 1.0 - 1j * s2l))
    if dim == 2:
        return (PI / (w * w)) / (PI**2 / (2 * alpha) + PI * log_neg(lam))
    raise CapabilityError("only n = 2, 3 have a displayed reduced form")


def trace_closed_form(model: Model, lam):
    """Reduced closed forms of the trace for R1, H3 and H1."""
    geo = model.geometry
    w = sqrt_upper(lam)
    if geo == R1:
        return -1.0 / (2 * w * w * (1j * model.b * w + 1))
    a = model.a
    E = np.exp(2j * a * w)
    if geo == H3:
        b = model.b
        return (1 - E) / (1j * w * (b - 1j * w + E / (2 * a)))
    if geo == H1:
        num = -PI / (4j * w**3) * (1 + E * (2j * a * w - 1))
        return num / (model.inv_g + PI * (1 - E) / (4j * w))
    raise CapabilityError(f"no reduced closed form for {geo}")


def _e_vector(geometry: Geometry, a: float, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (geometry.dim,):
        raise DomainError(f"point must have {geometry.dim} components")
    if geometry.half:
        if x[0] < 0:
            raise DomainError("half-space points need x_1 >= 0")
        return math.sin(a * x[0]), float(x @ x)
    return complex(np.exp(1j * a * x[0])), float(x @ x)


def resolvent_kernel_correction(model: Model, lam, x, y, rim="upper") -> complex:
    r"""Regular rank-one part of the perturbed resolvent kernel.

    .. math:: -\bigl(1/g_R - g_n(\lambda)\bigr)^{-1}
              \frac{e(x)\overline{e(y)}}{(\lambda-|x|^2)(\lambda-|y|^2)}

    The diagonal :math:`\delta(x-y)/(\lambda-|x|^2)` part is not returned.
    """
    model.require_physical()
    geo = model.geometry
    ex, x2 = _e_vector(geo, model.a, x)
    ey, y2 = _e_vector(geo, model.a, y)
    den = model.inv_g - complex(gn_function(geo, lam, model.a if geo.half else None, rim))
    _pole_guard(den, lam)
    return complex(-ex * np.conj(ey) / (den * (lam - x2) * (lam - y2)))


@dataclass(frozen=True)
class Scattering:
    amplitude: complex
    cross_section: float
    scattering_length_sq: float


def scattering(m: float, g_R: float, k: float) -> Scattering:
    """Scattering amplitude, differential cross section and squared scattering length."""
    if not m > 0:
        raise DomainError("mass must be positive")
    if k < 0:
        raise DomainError("k must be non-negative")
    f = 2 * m * g_R / (1 - 2j * m * g_R * k)
    return Scattering(f, abs(f) ** 2, 4 * m**2 * g_R**2)
