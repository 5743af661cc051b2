r"""Point spectrum of the perturbed Laplacian.

An eigenvalue is a zero of :math:`1/g_R - g_n(\lambda)`. On the negative
axis put :math:`\sqrt\lambda = iy` with :math:`y > 0`; every geometry then
reduces to a real equation in ``y``:

* R1: :math:`1/g_R = \pi/y`, so :math:`y = \pi g_R` (needs :math:`g_R > 0`).
* R3: :math:`1/g_R = -2\pi^2 y`, so :math:`y = -1/(2\pi^2 g_R)` (needs :math:`g_R < 0`).
* H3: :math:`f(y) = y + b + e^{-2ay}/(2a) = 0`; ``f`` is increasing with
  :math:`f(0) = b + 1/(2a)`, so a root exists iff :math:`f(0) < 0`.
* H1: :math:`b' y = 1 - e^{-2ay}` with :math:`b' = 4/(\pi g_R)`; a positive
  root exists iff :math:`g_R > 0` and the slope :math:`2a/b'` at the origin
  exceeds one, i.e. :math:`a > 2/(\pi g_R)`.
* H1 with :math:`g_R = \infty`: the Dirichlet problem at the delta, with
  eigenvalues :math:`(\pi k/a)^2`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, PoleError
from .models import H1, H3, R1, R3, Geometry, Model, gn_function, trace_resolvent_diff
from .numerics import find_root

PI = math.pi
DIRICHLET_LEVELS = 5


@dataclass(frozen=True)
class SpectrumResult:
    """Classification of the point spectrum of one model.

    ``threshold`` is the critical wall distance for half-space models
    (``nan`` when no threshold applies) and ``statement_has_bound_state``
    is the classification under the displayed inequality, which for the
    half space is not the same as the root-existence criterion.
    """

    has_bound_state: bool
    eigenvalues: list = field(default_factory=list)
    threshold: float = math.nan
    method: str = "closed_criterion"
    statement_has_bound_state: bool | None = None


@dataclass(frozen=True)
class ThresholdPair:
    """Critical wall distance from root existence and from the displayed inequality."""

    proof: float
    statement: float


def spectrum_threshold(geometry: Geometry, g_R: float) -> ThresholdPair:
    """Critical wall distance ``a`` at which a bound state appears.

    H3 (``g_R < 0``): bound state iff ``a > pi^2 |g_R| / 4``; the displayed
    inequality uses ``2 |g_R| / pi^2``. H1 (``g_R > 0``): bound state iff
    ``a > 2 / (pi g_R)``; the displayed inequality uses ``2 g_R / pi``.
    ``nan`` marks couplings with no bound state at any ``a``.
    """
    if geometry == H3:
        if g_R >= 0:
            return ThresholdPair(math.nan, math.nan)
        return ThresholdPair(PI**2 * abs(g_R) / 4, -2 * g_R / PI**2)
    if geometry == H1:
        if not g_R > 0 or math.isinf(g_R):
            return ThresholdPair(math.nan, math.nan)
        return ThresholdPair(2 / (PI * g_R), 2 * g_R / PI)
    raise CapabilityError(f"threshold only defined in the half space, not {geometry}")


def _h3_root(a: float, b: float) -> float:
    f = lambda y: y + b + math.exp(-2 * a * y) / (2 * a)
    return find_root(f, 0.0, abs(b) + 1 / (2 * a) + 10.0)


def _h1_root(a: float, bp: float) -> float:
    h = lambda y: bp * y - 1 + math.exp(-2 * a * y)
    y_min = math.log(2 * a / bp) / (2 * a)
    return find_root(h, y_min, 1 / bp + 1.0)


def dirichlet_levels(a: float, count: int = DIRICHLET_LEVELS) -> list[float]:
    """Roots of ``sin(a x)`` located by bracketing, squared."""
    out = []
    for k in range(1, count + 1):
        x = find_root(lambda t: math.sin(a * t), (k - 0.5) * PI / a, (k + 0.5) * PI / a)
        out.append(x * x)
    return out


def point_spectrum(model: Model, levels: int = DIRICHLET_LEVELS) -> SpectrumResult:
    """Eigenvalues of the perturbed operator, sorted ascending.

    ``levels`` caps the number of Dirichlet-limit eigenvalues returned.
    """
    model.require_physical()
    geo, g = model.geometry, model.g_R
    if geo == R1:
        if math.isinf(g) or g < 0:
            return SpectrumResult(False, [], statement_has_bound_state=g < 0)
        return SpectrumResult(True, [-(PI * g) ** 2], statement_has_bound_state=False)
    if geo == R3:
        if g > 0:
            return SpectrumResult(False, [], statement_has_bound_state=False)
        return SpectrumResult(True, [-(1 / (2 * PI**2 * g)) ** 2], statement_has_bound_state=True)
    a = model.a
    if geo == H3:
        thr = spectrum_threshold(H3, g)
        stated = None if math.isnan(thr.statement) else a >= thr.statement
        b = model.b
        if b + 1 / (2 * a) >= 0:
            return SpectrumResult(False, [], thr.proof, "closed_criterion", stated)
        y = _h3_root(a, b)
        return SpectrumResult(True, [-y * y], thr.proof, "root_solve", stated)
    if geo == H1:
        if math.isinf(g):
            return SpectrumResult(True, dirichlet_levels(a, levels), math.nan, "root_solve", True)
        thr = spectrum_threshold(H1, g)
        stated = None if math.isnan(thr.statement) else a <= thr.statement
        if not (g > 0 and a > thr.proof):
            return SpectrumResult(False, [], thr.proof, "closed_criterion", stated)
        y = _h1_root(a, 4 / (g * PI))
        return SpectrumResult(True, [-y * y], thr.proof, "root_solve", stated)
    raise CapabilityError(f"point spectrum not available for {geo}")


def eigenvalue_residual(model: Model, lam: float) -> float:
    r""":math:`|1/g_R - g_n(\lambda)|`, zero at an eigenvalue.

    Positive ``lam`` (Dirichlet limit) is evaluated on the upper rim.
    """
    geo = model.geometry
    a = model.a if geo.half else None
    return float(abs(model.inv_g - gn_function(geo, complex(lam), a)))


def verify_pole(model: Model, lam: float, rel_steps=(1e-5, 1e-6, 1e-7), tol: float = 1e-2) -> bool:
    r"""Check that :math:`r` has a simple pole at ``lam``.

    Approaching from the left along the real axis, :math:`|r(\lambda+\delta)\delta|`
    must settle to a non-zero constant.
    """
    scale = max(abs(lam), 1.0)
    prods = []
    for h in rel_steps:
        d = -h * scale
        try:
            r = trace_resolvent_diff(model, complex(lam + d))
        except PoleError:
            return False
        prods.append(abs(r * d))
    prods = np.array(prods)
    if not np.all(np.isfinite(prods)) or prods[-1] == 0:
        return False
    return bool(np.all(np.abs(prods / prods[-1] - 1) < tol))
