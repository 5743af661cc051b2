r"""Branch-aware complex functions, semi-infinite quadrature, root finding and
numeric Laurent coefficients.

All square roots follow the convention :math:`\operatorname{Im}\sqrt\lambda > 0`
on :math:`\mathbb{C}\setminus[0,\infty)`. Points on the positive real axis are
only accepted together with an explicit rim (``"upper"`` or ``"lower"``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .errors import BracketError, ConvergenceError, DomainError, OrderError

Rim = Literal["upper", "lower"]

__all__ = [
    "QuadratureSpec",
    "ZetaLaurent",
    "sqrt_upper",
    "log_neg",
    "gamma_fn",
    "bessel_k",
    "integrate_semi_infinite",
    "integrate_interval",
    "levin_u",
    "find_root",
    "laurent_extract",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for the quadrature routines.

    Attributes
    ----------
    abs_tol, rel_tol : float
        Target absolute and relative accuracy.
    max_subdivisions : int
        Maximum number of interval bisections per call.
    tail_cutoff : float
        Point beyond which the tail policy (Levin extrapolation over
        period cells, or QAGI for non-oscillatory integrands) takes over.
    tail_order : int
        Number of period cells fed to the Levin transform.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 4000
    tail_cutoff: float = 50.0
    tail_order: int = 12

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if not self.tail_cutoff > 0:
            raise DomainError("tail_cutoff must be positive")
        if self.tail_order < 3:
            raise DomainError("tail_order must be >= 3")


@dataclass(frozen=True)
class ZetaLaurent:
    """Residue and finite part of a function with at most a simple pole."""

    location: complex
    residue: complex
    finite_part: complex


def _as_complex(z, name="argument") -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    if np.any(np.isnan(arr)):
        raise DomainError(f"{name} is NaN")
    return arr


def _scalarize(arr: np.ndarray, like):
    if np.ndim(like) == 0:
        return arr[()].item()
    return arr


def _on_positive_axis(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real > 0)


def sqrt_upper(lam, rim: Rim = "upper"):
    r"""Square root with :math:`\operatorname{Im} w > 0`.

    Parameters
    ----------
    lam : complex or array_like
    rim : {"upper", "lower"}
        Which rim of the cut :math:`[0,\infty)` to use for points exactly on it.
        The upper rim gives the positive root, the lower rim the negative one.

    Returns
    -------
    complex or ndarray

    Examples
    --------
    >>> sqrt_upper(-1)
    1j
    >>> sqrt_upper(3 + 4j)
    (2+1j)
    """
    z = _as_complex(lam, "lambda")
    if np.any(z == 0):
        raise DomainError("sqrt_upper is undefined at lambda = 0")
    w = np.sqrt(z)
    w = np.where(w.imag < 0, -w, w)
    if rim == "lower":
        w = np.where(_on_positive_axis(z), -w, w)
    elif rim != "upper":
        raise DomainError(f"unknown rim {rim!r}")
    return _scalarize(w, lam)


def log_neg(lam, rim: Rim | None = None):
    r"""Principal :math:`\log(-\lambda)`.

    Points on :math:`(0,\infty)` need ``rim``: the upper rim
    :math:`\lambda + i0` gives :math:`\log\lambda - i\pi`.
    """
    z = _as_complex(lam, "lambda")
    if np.any(z == 0):
        raise DomainError("log_neg is undefined at lambda = 0")
    cut = _on_positive_axis(z)
    if np.any(cut) and rim is None:
        raise DomainError("lambda on the positive axis requires an explicit rim")
    if rim not in (None, "upper", "lower"):
        raise DomainError(f"unknown rim {rim!r}")
    neg = -z.real + 1j * np.where(z.imag == 0, 0.0, -z.imag)
    out = np.log(np.where(cut, 1.0, neg))
    if np.any(cut):
        sign = -1.0 if rim == "upper" else 1.0
        out = np.where(cut, np.log(np.abs(z.real)) + sign * 1j * np.pi, out)
    return _scalarize(out, lam)


def gamma_fn(z):
    """Euler Gamma function for real or complex arguments.

    Raises
    ------
    DomainError
        At the poles ``0, -1, -2, ...`` (``pole_order`` is 1).
    """
    arr = np.asarray(z)
    if np.iscomplexobj(arr):
        arr = _as_complex(arr)
    else:
        arr = arr.astype(float)
        if np.any(np.isnan(arr)):
            raise DomainError("argument is NaN")
    re = np.real(arr)
    im = np.imag(arr)
    pole = (im == 0) & (re <= 0) & (re == np.round(re))
    if np.any(pole):
        raise DomainError("Gamma has a simple pole at non-positive integers", pole_order=1)
    return _scalarize(np.asarray(special.gamma(arr)), z)


def bessel_k(order: int, z):
    """Modified Bessel function :math:`K_0` or :math:`K_1`.

    Valid for ``Re z > 0`` and on the imaginary axis away from the origin.
    """
    if order not in (0, 1):
        raise DomainError("only orders 0 and 1 are supported")
    arr = np.asarray(z)
    carr = _as_complex(arr)
    if np.any(carr == 0):
        raise DomainError("K_n is singular at z = 0")
    if np.any(carr.real < 0):
        raise DomainError("bessel_k requires Re z >= 0")
    if np.iscomplexobj(arr):
        val = special.kv(order, carr)
    else:
        val = special.kv(order, arr.astype(float))
    return _scalarize(np.asarray(val), z)


# --------------------------------------------------------------------------
# quadrature

_N16, _W16 = np.polynomial.legendre.leggauss(16)
_N32, _W32 = np.polynomial.legendre.leggauss(32)


def _vectorized(f):
    """Return a version of ``f`` that maps arrays elementwise."""

    def g(x):
        try:
            y = f(x)
            if np.shape(y) == np.shape(x):
                return np.asarray(y)
        except (TypeError, ValueError):
            pass
        return np.vectorize(f, otypes=[complex])(x)

    return g


def _gl_pair(f, lo: np.ndarray, hi: np.ndarray):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x16 = mid[:, None] + half[:, None] * _N16[None, :]
    x32 = mid[:, None] + half[:, None] * _N32[None, :]
    q16 = half * (f(x16) @ _W16)
    q32 = half * (f(x32) @ _W32)
    return q32, np.abs(q32 - q16)


def _adaptive_cells(f, edges: np.ndarray, spec: QuadratureSpec):
    """Integrate over consecutive cells with Gauss-Legendre 16/32 bisection.

    Returns per-cell values and error estimates for the original cells.
    """
    edges = np.asarray(edges, dtype=float)
    ncell = len(edges) - 1
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    owner = np.arange(ncell)
    cell_val = np.zeros(ncell, dtype=complex)
    cell_err = np.zeros(ncell)
    total_width = edges[-1] - edges[0]
    splits = 0
    scale = None
    while len(lo):
        q, e = _gl_pair(f, lo, hi)
        if scale is None:
            scale = abs(q.sum())
        tol = max(spec.abs_tol, spec.rel_tol * scale) * (hi - lo) / total_width
        ok = (e <= tol) | (hi - lo < 1e-13 * max(1.0, abs(edges[-1])))
        np.add.at(cell_val, owner[ok], q[ok])
        np.add.at(cell_err, owner[ok], e[ok])
        bad = ~ok
        nbad = int(bad.sum())
        if nbad == 0:
            break
        splits += nbad
        if splits > spec.max_subdivisions:
            np.add.at(cell_val, owner[bad], q[bad])
            np.add.at(cell_err, owner[bad], e[bad])
            raise ConvergenceError(
                "interval bisection limit reached",
                partial=cell_val.sum(),
                err_est=float(cell_err.sum()),
            )
        mid = 0.5 * (lo[bad] + hi[bad])
        lo = np.concatenate([lo[bad], mid])
        hi = np.concatenate([mid, hi[bad]])
        owner = np.concatenate([owner[bad], owner[bad]])
    return cell_val, cell_err


def _quad_complex(f, lo, hi, spec: QuadratureSpec, power: float | None = None):
    # full_output keeps QUADPACK from warning; its error estimate is
    # propagated to the caller either way
    opts = dict(epsabs=spec.abs_tol / 4, epsrel=spec.rel_tol / 4, limit=spec.max_subdivisions,
                full_output=1)
    if power is not None:
        # algebraic endpoint weight (x - lo)**power; QAWS rejects limit < 2
        opts.update(weight="alg", wvar=(power, 0.0), limit=max(2, spec.max_subdivisions))
    re, ere = integrate.quad(lambda x: np.real(f(x)), lo, hi, **opts)[:2]
    im, eim = integrate.quad(lambda x: np.imag(f(x)), lo, hi, **opts)[:2]
    return complex(re, im), ere + eim


def levin_u(terms: Sequence[complex], beta: float = 1.0) -> complex:
    """Levin u-transform of the series with the given terms.

    Uses every supplied term; the remainder model is
    ``(n + beta) a_n * sum_i c_i / (n + beta)**i``.
    """
    a = np.asarray(terms, dtype=complex)
    n = len(a)
    if n < 2:
        return complex(a.sum())
    if np.any(a == 0):
        # an exactly vanishing term leaves nothing to extrapolate
        return complex(a.sum())
    S = np.cumsum(a)
    k = n - 1
    j = np.arange(n)
    coef = (-1.0) ** j * special.comb(k, j) * ((beta + j) / (beta + k)) ** (k - 1)
    w = coef / ((beta + j) * a)
    return complex((w @ S) / w.sum())


def _with_power(g, lo: float, power: float | None):
    if power is None:
        return g
    return lambda x: (np.asarray(x) - lo) ** power * g(x)


def integrate_interval(f: Callable, lo: float, hi: float, spec: QuadratureSpec | None = None,
                       period: float | None = None, endpoint_power: float | None = None):
    """Integrate ``f`` over a finite interval, cell by cell.

    ``period`` sets the cell length for oscillatory integrands. The first
    cell is handed to QUADPACK so integrable endpoint singularities at
    ``lo`` are handled. With ``endpoint_power = p`` the integrand is
    ``(x - lo)**p * f(x)`` and the first cell uses QUADPACK's algebraic
    weight, which resolves strong singularities such as ``p`` near -1.

    Returns
    -------
    value : complex
    err_est : float
    """
    spec = spec or QuadratureSpec()
    g = _vectorized(f)
    width = period if period is not None else (hi - lo) / 8
    first = min(lo + width, hi)
    val, err = _quad_complex(g, lo, first, spec, endpoint_power)
    if first < hi:
        ncell = max(1, int(np.ceil((hi - first) / width - 1e-9)))
        edges = np.linspace(first, hi, ncell + 1)
        v, e = _adaptive_cells(_with_power(g, lo, endpoint_power), edges, spec)
        val += v.sum()
        err += float(e.sum())
    return val, err


def _levin_tail(g, T: float, period: float, spec: QuadratureSpec):
    """Tail integral over [T, inf) from period cells and a Levin u-transform.

    The transform order is chosen where successive estimates agree best;
    the error estimate is the larger of the two neighbouring differences,
    which stays conservative when rounding starts to dominate.
    """
    K = spec.tail_order
    # group whole periods so the start sits about four cells out; the
    # transform is badly conditioned when the index offset is large
    width = period * max(1, int(round(T / (4 * period))))
    edges = T + width * np.arange(K + 1)
    cells, cerr = _adaptive_cells(g, edges, spec)
    beta = T / width + 0.5
    est = [levin_u(cells[:k], beta=beta) for k in range(2, K + 1)]
    diffs = [abs(est[i] - est[i - 1]) for i in range(1, len(est))]
    i = int(np.argmin(diffs[1:])) + 1
    terr = max(diffs[i], diffs[i - 1]) + float(cerr.sum())
    return est[i], terr, cells


def integrate_semi_infinite(f: Callable, spec: QuadratureSpec | None = None,
                            period: float | None = None, real: bool | None = None,
                            endpoint_power: float | None = None):
    r"""Integrate ``f`` over :math:`[0, \infty)`.

    Parameters
    ----------
    f : callable
        Integrand; vectorised callables are used directly, scalar ones are
        wrapped.
    spec : QuadratureSpec, optional
    period : float, optional
        Oscillation period of the integrand's tail. When given, the tail
        beyond ``spec.tail_cutoff`` is split into full-period cells whose
        partial sums are extrapolated with a Levin u-transform. Otherwise
        the tail is integrated by QUADPACK's infinite-range rule.
    real : bool, optional
        Return a float. Defaults to True when ``f(1.0)`` is real.
    endpoint_power : float, optional
        Integrate ``x**endpoint_power * f(x)``, with the power handled
        exactly near the origin (see :func:`integrate_interval`).

    Returns
    -------
    value : float or complex
    err_est : float
        Conservative error estimate.

    Raises
    ------
    ConvergenceError
        If bisection or the tail extrapolation does not converge; the
        exception carries the partial value.
    """
    spec = spec or QuadratureSpec()
    g = _vectorized(f)
    if real is None:
        real = np.isrealobj(np.asarray(f(1.0)))
    T = spec.tail_cutoff
    p = endpoint_power
    if period is None:
        val, err = integrate_interval(g, 0.0, T, spec, endpoint_power=p)
        tv, te = _quad_complex(_with_power(g, 0.0, p), T, np.inf, spec)
        val += tv
        err += te
    else:
        T = period * np.ceil(T / period)
        val, err = integrate_interval(g, 0.0, T, spec, period=period, endpoint_power=p)
        tail, terr, cells = _levin_tail(_with_power(g, 0.0, p), T, period, spec)
        target = max(spec.abs_tol, spec.rel_tol * abs(val + tail))
        if not np.isfinite(tail) or terr > 1e3 * target:
            raise ConvergenceError("tail extrapolation did not settle",
                                   partial=val + cells.sum(), err_est=terr)
        val += tail
        err += terr
    # QUADPACK and the 16/32 comparison both overestimate; keep a floor at
    # the rounding level of the result.
    err = float(err) + 1e-15 * abs(val)
    if real:
        return float(np.real(val)), err
    return complex(val), err


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13) -> float:
    """Bracketed root of a continuous real function (Brent's method)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    return float(optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))


def laurent_extract(f: Callable[[complex], complex], s0: complex, radius: float = 0.1,
                    nodes: int = 64, order_tol: float = 1e-7) -> ZetaLaurent:
    r"""Residue and finite part of ``f`` at ``s0`` by contour quadrature.

    The trapezoidal rule on the circle :math:`|s - s_0| = r` recovers the
    Laurent coefficients :math:`c_{-1}, c_0` with geometric accuracy when the
    nearest other singularity is well outside the circle.

    Raises
    ------
    OrderError
        If :math:`|c_{-2}|` exceeds ``order_tol`` relative to the other
        coefficients, i.e. the pole is not simple.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    ring = np.exp(1j * theta)
    vals = np.array([complex(f(s0 + radius * u)) for u in ring])
    c0 = vals.mean()
    cm1 = radius * (vals * ring).mean()
    cm2 = radius**2 * (vals * ring**2).mean()
    scale = max(1.0, abs(c0), abs(cm1))
    if abs(cm2) > order_tol * scale:
        raise OrderError(f"pole of order > 1 at {s0}: |c_-2| = {abs(cm2):.3e}")
    return ZetaLaurent(location=complex(s0), residue=complex(cm1), finite_part=complex(c0))
