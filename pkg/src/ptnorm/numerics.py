"""Shared numerical building blocks: Laguerre polynomials, Gauss-Legendre
rules, a bracketed real root finder and a complex Newton iteration."""
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from . import kernels
from .errors import Diverged, MaxIterations, NoSignChange

DEFAULT_ROOT_TOL = 1e-13
DEFAULT_NEWTON_TOL = 1e-12
TOL_ENV = "PTNORM_TOL"


def tolerance_from_env(default=DEFAULT_ROOT_TOL):
    """Root tolerance from ``$PTNORM_TOL``; ``ValueError`` unless it is a positive number."""
    raw = os.environ.get(TOL_ENV)
    if raw is None or not raw.strip():
        return default
    tol = float(raw)
    if not (tol > 0 and np.isfinite(tol)):
        raise ValueError(f"{TOL_ENV} must be a positive number, got {raw!r}")
    return tol


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------


def laguerre_eval(n, a, z):
    """Generalized Laguerre polynomial :math:`L_n^{(a)}(z)`.

    Uses the ascending three-term recurrence

    .. math:: (k+1) L_{k+1} = (2k+1+a-z) L_k - (k+a) L_{k-1}

    which is exact for the polynomial degree and stable for the moderate
    orders used here. Both the superscript ``a`` and the argument ``z`` may be
    complex; ``z`` may be a scalar or an array.

    Parameters
    ----------
    n : int
        polynomial degree, ``n >= 0``
    a : complex
        superscript (shaping parameter)
    z : complex or array_like
        evaluation point(s)

    Returns
    -------
    complex or numpy.ndarray
    """
    if n < 0:
        raise ValueError("Laguerre degree must be nonnegative")
    scalar = np.ndim(z) == 0
    out = kernels.laguerre_array(int(n), complex(a), np.atleast_1d(np.asarray(z, dtype=complex)))
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f, a=-1.0, b=1.0):
        half = 0.5 * (b - a)
        x = 0.5 * (a + b) + half * self.nodes
        return half * np.sum(self.weights * f(x))


def gauss_legendre(m):
    """Return the ``m``-point Gauss-Legendre rule on [-1, 1]."""
    if m < 1:
        raise ValueError("rule order must be >= 1")
    x, w = leggauss(int(m))
    return QuadratureRule(nodes=x, weights=w, order=int(m))


def composite_rule(a, b, panels, rule):
    """Nodes and weights of ``rule`` repeated on ``panels`` equal subintervals of [a, b]."""
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (lo + hi) + half * rule.nodes[None, :]).ravel()
    weights = (half * rule.weights[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    @classmethod
    def of(cls, f, lo, hi):
        return cls(lo, hi, f(lo), f(hi))

    @property
    def valid(self):
        return self.lo < self.hi and self.f_lo * self.f_hi < 0


def find_root_1d(f: Callable[[float], float], bracket: Bracket, tol=DEFAULT_ROOT_TOL, maxiter=200):
    """Root of a real function inside a sign-changing bracket.

    Brent's method: bisection-safe with inverse quadratic / secant
    acceleration. An endpoint that is an exact zero is returned directly.
    """
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    if not bracket.valid:
        raise NoSignChange(f"no sign change on [{bracket.lo}, {bracket.hi}]")
    try:
        return brentq(f, bracket.lo, bracket.hi, xtol=tol, maxiter=maxiter)
    except RuntimeError as exc:
        raise MaxIterations(str(exc)) from exc


@dataclass(frozen=True)
class NewtonResult:
    root: complex
    iterations: int
    residual: float


def newton_complex(F, z0, tol=DEFAULT_NEWTON_TOL, maxiter=100, radius=10.0):
    """Newton iteration for an analytic complex function.

    The derivative is a central finite difference with step
    ``h = 1e-6 * (1 + |z|)``. Raises :class:`Diverged` when a single step is
    longer than ``radius`` or the iterate leaves the domain of ``F``, and
    :class:`MaxIterations` when ``|F| <= tol`` is not reached.
    """
    z = complex(z0)
    fz = F(z)
    for it in range(maxiter + 1):
        if abs(fz) <= tol:
            return NewtonResult(z, it, abs(fz))
        if it == maxiter:
            break
        h = 1e-6 * (1.0 + abs(z))
        d = (F(z + h) - F(z - h)) / (2.0 * h)
        if d == 0 or not np.isfinite(d):
            raise Diverged(f"vanishing derivative at z = {z}")
        step = fz / d
        if abs(step) > radius:
            raise Diverged(f"Newton step {abs(step):.3g} exceeds radius {radius}")
        z -= step
        fz = F(z)
        if not np.isfinite(fz):
            raise Diverged(f"non-finite residual at z = {z}")
        # FD derivative limits the attainable residual; accept a stalled iterate
        # if the step has collapsed to roundoff
        if abs(step) <= 4e-16 * (1.0 + abs(z)) and abs(fz) <= 1e3 * tol:
            return NewtonResult(z, it + 1, abs(fz))
    raise MaxIterations(f"|F| = {abs(fz):.3g} after {maxiter} Newton steps")
