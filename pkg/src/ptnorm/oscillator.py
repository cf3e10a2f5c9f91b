"""Complex-shifted spiked harmonic oscillator.

In the shifted coordinate ``r = x - i delta`` the Hamiltonian is

    H = -d^2/dr^2 + G / r^2 + r^2

and its terminating (Laguerre) solutions are

    psi(r) = N r^(1/2 - e) exp(-r^2/2) L_n^(-e)(r^2),   E = 4n + 2 - 2e,

with ``e = Q alpha``, ``alpha = sqrt(G + 1/4)`` and quasi-parity ``Q = +-1``.
For ``G > -1/4`` the energies are real; for ``G < -1/4`` one has
``alpha = i gamma`` and the two quasi-parities form complex-conjugate
families.

The power ``r^s`` uses a branch cut along the positive imaginary axis, so
the contour and its PT image (``r -> -conj r``) both stay in the cut plane.
"""
from dataclasses import dataclass

import numpy as np

from .errors import BranchCut, ExceptionalCoupling, NotBroken
from .numerics import laguerre_eval
from .pseudometric import (
    PtContour,
    make_pair,
    normalize_pair,
    pt_normalize,
    unit_ordinary,
)

DEFAULT_DELTA = 1.0


@dataclass(frozen=True)
class OscillatorParams:
    g: float
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("contour shift delta must be positive")
        if self.g == -0.25:
            raise ExceptionalCoupling("G = -1/4 is the exceptional (confluent) coupling")

    @property
    def broken(self):
        return self.g < -0.25

    @property
    def alpha(self):
        """``sqrt(G + 1/4)``; purely imaginary ``i gamma`` in the broken regime."""
        return np.sqrt(complex(self.g + 0.25))


@dataclass(frozen=True)
class EigenstateLabel:
    quasi_parity: int
    radial_index: int

    def __post_init__(self):
        if self.quasi_parity not in (1, -1) or self.radial_index < 0:
            raise ValueError("need Q = +-1 and n >= 0")

    @property
    def level_index(self):
        return 2 * self.radial_index + (1 - self.quasi_parity) // 2

    @classmethod
    def from_level(cls, N):
        return cls(1 if N % 2 == 0 else -1, N // 2)

    def __str__(self):
        return f"N={self.level_index}(Q={self.quasi_parity:+d},n={self.radial_index})"


@dataclass(frozen=True)
class OscillatorState:
    label: EigenstateLabel
    params: OscillatorParams
    exponent: complex
    energy: complex
    norm_const: complex = 1.0
    metric_sign: int | None = None

    def __call__(self, r):
        return wavefunction(self, r)


def make_state(params, label):
    e = label.quasi_parity * params.alpha
    E = 4 * label.radial_index + 2 - 2 * e
    return OscillatorState(label, params, complex(e), complex(E))


def spectrum(params, n_max):
    """States for ``Q = +-1`` and ``n = 0..n_max``, ordered by level index N."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return [make_state(params, EigenstateLabel.from_level(N)) for N in range(2 * n_max + 2)]


def _log_cut(r):
    # log with arg in (-3pi/2, pi/2]: cut on the positive imaginary axis
    theta = np.angle(r)
    theta = np.where(theta > 0.5 * np.pi, theta - 2 * np.pi, theta)
    return np.log(np.abs(r)) + 1j * theta


def wavefunction(state, r):
    r = np.asarray(r, dtype=complex)
    if np.any((r.real == 0) & (r.imag >= 0)):
        raise BranchCut("r lies on the branch cut (nonnegative imaginary axis)")
    e = state.exponent
    r2 = r * r
    lag = laguerre_eval(state.label.radial_index, -e, r2)
    return state.norm_const * np.exp((0.5 - e) * _log_cut(r) - 0.5 * r2) * lag


def default_contour(delta=DEFAULT_DELTA):
    return PtContour.make(delta=delta)


def normalize(state, contour=None):
    """Pseudo-normalize an unbroken state: ``<psi|P|psi> = metric_sign``.

    ``metric_sign`` equals the quasi-parity ``Q`` for ``0 < alpha < 1``
    (``-1/4 < G < 3/4``). For larger ``alpha`` some quasi-even states carry a
    negative pseudo-norm; the measured sign is kept. Broken states raise
    :class:`~ptnorm.errors.ZeroPseudoNorm`.
    """
    contour = default_contour(state.params.delta) if contour is None else contour
    return pt_normalize(state, contour)


def normalized_spectrum(params, n_max, contour=None):
    contour = default_contour(params.delta) if contour is None else contour
    return [normalize(s, contour) for s in spectrum(params, n_max)]


def broken_pair(params, n, contour=None, renormalize=True):
    """Conjugate pair at radial index ``n`` in the broken regime.

    ``psi_plus`` is the ``Q = -1`` state (``Im E = +2 gamma``). Both members
    are first scaled to unit ordinary norm; with ``renormalize`` the cross
    overlap is then set to 1.
    """
    if not params.broken:
        raise NotBroken("G > -1/4: the spectrum is real, there are no broken pairs")
    contour = default_contour(params.delta) if contour is None else contour
    plus = unit_ordinary(make_state(params, EigenstateLabel(-1, n)), contour)
    minus = unit_ordinary(make_state(params, EigenstateLabel(1, n)), contour)
    pair = make_pair(plus, minus, contour)
    return normalize_pair(pair, contour) if renormalize else pair


def ode_residual(state, r, h=2e-3):
    """``-psi'' + (G/r^2 + r^2 - E) psi`` with a fourth-order difference along the contour.

    The default step balances truncation (~h^4 E^3) against roundoff (~eps/h^2)
    for levels up to N ~ 16.
    """
    r = np.asarray(r, dtype=complex)
    f = [wavefunction(state, r + k * h) for k in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    G = state.params.g
    return -d2 + (G / r**2 + r**2 - state.energy) * f[2]

