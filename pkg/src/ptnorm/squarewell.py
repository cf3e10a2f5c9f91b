"""PT-symmetric square well on [-1, 1] with an imaginary step potential.

With the ansatz ``sin lam (x+1)`` for ``x <= 0`` and ``C sin kap (x-1)`` for
``x >= 0``, where ``lam^2 = E - i T^2`` and ``kap^2 = E + i T^2``, matching
at the origin gives

    F(E) = lam cot lam + kap cot kap = 0.

(The potential implied by these wavenumbers is ``+i T^2`` on the left and
``-i T^2`` on the right.) For real ``E`` write ``lam = p - i q``: then
``E = p^2 - q^2`` and the matching condition splits into the oval family
``q sinh 2q = -p sin 2p`` and the hyperbola ``2 p q = T^2``. Each oval ``n``
lives on ``p in [(2n+1) pi/2, (n+1) pi]`` and carries two real levels as
long as ``T^2`` stays below ``max 2 p q`` on that oval.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .errors import Diverged, MaxIterations, NotBroken, OutOfOvalRange
from .numerics import DEFAULT_NEWTON_TOL, DEFAULT_ROOT_TOL, Bracket, find_root_1d, newton_complex
from .pseudometric import PtContour, make_pair, normalize_pair, pt_normalize, unit_ordinary

OVAL_GRID = 512
EXCEPTIONAL_TOL = 1e-9
CONJUGATE_TOL = 1e-8


@dataclass(frozen=True)
class SquareWellParams:
    t2: float

    def __post_init__(self):
        if not self.t2 >= 0:
            raise ValueError("coupling T^2 must be nonnegative")


@dataclass(frozen=True)
class OvalPoint:
    p: float
    q: float

    @property
    def residual(self):
        return oval_residual(self.p, self.q)


@dataclass(frozen=True)
class SquareWellLevel:
    level_index: int
    energy: complex
    lam: complex
    kappa: complex
    match_coeff: complex
    quasi_parity: int
    broken: bool
    t2: float
    exceptional: bool = False
    norm_const: complex = 1.0
    metric_sign: int | None = None

    @property
    def p(self):
        return self.lam.real

    @property
    def q(self):
        return -self.lam.imag

    @property
    def label(self):
        return self.level_index

    def __call__(self, x):
        return wavefunction(self, x)


@dataclass(frozen=True)
class CriticalCoupling:
    oval_index: int
    t2_crit: float
    merge_point: OvalPoint

    @property
    def energy(self):
        """Real energy at which the two levels of the oval coalesce."""
        return self.merge_point.p ** 2 - self.merge_point.q ** 2


class LevelList(list):
    """Levels sorted by energy; ``broken_ovals`` lists ovals that contributed none."""

    def __init__(self, levels=(), broken_ovals=()):
        super().__init__(levels)
        self.broken_ovals = list(broken_ovals)


def oval_interval(n):
    return (2 * n + 1) * np.pi / 2, (n + 1) * np.pi


def oval_residual(p, q):
    return q * np.sinh(2 * q) + p * np.sin(2 * p)


def matching_residual(E, t2):
    """``lam cot lam + kap cot kap`` at complex energy ``E`` (principal square roots).

    Both terms are even in their wavenumber, so the choice of square-root
    branch does not matter. The function has poles where ``sin lam`` or
    ``sin kap`` vanishes; see :func:`wronskian_residual` for a pole-free form.
    """
    lam = np.sqrt(complex(E) - 1j * t2)
    kap = np.sqrt(complex(E) + 1j * t2)
    return _xcot(lam) + _xcot(kap)


def wronskian_residual(E, t2):
    """``lam cos lam sin kap + kap cos kap sin lam``: the matching condition times
    ``sin lam sin kap``, entire in ``E``. It also vanishes on levels whose
    wavefunction has a node at the origin (``T^2 = 0``, odd ``N``)."""
    lam = np.sqrt(complex(E) - 1j * t2)
    kap = np.sqrt(complex(E) + 1j * t2)
    return lam * np.cos(lam) * np.sin(kap) + kap * np.cos(kap) * np.sin(lam)


def _xcot(z):
    return 1.0 + 0j if z == 0 else z / np.tan(z)


def oval_branch(n, p):
    """The ``q >= 0`` on oval ``n`` above abscissa ``p``.

    ``q sinh 2q`` is strictly increasing for ``q >= 0``, so the solution of
    ``q sinh 2q = -p sin 2p`` is unique; it is 0 at the interval ends.
    """
    a, b = oval_interval(n)
    if not a <= p <= b:
        raise OutOfOvalRange(f"p = {p} outside oval {n} interval [{a}, {b}]")
    rhs = -p * np.sin(2 * p)
    if rhs <= 0.0 or p == a or p == b:
        return 0.0
    hi = max(1.0, 0.5 * np.arcsinh(rhs))
    f = lambda q: q * np.sinh(2 * q) - rhs  # noqa: E731
    return find_root_1d(f, Bracket(0.0, hi, -rhs, f(hi)), tol=1e-15)


@lru_cache(maxsize=256)
def critical_coupling(n):
    """Largest ``T^2 = 2 p q`` reached on oval ``n``: the hyperbola's tangency point."""
    if n < 0:
        raise ValueError("oval index must be >= 0")
    a, b = oval_interval(n)
    res = minimize_scalar(
        lambda p: -2.0 * p * oval_branch(n, p),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-12, "maxiter": 500},
    )
    if not res.success:
        raise MaxIterations(f"critical coupling search on oval {n}: {res.message}")
    p = float(res.x)
    q = oval_branch(n, p)
    return CriticalCoupling(n, 2.0 * p * q, OvalPoint(p, q))


def _make_level(N, E, t2, broken, exceptional=False, Q=None):
    E = complex(E)
    lam = np.sqrt(E - 1j * t2)
    kap = np.sqrt(E + 1j * t2)
    return SquareWellLevel(
        level_index=N,
        energy=E,
        lam=lam,
        kappa=kap,
        match_coeff=_match_coeff(lam, kap),
        quasi_parity=(1 if N % 2 == 0 else -1) if Q is None else Q,
        broken=broken,
        t2=float(t2),
        exceptional=exceptional,
    )


def _real_level(N, p, q, t2, exceptional=False):
    lam = complex(p, -q)
    kap = complex(p, q)
    return SquareWellLevel(
        level_index=N,
        energy=complex(p * p - q * q, 0.0),
        lam=lam,
        kappa=kap,
        match_coeff=_match_coeff(lam, kap),
        quasi_parity=1 if N % 2 == 0 else -1,
        broken=False,
        t2=float(t2),
        exceptional=exceptional,
    )


def _match_coeff(lam, kap):
    # continuity: C = -sin lam / sin kap; derivative: C = lam cos lam / (kap cos kap).
    # Use whichever denominator is better conditioned.
    s, d = np.sin(kap), kap * np.cos(kap)
    if abs(s) >= abs(d):
        return complex(-np.sin(lam) / s)
    return complex(lam * np.cos(lam) / d)


def _oval_roots(n, t2, tol):
    a, b = oval_interval(n)
    grid = np.linspace(a, b, OVAL_GRID + 1)
    h = kernels.oval_q_array(grid) - t2 / (2 * grid)
    h[0], h[-1] = -t2 / (2 * a), -t2 / (2 * b)  # q vanishes exactly at the ends
    changes = np.nonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0)[0]
    f = lambda p: oval_branch(n, p) - t2 / (2 * p)  # noqa: E731
    if changes.size == 2:
        brackets = [(grid[k], grid[k + 1]) for k in changes]
    else:
        # tangency closer than the grid resolution: split at the maximizer
        pm = critical_coupling(n).merge_point.p
        brackets = [(a, pm), (pm, b)]
    return [find_root_1d(f, Bracket.of(f, lo, hi), tol=tol) for lo, hi in brackets]


def real_levels(params, n_max, tol=DEFAULT_ROOT_TOL):
    """Real levels on ovals ``0..n_max``, sorted by energy.

    Level ``N = 2n`` (``2n + 1``) is the lower (upper) intersection of the
    hyperbola with oval ``n``; at ``T^2 = 0`` these are
    ``E_N = (N+1)^2 pi^2 / 4``. Ovals beyond their critical coupling give no
    real level and are listed in ``broken_ovals``. Exactly at the critical
    coupling a single level flagged ``exceptional`` is returned.
    """
    t2 = params.t2
    levels, broken = [], []
    for n in range(n_max + 1):
        a, b = oval_interval(n)
        if t2 == 0.0:
            levels += [_real_level(2 * n, a, 0.0, 0.0), _real_level(2 * n + 1, b, 0.0, 0.0)]
            continue
        cc = critical_coupling(n)
        if abs(t2 - cc.t2_crit) <= EXCEPTIONAL_TOL * max(1.0, cc.t2_crit):
            mp = cc.merge_point
            levels.append(_real_level(2 * n, mp.p, t2 / (2 * mp.p), t2, exceptional=True))
            continue
        if t2 > cc.t2_crit:
            broken.append(n)
            continue
        for branch, p in enumerate(_oval_roots(n, t2, tol)):
            levels.append(_real_level(2 * n + branch, p, t2 / (2 * p), t2))
    levels.sort(key=lambda lv: lv.energy.real)
    return LevelList(levels, broken)


def spectrum(params, n_max, tol=DEFAULT_ROOT_TOL):
    """Real levels and broken-pair members of ovals ``0..n_max``, ordered by ``N``."""
    levels = real_levels(params, n_max, tol)
    out = list(levels)
    for n in levels.broken_ovals:
        out += broken_pair(params, n)
    out.sort(key=lambda lv: lv.level_index)
    return out


def _newton_upper(F, seed, tol):
    z = newton_complex(F, seed, tol=tol).root
    return z if z.imag >= 0 else z.conjugate()


def broken_pair(params, n, tol=DEFAULT_NEWTON_TOL, max_step=0.25):
    """Complex-conjugate pair born from oval ``n`` beyond its critical coupling.

    Solves ``F(E) = 0`` by Newton iteration seeded at the merge energy plus
    ``0.1 i``. Far above the critical coupling the seed is carried along by
    continuation in ``T^2`` (steps of at most ``max_step``). Returns
    ``(psi_plus, psi_minus)`` with ``Im E > 0`` first.
    """
    t2 = params.t2
    cc = critical_coupling(n)
    if t2 <= cc.t2_crit * (1 + EXCEPTIONAL_TOL):
        raise NotBroken(f"T^2 = {t2} does not exceed the critical coupling {cc.t2_crit:.6g}")
    start = min(t2, cc.t2_crit + 0.05)
    path = [start]
    if t2 > start:
        k = int(np.ceil((t2 - start) / max_step))
        path += list(np.linspace(start, t2, k + 1)[1:])
    z = complex(cc.energy, 0.1)
    for s in path:
        z = _newton_upper(lambda E, s=s: matching_residual(E, s), z, tol)
    F = lambda E: matching_residual(E, t2)  # noqa: E731
    z_minus = newton_complex(F, z.conjugate(), tol=tol).root
    if abs(z_minus - z.conjugate()) > CONJUGATE_TOL:
        raise Diverged(f"second root {z_minus} is not the conjugate of {z}")
    return (
        _make_level(2 * n, z, t2, broken=True, Q=1),
        _make_level(2 * n + 1, z_minus, t2, broken=True, Q=-1),
    )


def wavefunction(level, x):
    """``sin lam (x+1)`` on ``[-1, 0]``, ``C sin kap (x-1)`` on ``[0, 1]``, zero outside."""
    x = np.real(np.asarray(x))
    left = np.sin(level.lam * (x + 1))
    right = level.match_coeff * np.sin(level.kappa * (x - 1))
    out = np.where(x <= 0, left, right)
    out = np.where(np.abs(x) <= 1, out, 0.0)
    return level.norm_const * out


def default_contour():
    return PtContour.interval()


def normalize(level, contour=None):
    """Pseudo-normalize a real level to ``<psi|P|psi> = +-1`` (PT-invariant phase)."""
    contour = default_contour() if contour is None else contour
    return pt_normalize(level, contour)


def normalized_levels(params, n_max, contour=None):
    contour = default_contour() if contour is None else contour
    levels = real_levels(params, n_max)
    return LevelList([normalize(lv, contour) for lv in levels], levels.broken_ovals)


def pair(params, n, contour=None, renormalize=True):
    """:class:`~ptnorm.pseudometric.BrokenPair` for oval ``n``, members at unit ordinary norm."""
    contour = default_contour() if contour is None else contour
    plus, minus = broken_pair(params, n)
    bp = make_pair(unit_ordinary(plus, contour), unit_ordinary(minus, contour), contour)
    return normalize_pair(bp, contour) if renormalize else bp
