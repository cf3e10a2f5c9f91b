"""Pseudo-unitary time evolution.

A :class:`SpectralDecomposition` is the resolution of the identity

    I = sum_n |psi_n> w_n <partner_n|P

over unbroken modes (``partner = psi_n``, ``w = Q_n``) and broken pairs
(``|psi_+> (1/c*) <psi_-|P + |psi_-> (1/c) <psi_+|P``). Multiplying each
term by its energy gives ``H`` and by ``exp(-i E_n t)`` gives the
propagator, so that coefficient ``a_n(t) = a_n(0) exp(-i E_n t)``.

:func:`grid_oracle` integrates the square-well Schroedinger equation on a
uniform grid, independently of the eigenfunction expansion: a compact
fourth-order (Numerov) discretization in space whose two rows next to the
potential jump use one-sided extensions of the solution, and Crank-Nicolson
steps in time.
"""
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import LinearSolveFailure, OverflowGuard, PoorReconstruction
from .pseudometric import basis_modes, expansion_coefficients, samples

GROWTH_BUDGET = 700.0
DEFAULT_MAX_DEFECT = 1e-6
STEPS_PER_UNIT_TIME = 2000


@dataclass(frozen=True)
class SpectralDecomposition:
    modes: tuple

    @classmethod
    def from_basis(cls, basis):
        """Build from normalized unbroken states and/or broken pairs (pairs keep their order)."""
        return cls(tuple(basis_modes(basis)))

    @property
    def truncation(self):
        return len(self.modes)

    @property
    def energies(self):
        return np.array([m.energy for m in self.modes], dtype=complex)

    @property
    def weights(self):
        return np.array([m.weight for m in self.modes], dtype=complex)

    def metric(self):
        """Model Gram matrix ``G[j, k] = <psi_j|P|psi_k>`` implied by the weights."""
        M = self.truncation
        G = np.zeros((M, M), dtype=complex)
        for j, m in enumerate(self.modes):
            k = next(i for i, other in enumerate(self.modes) if other.state is m.partner)
            G[k, j] = 1.0 / m.weight
        return G

    def coefficient_pseudo_norm(self, a):
        a = np.asarray(a, dtype=complex)
        return complex(np.conj(a) @ self.metric() @ a)

    def coefficients(self, f, contour):
        return expansion_coefficients(self.modes, f, contour)

    def reconstruct(self, a, r):
        r = np.asarray(r, dtype=complex)
        out = np.zeros(r.shape, dtype=complex)
        for coef, m in zip(a, self.modes):
            out += coef * np.asarray(m.state(r), dtype=complex)
        return out

    def apply_hamiltonian(self, f, contour, r=None):
        """Samples of ``H f = sum_n psi_n E_n w_n <partner_n|P|f>`` at ``r`` (default: contour nodes)."""
        r = contour.points if r is None else r
        return self.reconstruct(self.energies * self.coefficients(f, contour), r)


@dataclass(frozen=True)
class EvolvedState:
    basis: SpectralDecomposition
    initial_coeffs: np.ndarray
    time: float
    initial_pseudo_norm: complex
    defect: float = 0.0

    @property
    def coeffs(self):
        return self.initial_coeffs * np.exp(-1j * self.basis.energies * self.time)

    def __call__(self, r):
        return self.basis.reconstruct(self.coeffs, r)


def decompose(psi0, basis, contour, max_defect=DEFAULT_MAX_DEFECT):
    """Expansion coefficients of ``psi0`` at ``t = 0``.

    Raises :class:`PoorReconstruction` when the truncated expansion misses
    ``psi0`` by more than ``max_defect`` (max-norm on the contour nodes);
    pass ``max_defect=None`` to skip the check.
    """
    a = basis.coefficients(psi0, contour)
    r = contour.points
    defect = float(np.max(np.abs(basis.reconstruct(a, r) - np.asarray(psi0(r), dtype=complex))))
    if max_defect is not None and defect > max_defect:
        raise PoorReconstruction(f"reconstruction defect {defect:.3g} > {max_defect:.3g}")
    return EvolvedState(basis, a, 0.0, basis.coefficient_pseudo_norm(a), defect)


def evolve(state, t):
    """Advance ``state`` by ``t``. Coefficients are always recomputed from ``t = 0``."""
    total = state.time + t
    growth = float(np.max(np.abs(state.basis.energies.imag), initial=0.0)) * abs(total)
    if growth > GROWTH_BUDGET:
        raise OverflowGuard(f"|Im E| t = {growth:.3g} exceeds {GROWTH_BUDGET}")
    return replace(state, time=total)


class TraceRow(NamedTuple):
    t: float
    pseudo_norm: complex
    norm: float


def pseudo_norm_trace(psi0, basis, times, contour, max_defect=DEFAULT_MAX_DEFECT):
    """``(t, <psi(t)|P|psi(t)>, <psi(t)|psi(t)>)`` by quadrature of the reconstructed states."""
    state = psi0 if isinstance(psi0, EvolvedState) else decompose(psi0, basis, contour, max_defect)
    direct, mirrored = samples([m.state for m in basis.modes], contour)
    w = contour.weights
    rows = []
    for t in times:
        a = evolve(state, t - state.time).coeffs
        here = a @ direct
        there = a @ mirrored
        rows.append(
            TraceRow(
                float(t),
                complex(np.sum(w * np.conj(there) * here)),
                float(np.sum(w * np.abs(here) ** 2)),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# finite-difference oracle for the square well
# ---------------------------------------------------------------------------


def oracle_grid(size):
    """Interior nodes of the uniform grid on [-1, 1] with ``size + 1`` cells."""
    h = 2.0 / (size + 1)
    return -1.0 + h * np.arange(1, size + 1), h


def step_potential(x, t2):
    """``+i T^2`` for ``x < 0`` and ``-i T^2`` for ``x > 0`` (zero at the origin)."""
    return -1j * t2 * np.sign(x)


@dataclass(frozen=True)
class OracleResult:
    x: np.ndarray
    psi: np.ndarray
    pseudo_norms: np.ndarray


def grid_pseudo_norm(psi, h):
    psi = np.asarray(psi)
    return complex(np.sum(np.conj(psi[::-1]) * psi) * h)


def numerov_pencil(size, t2):
    """Band arrays ``(M, S)`` with ``i M psi_t = S psi`` on :func:`oracle_grid`.

    Away from the origin this is the Numerov relation
    ``psi'' = (V - i d/dt) psi`` averaged with weights ``(1, 10, 1) / 12``.
    The jump of ``V`` falls between nodes ``m`` and ``m + 1``; in those two
    rows the neighbour across the jump is replaced by the continuation of the
    solution from the row's own side, which differs by
    ``dV h^2 (psi_m / 24 + psi_{m+1} / 12)`` (and mirrored). Both rows use the
    potential of their own side.
    """
    if size % 2:
        raise ValueError("grid oracle needs an even number of interior points")
    x, h = oracle_grid(size)
    V = step_potential(x, t2)
    mass = np.empty((3, size), dtype=complex)
    mass[0] = mass[2] = 1.0 / 12.0
    mass[1] = 10.0 / 12.0
    stiff = np.empty((3, size), dtype=complex)
    stiff[0] = stiff[2] = -1.0 / h**2
    stiff[1] = 2.0 / h**2
    stiff += V[None, :] * mass
    m = size // 2 - 1
    jump = (V[m + 1] - V[m]) * h**2
    for bands in (mass, stiff):
        c = bands[2, m]
        bands[2, m] = c * (1.0 - jump / 12.0)
        bands[1, m] -= c * jump / 24.0
        c = bands[0, m + 1]
        bands[0, m + 1] = c * (1.0 + jump / 12.0)
        bands[1, m + 1] += c * jump / 24.0
    return mass, stiff


def grid_oracle(params, psi0, t, steps=None, backend=None):
    """Integrate ``i psi_t = (-d^2/dx^2 + V) psi`` on [-1, 1] with Dirichlet ends.

    ``psi0`` holds samples at :func:`oracle_grid` nodes (an even number, at
    least 400). Time stepping is Crank-Nicolson on :func:`numerov_pencil`.
    The returned ``pseudo_norms`` are the discrete
    ``sum conj(psi(-x_j)) psi(x_j) dx`` after every step.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.ndim != 1 or psi0.size < 400:
        raise ValueError("grid oracle needs at least 400 interior points")
    if steps is None:
        steps = max(1, int(np.ceil(STEPS_PER_UNIT_TIME * abs(t))))
    x, h = oracle_grid(psi0.size)
    mass, stiff = numerov_pencil(psi0.size, params.t2)
    half = 0.5j * t / steps
    impl = kernels if backend is None else kernels.BACKENDS[backend]
    try:
        psi, norms = impl.cn_propagate(psi0, mass + half * stiff, mass - half * stiff, steps)
    except ZeroDivisionError as exc:
        raise LinearSolveFailure(str(exc)) from exc
    if not np.all(np.isfinite(psi)):
        raise LinearSolveFailure("non-finite values in Crank-Nicolson solution")
    return OracleResult(x, psi, norms * h)
