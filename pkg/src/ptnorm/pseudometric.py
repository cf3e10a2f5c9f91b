"""The indefinite scalar product <phi|P|psi> and the structures built on it.

A wavefunction is any callable mapping an array of complex coordinates to an
array of complex values. States carrying ``norm_const`` and ``metric_sign``
fields (the square-well levels and oscillator states) can additionally be
rescaled by :func:`pt_normalize` and :func:`normalize_pair`.

On the contour ``r(t) = t - i delta`` the parity-reflected point of ``r(t)``
is ``-conj(r(t)) = r(-t)``, so

    <phi|P|psi> = int conj(phi(-conj r(t))) psi(r(t)) dt

is the ordinary parity-weighted product in the real variable ``t``; for
``delta = 0`` it reduces to ``int conj(phi(-x)) psi(x) dx``.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import DegeneratePair, TruncationTooTight, ZeroPseudoNorm
from .numerics import QuadratureRule, composite_rule, gauss_legendre

GRAM_TOL = 1e-6
SELF_OVERLAP_TOL = 1e-8
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class PtContour:
    """Composite Gauss-Legendre discretization of ``r(t) = t - i delta``, ``|t| <= L``."""

    delta: float
    half_length: float
    rule: QuadratureRule
    panels: int

    def __post_init__(self):
        if self.delta < 0 or self.half_length <= 0 or self.panels < 1:
            raise ValueError("need delta >= 0, half_length > 0, panels >= 1")

    @classmethod
    def make(cls, delta=1.0, half_length=10.0, panels=10, points=50):
        return cls(float(delta), float(half_length), gauss_legendre(points), int(panels))

    @classmethod
    def interval(cls, panels=8, points=50):
        """Real segment [-1, 1]; an even panel count keeps x = 0 on a panel edge."""
        if panels % 2:
            raise ValueError("square-well contour needs an even panel count")
        return cls(0.0, 1.0, gauss_legendre(points), int(panels))

    @cached_property
    def _grid(self):
        return composite_rule(-self.half_length, self.half_length, self.panels, self.rule)

    @property
    def t(self):
        return self._grid[0]

    @property
    def weights(self):
        return self._grid[1]

    @property
    def points(self):
        return self.t - 1j * self.delta

    @property
    def ends(self):
        L = self.half_length
        return np.array([-L, L]) - 1j * self.delta

    @property
    def size(self):
        return self.t.size


def _eval(f, r):
    return np.asarray(f(r), dtype=complex)


def _check_ends(phi, psi, contour, peak):
    r = contour.ends
    edge = np.abs(np.conj(_eval(phi, -np.conj(r))) * _eval(psi, r))
    if np.max(edge) > BOUNDARY_TOL * max(1.0, peak):
        raise TruncationTooTight(
            f"integrand {np.max(edge):.3g} at |t| = {contour.half_length}; enlarge the contour"
        )


def pseudo_product(phi, psi, contour, check=True):
    """``<phi|P|psi>`` by contour quadrature."""
    r = contour.points
    integrand = np.conj(_eval(phi, -np.conj(r))) * _eval(psi, r)
    if check:
        _check_ends(phi, psi, contour, np.max(np.abs(integrand), initial=0.0))
    return complex(np.sum(contour.weights * integrand))


def ordinary_product(phi, psi, contour):
    """Plain ``<phi|psi> = int conj(phi(r(t))) psi(r(t)) dt`` along the contour."""
    r = contour.points
    return complex(np.sum(contour.weights * np.conj(_eval(phi, r)) * _eval(psi, r)))


def samples(states, contour):
    """Matrices of state values on the contour and on its parity image, shape (M, K)."""
    r = contour.points
    if not states:
        empty = np.zeros((0, r.size), dtype=complex)
        return empty, empty
    direct = np.array([_eval(s, r) for s in states])
    mirrored = np.array([_eval(s, -np.conj(r)) for s in states])
    return direct, mirrored


def pt_phase(psi, contour):
    """Least-squares constant ``b`` with ``conj(psi(-conj r)) = b psi(r)`` on the contour."""
    r = contour.points
    v = _eval(psi, r)
    u = np.conj(_eval(psi, -np.conj(r)))
    w = contour.weights
    return complex(np.sum(w * u * np.conj(v)) / np.sum(w * np.abs(v) ** 2))


def pt_normalize(state, contour, tol=SELF_OVERLAP_TOL):
    """Rescale ``state.norm_const`` so that ``<psi|P|psi> = +-1``.

    The magnitude follows from the self pseudo-overlap of the bare
    (``norm_const = 1``) function. The phase is the one making the state
    PT-invariant, ``conj(psi(-conj r)) = psi(r)``, taken with argument in
    [0, pi). The resulting sign is stored in ``metric_sign``.
    """
    bare = replace(state, norm_const=1.0, metric_sign=None)
    s = pseudo_product(bare, bare, contour)
    scale = ordinary_product(bare, bare, contour).real
    if abs(s) <= tol * scale:
        raise ZeroPseudoNorm(
            f"self pseudo-overlap {abs(s):.3g} vanishes (ordinary norm {scale:.3g}); "
            "this is a broken-pair state"
        )
    theta = np.mod(0.5 * np.angle(pt_phase(bare, contour)), np.pi)
    norm = np.exp(1j * theta) / np.sqrt(abs(s.real))
    return replace(state, norm_const=complex(norm), metric_sign=1 if s.real > 0 else -1)


def unit_ordinary(state, contour):
    """Rescale ``state.norm_const`` to unit ordinary norm along the contour."""
    nrm = np.sqrt(ordinary_product(state, state, contour).real)
    return replace(state, norm_const=state.norm_const / nrm)


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    labels: list
    kind: str


def classify_gram(G, tol=GRAM_TOL):
    """One of ``empty``, ``unbroken-diagonal``, ``broken-block`` or ``inconsistent``.

    ``broken-block`` means: every state either has a real unit self-overlap and
    no partner, or a vanishing self-overlap and exactly one partner with
    which its cross overlap is nonzero.
    """
    m = G.shape[0]
    if m == 0:
        return "empty"
    big = np.abs(G) > tol
    paired = 0
    for i in range(m):
        partners = [j for j in range(m) if j != i and big[i, j]]
        d = G[i, i]
        if abs(abs(d.real) - 1.0) <= tol and abs(d.imag) <= tol:
            if partners:
                return "inconsistent"
        elif abs(d) <= tol:
            if len(partners) != 1 or not big[partners[0], i]:
                return "inconsistent"
            paired += 1
        else:
            return "inconsistent"
    return "broken-block" if paired else "unbroken-diagonal"


def gram(states, contour, labels=None, tol=GRAM_TOL):
    """Table of pairwise pseudo-products ``G[i, j] = <psi_i|P|psi_j>``."""
    states = list(states)
    direct, mirrored = samples(states, contour)
    for s in states:
        _check_ends(s, s, contour, 1.0)
    G = (np.conj(mirrored) * contour.weights) @ direct.T
    if labels is None:
        labels = [getattr(s, "label", i) for i, s in enumerate(states)]
    return GramMatrix(entries=G, labels=list(labels), kind=classify_gram(G, tol))


# ---------------------------------------------------------------------------
# Broken pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BrokenPair:
    """Eigenstates with energies ``E`` (Im E > 0) and ``conj(E)``.

    Both self pseudo-overlaps vanish; ``cross_norm`` is
    ``c = <psi_plus|P|psi_minus>``.
    """

    psi_plus: object
    psi_minus: object
    energy: complex
    cross_norm: complex
    self_overlaps: tuple = field(default=(0j, 0j))


def make_pair(psi_plus, psi_minus, contour, tol=SELF_OVERLAP_TOL):
    """Assemble a :class:`BrokenPair`, measuring ``c`` and the self-overlaps.

    Self-overlaps are judged relative to the ordinary norms of the two states.
    """
    energy = complex(psi_plus.energy)
    if energy.imag <= 0:
        raise ValueError("psi_plus must carry the energy with positive imaginary part")
    s_pp = pseudo_product(psi_plus, psi_plus, contour)
    s_mm = pseudo_product(psi_minus, psi_minus, contour)
    n_p = ordinary_product(psi_plus, psi_plus, contour).real
    n_m = ordinary_product(psi_minus, psi_minus, contour).real
    if abs(s_pp) > tol * n_p or abs(s_mm) > tol * n_m:
        raise ValueError(
            f"self-overlaps {abs(s_pp):.3g}, {abs(s_mm):.3g} do not vanish; not a broken pair"
        )
    c = pseudo_product(psi_plus, psi_minus, contour)
    if abs(c) < 1e-12 * np.sqrt(n_p * n_m):
        raise DegeneratePair(f"cross overlap |c| = {abs(c):.3g}")
    return BrokenPair(psi_plus, psi_minus, energy, c, (s_pp, s_mm))


def normalize_pair(pair, contour, tol=SELF_OVERLAP_TOL):
    """Rescale ``psi_minus`` so that ``<psi_plus|P|psi_minus> = 1``."""
    c = pair.cross_norm
    if abs(c) < 1e-12:
        raise DegeneratePair(f"cross overlap |c| = {abs(c):.3g}")
    minus = replace(pair.psi_minus, norm_const=pair.psi_minus.norm_const / c)
    c_new = pseudo_product(pair.psi_plus, minus, contour)
    s_mm = pseudo_product(minus, minus, contour)
    n_m = ordinary_product(minus, minus, contour).real
    if abs(c_new - 1.0) > tol or abs(s_mm) > tol * n_m:
        raise DegeneratePair(f"renormalization failed: c = {c_new}, self-overlap {abs(s_mm):.3g}")
    return BrokenPair(pair.psi_plus, minus, pair.energy, 1.0 + 0j, (pair.self_overlaps[0], s_mm))


# ---------------------------------------------------------------------------
# Completeness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mode:
    """One term ``|state> weight <partner|P`` of the resolution of the identity."""

    state: object
    partner: object
    weight: complex
    energy: complex


def basis_modes(basis):
    """Expand a basis of normalized unbroken states and :class:`BrokenPair` items into modes.

    Unbroken states contribute ``|psi> Q <psi|P`` with ``Q = metric_sign``;
    a pair contributes ``|psi_+> (1/c*) <psi_-|P + |psi_-> (1/c) <psi_+|P``.
    Pair members carry energies ``E`` and exactly ``conj(E)``.
    """
    modes = []
    for item in basis:
        if isinstance(item, BrokenPair):
            c = item.cross_norm
            E = item.energy
            modes.append(Mode(item.psi_plus, item.psi_minus, 1.0 / np.conj(c), E))
            modes.append(Mode(item.psi_minus, item.psi_plus, 1.0 / c, np.conj(E)))
        else:
            sign = getattr(item, "metric_sign", None)
            if sign is None:
                raise ValueError("unbroken basis states must be pseudo-normalized first")
            modes.append(Mode(item, item, complex(sign), complex(item.energy)))
    return modes


def expansion_coefficients(modes, f, contour):
    """``a_n = w_n <partner_n|P|f>`` for each mode."""
    partners = [m.partner for m in modes]
    _, mirrored = samples(partners, contour)
    fr = _eval(f, contour.points)
    proj = (np.conj(mirrored) * contour.weights) @ fr
    return np.array([m.weight for m in modes], dtype=complex) * proj


def completeness_defect(basis, contour, f, grid=None):
    """``max |sum_n psi_n w_n <partner_n|P|f> - f|`` over ``grid``.

    ``basis`` is a list of normalized states and/or :class:`BrokenPair`
    objects, or anything with a ``modes`` attribute. ``grid`` defaults to
    the contour nodes.
    """
    modes = basis.modes if hasattr(basis, "modes") else basis_modes(basis)
    grid = contour.points if grid is None else np.asarray(grid, dtype=complex)
    a = expansion_coefficients(modes, f, contour)
    recon = np.zeros(grid.shape, dtype=complex)
    for coef, m in zip(a, modes):
        recon += coef * _eval(m.state, grid)
    return float(np.max(np.abs(recon - _eval(f, grid)), initial=0.0))
