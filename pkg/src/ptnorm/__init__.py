"""Pseudo-norms and pseudo-unitary evolution for two PT-symmetric models.

* :mod:`ptnorm.squarewell`: square well on [-1, 1] with the imaginary step
  potential ``-i T^2 sign x``; levels from the oval/hyperbola construction
  and the conjugate pairs past each critical coupling.
* :mod:`ptnorm.oscillator`: the spiked harmonic oscillator on a contour
  ``r = x - i delta``, solved in closed form by Laguerre polynomials.
* :mod:`ptnorm.pseudometric`: the indefinite product ``<phi|P|psi>``,
  normalization, Gram matrices and completeness.
* :mod:`ptnorm.evolution`: spectral propagator, conservation traces and a
  finite-difference oracle.
"""
from . import evolution, kernels, numerics, oscillator, pseudometric, squarewell
from .errors import NumericalError, PtNormError, RegimeError

__version__ = "0.1.0"

__all__ = [
    "evolution",
    "kernels",
    "numerics",
    "oscillator",
    "pseudometric",
    "squarewell",
    "PtNormError",
    "NumericalError",
    "RegimeError",
]
