"""Vectorized numpy/scipy kernels (fallback backend)."""
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

# Fixed bisection depth: the bracket starts below ~25 and 2**-64 of that is
# far under double precision.
_BISECT_STEPS = 64


def laguerre_array(n, a, z):
    """Generalized Laguerre polynomial L_n^(a)(z) on an array, by ascending recurrence."""
    z = np.asarray(z, dtype=np.complex128)
    a = complex(a)
    prev = np.ones_like(z)
    if n == 0:
        return prev
    cur = 1.0 + a - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    return cur


def oval_q_array(p):
    """Nonnegative q solving q sinh 2q = -p sin 2p, elementwise; 0 where the rhs is <= 0."""
    p = np.asarray(p, dtype=np.float64)
    rhs = -p * np.sin(2.0 * p)
    rhs = np.where(rhs > 0.0, rhs, 0.0)
    lo = np.zeros_like(rhs)
    hi = np.maximum(1.0, 0.5 * np.arcsinh(rhs))
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        above = mid * np.sinh(2.0 * mid) > rhs
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return np.where(rhs > 0.0, 0.5 * (lo + hi), 0.0)


def _band_matrix(bands, fmt):
    return sp.diags([bands[0, 1:], bands[1], bands[2, :-1]], [-1, 0, 1], format=fmt)


def cn_propagate(psi0, lhs, rhs, steps):
    """Repeatedly solve ``A psi_new = B psi_old`` for tridiagonal ``A`` and ``B``.

    ``lhs`` and ``rhs`` are ``(3, size)`` band arrays: row ``j`` of the matrix
    has ``bands[0, j]`` on column ``j - 1``, ``bands[1, j]`` on the diagonal
    and ``bands[2, j]`` on column ``j + 1``. Returns the final state and the
    discrete pseudo-norm ``sum conj(psi[::-1]) psi`` after each step.
    """
    psi = np.asarray(psi0, dtype=np.complex128).copy()
    A = _band_matrix(np.asarray(lhs, dtype=np.complex128), "csc")
    B = _band_matrix(np.asarray(rhs, dtype=np.complex128), "csr")
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:
        raise ZeroDivisionError(str(exc)) from exc
    norms = np.empty(steps, dtype=np.complex128)
    for k in range(steps):
        psi = lu.solve(B @ psi)
        norms[k] = np.sum(np.conj(psi[::-1]) * psi)
    return psi, norms
