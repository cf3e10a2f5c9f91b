"""numba-compiled loop kernels (default backend)."""
import numba
import numpy as np

_NEWTON_STEPS = 100


@numba.njit(cache=True)
def _laguerre_flat(n, a, z, out):
    for i in range(z.size):
        x = z[i]
        prev = 1.0 + 0.0j
        if n == 0:
            out[i] = prev
            continue
        cur = 1.0 + a - x
        for k in range(1, n):
            nxt = ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
            prev = cur
            cur = nxt
        out[i] = cur


def laguerre_array(n, a, z):
    """Generalized Laguerre polynomial L_n^(a)(z) on an array, by ascending recurrence."""
    z = np.asarray(z, dtype=np.complex128)
    flat = np.ascontiguousarray(z).ravel()
    out = np.empty_like(flat)
    _laguerre_flat(int(n), complex(a), flat, out)
    return out.reshape(z.shape)


@numba.njit(cache=True)
def _oval_q_flat(p, out):
    # f(q) = q sinh 2q - rhs is convex and increasing on q >= 0 and f(hi) >= 0,
    # so Newton from hi decreases monotonically onto the root
    for i in range(p.size):
        rhs = -p[i] * np.sin(2.0 * p[i])
        if rhs <= 0.0:
            out[i] = 0.0
            continue
        q = max(1.0, 0.5 * np.arcsinh(rhs))
        for _ in range(_NEWTON_STEPS):
            s = np.sinh(2.0 * q)
            step = (q * s - rhs) / (s + 2.0 * q * np.cosh(2.0 * q))
            if step <= 1e-16 * q:
                break
            q -= step
        out[i] = q


def oval_q_array(p):
    """Nonnegative q solving q sinh 2q = -p sin 2p, elementwise; 0 where the rhs is <= 0."""
    p = np.asarray(p, dtype=np.float64)
    flat = np.ascontiguousarray(p).ravel()
    out = np.empty_like(flat)
    _oval_q_flat(flat, out)
    return out.reshape(p.shape)


@numba.njit(cache=True)
def _cn_loop(psi, lhs, rhs, steps, norms):
    size = psi.size
    # forward-elimination factors of the constant left-hand matrix (Thomas)
    cprime = np.empty(size, dtype=np.complex128)
    denom = np.empty(size, dtype=np.complex128)
    denom[0] = lhs[1, 0]
    if denom[0] == 0:
        return False
    cprime[0] = lhs[2, 0] / denom[0]
    for j in range(1, size):
        denom[j] = lhs[1, j] - lhs[0, j] * cprime[j - 1]
        if denom[j] == 0:
            return False
        cprime[j] = lhs[2, j] / denom[j]
    work = np.empty(size, dtype=np.complex128)
    for k in range(steps):
        for j in range(size):
            v = rhs[1, j] * psi[j]
            if j > 0:
                v += rhs[0, j] * psi[j - 1]
            if j < size - 1:
                v += rhs[2, j] * psi[j + 1]
            work[j] = v
        work[0] = work[0] / denom[0]
        for j in range(1, size):
            work[j] = (work[j] - lhs[0, j] * work[j - 1]) / denom[j]
        psi[size - 1] = work[size - 1]
        for j in range(size - 2, -1, -1):
            psi[j] = work[j] - cprime[j] * psi[j + 1]
        acc = 0.0 + 0.0j
        for j in range(size):
            acc += np.conj(psi[size - 1 - j]) * psi[j]
        norms[k] = acc
    return True


def cn_propagate(psi0, lhs, rhs, steps):
    """Repeatedly solve ``A psi_new = B psi_old`` for tridiagonal ``A`` and ``B``.

    ``lhs`` and ``rhs`` are ``(3, size)`` band arrays: row ``j`` of the matrix
    has ``bands[0, j]`` on column ``j - 1``, ``bands[1, j]`` on the diagonal
    and ``bands[2, j]`` on column ``j + 1``. Returns the final state and the
    discrete pseudo-norm ``sum conj(psi[::-1]) psi`` after each step.
    """
    psi = np.array(psi0, dtype=np.complex128)
    A = np.ascontiguousarray(lhs, dtype=np.complex128)
    B = np.ascontiguousarray(rhs, dtype=np.complex128)
    norms = np.empty(steps, dtype=np.complex128)
    if not _cn_loop(psi, A, B, int(steps), norms):
        raise ZeroDivisionError("zero pivot in tridiagonal elimination")
    return psi, norms
