import os
import subprocess
import sys

import numpy as np
import pytest

from ptnorm import kernels
from ptnorm.evolution import numerov_pencil

needs_numba = pytest.mark.skipif("numba" not in kernels.BACKENDS, reason="numba not installed")


@needs_numba
def test_laguerre_backends_agree():
    rng = np.random.default_rng(1)
    z = rng.normal(size=500) + 1j * rng.normal(size=500)
    for n in (0, 1, 5, 12):
        a = kernels.BACKENDS["numba"].laguerre_array(n, 0.2 - 0.7j, z)
        b = kernels.BACKENDS["numpy"].laguerre_array(n, 0.2 - 0.7j, z)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@needs_numba
def test_oval_q_backends_agree():
    p = np.concatenate([np.linspace(np.pi / 2, np.pi, 999), np.linspace(40.5 * np.pi, 41 * np.pi, 99)])
    a = kernels.BACKENDS["numba"].oval_q_array(p)
    b = kernels.BACKENDS["numpy"].oval_q_array(p)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-13)
    inside = a > 0
    np.testing.assert_allclose((a * np.sinh(2 * a))[inside], (-p * np.sin(2 * p))[inside], rtol=1e-12)


def test_oval_q_zero_outside_oval():
    p = np.array([0.3, np.pi / 2, 2.0])  # sin 2p >= 0 for the first two, < 0 for 2.0
    q = kernels.oval_q_array(p)
    assert q[0] == 0 and q[1] == 0 and q[2] > 0


@needs_numba
def test_propagator_backends_agree():
    mass, stiff = numerov_pencil(400, 1.0)
    x = np.linspace(-1, 1, 402)[1:-1]
    psi0 = np.sin(np.pi * (x + 1) / 2) + 0.3j * np.sin(np.pi * (x + 1))
    half = 0.5j * 1e-3
    args = (psi0, mass + half * stiff, mass - half * stiff, 200)
    a, na = kernels.BACKENDS["numba"].cn_propagate(*args)
    b, nb = kernels.BACKENDS["numpy"].cn_propagate(*args)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-11)
    np.testing.assert_allclose(na, nb, rtol=1e-11)


@pytest.mark.parametrize("name", sorted(kernels.BACKENDS))
def test_zero_pivot_raises(name):
    lhs = np.zeros((3, 4), dtype=complex)
    with pytest.raises(ZeroDivisionError):
        kernels.BACKENDS[name].cn_propagate(np.ones(4), lhs, lhs, 1)


@pytest.mark.parametrize("flag,expected", [("0", "numpy"), ("off", "numpy")])
def test_env_flag_selects_numpy(flag, expected):
    env = dict(os.environ, PTNORM_JIT=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from ptnorm import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected


@needs_numba
def test_env_flag_default_is_numba():
    env = {k: v for k, v in os.environ.items() if k != "PTNORM_JIT"}
    out = subprocess.run(
        [sys.executable, "-c", "from ptnorm import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numba"
