"""Acceptance criteria 1-9.

Each test prints one ``criterion k: PASS|FAIL`` line with the measured
numbers; the lines are repeated in the pytest terminal summary. Run with

    python3 -m pytest tests/test_acceptance.py -v
"""
import time

import numpy as np

from ptnorm import evolution as ev
from ptnorm import oscillator as osc
from ptnorm import squarewell as sw
from ptnorm.pseudometric import PtContour, completeness_defect, gram, pseudo_product

PI = np.pi


def test_critical_coupling(criterion):
    sw.critical_coupling.cache_clear()
    start = time.perf_counter()
    t2c = sw.critical_coupling(0).t2_crit
    elapsed = time.perf_counter() - start
    ok = abs(t2c - 4.48) <= 0.05 and elapsed < 1.0
    assert criterion(1, "critical_coupling(0) = 4.48 +- 0.05 in < 1 s", ok, f"T2crit={t2c:.6f}, {elapsed * 1e3:.1f} ms")


def test_hermitian_limit(criterion):
    exact = np.array([(N + 1) ** 2 * PI**2 / 4 for N in range(6)])
    e0 = np.array([lv.energy.real for lv in sw.real_levels(sw.SquareWellParams(0.0), 2)])
    e1 = np.array([lv.energy.real for lv in sw.real_levels(sw.SquareWellParams(0.01), 2)])
    err0 = np.max(np.abs(e0 - exact))
    dev = np.abs(e1 - exact)
    rel = dev / exact
    rises = [N + 1 for N in range(5) if rel[N + 1] >= rel[N]]
    ok = err0 < 1e-10 and np.max(dev) < 1e-2 and not rises
    detail = (
        f"T2=0 max err {err0:.2e}; T2=0.01 max dev {np.max(dev):.2e}; "
        f"rel dev {', '.join(f'{r:.2e}' for r in rel)}; "
        + (f"not decreasing at N={rises}" if rises else "decreasing")
    )
    assert criterion(2, "Hermitian limit and monotone quasi-Hermitian approach", ok, detail)


def test_oscillator_spectrum(criterion):
    regular = [s.energy for s in osc.spectrum(osc.OscillatorParams(0.0), 7)]
    ok_regular = regular == [complex(2 * N + 1) for N in range(16)]
    broken = osc.spectrum(osc.OscillatorParams(-0.5), 7)
    ok_broken = all(s.energy == 4 * s.label.radial_index + 2 - s.label.quasi_parity * 1j for s in broken)
    t = np.linspace(-4, 4, 50)
    worst = 0.0
    for g in (0.0, 0.3, 2.0):
        for s in osc.normalized_spectrum(osc.OscillatorParams(g), 7):
            worst = max(worst, float(np.max(np.abs(osc.ode_residual(s, t - 1j)))))
    pair = osc.broken_pair(osc.OscillatorParams(-0.5), 0)
    for s in (pair.psi_plus, pair.psi_minus):
        worst = max(worst, float(np.max(np.abs(osc.ode_residual(s, t - 1j)))))
    ok = ok_regular and ok_broken and worst < 1e-6
    detail = f"g=0 exact: {ok_regular}; g=-1/2 exact: {ok_broken}; max ODE residual {worst:.2e}"
    assert criterion(3, "closed-form spectra and ODE residual < 1e-6", ok, detail)


def _gram8(delta):
    contour = PtContour.make(delta=delta)
    states = osc.normalized_spectrum(osc.OscillatorParams(0.3, delta), 3, contour)
    return gram(states, contour).entries


def test_pseudo_orthonormality(criterion):
    G = _gram8(1.0)
    target = np.diag([1.0, -1.0] * 4)
    off = np.max(np.abs(G - np.diag(np.diag(G))))
    diag = np.max(np.abs(np.diag(G) - np.diag(target)))
    shift = np.max(np.abs(_gram8(0.5) - G))
    ok = off < 1e-8 and diag < 1e-8 and shift < 1e-7
    detail = f"G=0.3: off-diag {off:.2e}, diag err {diag:.2e}, |G(0.5)-G(1.0)| {shift:.2e}"
    assert criterion(4, "Gram of first 8 states = diag(+1,-1,...)", ok, detail)


def test_broken_structure(criterion):
    contour = PtContour.make()
    raw = osc.broken_pair(osc.OscillatorParams(-0.5), 0, contour, renormalize=False)
    pair = osc.broken_pair(osc.OscillatorParams(-0.5), 0, contour)
    selfs = [abs(pseudo_product(s, s, contour)) for s in (pair.psi_plus, pair.psi_minus)]
    selfs += [abs(pseudo_product(s, s, contour)) for s in (raw.psi_plus, raw.psi_minus)]
    peaks = [float(np.max(np.abs(s(contour.points)))) for s in (pair.psi_plus, pair.psi_minus)]
    c_after = pseudo_product(pair.psi_plus, pair.psi_minus, contour)
    ok = max(selfs) < 1e-8 and min(peaks) > 0.1 and abs(raw.cross_norm) > 1e-3 and abs(c_after - 1) < 1e-10
    detail = (
        f"max self-overlap {max(selfs):.2e}, min peak {min(peaks):.3f}, "
        f"|c| before {abs(raw.cross_norm):.4f}, c after {c_after.real:.12f}{c_after.imag:+.1e}i"
    )
    assert criterion(5, "g=-1/2 pair: zero self-overlaps, c normalized to 1", ok, detail)


def test_conservation_unbroken(criterion):
    contour = PtContour.make()
    basis = osc.normalized_spectrum(osc.OscillatorParams(0.3), 3, contour)
    dec = ev.SpectralDecomposition.from_basis(basis)
    coeffs = (0.6, 0.5, 0.4, 0.3)
    psi0 = lambda r: sum(c * b(r) for c, b in zip(coeffs, basis))  # noqa: E731
    rows = ev.pseudo_norm_trace(psi0, dec, np.linspace(0.0, 10.0, 50), contour)
    q = np.array([r.pseudo_norm for r in rows])
    norms = np.array([r.norm for r in rows])
    drift = np.max(np.abs(q - q[0]))
    witness = np.max(np.abs(norms - norms[0]))
    ok = drift < 1e-8 and witness > 1e-3
    detail = f"oscillator G=0.3, N=0..3: drift {drift:.2e}, ordinary norm change {witness:.3f}"
    assert criterion(6, "pseudo-norm conserved (unbroken), norm is not", ok, detail)


def test_conservation_broken(criterion):
    times = np.linspace(0.0, 5.0, 51)
    interval = PtContour.interval()
    pair = sw.pair(sw.SquareWellParams(5.0), 0, interval)
    dec = ev.SpectralDecomposition.from_basis([pair])
    f = lambda x: 0.6 * pair.psi_plus(x) + 0.8 * pair.psi_minus(x)  # noqa: E731
    rows = ev.pseudo_norm_trace(f, dec, times, interval)
    q = np.array([r.pseudo_norm for r in rows])
    norms = np.array([r.norm for r in rows])
    drift_w, growth_w = np.max(np.abs(q - q[0])), np.max(np.abs(norms / norms[0] - 1))

    line = PtContour.make()
    opair = osc.broken_pair(osc.OscillatorParams(-0.5), 0, line)
    odec = ev.SpectralDecomposition.from_basis([opair])
    g = lambda r: 0.6 * opair.psi_plus(r) + 0.8 * opair.psi_minus(r)  # noqa: E731
    rows = ev.pseudo_norm_trace(g, odec, times, line)
    q = np.array([r.pseudo_norm for r in rows])
    norms = np.array([r.norm for r in rows])
    drift_o, growth_o = np.max(np.abs(q - q[0])), np.max(np.abs(norms / norms[0] - 1))

    ok = drift_w < 1e-7 and growth_w > 0.1 and drift_o < 1e-7 and growth_o > 0.1
    detail = (
        f"well T2=5: drift {drift_w:.2e}, norm change {growth_w:.2e}; "
        f"oscillator g=-1/2: drift {drift_o:.2e}, norm change {growth_o:.2e}"
    )
    assert criterion(7, "pseudo-norm conserved (broken), norm grows", ok, detail)


def test_oracle_equivalence(criterion):
    interval = PtContour.interval()
    x, _ = ev.oracle_grid(800)
    start = time.perf_counter()
    errors = {}
    for t2 in (0.0, 1.0, 5.0):
        params = sw.SquareWellParams(t2)
        if t2 > sw.critical_coupling(0).t2_crit:
            pair = sw.pair(params, 0, interval)
            basis = [pair]
            f = lambda x, p=pair: 0.6 * p.psi_plus(x) + 0.8 * p.psi_minus(x)  # noqa: E731
        else:
            basis = list(sw.normalized_levels(params, 0, interval))
            f = lambda x, b=basis: 0.8 * b[0](x) + 0.6 * b[1](x)  # noqa: E731
        dec = ev.SpectralDecomposition.from_basis(basis)
        spectral = ev.evolve(ev.decompose(f, dec, interval), 1.0)(x)
        grid = ev.grid_oracle(params, f(x), 1.0, steps=2000).psi
        errors[t2] = float(np.max(np.abs(grid - spectral)))
    elapsed = time.perf_counter() - start
    ok = max(errors.values()) < 1e-4 and elapsed < 10.0
    detail = ", ".join(f"T2={k:g}: {v:.2e}" for k, v in errors.items()) + f"; {elapsed:.2f} s"
    assert criterion(8, "spectral vs grid oracle within 1e-4 (800 points, 2000 steps)", ok, detail)


def test_completeness(criterion):
    contour = PtContour.make()
    params = osc.OscillatorParams(0.0)
    gaussian = lambda r: np.exp(-((r - 0.3) ** 2) / (2 * 0.8**2))  # noqa: E731
    bases = {M: osc.normalized_spectrum(params, M // 2 - 1, contour) for M in (4, 8, 16)}
    defects = [completeness_defect(bases[M], contour, gaussian) for M in (4, 8, 16)]
    members = max(completeness_defect(bases[16], contour, s) for s in bases[16])
    ok = defects[0] > defects[1] > defects[2] and members < 1e-7
    detail = f"G=0 Gaussian defects M=4,8,16: {', '.join(f'{d:.2e}' for d in defects)}; members {members:.2e}"
    assert criterion(9, "completeness defect decreasing in M", ok, detail)
