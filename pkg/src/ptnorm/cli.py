"""Command-line front end.

Every subcommand emits a table (CSV with a header row, or a JSON array of
records) on stdout or ``--out``. Exit status: 0 success, 2 usage error,
3 numerical failure, 4 regime error.
"""
import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import evolution, oscillator, squarewell
from .errors import NotBroken, NumericalError, PtNormError, RegimeError
from .numerics import tolerance_from_env
from .pseudometric import BrokenPair, PtContour, gram

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_REGIME = 0, 2, 3, 4
PAIR_MIXTURE = (0.6, 0.8)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str = "squarewell"
    t2: float = 0.0
    g: float = 0.0
    delta: float = oscillator.DEFAULT_DELTA
    n_max: int = 2
    trunc: int | None = None
    contour_L: float | None = None
    points: int = 50
    times: tuple = (0.0,)
    sweep: tuple | None = None
    n: int = 0
    psi0: str = "basis:0"
    fmt: str = "csv"
    out: str | None = None
    jobs: int = 1
    tol: float = 1e-13

    def __post_init__(self):
        if not self.t2 >= 0:
            raise UsageError("--t2 must be >= 0")
        if not self.delta > 0:
            raise UsageError("--delta must be > 0")
        if self.n_max < 0:
            raise UsageError("--nmax must be >= 0")
        if self.n < 0:
            raise UsageError("--n must be >= 0")
        if self.trunc is not None and self.trunc < 1:
            raise UsageError("--trunc must be >= 1")
        if self.contour_L is not None and not self.contour_L > 0:
            raise UsageError("--contour-L must be > 0")
        if self.points < 1:
            raise UsageError("--points must be >= 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")

    @property
    def radial_max(self):
        """Largest oval / radial index needed to supply ``trunc`` states."""
        return self.n_max if self.trunc is None else (self.trunc + 1) // 2 - 1

    def contour(self):
        if self.model == "squarewell":
            return PtContour.interval(points=self.points)
        L = 10.0 if self.contour_L is None else self.contour_L
        return PtContour.make(delta=self.delta, half_length=L, points=self.points)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _range(text, what):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"{what} must look like start:stop:{'count' if what == 'times' else 'step'}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_sweep(text):
    a, b, step = _range(text, "sweep")
    if not step > 0 or b < a:
        raise argparse.ArgumentTypeError("sweep needs step > 0 and stop >= start")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return tuple(round(a + k * step, 12) for k in range(count))


def parse_times(text):
    if ":" in text:
        a, b, count = _range(text, "times")
        if count < 1 or count != int(count):
            raise argparse.ArgumentTypeError("times count must be a positive integer")
        return tuple(float(t) for t in np.linspace(a, b, int(count)))
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")

    p = _Parser(prog="ptnorm", description="PT-symmetric spectra, pseudo-norms and evolution.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("squarewell", parents=[common], help="square-well levels")
    s.add_argument("--t2", type=float, default=0.0)
    s.add_argument("--nmax", dest="n_max", type=int, default=2)
    s.add_argument("--sweep", type=parse_sweep, metavar="START:STOP:STEP")
    s.add_argument("--jobs", type=int, default=1)

    c = sub.add_parser("critical", parents=[common], help="critical coupling of one oval")
    c.add_argument("--n", type=int, default=0)

    o = sub.add_parser("oscillator", parents=[common], help="spiked-oscillator levels")
    o.add_argument("--g", type=float, default=0.0)
    o.add_argument("--delta", type=float, default=oscillator.DEFAULT_DELTA)
    o.add_argument("--nmax", dest="n_max", type=int, default=3)

    for name, helptext in (("gram", "pseudo-metric Gram matrix"), ("evolve", "pseudo-norm trace")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("--model", choices=("squarewell", "oscillator"), default="oscillator")
        q.add_argument("--t2", type=float, default=0.0)
        q.add_argument("--g", type=float, default=0.0)
        q.add_argument("--delta", type=float, default=oscillator.DEFAULT_DELTA)
        q.add_argument("--nmax", dest="n_max", type=int, default=3)
        q.add_argument("--trunc", type=int, help="number of basis states M")
        q.add_argument("--contour-L", dest="contour_L", type=float)
        q.add_argument("--points", type=int, default=50, help="quadrature points per panel")
        if name == "evolve":
            q.add_argument(
                "--psi0",
                default="basis:0",
                help="gaussian | basis:K | pair:+ | pair:- | pair-mixture | coeffs:A,B,...",
            )
            q.add_argument("--times", type=parse_times, default=(0.0, 0.5, 1.0), metavar="START:STOP:COUNT|T1,T2,...")
    return p


def config_from_args(argv):
    ns = vars(build_parser().parse_args(argv))
    try:
        tol = tolerance_from_env()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if ns["command"] == "oscillator":
        ns["model"] = "oscillator"
    elif ns["command"] in ("squarewell", "critical"):
        ns["model"] = "squarewell"
    return RunConfig(tol=tol, **ns)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _level_row(t2, lv):
    return {
        "t2": t2,
        "N": lv.level_index,
        "re_E": lv.energy.real,
        "im_E": lv.energy.imag,
        "p": lv.p,
        "q": lv.q,
        "broken": int(lv.broken),
    }


def _squarewell_block(t2, n_max, tol):
    levels = squarewell.spectrum(squarewell.SquareWellParams(t2), n_max, tol=tol)
    return [_level_row(t2, lv) for lv in levels]


def cmd_squarewell_spectrum(cfg):
    values = cfg.sweep if cfg.sweep is not None else (cfg.t2,)
    if any(t < 0 for t in values):
        raise UsageError("sweep values must be >= 0")
    args = ([t for t in values], [cfg.n_max] * len(values), [cfg.tol] * len(values))
    if cfg.jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            blocks = list(pool.map(_squarewell_block, *args))
    else:
        blocks = list(map(_squarewell_block, *args))
    return [row for block in blocks for row in block]


def cmd_critical(cfg):
    cc = squarewell.critical_coupling(cfg.n)
    mp = cc.merge_point
    return [{"n": cc.oval_index, "t2_crit": cc.t2_crit, "p": mp.p, "q": mp.q, "E": cc.energy}]


def cmd_oscillator(cfg):
    params = oscillator.OscillatorParams(cfg.g, cfg.delta)
    contour = None if params.broken else cfg.contour()
    rows = []
    for st in oscillator.spectrum(params, cfg.n_max):
        sign = 0 if params.broken else oscillator.normalize(st, contour).metric_sign
        rows.append(
            {
                "N": st.label.level_index,
                "Q": st.label.quasi_parity,
                "n": st.label.radial_index,
                "re_E": st.energy.real,
                "im_E": st.energy.imag,
                "metric_sign": sign,
            }
        )
    return rows


def model_basis(cfg, contour):
    """Normalized unbroken states and broken pairs of the configured model."""
    k = cfg.radial_max
    if cfg.model == "squarewell":
        params = squarewell.SquareWellParams(cfg.t2)
        levels = squarewell.normalized_levels(params, k, contour)
        basis = list(levels) + [squarewell.pair(params, n, contour) for n in levels.broken_ovals]
        key = lambda b: b.psi_plus.level_index if isinstance(b, BrokenPair) else b.level_index  # noqa: E731
        basis.sort(key=key)
    else:
        params = oscillator.OscillatorParams(cfg.g, cfg.delta)
        if params.broken:
            basis = [oscillator.broken_pair(params, n, contour) for n in range(k + 1)]
        else:
            basis = oscillator.normalized_spectrum(params, k, contour)
    return basis


def _states(basis):
    out = []
    for b in basis:
        out += [b.psi_plus, b.psi_minus] if isinstance(b, BrokenPair) else [b]
    return out


def _label(state):
    if isinstance(state, oscillator.OscillatorState):
        return str(state.label)
    return f"N={state.level_index}"


def cmd_gram(cfg):
    contour = cfg.contour()
    states = _states(model_basis(cfg, contour))
    if cfg.trunc is not None:
        states = states[: cfg.trunc]
    labels = [_label(s) for s in states]
    G = gram(states, contour, labels=labels)
    rows = []
    for i, li in enumerate(labels):
        for j, lj in enumerate(labels):
            z = G.entries[i, j]
            rows.append({"i": i, "j": j, "row": li, "col": lj, "re": z.real, "im": z.imag})
    return rows, G.kind


def _first_pair(basis):
    for b in basis:
        if isinstance(b, BrokenPair):
            return b
    raise NotBroken("this preset needs a broken pair; the requested coupling has a real spectrum")


def initial_state(cfg, basis, decomposition):
    """Callable ``psi0(r)`` for the ``--psi0`` preset."""
    preset = cfg.psi0.strip()
    modes = decomposition.modes
    if preset == "gaussian":
        if cfg.model == "squarewell":
            return lambda x: np.exp(-((np.real(x) - 0.1) ** 2) / (2 * 0.15**2)) + 0j
        return lambda r: np.exp(-((r - 0.3) ** 2) / (2 * 0.8**2))
    if preset.startswith("basis:"):
        try:
            k = int(preset[6:])
        except ValueError:
            raise UsageError(f"bad basis index in {preset!r}") from None
        if not 0 <= k < len(modes):
            raise UsageError(f"basis index {k} outside 0..{len(modes) - 1}")
        return modes[k].state
    if preset in ("pair:+", "pair:-"):
        bp = _first_pair(basis)
        return bp.psi_plus if preset == "pair:+" else bp.psi_minus
    if preset == "pair-mixture":
        bp = _first_pair(basis)
        a, b = PAIR_MIXTURE
        return lambda r: a * bp.psi_plus(r) + b * bp.psi_minus(r)
    if preset.startswith("coeffs:"):
        try:
            coeffs = [complex(c.replace(" ", "")) for c in preset[7:].split(",") if c.strip()]
        except ValueError:
            raise UsageError(f"bad coefficient list in {preset!r}") from None
        if not coeffs or len(coeffs) > len(modes):
            raise UsageError(f"need 1..{len(modes)} coefficients, got {len(coeffs)}")
        return lambda r: decomposition.reconstruct(coeffs, r)
    raise UsageError(f"unknown --psi0 preset {preset!r}")


def cmd_evolve(cfg):
    contour = cfg.contour()
    basis = model_basis(cfg, contour)
    dec = evolution.SpectralDecomposition.from_basis(basis)
    psi0 = initial_state(cfg, basis, dec)
    state = evolution.decompose(psi0, dec, contour, max_defect=None)
    if state.defect > evolution.DEFAULT_MAX_DEFECT:
        print(f"ptnorm: warning: psi0 reconstruction defect {state.defect:.3g} "
              f"with {dec.truncation} modes", file=sys.stderr)
    trace = evolution.pseudo_norm_trace(state, dec, cfg.times, contour)
    return [
        {"t": row.t, "re_pseudo_norm": row.pseudo_norm.real, "im_pseudo_norm": row.pseudo_norm.imag,
         "norm": row.norm}
        for row in trace
    ]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _cell(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def format_rows(rows, fmt):
    if fmt == "json":
        return json.dumps(rows) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


def _coerce(rows):
    # numpy scalars -> builtins, so that both writers see plain floats and ints
    return [{k: (v.item() if isinstance(v, np.generic) else v) for k, v in r.items()} for r in rows]


COMMANDS = {
    "squarewell": cmd_squarewell_spectrum,
    "critical": cmd_critical,
    "oscillator": cmd_oscillator,
    "gram": cmd_gram,
    "evolve": cmd_evolve,
}


def run(cfg):
    result = COMMANDS[cfg.command](cfg)
    if cfg.command == "gram":
        rows, kind = result
        print(f"ptnorm: gram structure: {kind}", file=sys.stderr)
    else:
        rows = result
    return _coerce(rows)


def main(argv=None):
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        text = format_rows(run(cfg), cfg.fmt)
    except UsageError as exc:
        print(f"ptnorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"ptnorm: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RegimeError as exc:
        print(f"ptnorm: regime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except PtNormError as exc:  # pragma: no cover - every subclass is one of the two above
        print(f"ptnorm: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK
