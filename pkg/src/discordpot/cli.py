"""Command-line front end: point evaluations and figure-data sweeps.

Exit codes: 0 success, 2 argument error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .discord import ConvergenceError, discord, discord_potential
from .discrimination import helstrom_error, homodyne_error
from .splitter import split
from .states import make_binary_mixture, symmetric_pair
from .subspace import mixture_entropy

EXIT_ARGUMENT = 2
EXIT_NUMERICAL = 3
THREADS_ENV = "DISCORDPOT_THREADS"

DEFAULTS = {
    "tail_bound": 1e-12,
    "steps": 200,
    "format": "csv",
    "a": 0.5,
    "d0": 1.0,
}

# per-command sweep ranges when --start/--stop are not given
RANGES = {
    "discriminate": ("d0", 0.0, 6.0),
    "surface": ("d0", 0.001, 10.0),
    "info": ("d", 0.001, 5.0),
    "coherence": ("d0", 0.01, 20.0),
}
A_RANGE = (0.001, 0.999)

COLUMNS = {
    "discriminate": ["d0", "p_helstrom", "p_homodyne", "advantage"],
    "surface": ["a", "d0", "discord_potential"],
    "info": ["d", "S_AB", "I", "I_cl", "D"],
    "coherence": ["d0", "C_D", "C_l1", "C_RE", "C_l1_asymptote", "C_RE_asymptote"],
}


class ArgumentError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.parameter not in ("a", "d0", "d", "alpha_magnitude"):
            raise ArgumentError(f"unknown sweep parameter {self.parameter!r}")
        if self.steps < 2:
            raise ArgumentError(f"steps must be at least 2, got {self.steps}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.start >= self.stop:
            raise ArgumentError(f"need start < stop, got {self.start} .. {self.stop}")
        if self.parameter == "a" and not (0.0 < self.start and self.stop < 1.0):
            raise ArgumentError("the a grid must lie inside (0, 1)")
        if self.parameter != "a" and self.start < 0:
            raise ArgumentError(f"{self.parameter} must be non-negative")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def format_number(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


def _rounded(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    return float(format_number(x))


# -- row evaluators (module level so they pickle for worker processes) -----------

def discriminate_row(d0: float) -> list[float]:
    hel = helstrom_error(0.5, d0)
    hom = homodyne_error(0.5, d0)
    return [d0, hel, hom, hom - hel]


def surface_row(args) -> list[float]:
    a, d0 = args
    return [a, d0, discord_potential(symmetric_pair(a, d0))]


def info_row(d: float) -> list[float]:
    if d <= 0:
        raise ArgumentError("d must be positive")
    r = discord(split(symmetric_pair(0.5, math.sqrt(2.0) * d)))
    return [d, r.total_entropy, r.mutual_information, r.classical_information, r.discord]


def coherence_row(args) -> list[float]:
    d0, tail_bound, c = args
    if d0 <= 0:
        raise ArgumentError("d0 must be positive")
    m = symmetric_pair(0.5, d0)
    amp = 0.5 * d0
    n = fock.monotone_truncation(m, tail_bound)
    return [d0, discord_potential(m), fock.c_l1(m, n), fock.c_re(m, n),
            0.5 * c * amp, float(fock.c_re_asymptote(amp)) - math.log(2.0)]


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ArgumentError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ArgumentError(f"{THREADS_ENV} must be non-negative")
    return n or (os.cpu_count() or 1)


def run_rows(fn, items: list) -> list:
    """Evaluate rows, in parallel when allowed; results stay in grid order."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


# -- output -------------------------------------------------------------------

def render(columns: list[str], rows: list[list[float]], fmt: str) -> str:
    if fmt == "json":
        data = {c: [_rounded(r[i]) for r in rows] for i, c in enumerate(columns)}
        return json.dumps({"columns": columns, "rows": len(rows), "data": data}) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format_number(x) for x in r])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument handling ---------------------------------------------------------------

def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


def read_config(path: str) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ArgumentError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ArgumentError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_CONFIG_TYPES = {
    "tail_bound": float, "steps": int, "a_steps": int, "format": str, "a": float,
    "d0": float, "start": float, "stop": float, "a_start": float, "a_stop": float,
    "alpha0": parse_complex, "beta0": parse_complex, "out": str,
}


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over built-in defaults."""
    opts = dict(DEFAULTS)
    if args.config:
        for key, raw in read_config(args.config).items():
            if key not in _CONFIG_TYPES:
                raise ArgumentError(f"unknown config key {key!r}")
            try:
                opts[key] = _CONFIG_TYPES[key](raw)
            except (ValueError, argparse.ArgumentTypeError):
                raise ArgumentError(f"bad value for {key}: {raw!r}") from None
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command"):
            opts[key] = value
    if opts["format"] not in ("csv", "json"):
        raise ArgumentError(f"format must be csv or json, got {opts['format']!r}")
    if not 0.0 < opts["tail_bound"] < 1.0:
        raise ArgumentError("tail bound must lie in (0, 1)")
    return opts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to PATH instead of stdout")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--tail-bound", dest="tail_bound", type=float,
                        help="Fock truncation tail probability (default 1e-12)")
    common.add_argument("--config", help="key = value file; flags take precedence")
    common.add_argument("--steps", type=int, help="grid points per axis (default 200)")
    common.add_argument("--start", type=float, help="first value of the swept parameter")
    common.add_argument("--stop", type=float, help="last value of the swept parameter")

    parser = argparse.ArgumentParser(
        prog="discordpot",
        description="Discord potential, discrimination bounds and coherence monotones "
                    "for mixtures of coherent states.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("discriminate", parents=[common],
                   help="Helstrom and homodyne error vs d0 at a = 1/2")
    s = sub.add_parser("surface", parents=[common], help="discord potential over (a, d0)")
    s.add_argument("--a-start", dest="a_start", type=float)
    s.add_argument("--a-stop", dest="a_stop", type=float)
    s.add_argument("--a-steps", dest="a_steps", type=int, help="defaults to --steps")
    sub.add_parser("info", parents=[common],
                   help="entropy, mutual information and its split vs output separation d")
    sub.add_parser("coherence", parents=[common],
                   help="discord potential and coherence monotones vs d0")
    p = sub.add_parser("point", parents=[common], help="all measures at one (a, alpha0, beta0)")
    p.add_argument("--a", type=float)
    p.add_argument("--d0", type=float, help="symmetric pair +-d0/2 when alpha0/beta0 are absent")
    p.add_argument("--alpha0", type=parse_complex, metavar="RE,IM")
    p.add_argument("--beta0", type=parse_complex, metavar="RE,IM")
    return parser


def _sweep(command: str, opts: dict) -> SweepSpec:
    name, lo, hi = RANGES[command]
    start = opts.get("start", lo)
    stop = opts.get("stop", hi)
    return SweepSpec(name, start, stop, opts["steps"])


def cmd_discriminate(opts: dict) -> str:
    spec = _sweep("discriminate", opts)
    rows = run_rows(discriminate_row, [float(x) for x in spec.grid()])
    return render(COLUMNS["discriminate"], rows, opts["format"])


def cmd_surface(opts: dict) -> str:
    d0 = _sweep("surface", opts)
    if d0.start <= 0:
        raise ArgumentError("d0 grid must start above 0")
    a = SweepSpec("a", opts.get("a_start", A_RANGE[0]), opts.get("a_stop", A_RANGE[1]),
                  opts.get("a_steps", opts["steps"]))
    items = [(float(x), float(y)) for x in a.grid() for y in d0.grid()]
    return render(COLUMNS["surface"], run_rows(surface_row, items), opts["format"])


def cmd_info(opts: dict) -> str:
    spec = _sweep("info", opts)
    if spec.start <= 0:
        raise ArgumentError("d grid must start above 0")
    rows = run_rows(info_row, [float(x) for x in spec.grid()])
    return render(COLUMNS["info"], rows, opts["format"])


def cmd_coherence(opts: dict) -> str:
    spec = _sweep("coherence", opts)
    if spec.start <= 0:
        raise ArgumentError("d0 grid must start above 0")
    c = fock.estimate_c()
    rows = run_rows(coherence_row, [(float(x), opts["tail_bound"], c) for x in spec.grid()])
    return render(COLUMNS["coherence"], rows, opts["format"])


def point_measures(a: float, alpha0: complex, beta0: complex, tail_bound: float = 1e-12) -> dict:
    m = make_binary_mixture(a, alpha0, beta0)
    state = split(m)
    d0 = abs(alpha0 - beta0)
    rep_a = discord(state, "A")
    rep_b = discord(state, "B")
    hel = helstrom_error(a, d0)
    hom = homodyne_error(a, d0) if a == 0.5 else None
    n = fock.monotone_truncation(m, tail_bound)
    out = {
        "a": a,
        "alpha0": [alpha0.real, alpha0.imag],
        "beta0": [beta0.real, beta0.imag],
        "d0": d0,
        "p_helstrom": hel,
        "p_homodyne": hom,
        "advantage": None if hom is None else hom - hel,
        "discord_potential": rep_a.discord,
        "discord_A": rep_a.as_dict(),
        "discord_B": rep_b.as_dict(),
        "entropy_input": mixture_entropy(m),
        "entropy_input_fock": fock.entropy_oracle(m, tail_bound),
        "c_l1": fock.c_l1(m, n),
        "c_re": fock.c_re(m, n),
        "fock_cutoff": n,
    }
    return _round_tree(out)


def _round_tree(obj):
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_tree(v) for v in obj]
    if isinstance(obj, int) and not isinstance(obj, bool):
        return obj
    return _rounded(obj)


def cmd_point(opts: dict) -> str:
    a = opts["a"]
    if "alpha0" in opts or "beta0" in opts:
        if "alpha0" not in opts or "beta0" not in opts:
            raise ArgumentError("give both --alpha0 and --beta0, or --d0")
        alpha0, beta0 = opts["alpha0"], opts["beta0"]
    else:
        d0 = opts["d0"]
        alpha0, beta0 = complex(0.5 * d0), complex(-0.5 * d0)
    return json.dumps(point_measures(a, alpha0, beta0, opts["tail_bound"]), indent=2) + "\n"


COMMANDS = {
    "discriminate": cmd_discriminate,
    "surface": cmd_surface,
    "info": cmd_info,
    "coherence": cmd_coherence,
    "point": cmd_point,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on malformed flags
    try:
        opts = resolve(args)
        text = COMMANDS[args.command](opts)
        emit(text, opts.get("out"))
    except (ConvergenceError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"discordpot: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"discordpot: error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    return 0


if __name__ == "__main__":
    sys.exit(main())
