"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Run with ``pytest -m acceptance -s`` to see only these.
"""
import cmath
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_RESULTS
from discordpot import cli, fock
from discordpot.discord import (discord, discord_potential, locate_crossovers,
                                locate_discord_maximum, two_mode_density)
from discordpot.discrimination import advantage, helstrom_error, homodyne_error
from discordpot.splitter import reduce, split
from discordpot.states import CoherentMixture, make_binary_mixture, symmetric_pair
from discordpot.subspace import basis_for, entropy, project_mixture

from make_golden import COMMANDS, GOLDEN

pytestmark = pytest.mark.acceptance

WEIGHTS = (0.1, 0.3, 0.5, 0.7, 0.9)
SEPARATIONS = (0.2, 0.5, 1.0, 2.0, 4.0)


def grid_points():
    for a in WEIGHTS:
        for d0 in SEPARATIONS:
            half = 0.5 * d0 * cmath.exp(0.3j)
            yield a, d0, make_binary_mixture(a, half + 0.1, -half + 0.1)


def record(number, checks, elapsed=None, limit=None):
    """Store and print the verdict; ``checks`` maps a label to (ok, detail)."""
    if limit is not None:
        checks[f"runtime<{limit:g}s"] = (elapsed < limit, f"{elapsed:.1f}s")
    ok = all(v[0] for v in checks.values())
    detail = "; ".join(f"{k}: {v[1]}{'' if v[0] else ' (FAIL)'}" for k, v in checks.items())
    ACCEPTANCE_RESULTS[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_discrimination():
    t = time.perf_counter()
    c = {}
    c["P(0)=0.5"] = (helstrom_error(0.5, 0.0) == 0.5 and homodyne_error(0.5, 0.0) == 0.5, "exact")
    err = abs(helstrom_error(0.5, 1.0) - 0.5 * (1 - math.sqrt(1 - math.exp(-1))))
    c["P_Hel(1)"] = (err <= 1e-12, f"{err:.1e}")
    d = np.linspace(0, 6, 5000)
    gap = float(np.max(helstrom_error(0.5, d) - homodyne_error(0.5, d)))
    c["P_Hel<=P_Hom"] = (gap <= 1e-12, f"max excess {gap:.1e}")
    x = np.arange(0, 6 + 5e-4, 1e-3)
    s = np.diff(advantage(x))
    changes = int(np.count_nonzero(np.diff(np.sign(s[s != 0]))))
    peak = float(x[np.argmax(advantage(x))])
    c["unimodal"] = (changes == 1 and 0 < peak < 6, f"{changes} turn, peak d0={peak:.3f}")
    record(1, c, time.perf_counter() - t, 1)


def test_criterion_02_discord_limits():
    t = time.perf_counter()
    small = discord_potential(symmetric_pair(0.5, 1e-3))
    large = discord_potential(symmetric_pair(0.5, 12.0))
    mid = discord_potential(symmetric_pair(0.5, 1.0))
    record(2, {"d0=1e-3": (small < 1e-6, f"{small:.2e}"),
               "d0=12": (large < 1e-6, f"{large:.2e}"),
               "d0=1": (mid > 1e-3, f"{mid:.4f}")}, time.perf_counter() - t, 10)


def test_criterion_03_discord_maximum():
    t = time.perf_counter()
    d, value = locate_discord_maximum(0.5, lo=0.05, hi=2.0, step=1e-3)
    record(3, {"argmax in [0.65, 0.76]": (0.65 <= d <= 0.76, f"d={d:.6f}, D={value:.6f}")},
           time.perf_counter() - t, 120)


def test_criterion_04_crossover():
    t = time.perf_counter()
    roots = locate_crossovers(0.5, lo=0.05, hi=0.7, step=1e-3)
    where = ", ".join(f"{r:.6f}" for r in roots) or "none"
    record(4, {"unique": (len(roots) == 1, f"{len(roots)} root(s)"),
               "in [0.30, 0.41]": (len(roots) == 1 and 0.30 <= roots[0] <= 0.41, f"d={where}")},
           time.perf_counter() - t, 120)


def test_criterion_05_oracle_equivalence():
    t = time.perf_counter()
    worst_s = worst_d = 0.0
    for a, d0, m in grid_points():
        state = split(m)
        ra = reduce(state, "A")
        s_a = entropy(project_mixture(ra, basis_for(ra)))
        s_ab = entropy(two_mode_density(state))
        worst_s = max(worst_s, abs(s_a - fock.entropy_oracle_two_mode(state, keep="A")),
                      abs(s_ab - fock.entropy_oracle_two_mode(state)))
        worst_d = max(worst_d, abs(discord(state).discord - fock.fock_discord(state).discord))
    record(5, {"entropies": (worst_s < 1e-8, f"max diff {worst_s:.1e}"),
               "discord": (worst_d < 1e-6, f"max diff {worst_d:.1e}")},
           time.perf_counter() - t, 300)


def test_criterion_06_symmetry_and_separability():
    worst = 0.0
    for a, d0, m in grid_points():
        state = split(m)
        worst = max(worst, abs(discord(state, "A").discord - discord(state, "B").discord))
    single = discord(split(CoherentMixture.pure(1.3 - 0.4j))).discord
    record(6, {"D_A=D_B": (worst < 1e-9, f"max diff {worst:.1e}"),
               "single state": (single < 1e-9, f"{single:.1e}")})


def test_criterion_07_invariance():
    rng = np.random.default_rng(20261016)
    m = make_binary_mixture(0.35, 0.4 + 0.3j, -0.6 + 0.1j)
    base = discord_potential(m)
    worst = 0.0
    for _ in range(20):
        phase = rng.uniform(0, 2 * math.pi)
        shift = complex(*rng.uniform(-3, 3, 2))
        worst = max(worst, abs(discord_potential(m.transformed(phase, shift)) - base))
    record(7, {"20 transforms": (worst < 1e-9, f"max change {worst:.1e}")})


def test_criterion_08_l1_asymptote():
    t = time.perf_counter()
    c = fock.estimate_c()
    ratio = fock.c_l1(fock.balanced_pair(10.0)) / fock.c_l1(CoherentMixture.pure(10.0))
    rel = abs(ratio / 0.5 - 1)
    record(8, {"c in [4.5, 5.5]": (4.5 <= c <= 5.5, f"c={c:.4f}"),
               "ratio at |alpha|=10": (rel <= 0.02, f"{ratio:.5f} ({100 * rel:.2f}% from 0.5)")},
           time.perf_counter() - t, 60)


def test_criterion_09_re_asymptote():
    t = time.perf_counter()
    pure = fock.c_re(CoherentMixture.pure(10.0))
    mix = fock.c_re(fock.balanced_pair(10.0))
    e_pure = abs(pure - fock.c_re_asymptote(10.0))
    e_mix = abs(pure - mix - math.log(2))
    e_h0 = abs(fock.h0(10.0) - math.log(100))
    e_h1 = abs(fock.h1(10.0) - math.log(100) - 0.005)
    record(9, {"C_RE pure": (e_pure < 0.05, f"{e_pure:.4f}"),
               "ln 2 offset": (e_mix < 0.05, f"{e_mix:.4f}"),
               "h0": (e_h0 < 0.02, f"{e_h0:.4f}"),
               "h1": (e_h1 < 0.02, f"{e_h1:.4f}")}, time.perf_counter() - t, 60)


def test_criterion_10_divergence_contrast():
    amps = (2, 4, 6, 8, 10)
    ms = [fock.balanced_pair(A) for A in amps]
    l1 = [fock.c_l1(m) for m in ms]
    re = [fock.c_re(m) for m in ms]
    cd = {A: discord_potential(m) for A, m in zip(amps, ms) if A >= 6}
    record(10, {"C_l1 increasing": (bool(np.all(np.diff(l1) > 0)), " < ".join(f"{v:.3g}" for v in l1)),
                "C_RE increasing": (bool(np.all(np.diff(re) > 0)), " < ".join(f"{v:.3g}" for v in re)),
                "C_D small": (max(cd.values()) < 1e-4, f"max {max(cd.values()):.1e}")})


def test_criterion_11_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "0")
    same = golden = True
    for name, argv in COMMANDS.items():
        first, second = tmp_path / f"1-{name}", tmp_path / f"2-{name}"
        assert cli.main(argv + ["--out", str(first)]) == 0
        assert cli.main(argv + ["--out", str(second)]) == 0
        same &= first.read_bytes() == second.read_bytes()
        golden &= first.read_bytes() == (GOLDEN / name).read_bytes()
    record(11, {"repeat runs identical": (same, f"{len(COMMANDS)} commands"),
                "golden files reproduced": (golden, "byte compare")})
