"""Exit criteria, one test each, at the tolerances fixed by the build contract."""

import math
import subprocess
import sys
import time

import numpy as np

from densecode import sampling
from densecode.criteria import entropic_dc_test, reduction_criterion
from densecode.densecoding import (
    b_locc,
    capacity_single_receiver,
    chi_global,
    chi_local,
    ensemble_capacity,
    trace_rule_residual,
    weyl_scheme,
    weyl_set,
)
from densecode.infomeasures import (
    Ensemble,
    holevo_divergence_form,
    mean_divergence,
    relative_entropy,
    von_neumann_entropy,
)
from densecode.states import PartyLayout, from_pure, merge_parties
from densecode.statezoo import frank4, ghz, tiles33, two_singlets, w, werner_dc_threshold
from densecode.verify import random_scheme

SEED = 1234
PAIRED = {"1": "3", "2": "4"}


def _ensemble(rng, d):
    lay = PartyLayout.build([d], "S")
    n = int(rng.integers(1, 6))
    probs = sampling.random_probabilities(n, rng)
    states = tuple(sampling.random_state(lay, rng, rank=int(rng.integers(1, d + 1))) for _ in range(n))
    return Ensemble(tuple(probs), states)


def test_01_werner_threshold(accept):
    start = time.perf_counter()
    p = werner_dc_threshold()
    elapsed = time.perf_counter() - start
    ok = abs(p - 0.7476) <= 5e-4 and elapsed < 1
    assert accept(1, "Werner DC threshold", ok, f"p* = {p:.6f}, {elapsed * 1e3:.1f} ms")


def test_02_ghz4_bounds(accept):
    s = ghz(4)
    bl, cg = b_locc(s, PAIRED), chi_global(s)
    ok = abs(bl - 3) <= 1e-9 and abs(cg - 3) <= 1e-9
    assert accept(2, "GHZ4 two-receiver bounds", ok, f"b_locc = {bl:.12f}, chi_glob = {cg:.12f}")


def test_03_bell_capacity(accept):
    s = from_pure([1, 0, 0, 1], PartyLayout.build([2, 2], "SR"))
    chi = capacity_single_receiver(s)
    assert accept(3, "Bell pair capacity", abs(chi - 2) <= 1e-12, f"chi = {chi!r}")


def test_04_frank4_separation(accept):
    s = frank4()
    bl, cg = b_locc(s, PAIRED), chi_global(s)
    ok = bl <= 2 + 1e-9 and cg > 2 + 1e-6
    assert accept(4, "frank4 G-DC but not LOCC-DC", ok, f"b_locc = {bl:.6f} (need <= 2), chi_glob = {cg:.6f}")


def test_05_trace_rule(accept):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for d in (2, 3, 4, 5):
        ws = weyl_set(d)
        for _ in range(20):
            worst = max(worst, trace_rule_residual(ws, sampling.random_complex_matrix(d, rng)))
    assert accept(5, "Weyl trace rule", worst < 1e-10, f"max residual {worst:.2e}")


def test_06_holevo_identity(accept):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        e = _ensemble(rng, int(rng.integers(2, 5)))
        direct = von_neumann_entropy(e.average()) - sum(p * von_neumann_entropy(s) for p, s in e)
        worst = max(worst, abs(direct - holevo_divergence_form(e)))
    assert accept(6, "Holevo / relative-entropy identity", worst < 1e-10, f"max residual {worst:.2e}")


def test_07_donald_identity(accept):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        e = _ensemble(rng, int(rng.integers(2, 5)))
        sigma = sampling.random_state(e.layout, rng)
        assert np.linalg.eigvalsh(sigma.rho)[0] > 1e-12
        resid = mean_divergence(e, sigma) - holevo_divergence_form(e) - relative_entropy(e.average(), sigma)
        worst = max(worst, abs(resid))
    assert accept(7, "Donald identity", worst < 1e-9, f"max residual {worst:.2e}")


def test_08_optimality_oracle(accept):
    rng = np.random.default_rng(SEED)
    violations, schemes, worst_excess, worst_gap = 0, 0, -math.inf, 0.0
    for _ in range(20):
        lay = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=18)
        s = sampling.random_state(lay, rng, rank=int(rng.integers(1, lay.total_dim + 1)))
        chi = capacity_single_receiver(s)
        worst_gap = max(worst_gap, abs(ensemble_capacity(s, weyl_scheme(s)) - chi))
        for _ in range(10):
            excess = ensemble_capacity(s, random_scheme(s, rng)) - chi
            worst_excess = max(worst_excess, excess)
            violations += excess > 1e-9
            schemes += 1
    ok = schemes >= 200 and violations == 0 and worst_gap <= 1e-9
    detail = f"{schemes} schemes, {violations} violations, max excess {worst_excess:.2e}, Weyl gap {worst_gap:.2e}"
    assert accept(8, "optimality oracle", ok, detail)


def test_09_no_go(accept):
    rng = np.random.default_rng(SEED)
    states = [tiles33()]
    for _ in range(50):
        lay = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=18)
        states.append(sampling.random_ppt_state(lay, lay.senders, rng, rank=int(rng.integers(1, 4))))
    dc = [entropic_dc_test(s) for s in states]
    ok = not any(flag for flag, _ in dc)
    assert accept(9, "PPT states are not DC", ok, f"{len(states)} states, max margin {max(m for _, m in dc):.4f}")


def test_10_implication(accept):
    rng = np.random.default_rng(SEED)
    n_dc = counter = 0
    for _ in range(200):
        lay = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=18)
        s = sampling.random_state(lay, rng, rank=int(rng.integers(1, 4)))
        if entropic_dc_test(s)[0]:
            n_dc += 1
            counter += not reduction_criterion(s)[0]
    ok = counter == 0 and n_dc > 0
    assert accept(10, "DC implies reduction violation", ok, f"{n_dc} DC states of 200, {counter} counterexamples")


def test_11_local_dc_examples(accept):
    ts, w4, g4 = (chi_local(s, PAIRED) for s in (two_singlets(), w(4), ghz(4)))
    ok = abs(ts - 4) <= 1e-10 and w4 <= 2 + 1e-9 and abs(g4 - 2) <= 1e-9
    assert accept(11, "local DC examples", ok, f"two_singlets {ts:.10f}, W4 {w4:.6f}, GHZ4 {g4:.10f}")


def test_12_merged_senders(accept):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(20):
        lay = sampling.random_layout(rng, n_senders=3, n_receivers=1, max_dim=3, max_total=54)
        s = sampling.random_state(lay, rng, rank=int(rng.integers(1, 5)))
        merged = merge_parties(s, lay.senders, "A")
        worst = max(worst, abs(capacity_single_receiver(merged) - capacity_single_receiver(s)))
    assert accept(12, "distributed equals global senders", worst < 1e-10, f"max difference {worst:.2e}")


def test_13_verify_cli(accept):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "densecode", "verify", "--seed", "42"], capture_output=True, text=True
    )
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and elapsed < 60
    assert accept(13, "verify CLI", ok, f"exit {proc.returncode} in {elapsed:.1f} s"), proc.stdout + proc.stderr
