"""Built-in numerical property suites run by ``densecode verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import sampling
from .criteria import entropic_dc_test, reduction_criterion
from .densecoding import (
    EncodingScheme,
    capacity_single_receiver,
    ensemble_capacity,
    trace_rule_residual,
    weyl_scheme,
    weyl_set,
)
from .infomeasures import Ensemble, holevo, holevo_divergence_form, mean_divergence, relative_entropy
from .states import DensityState, PartyLayout
from .statezoo import tiles33


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    worst: float
    bound: float
    trials: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst = {self.worst:.3e} (bound {self.bound:.0e}, {self.trials} trials)"


def _random_ensemble(rng: np.random.Generator, d: int, n: int) -> Ensemble:
    layout = PartyLayout.build([d], "S")
    probs = sampling.random_probabilities(n, rng)
    states = []
    for _ in range(n):
        rank = int(rng.integers(1, d + 1))
        states.append(sampling.random_state(layout, rng, rank))
    return Ensemble(tuple(probs), tuple(states))


def trace_rule(rng: np.random.Generator, per_dim: int = 20) -> SuiteResult:
    worst = 0.0
    trials = 0
    for d in (2, 3, 4, 5):
        ws = weyl_set(d)
        for _ in range(per_dim):
            worst = max(worst, trace_rule_residual(ws, sampling.random_complex_matrix(d, rng)))
            trials += 1
    return SuiteResult("trace rule", worst < 1e-10, worst, 1e-10, trials)


def holevo_identity(rng: np.random.Generator, trials: int = 100) -> SuiteResult:
    worst = 0.0
    for _ in range(trials):
        e = _random_ensemble(rng, int(rng.integers(2, 5)), int(rng.integers(1, 6)))
        worst = max(worst, abs(holevo(e) - holevo_divergence_form(e)))
    return SuiteResult("holevo identity", worst < 1e-10, worst, 1e-10, trials)


def donald_identity(rng: np.random.Generator, trials: int = 100) -> SuiteResult:
    worst = 0.0
    for _ in range(trials):
        d = int(rng.integers(2, 5))
        e = _random_ensemble(rng, d, int(rng.integers(1, 6)))
        sigma = DensityState(e.layout, sampling.random_density_matrix(d, rng))
        lhs = mean_divergence(e, sigma)
        rhs = holevo_divergence_form(e) + relative_entropy(e.average(), sigma)
        worst = max(worst, abs(lhs - rhs))
    return SuiteResult("donald identity", worst < 1e-9, worst, 1e-9, trials)


def random_scheme(s: DensityState, rng: np.random.Generator, max_size: int | None = None) -> EncodingScheme:
    """Haar-random unitaries with Dirichlet weights; up to ``d**2 + 1`` per sender by default."""
    ens = {}
    for lab in s.layout.senders:
        d = s.layout.party(lab).dim
        k = int(rng.integers(1, (d * d + 1 if max_size is None else max_size) + 1))
        probs = sampling.random_probabilities(k, rng)
        ens[lab] = tuple((p, sampling.random_unitary(d, rng)) for p in probs)
    return EncodingScheme(ens)


def optimality(rng: np.random.Generator, n_states: int = 20, schemes_per_state: int = 10) -> SuiteResult:
    """Random schemes never beat the closed-form capacity; the Weyl scheme attains it.

    ``worst`` is the largest excess of a random scheme or the largest Weyl gap.
    """
    worst = -np.inf
    trials = 0
    ok = True
    for _ in range(n_states):
        layout = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=18)
        rank = int(rng.integers(1, layout.total_dim + 1))
        s = sampling.random_state(layout, rng, rank)
        chi = capacity_single_receiver(s)
        gap = abs(ensemble_capacity(s, weyl_scheme(s)) - chi)
        ok &= gap < 1e-9
        worst = max(worst, gap)
        for _ in range(schemes_per_state):
            excess = ensemble_capacity(s, random_scheme(s, rng)) - chi
            ok &= excess <= 1e-9
            worst = max(worst, excess)
            trials += 1
    return SuiteResult("optimality oracle", bool(ok), float(worst), 1e-9, trials)


def no_go(rng: np.random.Generator, trials: int = 50) -> SuiteResult:
    """PPT states across the cut are never dense-codeable."""
    states = [tiles33()]
    for _ in range(trials):
        layout = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=1, max_dim=3, max_total=18)
        states.append(sampling.random_ppt_state(layout, layout.senders, rng))
    worst = max(entropic_dc_test(s)[1] for s in states)
    return SuiteResult("ppt no-go", worst <= 1e-9, worst, 1e-9, len(states))


def implication(rng: np.random.Generator, trials: int = 200) -> SuiteResult:
    """Dense-codeable states violate the reduction criterion."""
    counterexamples = 0
    for _ in range(trials):
        layout = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=18)
        rank = int(rng.integers(1, 4))
        s = sampling.random_state(layout, rng, rank)
        if entropic_dc_test(s)[0] and not reduction_criterion(s)[0]:
            counterexamples += 1
    return SuiteResult("dc implies reduction violation", counterexamples == 0, counterexamples, 0, trials)


SUITES: dict[str, Callable[[np.random.Generator], SuiteResult]] = {
    "trace_rule": trace_rule,
    "holevo": holevo_identity,
    "donald": donald_identity,
    "optimality": optimality,
    "no_go": no_go,
    "implication": implication,
}


def run_all(seed: int = 42) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    return [suite(rng) for suite in SUITES.values()]
