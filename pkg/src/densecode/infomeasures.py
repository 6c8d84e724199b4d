"""Von Neumann entropy, relative entropy and the Holevo quantity, all in bits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matcore import CLIP_TOL, clip_spectrum, hermitian_eigh, hermitian_spectrum
from .states import DensityState, DimensionMismatch, ValidationFailed, validate

SUPPORT_LEAK_TOL = 1e-10


def _rho(x) -> np.ndarray:
    if isinstance(x, DensityState):
        return x.rho
    return np.asarray(x, dtype=np.complex128)


def _shannon_bits(probs: np.ndarray) -> float:
    p = probs[probs > 0]
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def von_neumann_entropy(s) -> float:
    """``-tr(rho log2 rho)`` with ``0 log 0 = 0``.

    Accepts a :class:`DensityState` or a raw density matrix.
    """
    if isinstance(s, DensityState):
        report = validate(s)
        if not report.ok:
            raise ValidationFailed(report)
    eigs = clip_spectrum(hermitian_spectrum(_rho(s)))
    return max(_shannon_bits(eigs), 0.0)


def relative_entropy(a, b) -> float:
    """``tr(a log2 a - a log2 b)``; ``inf`` when the support of ``a`` leaks outside that of ``b``.

    The support of ``b`` is the span of eigenvectors with eigenvalue above 1e-12.
    A state ``a`` whose weight outside that span exceeds 1e-10 gives ``inf``.
    """
    ra, rb = _rho(a), _rho(b)
    if ra.shape != rb.shape:
        raise DimensionMismatch(f"relative entropy of shapes {ra.shape} and {rb.shape}")
    mu, vecs = hermitian_eigh(rb)
    in_support = mu > CLIP_TOL
    # diagonal of a in the eigenbasis of b
    weights = np.real(np.einsum("ik,ij,jk->k", vecs.conj(), ra, vecs))
    leaked = float(np.sum(weights[~in_support]))
    if leaked > SUPPORT_LEAK_TOL:
        return float("inf")
    cross = float(np.sum(weights[in_support] * np.log2(mu[in_support])))
    value = -von_neumann_entropy(ra) - cross
    return max(value, 0.0)


@dataclass(frozen=True)
class Ensemble:
    """Probabilities paired with states on a common layout."""

    probabilities: tuple[float, ...]
    states: tuple[DensityState, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        states = tuple(self.states)
        if len(probs) != len(states) or not probs:
            raise ValueError("an ensemble needs equally many (>= 1) probabilities and states")
        if any(p < 0 or p > 1 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(sum(probs) - 1) > 1e-10:
            raise ValueError(f"probabilities sum to {sum(probs)!r}, not 1")
        layout = states[0].layout
        if any(s.layout != layout for s in states[1:]):
            raise DimensionMismatch("ensemble members must share one layout")
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "states", states)

    @classmethod
    def of(cls, members: Sequence[tuple[float, DensityState]]) -> "Ensemble":
        probs, states = zip(*members)
        return cls(tuple(probs), tuple(states))

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.probabilities, self.states))

    @property
    def layout(self):
        return self.states[0].layout

    def average(self) -> DensityState:
        rho = sum(p * s.rho for p, s in self)
        return DensityState(self.layout, rho)


def holevo(e: Ensemble) -> float:
    """``S(mean) - sum_i p_i S(rho_i)``."""
    avg = von_neumann_entropy(e.average())
    return avg - sum(p * von_neumann_entropy(s) for p, s in e if p > 0)


def holevo_divergence_form(e: Ensemble) -> float:
    """``sum_i p_i S(rho_i || mean)``, equal to :func:`holevo` for every ensemble."""
    avg = e.average()
    return sum(p * relative_entropy(s, avg) for p, s in e if p > 0)


def mean_divergence(e: Ensemble, sigma) -> float:
    """``sum_i p_i S(rho_i || sigma)`` for a reference state ``sigma``."""
    return sum(p * relative_entropy(s, sigma) for p, s in e if p > 0)
