"""Random unitaries, density matrices and encodings for property checks."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .states import DensityState, PartyLayout


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-induced random density matrix of the given rank (full rank by default)."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(layout: PartyLayout, rng: np.random.Generator, rank: int | None = None) -> DensityState:
    return DensityState(layout, random_density_matrix(layout.total_dim, rng, rank))


def random_pure_state(layout: PartyLayout, rng: np.random.Generator) -> DensityState:
    return random_state(layout, rng, rank=1)


def random_probabilities(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.dirichlet(np.ones(n))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_complex_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_layout(
    rng: np.random.Generator,
    n_senders: int | Sequence[int] = (1, 2),
    n_receivers: int | Sequence[int] = (1, 2),
    max_dim: int = 3,
    max_total: int = 36,
) -> PartyLayout:
    """Random layout with senders first, local dimensions in ``2..max_dim``."""

    def pick(spec):
        return int(spec) if np.isscalar(spec) else int(rng.choice(spec))

    while True:
        ns, nr = pick(n_senders), pick(n_receivers)
        dims = rng.integers(2, max_dim + 1, size=ns + nr).tolist()
        if np.prod(dims) <= max_total:
            return PartyLayout.build(dims, "S" * ns + "R" * nr)


def random_ppt_state(
    layout: PartyLayout, side: Sequence[str], rng: np.random.Generator, rank: int | None = None
) -> DensityState:
    """Random state mixed with white noise until its partial transpose on ``side`` is positive."""
    from .states import partial_transpose

    d = layout.total_dim
    base = random_density_matrix(d, rng, rank)
    v = 1.0
    while True:
        rho = v * base + (1 - v) * np.eye(d) / d
        s = DensityState(layout, rho)
        if np.linalg.eigvalsh(partial_transpose(s, side))[0] >= 0:
            return s
        v *= 0.8
