"""Named states used as dense-coding examples, and the Werner threshold solver.

Party labels are the 1-based positions ``"1", "2", ...``. Multipartite states
put their senders first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from .infomeasures import von_neumann_entropy
from .states import DensityState, PartyLayout, from_pure, product


class BadParameter(ValueError):
    pass


SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


def _unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0 <= x <= 1:
        raise BadParameter(f"{name} must lie in [0, 1], got {x}")
    return x


def _party_count(n: int, n_senders: int | None) -> int:
    if int(n) != n or n < 3:
        raise BadParameter(f"party count must be an integer >= 3, got {n}")
    ns = n // 2 if n_senders is None else int(n_senders)
    if not 1 <= ns < n:
        raise BadParameter(f"need between 1 and {n - 1} senders, got {ns}")
    return ns


def werner(p: float) -> DensityState:
    """``p |singlet><singlet| + (1 - p) I/4`` on a qubit pair, first qubit the sender."""
    p = _unit_interval("p", p)
    rho = p * np.outer(SINGLET, SINGLET) + (1 - p) * np.eye(4) / 4
    return DensityState(PartyLayout.build([2, 2], "SR"), rho)


def singlet() -> DensityState:
    return from_pure(SINGLET, PartyLayout.build([2, 2], "SR"))


def ghz(n: int = 4, n_senders: int | None = None) -> DensityState:
    """``(|0...0> + |1...1>)/sqrt 2``; the first ``n_senders`` qubits send (default ``n // 2``)."""
    ns = _party_count(n, n_senders)
    psi = np.zeros(2**n)
    psi[0] = psi[-1] = 1
    return from_pure(psi, PartyLayout.build([2] * n, "S" * ns + "R" * (n - ns)))


def w(n: int = 4, n_senders: int | None = None) -> DensityState:
    """Uniform superposition of the ``n`` single-excitation kets."""
    ns = _party_count(n, n_senders)
    psi = np.zeros(2**n)
    for k in range(n):
        psi[1 << k] = 1
    return from_pure(psi, PartyLayout.build([2] * n, "S" * ns + "R" * (n - ns)))


def two_singlets() -> DensityState:
    """Singlets on parties (1, 3) and (2, 4); parties 1, 2 send, 3, 4 receive."""
    pair = singlet()
    rho = product(
        DensityState(PartyLayout.build([2, 2], "SR", ["a", "b"]), pair.rho),
        DensityState(PartyLayout.build([2, 2], "SR", ["c", "d"]), pair.rho),
    ).rho
    # reorder factors a b c d -> a c b d
    t = rho.reshape([2] * 8).transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(16, 16)
    return DensityState(PartyLayout.build([2] * 4, "SSRR"), t)


def frank4() -> DensityState:
    """``(|0000> + |0101> + |1000> + |1110>)/2``; parties 1, 2 send to 3, 4 respectively."""
    psi = np.zeros(16)
    for ket in ("0000", "0101", "1000", "1110"):
        psi[int(ket, 2)] = 0.5
    return from_pure(psi, PartyLayout.build([2] * 4, "SSRR"))


def tiles33() -> DensityState:
    """Normalized projector onto the complement of the five-state Tiles unextendible product basis."""
    e = np.eye(3)
    vecs = [
        np.kron(e[0], (e[0] - e[1]) / np.sqrt(2)),
        np.kron((e[0] - e[1]) / np.sqrt(2), e[2]),
        np.kron(e[2], (e[1] - e[2]) / np.sqrt(2)),
        np.kron((e[1] - e[2]) / np.sqrt(2), e[0]),
        np.kron(e.sum(axis=0), e.sum(axis=0)) / 3,
    ]
    proj = np.eye(9) - sum(np.outer(v, v) for v in vecs)
    return DensityState(PartyLayout.build([3, 3], "SR"), proj / 4)


def noisy(base: DensityState, v: float) -> DensityState:
    """``v * base + (1 - v) * I/D``."""
    v = _unit_interval("visibility", v)
    d = base.layout.total_dim
    return DensityState(base.layout, v * base.rho + (1 - v) * np.eye(d) / d)


@dataclass(frozen=True)
class ZooEntry:
    name: str
    build: Callable[..., DensityState]
    params: tuple[str, ...] = ()
    assignment: dict | None = None
    known_entangled: str | None = None
    notes: tuple[str, ...] = field(default=())


_PAIRED = {"1": "3", "2": "4"}

ZOO: dict[str, ZooEntry] = {
    "werner": ZooEntry("werner", werner, ("p",)),
    "singlet": ZooEntry("singlet", singlet),
    "ghz": ZooEntry(
        "ghz",
        ghz,
        ("n", "n_senders"),
        notes=("n=4: LOCC-DC by the Pauli-encoding protocol with chi_LOCC = 3 (known result, not computed)",),
    ),
    "w": ZooEntry("w", w, ("n", "n_senders"), notes=("n=4: LOCC-DC status open",)),
    "two_singlets": ZooEntry("two_singlets", two_singlets, assignment=_PAIRED),
    "frank4": ZooEntry("frank4", frank4, assignment=_PAIRED),
    "tiles33": ZooEntry(
        "tiles33", tiles33, known_entangled="entangled by construction (UPB)"
    ),
}


def _coerce(value):
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            return float(value)
    return value


def make(name: str, *args, **kwargs) -> DensityState:
    """Build a zoo state by name.

    ``make("noisy", base_name, v, *base_args)`` wraps another zoo state in white noise.
    String arguments are converted to numbers, so CLI tokens can be passed directly.
    """
    if name == "noisy":
        if len(args) < 2:
            raise BadParameter("noisy needs a base state name and a visibility")
        base_name, v, *rest = args
        return noisy(make(base_name, *rest), _coerce(v))
    entry = entry_for(name)
    if len(args) > len(entry.params):
        raise BadParameter(f"{name} takes at most {len(entry.params)} parameters")
    return entry.build(*(_coerce(a) for a in args), **{k: _coerce(v) for k, v in kwargs.items()})


def entry_for(name: str) -> ZooEntry:
    try:
        return ZOO[name]
    except KeyError:
        raise BadParameter(f"unknown zoo state {name!r}; known: {sorted(ZOO) + ['noisy']}") from None


def default_assignment(s: DensityState) -> dict[str, str] | None:
    """Pair senders with receivers in order when the layout has exactly two receivers.

    With two senders this is sender 1 to receiver 1 and sender 2 to receiver 2;
    extra senders go to the last receiver.
    """
    senders, receivers = s.layout.senders, s.layout.receivers
    if len(receivers) != 2 or not senders:
        return None
    return {snd: receivers[min(i, 1)] for i, snd in enumerate(senders)}


def werner_dc_threshold(xtol: float = 1e-6) -> float:
    """Werner mixing parameter where the global entropy drops to one bit.

    Above it the state is dense-codeable; the receiver marginal is always ``I/2``.
    """
    return bisect(lambda p: von_neumann_entropy(werner(p)) - 1.0, 0.5, 0.95, xtol=xtol)
