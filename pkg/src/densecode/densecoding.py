"""Weyl operators, encoding schemes, and dense-coding capacities and bounds.

Capacities are in bits. For a sender set with local dimensions ``d_a`` the
classical threshold is ``sum_a log2 d_a``; a state is useful for dense coding
when its capacity exceeds it.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .infomeasures import Ensemble, holevo, von_neumann_entropy
from .matcore import unitarity_defect
from .states import (
    DensityState,
    DimensionMismatch,
    NotUnitary,
    local_operator,
    partial_trace,
)

DC_EPS = 1e-9


class InvalidDimension(ValueError):
    pass


class LabelMismatch(ValueError):
    pass


class NoSender(ValueError):
    pass


class NoReceiver(ValueError):
    pass


class FewerThanTwoReceivers(ValueError):
    pass


class NotTwoReceivers(ValueError):
    pass


class UnassignedSender(ValueError):
    pass


@dataclass(frozen=True)
class WeylSet:
    """The ``d**2`` shift-and-multiply unitaries, keyed by ``(p, q)``."""

    dim: int
    operators: dict

    def __iter__(self):
        return iter(self.operators.values())

    def __len__(self) -> int:
        return len(self.operators)

    def __getitem__(self, pq: tuple[int, int]) -> np.ndarray:
        return self.operators[pq]


def weyl_operator(d: int, p: int, q: int) -> np.ndarray:
    """``W(p, q)|j> = exp(2 pi i p j / d) |j + q mod d>``."""
    w = np.zeros((d, d), dtype=np.complex128)
    j = np.arange(d)
    w[(j + q) % d, j] = np.exp(2j * np.pi * p * j / d)
    return w


def weyl_set(d: int) -> WeylSet:
    if int(d) != d or d < 2:
        raise InvalidDimension(f"Weyl operators need dimension >= 2, got {d}")
    d = int(d)
    ops = {(p, q): weyl_operator(d, p, q) for p in range(d) for q in range(d)}
    return WeylSet(d, ops)


def twirl(ws: WeylSet, xi: np.ndarray) -> np.ndarray:
    """Uniform average ``(1/d^2) sum_j W_j^dagger xi W_j`` over the Weyl set."""
    return sum(w.conj().T @ xi @ w for w in ws) / ws.dim**2


def trace_rule_residual(ws: WeylSet, xi: np.ndarray) -> float:
    """Max-entry deviation of the twirl of ``xi`` from ``tr(xi) I / d``.

    The uniform average over ``d**2`` operators fully depolarizes, so the
    identity carries the ``1/d`` normalization of the maximally mixed state.
    """
    d = ws.dim
    return float(np.max(np.abs(twirl(ws, xi) - np.trace(xi) * np.eye(d) / d)))


@dataclass(frozen=True)
class EncodingScheme:
    """Per-sender ensembles of ``(probability, unitary)`` pairs."""

    ensembles: Mapping[str, tuple[tuple[float, np.ndarray], ...]]

    def __post_init__(self):
        cleaned = {}
        for label, members in self.ensembles.items():
            members = tuple((float(p), np.asarray(u, dtype=np.complex128)) for p, u in members)
            if not members:
                raise ValueError(f"sender {label!r} has an empty ensemble")
            total = sum(p for p, _ in members)
            if abs(total - 1) > 1e-10:
                raise ValueError(f"probabilities of sender {label!r} sum to {total!r}")
            if any(p < 0 for p, _ in members):
                raise ValueError(f"sender {label!r} has a negative probability")
            cleaned[label] = members
        object.__setattr__(self, "ensembles", cleaned)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.ensembles)

    def size(self) -> int:
        return math.prod(len(m) for m in self.ensembles.values())


def identity_scheme(s: DensityState) -> EncodingScheme:
    return EncodingScheme(
        {lab: ((1.0, np.eye(s.layout.party(lab).dim)),) for lab in s.layout.senders}
    )


def weyl_scheme(s: DensityState) -> EncodingScheme:
    """Every sender applies its full Weyl set with uniform probabilities."""
    ens = {}
    for lab in s.layout.senders:
        d = s.layout.party(lab).dim
        ens[lab] = tuple((1 / d**2, w) for w in weyl_set(d))
    return EncodingScheme(ens)


def _check_scheme(s: DensityState, scheme: EncodingScheme) -> None:
    if set(scheme.labels) != set(s.layout.senders):
        raise LabelMismatch(
            f"scheme covers {sorted(scheme.labels)}, senders are {sorted(s.layout.senders)}"
        )
    for lab, members in scheme.ensembles.items():
        d = s.layout.party(lab).dim
        for _, u in members:
            if u.shape != (d, d):
                raise DimensionMismatch(f"unitary for {lab!r} has shape {u.shape}, expected {(d, d)}")
            if unitarity_defect(u) > 1e-10:
                raise NotUnitary(f"operator for sender {lab!r} is not unitary")


def encode(s: DensityState, scheme: EncodingScheme) -> Ensemble:
    """Product ensemble over all index combinations of the senders' choices."""
    _check_scheme(s, scheme)
    labels = list(s.layout.ordered(scheme.labels))
    probs, states = [], []
    for combo in itertools.product(*(scheme.ensembles[lab] for lab in labels)):
        prob = math.prod(p for p, _ in combo)
        big = local_operator(s.layout, {lab: u for lab, (_, u) in zip(labels, combo)})
        probs.append(prob)
        states.append(DensityState(s.layout, big @ s.rho @ big.conj().T))
    return Ensemble(tuple(probs), tuple(states))


def ensemble_capacity(s: DensityState, scheme: EncodingScheme) -> float:
    """Holevo quantity of the ensemble a fixed scheme produces."""
    return holevo(encode(s, scheme))


def classical_threshold(s: DensityState, senders: Sequence[str] | None = None) -> float:
    senders = s.layout.senders if senders is None else senders
    return float(sum(math.log2(s.layout.party(lab).dim) for lab in senders))


def _require_senders(s: DensityState) -> None:
    if not s.layout.senders:
        raise NoSender("layout has no sender")


def capacity_single_receiver(s: DensityState) -> float:
    """``sum log2 d_sender + S(receivers) - S(rho)`` with all receivers treated as one."""
    _require_senders(s)
    if not s.layout.receivers:
        raise NoReceiver("layout has no receiver")
    s_recv = von_neumann_entropy(partial_trace(s, s.layout.receivers))
    return classical_threshold(s) + s_recv - von_neumann_entropy(s)


def chi_global(s: DensityState) -> float:
    """Capacity when two or more receivers may measure jointly."""
    _require_senders(s)
    if len(s.layout.receivers) < 2:
        raise FewerThanTwoReceivers("chi_global needs at least two receivers")
    return capacity_single_receiver(s)


def _groups(s: DensityState, assignment: Mapping[str, str]) -> list[tuple[str, tuple[str, ...]]]:
    """``[(receiver, senders assigned to it), ...]`` in layout order of receivers."""
    receivers = s.layout.receivers
    if len(receivers) != 2:
        raise NotTwoReceivers(f"two receivers required, layout has {len(receivers)}")
    _require_senders(s)
    for snd in s.layout.senders:
        if snd not in assignment:
            raise UnassignedSender(f"sender {snd!r} is not assigned to a receiver")
    for snd, rcv in assignment.items():
        if snd not in s.layout.senders:
            raise UnassignedSender(f"{snd!r} is not a sender of this layout")
        if rcv not in receivers:
            raise UnassignedSender(f"{rcv!r} is not a receiver of this layout")
    return [
        (rcv, tuple(snd for snd in s.layout.senders if assignment[snd] == rcv)) for rcv in receivers
    ]


def b_locc(s: DensityState, assignment: Mapping[str, str]) -> float:
    """Upper bound on the two-receiver capacity when receivers use LOCC.

    ``sum log2 d_sender + S(rho_B1) + S(rho_B2) - max_x S(rho_x)``, where
    ``rho_x`` is the marginal on receiver ``B_x`` together with its senders.
    Not clamped; it can exceed :func:`chi_global`.
    """
    groups = _groups(s, assignment)
    recv_terms = sum(von_neumann_entropy(partial_trace(s, [rcv])) for rcv, _ in groups)
    block_terms = [von_neumann_entropy(partial_trace(s, (*snds, rcv))) for rcv, snds in groups]
    return classical_threshold(s) + recv_terms - max(block_terms)


def chi_local(s: DensityState, assignment: Mapping[str, str]) -> float:
    """Sum of the two independent single-receiver capacities (receivers never communicate)."""
    total = 0.0
    for rcv, snds in _groups(s, assignment):
        block = partial_trace(s, (*snds, rcv))
        if snds:
            total += capacity_single_receiver(block)
    return total


class LoccStatus(enum.Enum):
    PROVEN = "Proven"
    EXCLUDED = "Excluded"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CapacityReport:
    chi_single: float
    classical_threshold: float
    chi_glob: float | None = None
    b_locc: float | None = None
    chi_local: float | None = None
    eps: float = DC_EPS

    @property
    def is_G_DC(self) -> bool:
        return self.chi_single > self.classical_threshold + self.eps

    @property
    def is_LO_DC(self) -> bool | None:
        if self.chi_local is None:
            return None
        return self.chi_local > self.classical_threshold + self.eps

    @property
    def is_LOCC_DC_excluded(self) -> bool | None:
        if self.b_locc is None:
            return None
        return self.b_locc <= self.classical_threshold + self.eps

    @property
    def locc_dc(self) -> LoccStatus | None:
        """LOCC usefulness as far as the two bounds decide it."""
        if self.b_locc is None:
            return None
        if self.is_LO_DC:
            return LoccStatus.PROVEN
        if self.is_LOCC_DC_excluded:
            return LoccStatus.EXCLUDED
        return LoccStatus.UNKNOWN

    def items(self) -> list[tuple[str, object]]:
        rows = [
            ("classical_threshold", self.classical_threshold),
            ("chi_single", self.chi_single),
            ("chi_glob", self.chi_glob),
            ("b_locc", self.b_locc),
            ("chi_local", self.chi_local),
            ("is_G_DC", self.is_G_DC),
            ("is_LO_DC", self.is_LO_DC),
            ("is_LOCC_DC_excluded", self.is_LOCC_DC_excluded),
            ("locc_dc", self.locc_dc.value if self.locc_dc else None),
        ]
        return [(k, v) for k, v in rows if v is not None]


def capacity_report(
    s: DensityState, assignment: Mapping[str, str] | None = None, eps: float = DC_EPS
) -> CapacityReport:
    """All capacities and bounds that apply to the layout of ``s``.

    Two-receiver quantities need an ``assignment`` from each sender label to a receiver label.
    """
    chi = capacity_single_receiver(s)
    kwargs = {}
    if len(s.layout.receivers) >= 2:
        kwargs["chi_glob"] = chi
    if assignment is not None:
        kwargs["b_locc"] = b_locc(s, assignment)
        kwargs["chi_local"] = chi_local(s, assignment)
    return CapacityReport(chi_single=chi, classical_threshold=classical_threshold(s), eps=eps, **kwargs)
