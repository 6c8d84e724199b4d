"""PPT, reduction and entropic tests across a bipartite cut, and the shell classifier.

A cut is given by the labels on the sender side; the complement is the
receiver side. It defaults to the layout's senders versus its receivers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .densecoding import DC_EPS, CapacityReport, capacity_report
from .infomeasures import von_neumann_entropy
from .matcore import PSD_TOL, is_psd
from .states import DensityState, partial_trace, partial_transpose


class InvalidCut(ValueError):
    pass


@dataclass(frozen=True)
class Cut:
    left: tuple[str, ...]
    right: tuple[str, ...]

    def __str__(self) -> str:
        return f"{','.join(self.left)}:{','.join(self.right)}"


def make_cut(s: DensityState, left: Iterable[str] | None = None) -> Cut:
    layout = s.layout
    if left is None:
        left = layout.senders
    left = set(left)
    unknown = left - set(layout.labels)
    if unknown:
        raise InvalidCut(f"unknown party labels {sorted(unknown)}")
    if not left or left == set(layout.labels):
        raise InvalidCut("each side of the cut needs at least one party")
    return Cut(layout.ordered(left), tuple(lab for lab in layout.labels if lab not in left))


def ppt_test(s: DensityState, left: Iterable[str] | None = None) -> tuple[bool, float]:
    """Positivity of the partial transpose on the left side of the cut."""
    cut = make_cut(s, left)
    return is_psd(partial_transpose(s, cut.left), PSD_TOL)


def reduction_criterion(
    s: DensityState, left: Iterable[str] | None = None
) -> tuple[bool, float, float]:
    """Check ``rho_A (x) I >= rho`` and ``I (x) rho_B >= rho``.

    Returns ``(violated, min_eig_left_term, min_eig_right_term)``. A violation
    certifies that the state is distillable across the cut.
    """
    cut = make_cut(s, left)
    layout = s.layout
    rho_a = partial_trace(s, cut.left).rho
    rho_b = partial_trace(s, cut.right).rho
    d_a, d_b = layout.dim_of(cut.left), layout.dim_of(cut.right)
    # rebuild in the cut ordering (A first), then permute back to the layout ordering
    perm = [layout.index(lab) for lab in cut.left + cut.right]
    op_a = _reorder(np.kron(rho_a, np.eye(d_b)), layout.dims, perm)
    op_b = _reorder(np.kron(np.eye(d_a), rho_b), layout.dims, perm)
    _, min_a = is_psd(op_a - s.rho)
    _, min_b = is_psd(op_b - s.rho)
    return (min_a < -PSD_TOL or min_b < -PSD_TOL), min_a, min_b


def _reorder(m: np.ndarray, dims: tuple[int, ...], perm: list[int]) -> np.ndarray:
    """Map an operator written with factors in order ``perm`` back to natural party order."""
    n = len(dims)
    pdims = tuple(dims[k] for k in perm)
    t = m.reshape(pdims + pdims)
    inv = np.argsort(perm)
    axes = list(inv) + [n + k for k in inv]
    d = int(np.prod(dims))
    return np.transpose(t, axes).reshape(d, d)


def entropic_dc_test(
    s: DensityState, left: Iterable[str] | None = None, eps: float = DC_EPS
) -> tuple[bool, float]:
    """Is the receiver side more mixed than the whole? Returns ``(margin > eps, margin)``."""
    cut = make_cut(s, left)
    margin = von_neumann_entropy(partial_trace(s, cut.right)) - von_neumann_entropy(s)
    return margin > eps, margin


class Shell(enum.Enum):
    SEPARABLE_OR_PBE = "SeparableOrPBE"
    NPT_UNDETERMINED = "NPT-Undetermined"
    DISTILLABLE_NON_DC = "Distillable-nonDC"
    G_DC = "G-DC"
    LOCC_DC_EXCLUDED = "LOCC-DC-Excluded"
    LO_DC = "LO-DC"

    @property
    def is_dc(self) -> bool:
        return self in (Shell.G_DC, Shell.LOCC_DC_EXCLUDED, Shell.LO_DC)


@dataclass(frozen=True)
class ShellVerdict:
    cut: Cut
    ppt: bool
    ppt_min_eigenvalue: float
    reduction_violated: bool
    reduction_min_eigenvalues: tuple[float, float]
    entropic_dc: bool
    dc_margin: float
    shell: Shell
    capacities: CapacityReport | None = None
    notes: tuple[str, ...] = field(default=())

    def items(self) -> list[tuple[str, object]]:
        rows = [
            ("cut", str(self.cut)),
            ("shell", self.shell.value),
            ("ppt", self.ppt),
            ("ppt_min_eigenvalue", self.ppt_min_eigenvalue),
            ("reduction_violated", self.reduction_violated),
            ("entropic_dc", self.entropic_dc),
            ("dc_margin", self.dc_margin),
        ]
        rows += [("note", n) for n in self.notes]
        return rows


def classify(
    s: DensityState,
    left: Iterable[str] | None = None,
    assignment: Mapping[str, str] | None = None,
    known_entangled: str | None = None,
    eps: float = DC_EPS,
) -> ShellVerdict:
    """Place ``s`` in the dense-codeability shells for the given cut.

    Separability is never certified: a PPT, non-DC state is reported as
    ``SeparableOrPBE``. ``known_entangled`` is an external entanglement
    certificate (e.g. from the zoo) which is added to the notes of PPT states.
    When ``assignment`` is given and the layout has two receivers, DC states
    are refined using the local and LOCC bounds.
    """
    cut = make_cut(s, left)
    ppt, ppt_min = ppt_test(s, cut.left)
    violated, min_a, min_b = reduction_criterion(s, cut.left)
    dc, margin = entropic_dc_test(s, cut.left, eps)
    notes: list[str] = []
    report = None

    if dc:
        shell = Shell.G_DC
        if assignment is not None and len(s.layout.receivers) == 2:
            report = capacity_report(s, assignment, eps)
            if report.is_LO_DC:
                shell = Shell.LO_DC
            elif report.is_LOCC_DC_excluded:
                shell = Shell.LOCC_DC_EXCLUDED
            else:
                notes.append("LOCC-DC status not decided by the bounds")
        if ppt:
            notes.append("PPT across the cut yet dense-codeable: bound-entangled DC candidate")
    elif violated:
        shell = Shell.DISTILLABLE_NON_DC
    elif ppt:
        shell = Shell.SEPARABLE_OR_PBE
        if known_entangled:
            notes.append(f"{known_entangled}, hence PBE")
    else:
        shell = Shell.NPT_UNDETERMINED

    return ShellVerdict(
        cut=cut,
        ppt=ppt,
        ppt_min_eigenvalue=ppt_min,
        reduction_violated=violated,
        reduction_min_eigenvalues=(min_a, min_b),
        entropic_dc=dc,
        dc_margin=margin,
        shell=shell,
        capacities=report,
        notes=tuple(notes),
    )
