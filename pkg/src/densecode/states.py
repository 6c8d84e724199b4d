"""Multipartite density matrices on an ordered layout of parties.

The leftmost party is the most significant tensor factor, so the basis ket
``|j_1 j_2 ... j_N>`` sits at flat index ``sum_k j_k * prod_{l>k} d_l``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .matcore import (
    HERMITIAN_TOL,
    PSD_TOL,
    as_matrix,
    hermiticity_defect,
    hermitian_spectrum,
    unitarity_defect,
)


class DimensionMismatch(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class UnknownLabel(KeyError):
    pass


class EmptyKeepSet(ValueError):
    pass


class InvalidSubset(ValueError):
    pass


class NotUnitary(ValueError):
    pass


class ValidationFailed(ValueError):
    """Raised when a matrix is not a density matrix; carries the diagnostic report."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.describe())


class Role(enum.Enum):
    SENDER = "S"
    RECEIVER = "R"

    @classmethod
    def parse(cls, token: str) -> "Role":
        try:
            return cls(token.upper())
        except ValueError:
            raise ValueError(f"role must be 'S' or 'R', got {token!r}") from None


@dataclass(frozen=True)
class Party:
    label: str
    dim: int
    role: Role

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"party {self.label!r}: local dimension must be an integer >= 2")


@dataclass(frozen=True)
class PartyLayout:
    """Ordered parties with local dimensions and sender/receiver roles."""

    parties: tuple[Party, ...]

    def __post_init__(self):
        object.__setattr__(self, "parties", tuple(self.parties))
        labels = [p.label for p in self.parties]
        if not labels:
            raise ValueError("layout needs at least one party")
        if len(set(labels)) != len(labels):
            raise ValueError(f"party labels must be unique, got {labels}")

    @classmethod
    def build(
        cls,
        dims: Sequence[int],
        roles: str | Sequence[str | Role],
        labels: Sequence[str] | None = None,
    ) -> "PartyLayout":
        """Build a layout from parallel lists; ``roles`` may be a string like ``"SSRR"``.

        Labels default to the 1-based party positions ``"1", "2", ...``.
        """
        if isinstance(roles, str):
            roles = list(roles.replace(" ", ""))
        roles = [r if isinstance(r, Role) else Role.parse(r) for r in roles]
        if labels is None:
            labels = [str(i + 1) for i in range(len(dims))]
        if not (len(dims) == len(roles) == len(labels)):
            raise DimensionMismatch("dims, roles and labels must have equal length")
        return cls(tuple(Party(str(lab), int(d), r) for lab, d, r in zip(labels, dims, roles)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.parties)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.parties)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def senders(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.parties if p.role is Role.SENDER)

    @property
    def receivers(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.parties if p.role is Role.RECEIVER)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(label) from None

    def party(self, label: str) -> Party:
        return self.parties[self.index(label)]

    def dim_of(self, labels: Iterable[str]) -> int:
        return int(np.prod([self.party(lab).dim for lab in labels]))

    def ordered(self, labels: Iterable[str]) -> tuple[str, ...]:
        """Return ``labels`` in layout order, rejecting unknown ones."""
        wanted = set(labels)
        for lab in wanted:
            self.index(lab)
        return tuple(lab for lab in self.labels if lab in wanted)

    def restrict(self, labels: Iterable[str]) -> "PartyLayout":
        keep = set(labels)
        return PartyLayout(tuple(p for p in self.parties if p.label in keep))


@dataclass(frozen=True)
class ValidationReport:
    hermitian: bool
    hermiticity_defect: float
    trace: complex
    min_eigenvalue: float
    shape_ok: bool = True

    @property
    def ok(self) -> bool:
        return (
            self.shape_ok
            and self.hermitian
            and abs(self.trace - 1) <= 1e-10
            and self.min_eigenvalue >= -PSD_TOL
        )

    def describe(self) -> str:
        if not self.shape_ok:
            return "matrix shape does not match the layout"
        parts = [
            f"hermitian={self.hermitian} (defect {self.hermiticity_defect:.3e})",
            f"trace={self.trace.real:.12g}{self.trace.imag:+.3g}j",
            f"min_eigenvalue={self.min_eigenvalue:.6g}",
        ]
        return ", ".join(parts)


@dataclass(frozen=True, eq=False)
class DensityState:
    """A density matrix bound to a :class:`PartyLayout`.

    Construction does not validate; use :func:`from_matrix` or :meth:`checked`
    when the invariants must hold.
    """

    layout: PartyLayout
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = as_matrix(self.rho).copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    def checked(self) -> "DensityState":
        report = validate(self)
        if not report.ok:
            raise ValidationFailed(report)
        return self

    def marginal(self, keep: Iterable[str]) -> "DensityState":
        return partial_trace(self, keep)


def validate(s: DensityState) -> ValidationReport:
    """Diagnose Hermiticity, unit trace and positivity of ``s.rho``."""
    rho = s.rho
    d = s.layout.total_dim
    if rho.shape != (d, d):
        return ValidationReport(False, float("inf"), complex("nan"), float("nan"), shape_ok=False)
    defect = hermiticity_defect(rho)
    herm = (rho + rho.conj().T) / 2
    lam_min = float(np.linalg.eigvalsh(herm)[0])
    return ValidationReport(
        hermitian=defect <= HERMITIAN_TOL,
        hermiticity_defect=defect,
        trace=complex(np.trace(rho)),
        min_eigenvalue=lam_min,
    )


def from_matrix(rho, layout: PartyLayout, check: bool = True) -> DensityState:
    rho = as_matrix(rho)
    d = layout.total_dim
    if rho.shape != (d, d):
        raise DimensionMismatch(f"matrix shape {rho.shape} does not match total dimension {d}")
    s = DensityState(layout, rho)
    return s.checked() if check else s


def from_pure(amplitudes, layout: PartyLayout) -> DensityState:
    """Projector onto the normalized state vector ``amplitudes``."""
    psi = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if psi.size != layout.total_dim:
        raise DimensionMismatch(
            f"{psi.size} amplitudes given for total dimension {layout.total_dim}"
        )
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ZeroVector("state vector has zero norm")
    psi = psi / norm
    return DensityState(layout, np.outer(psi, psi.conj()))


def product(*states: DensityState) -> DensityState:
    """Tensor product of states; layouts are concatenated and must have distinct labels."""
    parties = tuple(p for s in states for p in s.layout.parties)
    rho = states[0].rho
    for s in states[1:]:
        rho = np.kron(rho, s.rho)
    return DensityState(PartyLayout(parties), rho)


def _as_tensor(s: DensityState) -> np.ndarray:
    dims = s.layout.dims
    return s.rho.reshape(dims + dims)


def partial_trace(s: DensityState, keep: Iterable[str]) -> DensityState:
    """Reduced state on the parties in ``keep``, in their original relative order."""
    layout = s.layout
    keep = set(keep)
    if not keep:
        raise EmptyKeepSet("partial trace needs at least one party to keep")
    kept = layout.ordered(keep)
    if kept == layout.labels:
        return s
    n = len(layout.parties)
    keep_idx = [layout.index(lab) for lab in kept]
    # einsum subscripts: row indices 0..n-1, column indices n..2n-1; traced ones share a letter
    row = list(range(n))
    col = [n + k if k in keep_idx else k for k in range(n)]
    out = [k for k in keep_idx] + [n + k for k in keep_idx]
    reduced = np.einsum(_as_tensor(s), row + col, out)
    dk = layout.dim_of(kept)
    return DensityState(layout.restrict(kept), reduced.reshape(dk, dk))


def partial_transpose(s: DensityState, transpose_set: Iterable[str]) -> np.ndarray:
    """Matrix with the row and column indices of ``transpose_set`` exchanged.

    Returns a raw array since the result need not be positive.
    """
    layout = s.layout
    tset = set(transpose_set)
    if not tset or tset >= set(layout.labels):
        raise InvalidSubset("transpose set must be a non-empty proper subset of the parties")
    idx = [layout.index(lab) for lab in layout.ordered(tset)]
    n = len(layout.parties)
    axes = list(range(2 * n))
    for k in idx:
        axes[k], axes[n + k] = n + k, k
    d = layout.total_dim
    return np.transpose(_as_tensor(s), axes).reshape(d, d).copy()


def local_operator(layout: PartyLayout, ops: Mapping[str, np.ndarray]) -> np.ndarray:
    """Full-space operator that acts as ``ops[label]`` on each listed party and identity elsewhere."""
    for lab in ops:
        layout.index(lab)
    factors = []
    for p in layout.parties:
        if p.label in ops:
            u = as_matrix(ops[p.label])
            if u.shape != (p.dim, p.dim):
                raise DimensionMismatch(
                    f"operator for party {p.label!r} has shape {u.shape}, expected {(p.dim, p.dim)}"
                )
            factors.append(u)
        else:
            factors.append(np.eye(p.dim, dtype=np.complex128))
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def apply_local_unitaries(
    s: DensityState, ops: Mapping[str, np.ndarray], tol: float = 1e-10
) -> DensityState:
    """Conjugate ``s`` by a tensor product of local unitaries; missing parties get the identity."""
    for lab, u in ops.items():
        u = as_matrix(u)
        dim = s.layout.party(lab).dim
        if u.shape != (dim, dim):
            raise DimensionMismatch(f"operator for party {lab!r} has shape {u.shape}, expected {(dim, dim)}")
        if unitarity_defect(u) > tol:
            raise NotUnitary(f"operator for party {lab!r} is not unitary")
    big = local_operator(s.layout, ops)
    return DensityState(s.layout, big @ s.rho @ big.conj().T)


def merge_parties(s: DensityState, labels: Sequence[str], new_label: str) -> DensityState:
    """Regroup a contiguous block of same-role parties into one party of the product dimension.

    The matrix is unchanged; only the layout is coarsened.
    """
    layout = s.layout
    block = layout.ordered(labels)
    idx = [layout.index(lab) for lab in block]
    if not idx or idx != list(range(idx[0], idx[0] + len(idx))):
        raise InvalidSubset("merged parties must be contiguous in the layout")
    roles = {layout.party(lab).role for lab in block}
    if len(roles) != 1:
        raise InvalidSubset("merged parties must share a role")
    merged = Party(new_label, layout.dim_of(block), roles.pop())
    parties = list(layout.parties[: idx[0]]) + [merged] + list(layout.parties[idx[-1] + 1 :])
    return DensityState(PartyLayout(tuple(parties)), s.rho)


def spectrum(s: DensityState) -> np.ndarray:
    return hermitian_spectrum(s.rho)
