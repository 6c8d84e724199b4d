import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densecode import sampling
from densecode.matcore import hermitian_spectrum
from densecode.states import (
    DensityState,
    DimensionMismatch,
    EmptyKeepSet,
    InvalidSubset,
    NotUnitary,
    PartyLayout,
    UnknownLabel,
    ValidationFailed,
    apply_local_unitaries,
    from_matrix,
    from_pure,
    merge_parties,
    partial_trace,
    partial_transpose,
    product,
    validate,
)

X = np.array([[0, 1], [1, 0]])


def brute_partial_trace(rho, dims, keep):
    """Reference partial trace by looping over every basis index."""
    n = len(dims)
    kept = sorted(keep)
    dk = int(np.prod([dims[k] for k in kept]))
    out = np.zeros((dk, dk), dtype=complex)
    for i in np.ndindex(*dims):
        for j in np.ndindex(*dims):
            if any(i[k] != j[k] for k in range(n) if k not in keep):
                continue
            a = np.ravel_multi_index([i[k] for k in kept], [dims[k] for k in kept])
            b = np.ravel_multi_index([j[k] for k in kept], [dims[k] for k in kept])
            out[a, b] += rho[np.ravel_multi_index(i, dims), np.ravel_multi_index(j, dims)]
    return out


def brute_partial_transpose(rho, dims, tset):
    out = np.zeros_like(rho)
    for i in np.ndindex(*dims):
        for j in np.ndindex(*dims):
            ii = tuple(j[k] if k in tset else i[k] for k in range(len(dims)))
            jj = tuple(i[k] if k in tset else j[k] for k in range(len(dims)))
            out[np.ravel_multi_index(ii, dims), np.ravel_multi_index(jj, dims)] = rho[
                np.ravel_multi_index(i, dims), np.ravel_multi_index(j, dims)
            ]
    return out


def test_layout_basics():
    lay = PartyLayout.build([2, 3, 2], "SSR")
    assert lay.labels == ("1", "2", "3")
    assert lay.total_dim == 12
    assert lay.senders == ("1", "2") and lay.receivers == ("3",)
    with pytest.raises(ValueError):
        PartyLayout.build([2, 2], "SR", ["A", "A"])
    with pytest.raises(ValueError):
        PartyLayout.build([1, 2], "SR")


def test_from_pure(bell):
    lay = bell.layout
    np.testing.assert_array_equal(from_pure([1, 0, 0, 0], lay).rho, np.diag([1, 0, 0, 0]))
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[0, 3] = expected[3, 0] = expected[3, 3] = 0.5
    np.testing.assert_allclose(bell.rho, expected, atol=1e-15)
    np.testing.assert_allclose(from_pure([2, 0, 0, 2], lay).rho, expected, atol=1e-15)
    assert abs(np.trace(bell.rho @ bell.rho) - 1) < 1e-10
    with pytest.raises(DimensionMismatch):
        from_pure([1, 0], lay)
    with pytest.raises(Exception, match="zero"):
        from_pure([0, 0, 0, 0], lay)


def test_state_is_immutable(bell):
    with pytest.raises(ValueError):
        bell.rho[0, 0] = 3


def test_partial_trace_examples(rng, bell):
    a = sampling.random_state(PartyLayout.build([2], "S", ["A"]), rng)
    b = sampling.random_state(PartyLayout.build([3], "R", ["B"]), rng)
    np.testing.assert_allclose(partial_trace(product(a, b), {"B"}).rho, b.rho, atol=1e-14)
    np.testing.assert_allclose(partial_trace(bell, {"B"}).rho, np.eye(2) / 2, atol=1e-15)

    ghz = np.zeros(16)
    ghz[0] = ghz[15] = 1
    s = from_pure(ghz, PartyLayout.build([2] * 4, "SSRR"))
    got = partial_trace(s, {"3", "4"}).rho
    np.testing.assert_allclose(got, brute_partial_trace(s.rho, [2] * 4, {2, 3}), atol=1e-15)
    np.testing.assert_allclose(got, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


def test_partial_trace_keeps_layout_order(rng):
    lay = PartyLayout.build([2, 3, 2], "SRR")
    s = sampling.random_state(lay, rng)
    r = partial_trace(s, ["3", "1"])
    assert r.layout.labels == ("1", "3")
    np.testing.assert_allclose(r.rho, brute_partial_trace(s.rho, [2, 3, 2], {0, 2}), atol=1e-14)


def test_partial_trace_errors(bell):
    with pytest.raises(UnknownLabel):
        partial_trace(bell, {"Z"})
    with pytest.raises(EmptyKeepSet):
        partial_trace(bell, set())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partial_trace_nested_and_unit_trace(seed):
    rng = np.random.default_rng(seed)
    lay = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=36)
    s = sampling.random_state(lay, rng)
    labels = list(lay.labels)
    rng.shuffle(labels)
    k = int(rng.integers(1, len(labels) + 1))
    outer = labels[:k]
    inner = outer[: int(rng.integers(1, k + 1))]
    nested = partial_trace(partial_trace(s, outer), inner)
    direct = partial_trace(s, inner)
    np.testing.assert_allclose(nested.rho, direct.rho, atol=1e-12)
    assert abs(np.trace(direct.rho) - 1) < 1e-10


def test_partial_transpose_examples(rng, bell):
    assert abs(np.linalg.eigvalsh(partial_transpose(bell, {"B"}))[0] + 0.5) < 1e-12
    sep = DensityState(bell.layout, np.diag([0.5, 0, 0, 0.5]))
    assert np.linalg.eigvalsh(partial_transpose(sep, {"A"}))[0] >= -1e-15
    a = sampling.random_state(PartyLayout.build([2], "S", ["A"]), rng)
    b = sampling.random_state(PartyLayout.build([3], "R", ["B"]), rng)
    pt = partial_transpose(product(a, b), {"A"})
    np.testing.assert_allclose(pt, np.kron(a.rho.T, b.rho), atol=1e-15)
    with pytest.raises(InvalidSubset):
        partial_transpose(bell, set())
    with pytest.raises(InvalidSubset):
        partial_transpose(bell, {"A", "B"})
    with pytest.raises(UnknownLabel):
        partial_transpose(bell, {"Q"})


def test_partial_transpose_matches_brute_and_is_involution(rng):
    lay = PartyLayout.build([2, 3, 2], "SRR")
    s = sampling.random_state(lay, rng)
    pt = partial_transpose(s, {"1", "3"})
    np.testing.assert_array_equal(pt, brute_partial_transpose(s.rho, [2, 3, 2], {0, 2}))
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-14
    again = partial_transpose(DensityState(lay, pt), {"1", "3"})
    np.testing.assert_array_equal(again, s.rho)


def test_apply_local_unitaries_examples(bell):
    same = apply_local_unitaries(bell, {"A": np.eye(2), "B": np.eye(2)})
    np.testing.assert_array_equal(same.rho, bell.rho)
    s = from_pure([1, 0, 0, 0], bell.layout)
    np.testing.assert_array_equal(apply_local_unitaries(s, {"A": X}).rho, np.diag([0, 0, 1, 0]))
    with pytest.raises(NotUnitary):
        apply_local_unitaries(s, {"A": np.diag([1, 2])})
    with pytest.raises(DimensionMismatch):
        apply_local_unitaries(s, {"A": np.eye(3)})


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_local_unitaries_preserve_spectra(seed):
    rng = np.random.default_rng(seed)
    lay = sampling.random_layout(rng, n_senders=(1, 2), n_receivers=(1, 2), max_dim=3, max_total=36)
    s = sampling.random_state(lay, rng, rank=int(rng.integers(1, 4)))
    ops = {p.label: sampling.random_unitary(p.dim, rng) for p in lay.parties}
    t = apply_local_unitaries(s, ops)
    np.testing.assert_allclose(hermitian_spectrum(t.rho), hermitian_spectrum(s.rho), atol=1e-10)
    for lab in lay.labels:
        np.testing.assert_allclose(
            hermitian_spectrum(partial_trace(t, [lab]).rho),
            hermitian_spectrum(partial_trace(s, [lab]).rho),
            atol=1e-10,
        )


def test_validate(bell):
    rep = validate(bell)
    assert rep.ok and abs(rep.trace - 1) < 1e-12 and abs(rep.min_eigenvalue) < 1e-12
    lay = PartyLayout.build([2], "S")
    bad_trace = validate(DensityState(lay, np.diag([0.6, 0.6])))
    assert not bad_trace.ok and abs(bad_trace.trace - 1.2) < 1e-12
    negative = validate(DensityState(lay, np.diag([1.2, -0.2])))
    assert not negative.ok and abs(negative.min_eigenvalue + 0.2) < 1e-12
    non_herm = validate(DensityState(lay, np.array([[0.5, 0.1], [0, 0.5]])))
    assert not non_herm.hermitian and not non_herm.ok
    with pytest.raises(ValidationFailed):
        from_matrix(np.diag([0.6, 0.6]), lay)


def test_merge_parties(rng):
    lay = PartyLayout.build([2, 3, 2], "SSR")
    s = sampling.random_state(lay, rng)
    m = merge_parties(s, ["1", "2"], "A")
    assert m.layout.dims == (6, 2) and m.layout.senders == ("A",)
    np.testing.assert_array_equal(m.rho, s.rho)
    with pytest.raises(InvalidSubset):
        merge_parties(s, ["2", "3"], "X")
