import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from d22chain.tensor import (
    EigenError,
    LayoutError,
    embed,
    eigen_spectrum,
    kron,
    multiset_distance,
    partial_trace,
    partial_transpose,
    permutation_operator,
    relative_residual,
)

from conftest import rand_op


# --- brute-force index oracles ----------------------------------------------------


def _multi(dims):
    return list(itertools.product(*[range(d) for d in dims]))


def _flat(idx, dims):
    return int(np.ravel_multi_index(idx, dims))


def trace_oracle(m, factor, dims):
    rest = [d for i, d in enumerate(dims) if i != factor]
    out = np.zeros((int(np.prod(rest)),) * 2, dtype=complex)
    for a in _multi(rest):
        for b in _multi(rest):
            acc = 0
            for k in range(dims[factor]):
                ia = list(a)
                ia.insert(factor, k)
                ib = list(b)
                ib.insert(factor, k)
                acc += m[_flat(ia, dims), _flat(ib, dims)]
            out[_flat(a, rest), _flat(b, rest)] = acc
    return out


def transpose_oracle(m, factor, dims):
    out = np.zeros_like(m)
    for a in _multi(dims):
        for b in _multi(dims):
            a2, b2 = list(a), list(b)
            a2[factor], b2[factor] = b[factor], a[factor]
            out[_flat(a2, dims), _flat(b2, dims)] = m[_flat(a, dims), _flat(b, dims)]
    return out


layouts = st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda d: np.prod(d) <= 64)


# --- kron -----------------------------------------------------------------------


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_diagonal():
    a, b = 2.0, -3.0 + 1j
    assert np.allclose(kron(np.diag([a, b]), np.eye(2)), np.diag([a, a, b, b]))


def test_kron_mixed_product(rng):
    a, b, c, d = (rand_op(rng, 2) for _ in range(4))
    assert relative_residual(kron(a, b) @ kron(c, d), kron(a @ c, b @ d)) <= 1e-12


def test_kron_associative(rng):
    a, b, c = rand_op(rng, 2), rand_op(rng, 3), rand_op(rng, 2)
    assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)))


# --- permutation -------------------------------------------------------------------


def test_permutation_swaps_vectors(rng):
    p = permutation_operator(2)
    v, w = rng.normal(size=2), rng.normal(size=2)
    assert np.allclose(p @ np.kron(v, w), np.kron(w, v))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_permutation_involution(d):
    p = permutation_operator(d)
    assert np.array_equal(p @ p, np.eye(d * d))


def test_permutation_conjugation_swaps_indices(rng):
    r = rand_op(rng, 16)
    p = permutation_operator(4)
    t = r.reshape(4, 4, 4, 4)
    swapped = np.empty_like(t)
    for a, b, c, d in itertools.product(range(4), repeat=4):
        swapped[a, b, c, d] = t[b, a, d, c]
    assert np.allclose(p @ r @ p, swapped.reshape(16, 16))


# --- partial transpose / trace -------------------------------------------------------


def test_partial_transpose_product(rng):
    a, b = rand_op(rng, 2), rand_op(rng, 2)
    assert np.allclose(partial_transpose(kron(a, b), 0, (2, 2)), kron(a.T, b))
    assert np.allclose(partial_transpose(kron(a, b), 1, (2, 2)), kron(a, b.T))


def test_partial_transpose_involution(rng):
    m = rand_op(rng, 12)
    assert np.array_equal(partial_transpose(partial_transpose(m, 1, (3, 4)), 1, (3, 4)), m)


def test_partial_trace_product(rng):
    a, b = rand_op(rng, 2), rand_op(rng, 2)
    assert np.allclose(partial_trace(kron(a, b), 0, (2, 2)), np.trace(a) * b)
    assert np.allclose(partial_trace(kron(a, b), 1, (2, 2)), np.trace(b) * a)


def test_partial_trace_identity():
    assert np.allclose(partial_trace(np.eye(4), 1, (2, 2)), 2 * np.eye(2))


def test_partial_trace_random_16(rng):
    m = rand_op(rng, 16)
    for f in range(2):
        assert np.allclose(partial_trace(m, f, (4, 4)), trace_oracle(m, f, (4, 4)))


@given(layouts, st.data())
def test_partial_ops_match_oracle(dims, data):
    dims = tuple(dims)
    factor = data.draw(st.integers(0, len(dims) - 1))
    seed = data.draw(st.integers(0, 2**31))
    m = rand_op(np.random.default_rng(seed), int(np.prod(dims)))
    assert np.allclose(partial_transpose(m, factor, dims), transpose_oracle(m, factor, dims))
    pt = partial_trace(m, factor, dims)
    assert np.allclose(pt, trace_oracle(m, factor, dims))
    assert np.isclose(np.trace(pt), np.trace(m))


def test_bad_factor_raises(rng):
    with pytest.raises(LayoutError):
        partial_trace(rand_op(rng, 4), 2, (2, 2))
    with pytest.raises(LayoutError):
        partial_transpose(rand_op(rng, 4), 0, (2, 3))


# --- embed -------------------------------------------------------------------------


def test_embed_matches_kron_with_swaps(rng):
    a = rand_op(rng, 4)
    dims = (2, 2, 2)
    p = permutation_operator(2)
    # op on sites (2, 0): conjugate the (0, 2) embedding by the swap of those sites
    swap02 = kron(np.eye(2), p) @ kron(p, np.eye(2)) @ kron(np.eye(2), p)
    assert np.allclose(embed(a, (0, 1), dims), kron(a, np.eye(2)))
    assert np.allclose(embed(a, (1, 0), dims), kron(p @ a @ p, np.eye(2)))
    assert np.allclose(embed(a, (2, 0), dims), swap02 @ embed(a, (0, 2), dims) @ swap02)


# --- eigen ---------------------------------------------------------------------------


def test_eigen_diagonal():
    ev = eigen_spectrum(np.diag([1, 2 + 1j, -3]))
    assert multiset_distance(ev, [1, 2 + 1j, -3]) < 1e-14


def test_eigen_swap():
    assert multiset_distance(eigen_spectrum([[0, 1], [1, 0]]), [1, -1]) < 1e-14


def test_eigen_trace_identity(rng):
    m = rand_op(rng, 16)
    ev = eigen_spectrum(m)
    assert abs(ev.sum() - np.trace(m)) <= 1e-10 * np.linalg.norm(m)
    assert abs(np.prod(ev) - np.linalg.det(m)) <= 1e-8 * abs(np.linalg.det(m))


@given(st.integers(1, 16), st.integers(0, 2**31))
def test_eigen_roots_of_characteristic(n, seed):
    m = rand_op(np.random.default_rng(seed), n)
    scale = (1 + np.linalg.norm(m)) ** n
    for lam in eigen_spectrum(m):
        assert abs(np.linalg.det(m - lam * np.eye(n))) <= 1e-8 * scale


def test_eigen_cap_raises(rng):
    with pytest.raises(EigenError):
        eigen_spectrum(rand_op(rng, 8), cap=4)


def test_eigen_nonfinite_raises():
    with pytest.raises(EigenError):
        eigen_spectrum([[np.nan, 0], [0, 1]])


# --- residuals -----------------------------------------------------------------------


def test_relative_residual_trivial(rng):
    m = rand_op(rng, 3)
    assert relative_residual(m, m) == 0.0
    m = m / np.linalg.norm(m)
    assert np.isclose(relative_residual(m, 2 * m), 0.5)


def test_relative_residual_small_perturbation(rng):
    m = 1e3 * rand_op(rng, 4)
    e = rand_op(rng, 4)
    e /= np.linalg.norm(e)
    eps = 1e-3
    expected = eps / max(np.linalg.norm(m), np.linalg.norm(m + eps * e))
    assert np.isclose(relative_residual(m, m + eps * e), expected)


def test_relative_residual_shape_mismatch():
    with pytest.raises(LayoutError):
        relative_residual(np.eye(2), np.eye(3))
