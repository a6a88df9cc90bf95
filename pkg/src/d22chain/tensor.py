"""Dense complex operators on tensor-product spaces.

Index convention (used everywhere in the package): an operator on
``V_1 ⊗ V_2 ⊗ ... ⊗ V_n`` is a row-major ``(D, D)`` complex array whose row
index is the flattened multi-index ``(i_1, ..., i_n)`` with the *leftmost*
factor varying slowest, i.e. exactly the layout produced by ``np.kron``.
The ordered tuple of local dimensions is called the layout (``dims``).
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

Layout = tuple[int, ...]

EIGEN_DIM_CAP = 4096


class LayoutError(ValueError):
    """Layout does not match the operator, or a factor index is out of range."""


class EigenError(RuntimeError):
    """Eigenvalue computation failed or violated its post-conditions."""


def as_operator(m, dims: Sequence[int] | None = None) -> np.ndarray:
    """Return ``m`` as a square complex128 array, checking it against ``dims``."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LayoutError(f"operator must be square, got shape {m.shape}")
    if dims is not None and int(np.prod(dims)) != m.shape[0]:
        raise LayoutError(f"layout {tuple(dims)} does not match dimension {m.shape[0]}")
    return m


def _check_factor(factor: int, dims: Sequence[int]) -> None:
    if not 0 <= factor < len(dims):
        raise LayoutError(f"factor {factor} out of range for layout {tuple(dims)}")


def kron(*ops) -> np.ndarray:
    """Kronecker product, leftmost argument slowest-varying."""
    return reduce(np.kron, [as_operator(o) for o in ops])


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


def permutation_operator(d: int) -> np.ndarray:
    """Swap operator on ``V ⊗ V`` with ``P[(a,b),(c,e)] = δ_ae δ_bc``."""
    if d < 1:
        raise ValueError("local dimension must be >= 1")
    p = np.zeros((d, d, d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            p[a, b, b, a] = 1.0
    return p.reshape(d * d, d * d)


def partial_transpose(m, factor: int, dims: Sequence[int]) -> np.ndarray:
    """Transpose the indices of one tensor factor only."""
    dims = tuple(dims)
    m = as_operator(m, dims)
    _check_factor(factor, dims)
    n = len(dims)
    axes = list(range(2 * n))
    axes[factor], axes[n + factor] = axes[n + factor], axes[factor]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def partial_trace(m, factor: int, dims: Sequence[int]) -> np.ndarray:
    """Trace out one tensor factor; the result lives on the remaining factors."""
    dims = tuple(dims)
    m = as_operator(m, dims)
    _check_factor(factor, dims)
    n = len(dims)
    t = np.trace(m.reshape(dims + dims), axis1=factor, axis2=n + factor)
    rest = int(np.prod(dims)) // dims[factor]
    return t.reshape(rest, rest)


def embed(op, sites: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Lift an operator on ``⊗_{k} V_{sites[k]}`` to the full space.

    ``op`` is written in the tensor order given by ``sites``; e.g.
    ``embed(R, (2, 0), dims)`` places the first slot of ``R`` on factor 2.
    """
    dims = tuple(dims)
    sites = tuple(sites)
    n = len(dims)
    k = len(sites)
    if len(set(sites)) != k:
        raise LayoutError("repeated site in embedding")
    for s in sites:
        _check_factor(s, dims)
    local = tuple(dims[s] for s in sites)
    op = as_operator(op, local).reshape(local + local)
    total = int(np.prod(dims))
    ident = np.eye(total, dtype=np.complex128).reshape(dims + dims)
    # rows of identity on `sites` are contracted with the columns of op
    op_idx = [n + 2 * n + i for i in range(k)] + [n + 2 * n + k + i for i in range(k)]
    id_idx = list(range(n)) + [n + i for i in range(n)]
    out_idx = list(range(n)) + [n + i for i in range(n)]
    for i, s in enumerate(sites):
        id_idx[s] = op_idx[k + i]
        out_idx[s] = op_idx[i]
    out = np.einsum(op, op_idx, ident, id_idx, out_idx)
    return out.reshape(total, total)


def apply_right(m, op, sites: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Return ``m @ embed(op, sites, dims)`` without forming the embedding."""
    return _apply(m, op, sites, dims, right=True)


def apply_left(op, m, sites: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Return ``embed(op, sites, dims) @ m`` without forming the embedding."""
    return _apply(m, op, sites, dims, right=False)


def _apply(m, op, sites, dims, right):
    dims = tuple(dims)
    n = len(dims)
    k = len(sites)
    local = tuple(dims[s] for s in sites)
    op = np.asarray(op, dtype=np.complex128).reshape(local + local)
    t = np.asarray(m, dtype=np.complex128).reshape(dims + dims)
    t_idx = list(range(2 * n))
    out_idx = list(range(2 * n))
    fresh = 2 * n
    op_row = list(range(fresh, fresh + k))
    op_col = list(range(fresh + k, fresh + 2 * k))
    for i, s in enumerate(sites):
        if right:
            # contract the column index of m on site s with the row of op
            t_idx[n + s] = op_row[i]
            out_idx[n + s] = op_col[i]
        else:
            t_idx[s] = op_col[i]
            out_idx[s] = op_row[i]
    out = np.einsum(t, t_idx, op, op_row + op_col, out_idx)
    total = int(np.prod(dims))
    return out.reshape(total, total)


def eigen_spectrum(m, cap: int = EIGEN_DIM_CAP, check: bool = True) -> np.ndarray:
    """Eigenvalues of a general complex matrix (LAPACK Hessenberg + shifted QR).

    With ``check`` the trace identity is verified and a failure raises
    :class:`EigenError` instead of returning a silently wrong spectrum.
    """
    m = as_operator(m)
    if m.shape[0] > cap:
        raise EigenError(f"dimension {m.shape[0]} exceeds cap {cap}")
    if not np.all(np.isfinite(m)):
        raise EigenError("operator has non-finite entries")
    try:
        ev = scipy.linalg.eigvals(m, check_finite=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise EigenError(f"QR iteration did not converge: {exc}") from exc
    if check:
        scale = max(np.linalg.norm(m), 1.0)
        if abs(ev.sum() - np.trace(m)) > 1e-10 * scale * max(1, m.shape[0] ** 0.5):
            raise EigenError("eigenvalue sum does not reproduce the trace")
    return ev


def relative_residual(lhs, rhs) -> float:
    """``‖lhs − rhs‖_F / max(‖lhs‖_F, ‖rhs‖_F, 1)``."""
    lhs = np.asarray(lhs, dtype=np.complex128)
    rhs = np.asarray(rhs, dtype=np.complex128)
    if lhs.shape != rhs.shape:
        raise LayoutError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    den = max(np.linalg.norm(lhs), np.linalg.norm(rhs), 1.0)
    return float(np.linalg.norm(lhs - rhs) / den)


def scaled_residual(lhs, rhs) -> float:
    """Relative Frobenius residual without the unit floor.

    Identity checks use this form: entries of the chain operators can be
    much smaller than one, where the floored residual would be vacuous.
    """
    lhs = np.asarray(lhs, dtype=np.complex128)
    rhs = np.asarray(rhs, dtype=np.complex128)
    if lhs.shape != rhs.shape:
        raise LayoutError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    den = max(np.linalg.norm(lhs), np.linalg.norm(rhs))
    if den == 0.0:
        return 0.0
    return float(np.linalg.norm(lhs - rhs) / den)


def multiset_distance(a, b) -> float:
    """Max relative distance between two equally sized multisets of complex numbers.

    Pairs are matched by minimum-cost assignment; distances are scaled by
    the largest modulus present.
    """
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0), 1e-300)
    return float(cost[rows, cols].max(initial=0.0) / scale)
