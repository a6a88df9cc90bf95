"""Double-row transfer matrices of the D₂⁽²⁾ chain and its XXZ companions.

The auxiliary space is always factor 0 of the working layout; quantum sites
follow in order 1..L.  Monodromies are accumulated by contracting one
two-site factor at a time, so no embedded R-matrix is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from .d22 import (
    BoundaryClass,
    D22Boundary,
    SWAP4,
    k_minus_d22,
    k_plus_d22,
    r_d22,
    r_d22_21,
    rho_d22,
)
from .tensor import (
    apply_left,
    apply_right,
    eigen_spectrum,
    multiset_distance,
    partial_trace,
    scaled_residual,
)
from .xxz import (
    SWAP2,
    ParameterError,
    XxzBoundary,
    check_eta,
    k_minus_xxz,
    k_plus_xxz,
    r_xxz,
    rho_s,
    s_transform,
)

IPI = 1j * np.pi
MAX_SITES = 3


class Pattern(str, Enum):
    """Staggered inhomogeneity patterns of the XXZ companion chain."""

    PLAIN = "plain"
    SHIFTED = "shifted"


class UnsupportedError(RuntimeError):
    """Requested construction does not exist for this boundary class."""


@dataclass(frozen=True)
class ChainSpec:
    n: int
    eta: complex
    boundary: D22Boundary

    def __post_init__(self):
        if not 1 <= self.n <= MAX_SITES:
            raise ParameterError(f"N={self.n} outside the supported range 1..{MAX_SITES}")
        object.__setattr__(self, "eta", check_eta(self.eta))

    @property
    def cls(self) -> BoundaryClass:
        return self.boundary.cls

    @property
    def params(self) -> XxzBoundary:
        return self.boundary.params

    @property
    def pattern(self) -> Pattern:
        return Pattern.PLAIN if self.cls is BoundaryClass.I else Pattern.SHIFTED


def staggered_thetas(n: int, pattern: Pattern | str) -> list[complex]:
    """Inhomogeneities of the 2N-site companion chain.

    ``plain`` alternates ``0, iπ``; ``shifted`` alternates ``iπ/2, 3iπ/2``.
    """
    pattern = Pattern(pattern)
    pair = [0.0, IPI] if pattern is Pattern.PLAIN else [IPI / 2, 3 * IPI / 2]
    return [complex(x) for x in pair * n]


def _double_row(kp, km, left, right, d, sites):
    """``tr₀ {K⁺₀ T₀ K⁻₀ T̂₀}`` from lists of two-site factors.

    ``left[j]`` acts on (aux, site j+1) and is multiplied in increasing
    order; ``right[j]`` acts on (site j+1, aux) in its first/second slot and
    is multiplied in decreasing order.
    """
    dims = (d,) + (sites[0],) * len(left)
    total = int(np.prod(dims))
    m = np.eye(total, dtype=np.complex128)
    m = apply_right(m, kp, (0,), dims)
    for j, r in enumerate(left):
        m = apply_right(m, r, (0, j + 1), dims)
    m = apply_right(m, km, (0,), dims)
    for j in reversed(range(len(right))):
        m = apply_right(m, right[j], (j + 1, 0), dims)
    return partial_trace(m, 0, dims)


def transfer_d22(u: complex, spec: ChainSpec) -> np.ndarray:
    """Homogeneous D₂⁽²⁾ transfer matrix, dimension ``4^N``."""
    eta = spec.eta
    r = r_d22(u, eta)
    return _double_row(
        k_plus_d22(u, eta, spec.boundary),
        k_minus_d22(u, eta, spec.boundary),
        [r] * spec.n,
        [r] * spec.n,
        4,
        (4,),
    )


def transfer_xxz(u: complex, thetas, eta: complex, boundary: XxzBoundary) -> np.ndarray:
    """Inhomogeneous open XXZ transfer matrix ``t̃(u)`` on ``len(thetas)`` sites.

    The second row uses ``R̃_{j0}(u+θ_j)``; with ``R̃_{0j}`` the family
    would not commute.
    """
    thetas = list(thetas)
    left = [r_xxz(u - th, eta) for th in thetas]
    right = [r_xxz(u + th, eta) for th in thetas]
    return _double_row(
        k_plus_xxz(u, eta, *boundary.plus()),
        k_minus_xxz(u, *boundary.minus()),
        left,
        right,
        2,
        (2,),
    )


def transfer_xxz_bar(u: complex, thetas, eta: complex, boundary: XxzBoundary) -> np.ndarray:
    """Shifted companion ``t̄(u)``: K̃± at ``u+iπ/2``, second row at ``u+iπ``."""
    thetas = list(thetas)
    left = [r_xxz(u - th, eta) for th in thetas]
    right = [r_xxz(u + IPI + th, eta) for th in thetas]
    return _double_row(
        k_plus_xxz(u + IPI / 2, eta, *boundary.plus()),
        k_minus_xxz(u + IPI / 2, *boundary.minus()),
        left,
        right,
        2,
        (2,),
    )


def transfer_xxz_staggered(u: complex, spec: ChainSpec, pattern: Pattern | str) -> np.ndarray:
    """``t̃_s(u)`` (plain) or ``t̄_s(u) = t̃(u+iπ/2)|_{θ ∈ {iπ/2, 3iπ/2}}`` (shifted)."""
    pattern = Pattern(pattern)
    thetas = staggered_thetas(spec.n, pattern)
    if pattern is Pattern.PLAIN:
        return transfer_xxz(u, thetas, spec.eta, spec.params)
    return transfer_xxz(u + IPI / 2, thetas, spec.eta, spec.params)


def conjugation(n: int, eta: complex, swap: bool = True) -> np.ndarray:
    """Global similarity ``(S·P̃)^{⊗N}``, or plain ``S^{⊗N}`` when ``swap`` is false.

    ``P̃`` exchanges the two XXZ sites inside each four-dimensional site.
    """
    loc = s_transform(eta) @ SWAP2 if swap else s_transform(eta)
    return reduce(np.kron, [loc] * n)


def _prefactor(u, spec):
    shift = IPI if spec.cls is BoundaryClass.I else 2 * IPI
    return 2.0 ** (8 * spec.n) * rho_s(2 * u + shift - 2 * spec.eta, spec.eta)


@dataclass(frozen=True)
class FactorizationResult:
    conjugated: float
    plain_s: float
    raw: float
    spectrum: float


def factorization_residual(u: complex, spec: ChainSpec) -> FactorizationResult:
    """Compare ``t(u)`` with ``2^{8N} ρ_s(·) t_s(u+iπ) t_s(u)`` for the matching pattern.

    Residuals: conjugated by ``(S·P̃)^{⊗N}``, conjugated by ``S^{⊗N}`` only,
    unconjugated, and the spectral multiset distance.
    """
    pre = _prefactor(u, spec)
    if abs(pre) < 1e-8 * 2.0 ** (8 * spec.n):
        raise ParameterError("u sits on a zero of the prefactor; resample")
    t = transfer_d22(u, spec)
    ts = lambda x: transfer_xxz_staggered(x, spec, spec.pattern)  # noqa: E731
    rhs = pre * ts(u + IPI) @ ts(u)
    c = conjugation(spec.n, spec.eta)
    ci = np.linalg.inv(c)
    cs = conjugation(spec.n, spec.eta, swap=False)
    return FactorizationResult(
        conjugated=scaled_residual(ci @ t @ c, rhs),
        plain_s=scaled_residual(cs @ t @ cs, rhs),
        raw=scaled_residual(t, rhs),
        spectrum=multiset_distance(eigen_spectrum(t), eigen_spectrum(rhs)),
    )


def factorization_residual_I(u: complex, spec: ChainSpec) -> FactorizationResult:
    if spec.cls is not BoundaryClass.I:
        raise ParameterError("class I factorization requires a class I boundary")
    return factorization_residual(u, spec)


def factorization_residual_II(u: complex, spec: ChainSpec) -> FactorizationResult:
    if spec.cls is not BoundaryClass.II:
        raise ParameterError("class II factorization requires a class II boundary")
    return factorization_residual(u, spec)


def commutator_residual(a: np.ndarray, b: np.ndarray) -> float:
    """``‖[a, b]‖ / (‖a‖‖b‖)``."""
    den = np.linalg.norm(a) * np.linalg.norm(b)
    return float(np.linalg.norm(a @ b - b @ a) / den) if den else 0.0


# --- Hamiltonian ------------------------------------------------------------


def _d_r0(eta, h=1e-4):
    # five-point stencil on the entire R-matrix
    r = lambda x: r_d22(x, eta)  # noqa: E731
    return (-r(2 * h) + 8 * r(h) - 8 * r(-h) + r(-2 * h)) / (12 * h)


def _d_scalar_matrix(f, h=1e-4):
    return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)


def hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Open-chain Hamiltonian from bulk two-site terms plus both boundary terms.

    Only class I is supported: class II has ``tr K⁺(0) = 0`` and ``t(0) = 0``.
    """
    if spec.cls is not BoundaryClass.I:
        raise UnsupportedError(
            "class II boundaries have tr K+(0) = 0; the first logarithmic derivative "
            "of t(u) does not define a Hamiltonian, a second-order construction is needed"
        )
    eta, n, bnd = spec.eta, spec.n, spec.boundary
    rho0 = rho_d22(0.0, eta)
    # R_{k+1,k}(0) R'_{k+1,k}(0) in (k, k+1) order; R is not P-symmetric, and
    # this is the ordering produced by T = R01...R0N
    h2 = _d_r0(eta) @ r_d22(0.0, eta) / rho0
    dims = (4,) * n
    dim = 4**n
    ham = np.zeros((dim, dim), dtype=np.complex128)
    eye = np.eye(dim, dtype=np.complex128)
    for k in range(n - 1):
        ham += apply_left(h2, eye, (k, k + 1), dims)
    km0 = k_minus_d22(0.0, eta, bnd)
    dkm = _d_scalar_matrix(lambda x: k_minus_d22(x, eta, bnd))
    ham += apply_left(dkm @ np.linalg.inv(km0) / 2, eye, (n - 1,), dims)
    kp0 = k_plus_d22(0.0, eta, bnd)
    tr_kp = np.trace(kp0)
    if abs(tr_kp) < 1e-12:
        raise UnsupportedError("tr K+(0) vanishes for these parameters")
    # tr_0 {K⁺_0 H_{10}}, H_{10} = R_{10}(0) R'_{10}(0) / ρ(0) on (aux, site 1)
    h10 = r_d22_21(0.0, eta) @ _swap_sites(_d_r0(eta)) / rho0
    h10 = partial_trace(np.kron(kp0, np.eye(4)) @ h10, 0, (4, 4))
    ham += apply_left(h10 / tr_kp, eye, (0,), dims)
    return ham


def _swap_sites(m):
    return SWAP4 @ m @ SWAP4


def hamiltonian_from_transfer(spec: ChainSpec, h: float = 1e-5) -> np.ndarray:
    """``½ t(0)⁻¹ t′(0) − tr K⁺′(0) / (2 tr K⁺(0))`` by central differences.

    The step is refined by one Richardson extrapolation.
    """

    def central(f, step):
        return (f(step) - f(-step)) / (2 * step)

    t = lambda x: transfer_d22(x, spec)  # noqa: E731
    trk = lambda x: np.trace(k_plus_d22(x, spec.eta, spec.boundary))  # noqa: E731
    dt = (4 * central(t, h / 2) - central(t, h)) / 3
    dk = (4 * central(trk, h / 2) - central(trk, h)) / 3
    t0 = t(0.0)
    return 0.5 * np.linalg.solve(t0, dt) - dk / (2 * trk(0.0)) * np.eye(t0.shape[0])
