"""R- and K-matrices of the twisted D₂⁽²⁾ vertex model.

Basis states ``|1>..|4>`` of each four-dimensional space map to matrix
indices 0..3 in order.  The four-dimensional space is identified with a pair
of two-dimensional XXZ spaces, ``V = V' ⊗ V''``, and the D₂⁽²⁾ objects are
rebuilt from XXZ blocks conjugated by ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tensor import embed, kron, partial_transpose, permutation_operator, scaled_residual
from .xxz import (
    SWAP2,
    XxzBoundary,
    k_minus_xxz,
    k_plus_xxz,
    m_tilde,
    r_xxz,
    r_xxz_21,
    rho_s,
    s_transform,
)

IPI = 1j * np.pi
SWAP4 = permutation_operator(4)
_I2 = np.eye(2, dtype=np.complex128)
_I4 = np.eye(4, dtype=np.complex128)


class BoundaryClass(str, Enum):
    I = "I"
    II = "II"


# Weyl-basis conventions: alpha' = 5 - alpha and the bar map.
def prime(alpha: int) -> int:
    return 5 - alpha


BAR = {1: 2.0, 2: 2.5, 3: 2.5, 4: 3.0}


@dataclass(frozen=True)
class D22Boundary:
    cls: BoundaryClass
    params: XxzBoundary

    def __post_init__(self):
        object.__setattr__(self, "cls", BoundaryClass(self.cls))


def _unit(a: int, b: int) -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.complex128)
    m[a - 1, b - 1] = 1.0
    return m


def _ee(a, b, c, d) -> np.ndarray:
    return np.kron(_unit(a, b), _unit(c, d))


def r_d22_direct(u: complex, eta: complex) -> np.ndarray:
    """16×16 R-matrix transcribed term by term from its Weyl-basis expansion."""
    e = np.exp
    x = e(u)
    x2 = e(2 * u)
    q4 = e(4 * eta)
    r = np.zeros((16, 16), dtype=np.complex128)

    for a in (1, 4):
        r += (x2 - q4) ** 2 * _ee(a, a, a, a)
    w = e(2 * eta) * (x2 - 1) * (x2 - q4)
    for a in range(1, 5):
        for b in range(1, 5):
            if a != b and a != prime(b) and not (a in (2, 3) and b in (2, 3)):
                r += w * _ee(a, a, b, b)

    pre = -0.5 * (q4 - 1) * (x2 - q4)
    for a in (1, 4):
        for b in (2, 3):
            ap, bp = prime(a), prime(b)
            c1 = (x + 1) * (1 if a == 1 else x)
            c2 = (x - 1) * (-1 if a == 1 else x)
            r += pre * c1 * (_ee(a, b, b, a) + _ee(bp, ap, ap, bp))
            r += pre * c2 * (_ee(a, b, bp, a) + _ee(bp, ap, ap, b))

    def coef_a(a, b):
        d = 1.0 if a == prime(b) else 0.0
        if a == b:
            return (q4 * x2 - q4) * (x2 - 1)
        g = e(2 * eta * (BAR[a] - BAR[b]))
        if a < b:
            return (q4 - 1) * (q4 * g * (x2 - 1) - d * (x2 - q4))
        return (q4 - 1) * x2 * (g * (x2 - 1) - d * (x2 - q4))

    for a in (1, 4):
        for b in (1, 4):
            r += coef_a(a, b) * _ee(a, b, prime(a), prime(b))

    def coef_b(a, sign):
        if a == 1:
            return sign * e(2 * eta * (a - 0.5)) * (q4 - 1) * (x2 - 1) * (x + sign * e(2 * eta))
        return e(2 * eta * (a - 3.5)) * (q4 - 1) * (x2 - 1) * x * (x + sign * e(2 * eta))

    for a in (1, 4):
        ap = prime(a)
        for b in (2, 3):
            bp = prime(b)
            r += 0.5 * coef_b(a, +1) * (_ee(a, b, ap, bp) + _ee(bp, ap, b, a))
            r += 0.5 * coef_b(a, -1) * (_ee(a, b, ap, b) + _ee(b, ap, b, a))

    q2 = e(2 * eta)
    common = q2 * (x2 - 1) * (x2 - q4)
    c_plus = 0.5 * (q4 - 1) * (q2 + 1) * x * (x - 1) * (x + q2) + common
    c_minus = -0.5 * (q4 - 1) * (q2 + 1) * x * (x + 1) * (x - q2) + common
    d_plus = 0.5 * (q4 - 1) * (q2 - 1) * x * (x + 1) * (x + q2)
    d_minus = -0.5 * (q4 - 1) * (q2 - 1) * x * (x - 1) * (x - q2)
    for a in (2, 3):
        ap = prime(a)
        r += c_plus * _ee(a, a, ap, ap) + c_minus * _ee(a, a, a, a)
        r += d_plus * _ee(a, ap, ap, a) + d_minus * _ee(a, ap, a, ap)

    return e(-2 * (u + 2 * eta)) * r


def _ss(eta):
    s = s_transform(eta)
    return np.kron(s, s)


def r_d22_factorized(u: complex, eta: complex) -> np.ndarray:
    """16×16 R-matrix as ``2⁴ [S⊗S] R̃₁′₄′(u+iπ) R̃₁′₃′(u) R̃₂′₄′(u) R̃₂′₃′(u−iπ) [S⊗S]⁻¹``.

    This is the canonical construction used by the chain builders.
    """
    dims = (2, 2, 2, 2)
    prod = embed(r_xxz(u + IPI, eta), (0, 3), dims)
    prod = prod @ embed(r_xxz(u, eta), (0, 2), dims)
    prod = prod @ embed(r_xxz(u, eta), (1, 3), dims)
    prod = prod @ embed(r_xxz(u - IPI, eta), (1, 2), dims)
    ss = _ss(eta)
    return 16.0 * ss @ prod @ ss


def r_d22_21_factorized(u: complex, eta: complex) -> np.ndarray:
    """``R₂₁(u)`` from its own XXZ factorization (second factorized form)."""
    dims = (2, 2, 2, 2)
    prod = embed(r_xxz(u + IPI, eta), (2, 1), dims)
    prod = prod @ embed(r_xxz(u, eta), (3, 1), dims)
    prod = prod @ embed(r_xxz(u, eta), (2, 0), dims)
    prod = prod @ embed(r_xxz(u - IPI, eta), (3, 0), dims)
    ss = _ss(eta)
    return 16.0 * ss @ prod @ ss


r_d22 = r_d22_factorized


def r_d22_21(u: complex, eta: complex) -> np.ndarray:
    return SWAP4 @ r_d22(u, eta) @ SWAP4


def rho_d22(u: complex, eta: complex) -> complex:
    """Unitarity scalar ``16 sinh²(u−2η) sinh²(u+2η)``."""
    return complex(16 * np.sinh(u - 2 * eta) ** 2 * np.sinh(u + 2 * eta) ** 2)


def m_d22(eta: complex) -> np.ndarray:
    return np.diag([np.exp(2 * eta), 1.0, 1.0, np.exp(-2 * eta)]).astype(np.complex128)


def r_direct_vs_factorized(u: complex, eta: complex) -> tuple[float, np.ndarray]:
    """Residual between the two R constructions and the entrywise difference."""
    a = r_d22_direct(u, eta)
    b = r_d22_factorized(u, eta)
    return scaled_residual(a, b), a - b


# --- boundary K-matrices ---------------------------------------------------


def _k_class_one(u, eta, s, s1, s2):
    c = np.sqrt(complex(np.cosh(eta)))
    sh, ch, e = np.sinh, np.cosh, np.exp
    h = 0.5
    k = np.empty((4, 4), dtype=np.complex128)
    w = s1 * s2
    diag_mix = sh(eta) * ch(2 * s) + 2 * w * sh(u) * ch(u - eta)
    k[0, 0] = h * e(-u) * (ch(u - eta) * sh(u - 2 * s) - 2 * w * sh(eta) * sh(u) ** 2)
    k[0, 1] = h * s1 * e(-u / 2) * c * sh(2 * u) * ch((u - eta - 2 * s) / 2)
    k[0, 2] = -h * s1 * e(-u / 2) * c * sh(2 * u) * sh((u - eta - 2 * s) / 2)
    k[0, 3] = h * s1**2 * sh(u) * sh(2 * u)
    k[1, 0] = h * s2 * e(-u / 2) * c * sh(2 * u) * ch((u - eta - 2 * s) / 2)
    k[1, 1] = -h * ch(u) * (sh(u) + ch(eta) * sh(2 * s))
    k[1, 2] = -h * sh(u) * diag_mix
    k[1, 3] = -h * s1 * e(u / 2) * c * sh(2 * u) * sh((u - eta + 2 * s) / 2)
    k[2, 0] = -h * s2 * e(-u / 2) * c * sh(2 * u) * sh((u - eta - 2 * s) / 2)
    k[2, 1] = -h * sh(u) * diag_mix
    k[2, 2] = h * ch(u) * (sh(u) - ch(eta) * sh(2 * s))
    k[2, 3] = -h * s1 * e(u / 2) * c * sh(2 * u) * ch((u - eta + 2 * s) / 2)
    k[3, 0] = h * s2**2 * sh(u) * sh(2 * u)
    k[3, 1] = -h * s2 * e(u / 2) * c * sh(2 * u) * sh((u - eta + 2 * s) / 2)
    k[3, 2] = -h * s2 * e(u / 2) * c * sh(2 * u) * ch((u - eta + 2 * s) / 2)
    k[3, 3] = -h * e(u) * (ch(u - eta) * sh(u + 2 * s) - 2 * w * sh(eta) * sh(u) ** 2)
    return k


def _k_class_two(u, eta, s, s1, s2):
    c = np.sqrt(complex(np.cosh(eta)))
    sh, ch, e = np.sinh, np.cosh, np.exp
    h = 0.5
    ph = e(IPI / 4)
    hp = IPI / 2
    w = s1 * s2
    k = np.empty((4, 4), dtype=np.complex128)
    lo = e(-u / 2) * ph * c * sh(2 * u)
    hi = e(u / 2) * ph * c * sh(2 * u)
    k[0, 0] = h * e(-u) * (sh(u - eta) * ch(u - 2 * s) - 2 * w * sh(eta) * ch(u) ** 2)
    k[0, 1] = -h * s1 * lo * sh((u - eta - 2 * s + hp) / 2)
    k[0, 2] = h * s1 * lo * ch((u - eta - 2 * s + hp) / 2)
    k[0, 3] = -h * s1**2 * ch(u) * sh(2 * u)
    k[1, 0] = h * s2 * lo * ch((u - eta - 2 * s + hp) / 2)
    k[1, 1] = -h * ch(u) * (sh(eta) * ch(2 * s) - 2 * w * ch(u) * sh(u - eta))
    # sign of the cosh(eta)sinh(2s) term fixed by the reflection equation
    k[1, 2] = -h * sh(u) * (ch(eta) * sh(2 * s) + sh(u + hp))
    k[1, 3] = h * s1 * hi * ch((u - eta + 2 * s - hp) / 2)
    k[2, 0] = -h * s2 * lo * sh((u - eta - 2 * s + hp) / 2)
    k[2, 1] = -h * sh(u) * (ch(eta) * sh(2 * s) - sh(u + hp))
    k[2, 2] = -h * ch(u) * (sh(eta) * ch(2 * s) - 2 * w * ch(u) * sh(u - eta))
    k[2, 3] = h * s1 * hi * sh((u - eta + 2 * s - hp) / 2)
    k[3, 0] = -h * s2**2 * ch(u) * sh(2 * u)
    k[3, 1] = h * s2 * hi * sh((u - eta + 2 * s - hp) / 2)
    k[3, 2] = h * s2 * hi * ch((u - eta + 2 * s - hp) / 2)
    k[3, 3] = h * e(u) * (sh(u - eta) * ch(u + 2 * s) - 2 * w * sh(eta) * ch(u) ** 2)
    return k


def k_minus_d22(u: complex, eta: complex, bnd: D22Boundary) -> np.ndarray:
    """4×4 reflection matrix ``K⁻(u)`` of the requested class."""
    p = bnd.params
    if bnd.cls is BoundaryClass.I:
        return _k_class_one(u, eta, p.s, p.s1, p.s2)
    return _k_class_two(u, eta, p.s, p.s1, p.s2)


def k_plus_d22(u: complex, eta: complex, bnd: D22Boundary) -> np.ndarray:
    """Dual reflection matrix ``K⁺(u) = M K⁻(−u+2η)`` with the primed parameters."""
    p = bnd.params
    f = _k_class_one if bnd.cls is BoundaryClass.I else _k_class_two
    return m_d22(eta) @ f(-u + 2 * eta, eta, p.sP, p.s1P, p.s2P)


def k_minus_factorized(u: complex, eta: complex, bnd: D22Boundary) -> np.ndarray:
    """``K⁻`` rebuilt from XXZ reflection matrices on ``V′ ⊗ V″``."""
    p = bnd.params
    s = s_transform(eta)
    km = lambda x: k_minus_xxz(x, *p.minus())  # noqa: E731
    if bnd.cls is BoundaryClass.I:
        inner = (
            kron(km(u + IPI), _I2)
            @ r_xxz_21(2 * u + IPI, eta)
            @ kron(_I2, km(u))
            @ r_xxz(-IPI, eta)
        )
        return s @ inner @ s / np.sqrt(complex(rho_s(IPI, eta)))
    inner = kron(km(u + 3 * IPI / 2), _I2) @ r_xxz_21(2 * u + 2 * IPI, eta)
    inner = inner @ kron(_I2, km(u + IPI / 2)) @ SWAP2
    return s @ inner @ s


def k_plus_factorized(u: complex, eta: complex, bnd: D22Boundary) -> np.ndarray:
    """``K⁺`` rebuilt from XXZ dual reflection matrices.

    Class I carries the first-factor spectral shift ``u+iπ``; class II the
    shifts ``u+iπ/2`` and ``u+3iπ/2`` together with the swap ``P̃``.
    """
    p = bnd.params
    s = s_transform(eta)
    kp = lambda x: k_plus_xxz(x, eta, *p.plus())  # noqa: E731
    mt2 = kron(_I2, m_tilde(eta))
    mt2i = kron(_I2, np.linalg.inv(m_tilde(eta)))
    if bnd.cls is BoundaryClass.I:
        inner = (
            r_xxz_21(IPI, eta)
            @ kron(_I2, kp(u))
            @ mt2i
            @ r_xxz(-2 * u + 4 * eta - IPI, eta)
            @ mt2
            @ kron(kp(u + IPI), _I2)
        )
        return s @ inner @ s / np.sqrt(complex(rho_s(IPI, eta)))
    inner = (
        SWAP2
        @ kron(_I2, kp(u + IPI / 2))
        @ mt2i
        @ r_xxz(-2 * u + 4 * eta - 2 * IPI, eta)
        @ mt2
        @ kron(kp(u + 3 * IPI / 2), _I2)
    )
    return s @ inner @ s


def k_factorization_check(u: complex, eta: complex, bnd: D22Boundary) -> tuple[float, float]:
    """Residuals ``(K⁺, K⁻)`` of the direct entries against the factorized forms."""
    rp = scaled_residual(k_plus_d22(u, eta, bnd), k_plus_factorized(u, eta, bnd))
    rm = scaled_residual(k_minus_d22(u, eta, bnd), k_minus_factorized(u, eta, bnd))
    return rp, rm


# --- identity residuals ------------------------------------------------------


def ybe_residual(u: complex, v: complex, eta: complex) -> float:
    dims = (4, 4, 4)
    r12 = embed(r_d22(u - v, eta), (0, 1), dims)
    r13 = embed(r_d22(u, eta), (0, 2), dims)
    r23 = embed(r_d22(v, eta), (1, 2), dims)
    return scaled_residual(r12 @ r13 @ r23, r23 @ r13 @ r12)


def unitarity_residual(u: complex, eta: complex, r=r_d22) -> float:
    lhs = r(u, eta) @ SWAP4 @ r(-u, eta) @ SWAP4
    return scaled_residual(lhs, rho_d22(u, eta) * np.eye(16))


def initial_condition_residual(eta: complex, r=r_d22) -> float:
    """``R(0)`` against ``ρ(0)^{1/2} P`` with ``ρ(0)^{1/2} = 4 sinh²(2η)``."""
    return scaled_residual(r(0.0, eta), 4 * np.sinh(2 * eta) ** 2 * SWAP4)


def crossing_residuals(u: complex, eta: complex) -> tuple[float, float]:
    """Both crossing-unitarity lines (transposition in space 1 and in space 2)."""
    m = m_d22(eta)
    mi = np.linalg.inv(m)
    m1, m1i = kron(m, _I4), kron(mi, _I4)
    m2, m2i = kron(_I4, m), kron(_I4, mi)
    target = rho_d22(u - 2 * eta, eta) * np.eye(16)
    r = r_d22(u, eta)
    r21 = r_d22_21(-u + 4 * eta, eta)
    dims = (4, 4)
    one = partial_transpose(r, 0, dims) @ m1 @ partial_transpose(r21, 0, dims) @ m1i
    two = partial_transpose(r, 1, dims) @ m2i @ partial_transpose(r21, 1, dims) @ m2
    return scaled_residual(one, target), scaled_residual(two, target)


def reflection_minus_residual(u: complex, v: complex, eta: complex, bnd: D22Boundary) -> float:
    k1 = kron(k_minus_d22(u, eta, bnd), _I4)
    k2 = kron(_I4, k_minus_d22(v, eta, bnd))
    lhs = r_d22(u - v, eta) @ k1 @ r_d22_21(u + v, eta) @ k2
    rhs = k2 @ r_d22(u + v, eta) @ k1 @ r_d22_21(u - v, eta)
    return scaled_residual(lhs, rhs)


def reflection_plus_residual(u: complex, v: complex, eta: complex, bnd: D22Boundary) -> float:
    k1 = kron(k_plus_d22(u, eta, bnd), _I4)
    k2 = kron(_I4, k_plus_d22(v, eta, bnd))
    m1 = kron(m_d22(eta), _I4)
    m1i = np.linalg.inv(m1)
    lhs = r_d22(-u + v, eta) @ k1 @ m1i @ r_d22_21(-u - v + 4 * eta, eta) @ m1 @ k2
    rhs = k2 @ m1 @ r_d22(-u - v + 4 * eta, eta) @ m1i @ k1 @ r_d22_21(-u + v, eta)
    return scaled_residual(lhs, rhs)
