"""Building blocks of the trigonometric (XXZ) six-vertex model.

All matrices are written in the basis ``|1>, |2>`` per two-dimensional
space, products of spaces in ``np.kron`` order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import embed, kron, partial_transpose, permutation_operator, scaled_residual

SWAP2 = permutation_operator(2)


class ParameterError(ValueError):
    """Model parameters are outside the generic regime required by an operation."""


def check_eta(eta: complex) -> complex:
    """Validate the crossing parameter (away from ``iπk``)."""
    eta = complex(eta)
    if abs(np.sinh(eta)) < 1e-12:
        raise ParameterError("sinh(eta) vanishes")
    k = round(eta.imag / np.pi)
    if abs(eta - 1j * np.pi * k) < 1e-6:
        raise ParameterError(f"eta={eta} is within 1e-6 of i*pi*{k}")
    return eta


@dataclass(frozen=True)
class XxzBoundary:
    """Boundary parameters ``(s, s1, s2)`` at one end and ``(sP, s1P, s2P)`` at the other."""

    s: complex
    s1: complex
    s2: complex
    sP: complex
    s1P: complex
    s2P: complex

    def minus(self) -> tuple[complex, complex, complex]:
        return (self.s, self.s1, self.s2)

    def plus(self) -> tuple[complex, complex, complex]:
        return (self.sP, self.s1P, self.s2P)

    @property
    def generic(self) -> bool:
        return self.s1 * self.s2 != 0 and self.s1P * self.s2P != 0


def r_xxz(u: complex, eta: complex) -> np.ndarray:
    """4×4 trigonometric R-matrix ``R̃(u)``; ``R̃(0) = sinh(η)·P``."""
    a = np.sinh(-u / 2 + eta)
    b = np.sinh(u / 2)
    c = np.sinh(eta)
    return np.array(
        [
            [a, 0, 0, 0],
            [0, b, np.exp(-u / 2) * c, 0],
            [0, np.exp(u / 2) * c, b, 0],
            [0, 0, 0, a],
        ],
        dtype=np.complex128,
    )


def r_xxz_21(u: complex, eta: complex) -> np.ndarray:
    """``R̃_21(u) = P R̃_12(u) P``."""
    return SWAP2 @ r_xxz(u, eta) @ SWAP2


def rho_s(u: complex, eta: complex) -> complex:
    """Unitarity scalar ``sinh(−u/2+η)·sinh(u/2+η)``."""
    return complex(np.sinh(-u / 2 + eta) * np.sinh(u / 2 + eta))


def m_tilde(eta: complex) -> np.ndarray:
    return np.diag([np.exp(eta), np.exp(-eta)]).astype(np.complex128)


def k_minus_xxz(u: complex, s: complex, s1: complex, s2: complex) -> np.ndarray:
    """Generic non-diagonal 2×2 reflection matrix ``K̃⁻(u)``."""
    return np.array(
        [
            [-np.exp(-u / 2) * np.sinh(u / 2 - s), s1 * np.sinh(u)],
            [s2 * np.sinh(u), np.exp(u / 2) * np.sinh(u / 2 + s)],
        ],
        dtype=np.complex128,
    )


def k_plus_xxz(u: complex, eta: complex, sP: complex, s1P: complex, s2P: complex) -> np.ndarray:
    """Dual reflection matrix ``K̃⁺(u) = M̃ K̃⁻(−u+2η)`` with the primed parameters."""
    return m_tilde(eta) @ k_minus_xxz(-u + 2 * eta, sP, s1P, s2P)


def s_transform(eta: complex) -> np.ndarray:
    """Involutive similarity ``S = S⁻¹`` relating the D₂⁽²⁾ and XXZ bases.

    Uses the principal branch of ``sqrt(cosh η)``.
    """
    ch = np.cosh(eta)
    if abs(ch) < 1e-12:
        raise ParameterError("cosh(eta) vanishes")
    r = np.sqrt(complex(ch))
    c = np.cosh(eta / 2) / r
    s = np.sinh(eta / 2) / r
    return np.array(
        [[1, 0, 0, 0], [0, c, -s, 0], [0, -s, -c, 0], [0, 0, 0, 1]],
        dtype=np.complex128,
    )


def ybe_residual(u: complex, v: complex, eta: complex) -> float:
    """Residual of ``R̃12(u−v) R̃13(u) R̃23(v) = R̃23(v) R̃13(u) R̃12(u−v)``."""
    dims = (2, 2, 2)
    r12 = embed(r_xxz(u - v, eta), (0, 1), dims)
    r13 = embed(r_xxz(u, eta), (0, 2), dims)
    r23 = embed(r_xxz(v, eta), (1, 2), dims)
    return scaled_residual(r12 @ r13 @ r23, r23 @ r13 @ r12)


def unitarity_residual(u: complex, eta: complex) -> float:
    lhs = r_xxz(u, eta) @ r_xxz_21(-u, eta)
    return scaled_residual(lhs, rho_s(u, eta) * np.eye(4))


def crossing_residual(u: complex, eta: complex) -> float:
    """Residual of ``R̃(u)^{t1} M̃₁ R̃21(−u+4η)^{t1} M̃₁⁻¹ = ρ_s(u−2η)``."""
    m1 = kron(m_tilde(eta), np.eye(2))
    m1i = kron(np.linalg.inv(m_tilde(eta)), np.eye(2))
    lhs = (
        partial_transpose(r_xxz(u, eta), 0, (2, 2))
        @ m1
        @ partial_transpose(r_xxz_21(-u + 4 * eta, eta), 0, (2, 2))
        @ m1i
    )
    return scaled_residual(lhs, rho_s(u - 2 * eta, eta) * np.eye(4))


def reflection_minus_residual(u: complex, v: complex, eta: complex, s, s1, s2) -> float:
    """Residual of the reflection equation for ``K̃⁻``."""
    i2 = np.eye(2)
    k1u = kron(k_minus_xxz(u, s, s1, s2), i2)
    k2v = kron(i2, k_minus_xxz(v, s, s1, s2))
    lhs = r_xxz(u - v, eta) @ k1u @ r_xxz_21(u + v, eta) @ k2v
    rhs = k2v @ r_xxz(u + v, eta) @ k1u @ r_xxz_21(u - v, eta)
    return scaled_residual(lhs, rhs)


def reflection_plus_residual(u: complex, v: complex, eta: complex, sP, s1P, s2P) -> float:
    """Residual of the dual reflection equation for ``K̃⁺``."""
    i2 = np.eye(2)
    k1u = kron(k_plus_xxz(u, eta, sP, s1P, s2P), i2)
    k2v = kron(i2, k_plus_xxz(v, eta, sP, s1P, s2P))
    m1 = kron(m_tilde(eta), i2)
    m1i = np.linalg.inv(m1)
    lhs = r_xxz(-u + v, eta) @ k1u @ m1i @ r_xxz_21(-u - v + 4 * eta, eta) @ m1 @ k2v
    rhs = k2v @ m1 @ r_xxz(-u - v + 4 * eta, eta) @ m1i @ k1u @ r_xxz_21(-u + v, eta)
    return scaled_residual(lhs, rhs)
