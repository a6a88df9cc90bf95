"""Fusion identities, the functional constraint set and the inhomogeneous T-Q relation.

The T-Q eigenvalue ``Λ̃(u)`` of the open XXZ transfer matrix is built from
the Bethe roots ``μ``; its constant pieces (the α constants, their sign
branches and the inhomogeneous coefficient ``x``) live in :class:`TQModel`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .d22 import BoundaryClass
from .tensor import embed, kron, scaled_residual
from .transfer import IPI, ChainSpec, Pattern, staggered_thetas, transfer_xxz
from .xxz import (
    SWAP2,
    ParameterError,
    XxzBoundary,
    k_minus_xxz,
    k_plus_xxz,
    m_tilde,
    r_xxz,
    r_xxz_21,
    rho_s,
)

_I2 = np.eye(2, dtype=np.complex128)


# --- projector and fused R ---------------------------------------------------


def psi0(eta: complex) -> np.ndarray:
    """Singlet-like vector ``(e^{−η/2}|12⟩ + e^{η/2}|21⟩)/√(2cosh η)``."""
    ch = np.cosh(eta)
    if abs(ch) < 1e-12:
        raise ParameterError("cosh(eta) vanishes")
    return np.array([0, np.exp(-eta / 2), np.exp(eta / 2), 0], dtype=np.complex128) / np.sqrt(
        complex(2 * ch)
    )


def projector_psi0(eta: complex) -> np.ndarray:
    """Rank-one projector ``|ψ₀⟩⟨ψ₀|``.

    The bra is the plain transpose: for complex η the conjugated form is not
    idempotent and does not annihilate ``(I−P)R̃(2η)``.
    """
    v = psi0(eta)
    return np.outer(v, v)


def projector_psi0_21(eta: complex) -> np.ndarray:
    """The same projector with its two spaces exchanged."""
    return SWAP2 @ projector_psi0(eta) @ SWAP2


def fused_r_scalar(u: complex, eta: complex) -> complex:
    return complex(-np.sinh(u / 2 + eta) * np.sinh(u / 2 - eta))


def fused_r_identity(u: complex, eta: complex) -> tuple[float, float]:
    """Residuals of both fused-R orderings against the scalar multiple of the projector."""
    dims = (2, 2, 2)
    sc = fused_r_scalar(u, eta)
    p21 = kron(projector_psi0_21(eta), _I2)
    one = p21 @ embed(r_xxz(u, eta), (0, 2), dims) @ embed(r_xxz(u + 2 * eta, eta), (1, 2), dims)
    one = one @ p21
    p12 = kron(projector_psi0(eta), _I2)
    two = p12 @ embed(r_xxz(u, eta), (2, 0), dims) @ embed(r_xxz(u + 2 * eta, eta), (2, 1), dims)
    two = two @ p12
    return scaled_residual(one, sc * p21), scaled_residual(two, sc * p12)


# --- constants -----------------------------------------------------------------


@dataclass(frozen=True)
class FusionConstants:
    alpha: complex
    beta: complex
    alpha1: complex
    alpha2: complex
    alphaP: complex
    betaP: complex
    alpha1P: complex
    alpha2P: complex

    @property
    def alphas(self) -> np.ndarray:
        return np.array([self.alpha1, self.alpha2, self.alpha1P, self.alpha2P])


def _end_constants(s, s1, s2):
    w = s1 * s2
    if abs(w) == 0:
        raise ParameterError("s1*s2 must be nonzero for the fusion constants")
    alpha = 1 / (2 * w)
    beta = np.sqrt(complex((8 * w * np.cosh(2 * s) + 16 * w * w + 1) / (16 * w * w)))
    a1 = np.arccosh(complex(alpha / 2 + beta))
    a2 = np.arccosh(complex(alpha / 2 - beta))
    return complex(alpha), complex(beta), complex(a1), complex(a2)


def fusion_constants(boundary: XxzBoundary) -> FusionConstants:
    """α, β, α₁, α₂ and primed analogues on the principal branches."""
    return FusionConstants(*_end_constants(*boundary.minus()), *_end_constants(*boundary.plus()))


def _cosh_pair(u, a):
    return np.cosh((u + a) / 2) * np.cosh((u - a) / 2)


def fused_k_scalars(u, eta, c: FusionConstants) -> tuple[complex, complex]:
    """Scalars ``(c⁺(u), c⁻(u))`` of the fused reflection identities."""
    plus = 2 * np.sinh(u - 2 * eta) / c.alphaP * _cosh_pair(u, c.alpha1P) * _cosh_pair(u, c.alpha2P)
    minus = -2 * np.sinh(u + 2 * eta) / c.alpha * _cosh_pair(u, c.alpha1) * _cosh_pair(u, c.alpha2)
    return complex(plus), complex(minus)


def fused_k_identities(u: complex, eta: complex, boundary: XxzBoundary) -> tuple[float, float]:
    """Residuals ``(K⁺, K⁻)`` of the fused reflection identities.

    Both sides are compared as operators:
    ``P₂₁ K̃⁻₁(u) R̃₂₁(2u+2η) K̃⁻₂(u+2η) P₁₂ = c⁻(u) |Pψ₀⟩⟨ψ₀|`` and
    ``P₁₂ K̃⁺₂(u+2η) M̃₁ R̃₁₂(−2u+2η) M̃₁⁻¹ K̃⁺₁(u) P₂₁ = c⁺(u) |ψ₀⟩⟨Pψ₀|``.
    """
    c = fusion_constants(boundary)
    v = psi0(eta)
    vt = SWAP2 @ v
    p12 = projector_psi0(eta)
    p21 = projector_psi0_21(eta)
    km = lambda x: k_minus_xxz(x, *boundary.minus())  # noqa: E731
    kp = lambda x: k_plus_xxz(x, eta, *boundary.plus())  # noqa: E731
    x_minus = kron(km(u), _I2) @ r_xxz_21(2 * u + 2 * eta, eta) @ kron(_I2, km(u + 2 * eta))
    m1 = kron(m_tilde(eta), _I2)
    x_plus = (
        kron(_I2, kp(u + 2 * eta)) @ m1 @ r_xxz(-2 * u + 2 * eta, eta) @ np.linalg.inv(m1)
        @ kron(kp(u), _I2)
    )
    sc_plus, sc_minus = fused_k_scalars(u, eta, c)
    r_plus = scaled_residual(p12 @ x_plus @ p21, sc_plus * np.outer(v, vt))
    r_minus = scaled_residual(p21 @ x_minus @ p12, sc_minus * np.outer(vt, v))
    return r_plus, r_minus


# --- constraint set -----------------------------------------------------------


def quantum_det_scalar(z: complex, thetas, eta: complex, c: FusionConstants) -> complex:
    """Closed form of ``t̃(z) t̃(z+2η)`` at ``z = ±θ_j`` (product over all 2N sites)."""
    th = np.asarray(thetas, dtype=np.complex128)
    sh = np.sinh
    val = 4 * sh(z - 2 * eta) * sh(z + 2 * eta) / (c.alpha * c.alphaP * sh(z - eta) * sh(z + eta))
    for a in c.alphas:
        val *= _cosh_pair(z, a)
    val *= np.prod(
        sh((z - th - 2 * eta) / 2)
        * sh((z - th + 2 * eta) / 2)
        * sh((z + th - 2 * eta) / 2)
        * sh((z + th + 2 * eta) / 2)
    )
    return complex(val)


def quantum_det_value(sign: int, j: int, thetas, eta: complex, boundary: XxzBoundary):
    """Scalar and operator residual at ``z = sign·θ_j`` (``j`` is zero-based)."""
    thetas = list(thetas)
    z = sign * thetas[j]
    if abs(np.sinh(z - eta) * np.sinh(z + eta)) < 1e-10:
        raise ParameterError("theta_j sits on a pole of the prefactor; resample")
    c = fusion_constants(boundary)
    val = quantum_det_scalar(z, thetas, eta, c)
    prod = transfer_xxz(z, thetas, eta, boundary) @ transfer_xxz(z + 2 * eta, thetas, eta, boundary)
    return val, scaled_residual(prod, val * np.eye(prod.shape[0]))


def special_scalars(thetas, eta: complex, boundary: XxzBoundary) -> tuple[complex, complex]:
    """Values of ``t̃`` at ``u = 0`` (also ``2η``) and at ``u = iπ``."""
    s, sP = boundary.s, boundary.sP
    th = list(thetas)
    v0 = 2 * np.cosh(eta) * np.sinh(s) * np.sinh(sP) * np.prod([rho_s(t, eta) for t in th])
    vi = 2 * np.cosh(eta) * np.cosh(s) * np.cosh(sP) * np.prod([rho_s(t + IPI, eta) for t in th])
    return complex(v0), complex(vi)


def special_values(thetas, eta: complex, boundary: XxzBoundary) -> tuple[float, float, float]:
    """Residuals of ``t̃(0)``, ``t̃(2η)``, ``t̃(iπ)`` against their scalar values."""
    v0, vi = special_scalars(thetas, eta, boundary)
    t = lambda x: transfer_xxz(x, thetas, eta, boundary)  # noqa: E731
    eye = np.eye(2 ** len(list(thetas)))
    return (
        scaled_residual(t(0.0), v0 * eye),
        scaled_residual(t(2 * eta), v0 * eye),
        scaled_residual(t(IPI), vi * eye),
    )


def asymptotic_scalar(n_sites: int, eta: complex, boundary: XxzBoundary) -> complex:
    """Leading coefficient of ``e^{∓(L+2)(u−η)} t̃(u)`` (same for both signs); ``L`` = site count."""
    p = boundary
    return complex(-(2.0 ** (-2 * n_sites - 2)) * (np.exp(-eta) * p.s1 * p.s2P + np.exp(eta) * p.s2 * p.s1P))


def asymptotic_coefficient(sign: int, thetas, eta: complex, boundary: XxzBoundary, re: float = 20.0):
    """Residual of the scaled transfer matrix at ``Re u = ±re`` against the leading scalar."""
    thetas = list(thetas)
    n_sites = len(thetas)
    u = sign * re + 0.3j
    scaled = np.exp(-sign * (n_sites + 2) * (u - eta)) * transfer_xxz(u, thetas, eta, boundary)
    target = asymptotic_scalar(n_sites, eta, boundary)
    return scaled_residual(scaled, target * np.eye(scaled.shape[0]))


# --- T-Q relation ---------------------------------------------------------------


SIGN_ORBIT = tuple(itertools.product((1, -1), repeat=5))


@dataclass
class TQModel:
    """Constant data of the inhomogeneous T-Q relation for given ``θ``.

    ``signs`` flips the four α's (the cosh equations fix them only up to
    sign) and, in its last slot, the branch of ``√(αα′)``.  The radical
    ``√(s₁s₂s′₁s′₂)`` inside ``x`` is taken as ``1/(2√(αα′))`` so that it
    shares its branch with the T-terms.
    """

    thetas: np.ndarray
    eta: complex
    boundary: XxzBoundary
    constants: FusionConstants
    signs: tuple[int, ...] = (1, 1, 1, 1, 1)
    alphas: np.ndarray = field(init=False)
    sqrt_aa: complex = field(init=False)
    x: complex = field(init=False)

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=np.complex128)
        self.alphas = self.constants.alphas * np.asarray(self.signs[:4])
        c = self.constants
        self.sqrt_aa = self.signs[4] * complex(np.sqrt(complex(c.alpha * c.alphaP)))
        p = self.boundary
        n = len(self.thetas) // 2
        radical = 1 / (2 * self.sqrt_aa)
        self.x = complex(
            -2 * radical * np.cosh((2 * n + 1) * self.eta + self.alphas.sum() / 2)
            - (np.exp(-self.eta) * p.s1 * p.s2P + np.exp(self.eta) * p.s2 * p.s1P)
        )

    @property
    def n_roots(self) -> int:
        return len(self.thetas)

    # elementary functions, vectorized over the trailing axis of mu
    def a(self, u):
        u = np.asarray(u)[..., None]
        th, e = self.thetas, self.eta
        return np.prod(np.sinh((u - th - 2 * e) / 2) * np.sinh((u + th - 2 * e) / 2), axis=-1)

    def d(self, u):
        return self.a(np.asarray(u) + 2 * self.eta)

    def q(self, u, mus):
        mus = np.asarray(mus)
        u = np.asarray(u)[..., None]
        return np.prod(np.sinh((u - mus) / 2) * np.sinh((u + mus - 2 * self.eta) / 2), axis=-1)

    def t1(self, u):
        u = np.asarray(u)
        e = self.eta
        c = np.prod(np.cosh((u[..., None] + self.alphas) / 2), axis=-1)
        return 2 * np.sinh(u - 2 * e) / (np.sinh(u - e) * self.sqrt_aa) * c

    def t2(self, u):
        u = np.asarray(u)
        e = self.eta
        c = np.prod(np.cosh((u[..., None] - 2 * e - self.alphas) / 2), axis=-1)
        return 2 * np.sinh(u) / (np.sinh(u - e) * self.sqrt_aa) * c

    def lambda_raw(self, u, mus) -> complex:
        e = self.eta
        q = self.q(u, mus)
        a, d = self.a(u), self.d(u)
        return (
            self.t1(u) * a * self.q(u + 2 * e, mus) / q
            + self.t2(u) * d * self.q(u - 2 * e, mus) / q
            + self.x * np.sinh(u) * np.sinh(u - 2 * e) * a * d / q
        )

    def lambda_tq(self, u: complex, mus, eps: float = 1e-4) -> complex:
        """``Λ̃(u)``; removable points (``u = η`` or a zero of ``Q``) use a symmetric limit."""
        mus = np.asarray(mus, dtype=np.complex128)
        near_eta = min(abs(np.sinh(u - self.eta)), abs(np.sinh((u - self.eta) / 2)))
        if near_eta < 1e-8 or abs(self.q(u, mus)) < 1e-8:
            return complex(0.5 * (self.lambda_raw(u + eps, mus) + self.lambda_raw(u - eps, mus)))
        return complex(self.lambda_raw(u, mus))

    def bae_terms(self, mus):
        """The three terms of the Bethe equations, each of shape ``mus.shape``."""
        mus = np.asarray(mus, dtype=np.complex128)
        e = self.eta
        one = self.t1(mus) * _q_self(mus, 2 * e, e) / self.d(mus)
        two = self.t2(mus) * _q_self(mus, -2 * e, e) / self.a(mus)
        three = self.x * np.sinh(mus) * np.sinh(mus - 2 * e)
        return one, two, three

    def bae_residuals(self, mus) -> np.ndarray:
        """Left minus right of the Bethe equations for each root."""
        one, two, three = self.bae_terms(mus)
        return one + two + three

    def bae_relative(self, mus) -> np.ndarray:
        """Residuals divided by the largest term magnitude per root."""
        one, two, three = self.bae_terms(mus)
        scale = np.maximum(np.maximum(abs(one), abs(two)), np.maximum(abs(three), 1e-300))
        return abs(one + two + three) / scale

    def reduced_bae(self, mus, cleared: bool = False) -> np.ndarray:
        """Bethe equations divided by the common factor ``sinh μ·sinh(μ−2η)``.

        Every equation carries that factor, so the trivial roots
        ``{0, iπ, 2η, 2η+iπ}`` would satisfy the unreduced system for free.
        Written without the vanishing factors, vectorized over leading axes.
        """
        mus = np.asarray(mus, dtype=np.complex128)
        e = self.eta
        sh = np.sinh
        diff = mus[..., :, None] - mus[..., None, :]
        summ = mus[..., :, None] + mus[..., None, :]
        n = mus.shape[-1]
        off = ~np.eye(n, dtype=bool)
        plus = np.where(off, sh((diff + 2 * e) / 2) * sh((summ) / 2), 1.0)
        minus = np.where(off, sh((diff - 2 * e) / 2) * sh((summ - 4 * e) / 2), 1.0)
        den = sh(mus - e) * self.sqrt_aa
        ca = np.prod(np.cosh((mus[..., None] + self.alphas) / 2), axis=-1)
        cb = np.prod(np.cosh((mus[..., None] - 2 * e - self.alphas) / 2), axis=-1)
        # Q(μ_l ± 2η) with the self factor sinh(±η)·sinh(μ_l ± η − η) pulled out
        first = 2 * sh(e) * ca * np.prod(plus, axis=-1) / den
        second = -2 * sh(e) * cb * np.prod(minus, axis=-1) / den
        if cleared:
            a, d = self.a(mus), self.d(mus)
            return first * a + second * d + self.x * a * d
        return first / self.d(mus) + second / self.a(mus) + self.x

    def cleared_bae(self, mus) -> np.ndarray:
        """Reduced equations multiplied by ``a(μ_l) d(μ_l)``: same solutions, no poles at the θ's."""
        return self.reduced_bae(mus, cleared=True)


def _q_self(mus, shift, eta):
    """``Q(μ_l + shift)`` for every ``l``."""
    u = mus[..., :, None] + shift
    return np.prod(np.sinh((u - mus[..., None, :]) / 2) * np.sinh((u + mus[..., None, :] - 2 * eta) / 2), axis=-1)


def _model_for(thetas, eta, boundary, signs):
    return TQModel(np.asarray(thetas), eta, boundary, fusion_constants(boundary), tuple(signs))


def root_free_constraints(model: TQModel) -> np.ndarray:
    """Relative mismatches of the root-independent constraints.

    ``Λ̃(0)``, ``Λ̃(iπ)`` and both asymptotic coefficients do not depend on
    the Bethe roots, so they fix the α sign branch before any solving.
    """
    eta, bnd = model.eta, model.boundary
    v0, vi = special_scalars(model.thetas, eta, bnd)
    # any root vector works; the asymptotics are independent of it
    probe = 0.41 + 0.77j + 0.37 * np.arange(model.n_roots)
    out = [
        abs(model.t1(0.0 + 0j) * model.a(0.0 + 0j) - v0) / abs(v0),
        abs(model.t1(IPI) * model.a(IPI) - vi) / abs(vi),
    ]
    n_sites = model.n_roots
    target = asymptotic_scalar(n_sites, eta, bnd)
    for sign in (1, -1):
        u = sign * 30.0 + 0.3j
        val = np.exp(-sign * (n_sites + 2) * (u - eta)) * model.lambda_raw(u, probe)
        out.append(abs(val - target) / abs(target))
    return np.array(out)


def select_branch(thetas, eta: complex, boundary: XxzBoundary, tol: float = 1e-6) -> TQModel:
    """Search the sign orbit of the α's for the assignment satisfying the root-free constraints.

    Returns the first assignment (in a fixed order) within ``tol``; if none
    qualifies the best one is returned and its mismatch is visible through
    :func:`root_free_constraints`.
    """
    best, best_err = None, np.inf
    for signs in SIGN_ORBIT:
        model = _model_for(thetas, eta, boundary, signs)
        err = root_free_constraints(model).max()
        if err < tol:
            return model
        if err < best_err:
            best, best_err = model, err
    return best


def tq_model(spec: ChainSpec, pattern: Pattern | str | None = None) -> TQModel:
    """Branch-selected T-Q model for the staggered companion of ``spec``."""
    pattern = spec.pattern if pattern is None else Pattern(pattern)
    return select_branch(staggered_thetas(spec.n, pattern), spec.eta, spec.params)


def lambda_staggered(u: complex, model: TQModel, mus, pattern: Pattern | str) -> complex:
    """Eigenvalue of the staggered transfer matrix: shifted pattern evaluates at ``u+iπ/2``."""
    shift = 0.0 if Pattern(pattern) is Pattern.PLAIN else IPI / 2
    return model.lambda_tq(u + shift, mus)


def lambda_d22(u: complex, mus, model: TQModel, spec: ChainSpec, cls: BoundaryClass | str | None = None):
    """D₂⁽²⁾ eigenvalue ``2^{8N} ρ_s(2u+κ−2η) Λ_s(u+iπ) Λ_s(u)`` from one root set.

    ``κ = iπ`` for class I (plain pattern) and ``2iπ`` for class II (shifted).
    """
    cls = spec.cls if cls is None else BoundaryClass(cls)
    if cls is not spec.cls:
        raise ParameterError("boundary class does not match the chain")
    pattern = Pattern.PLAIN if cls is BoundaryClass.I else Pattern.SHIFTED
    expected = staggered_thetas(spec.n, pattern)
    if not np.allclose(model.thetas, expected):
        raise ParameterError("root model was built for a different stagger pattern")
    kappa = IPI if cls is BoundaryClass.I else 2 * IPI
    pre = 2.0 ** (8 * spec.n) * rho_s(2 * u + kappa - 2 * spec.eta, spec.eta)
    return complex(
        pre * lambda_staggered(u + IPI, model, mus, pattern) * lambda_staggered(u, model, mus, pattern)
    )
