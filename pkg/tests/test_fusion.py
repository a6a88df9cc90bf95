import numpy as np
import pytest
from hypothesis import assume, given

from d22chain.fusion import (
    SIGN_ORBIT,
    _model_for,
    asymptotic_coefficient,
    asymptotic_scalar,
    fused_k_identities,
    fused_k_scalars,
    fused_r_identity,
    fused_r_scalar,
    fusion_constants,
    lambda_d22,
    projector_psi0,
    psi0,
    quantum_det_scalar,
    quantum_det_value,
    root_free_constraints,
    special_scalars,
    special_values,
    tq_model,
)
from d22chain.sampling import DEFAULT_BOUNDARY, default_spec, random_point
from d22chain.tensor import eigen_spectrum, scaled_residual
from d22chain.transfer import IPI, staggered_thetas, transfer_d22, transfer_xxz
from d22chain.xxz import ParameterError, XxzBoundary, r_xxz, rho_s

from strategies import boundaries, cplx, etas

ETA = 0.37 + 0.1j


def generic_thetas(rng, n_sites=2):
    return [random_point(rng, 0.6, 1.0) for _ in range(n_sites)]


# --- projector ------------------------------------------------------------------


def test_projector_rank_one():
    p = projector_psi0(ETA)
    assert np.allclose(p @ p, p)
    assert np.isclose(np.trace(p), 1.0)


def test_projector_degeneration():
    p = projector_psi0(ETA)
    assert np.linalg.norm((np.eye(4) - p) @ r_xxz(2 * ETA, ETA)) <= 1e-12


def test_projector_on_basis_state():
    v = projector_psi0(ETA) @ np.array([0, 1, 0, 0])
    w = psi0(ETA)
    assert np.isclose(abs(np.vdot(w, v)) ** 2, np.vdot(v, v) * np.vdot(w, w))


@given(cplx(), etas())
def test_fused_r(u, eta):
    assume(abs(fused_r_scalar(u, eta)) > 1e-3)
    one, two = fused_r_identity(u, eta)
    assert one <= 1e-10 and two <= 1e-10


def test_fused_r_scalar_at_zero():
    assert np.isclose(fused_r_scalar(0.0, ETA), np.sinh(ETA) ** 2)


# --- constants ------------------------------------------------------------------


def test_constants_worked_example():
    c = fusion_constants(XxzBoundary(0.0, 0.5, 1.0, 0.0, 0.5, 1.0))
    assert np.isclose(c.alpha, 1.0) and np.isclose(c.beta, 1.5)
    assert np.isclose(np.cosh(c.alpha1), 2.0)
    assert np.isclose(np.cosh(c.alpha2), -1.0)
    assert np.isclose(c.alpha2, 1j * np.pi)


@given(boundaries())
def test_constants_relations(bnd):
    c = fusion_constants(bnd)
    for a, b, a1, a2 in ((c.alpha, c.beta, c.alpha1, c.alpha2), (c.alphaP, c.betaP, c.alpha1P, c.alpha2P)):
        ch1, ch2 = np.cosh(a1), np.cosh(a2)
        assert abs(ch1 + ch2 - a) <= 1e-12 * max(1, abs(a))
        assert abs(ch1 - ch2 - 2 * b) <= 1e-12 * max(1, abs(b))
        assert abs(ch1 * ch2 - (a**2 / 4 - b**2)) <= 1e-11 * max(1, abs(a) ** 2)


def test_constants_require_generic():
    with pytest.raises(ParameterError):
        fusion_constants(XxzBoundary(0.1, 0.0, 0.3, 0.2, 0.4, 0.5))


@given(cplx(), etas(), boundaries())
def test_fused_k(u, eta, bnd):
    c = fusion_constants(bnd)
    plus, minus = fused_k_scalars(u, eta, c)
    assume(abs(plus) > 1e-3 and abs(minus) > 1e-3)
    rp, rm = fused_k_identities(u, eta, bnd)
    assert rp <= 1e-10 and rm <= 1e-10


def test_fused_k_scalar_zeros():
    c = fusion_constants(DEFAULT_BOUNDARY)
    assert abs(fused_k_scalars(IPI - c.alpha1, ETA, c)[1]) < 1e-14
    assert abs(fused_k_scalars(-2 * ETA, ETA, c)[1]) < 1e-14


# --- constraint set ----------------------------------------------------------------


def test_quantum_determinant_generic(rng):
    thetas = generic_thetas(rng)
    for sign in (1, -1):
        for j in range(2):
            _, res = quantum_det_value(sign, j, thetas, ETA, DEFAULT_BOUNDARY)
            assert res <= 1e-9


def test_quantum_determinant_staggered():
    thetas = staggered_thetas(1, "plain")
    for sign in (1, -1):
        for j in range(2):
            _, res = quantum_det_value(sign, j, thetas, ETA, DEFAULT_BOUNDARY)
            assert res <= 1e-9


def test_quantum_determinant_theta_sign_symmetry(rng):
    thetas = np.array(generic_thetas(rng))
    c = fusion_constants(DEFAULT_BOUNDARY)
    z = 0.3 + 0.2j
    flipped = thetas.copy()
    flipped[0] *= -1
    assert np.isclose(quantum_det_scalar(z, thetas, ETA, c), quantum_det_scalar(z, flipped, ETA, c))


def test_quantum_determinant_pole_rejected():
    with pytest.raises(ParameterError):
        quantum_det_value(1, 0, [ETA, 0.3], ETA, DEFAULT_BOUNDARY)


def test_special_values(rng):
    thetas = generic_thetas(rng)
    assert max(special_values(thetas, ETA, DEFAULT_BOUNDARY)) <= 1e-9
    t0 = transfer_xxz(0.0, thetas, ETA, DEFAULT_BOUNDARY)
    t2 = transfer_xxz(2 * ETA, thetas, ETA, DEFAULT_BOUNDARY)
    assert scaled_residual(t0, t2) <= 1e-12


def test_special_values_staggered_factors():
    rhos = [rho_s(t, ETA) for t in staggered_thetas(2, "plain")]
    assert np.allclose(rhos, [np.sinh(ETA) ** 2, np.cosh(ETA) ** 2] * 2)


def test_asymptotics(rng):
    thetas = generic_thetas(rng)
    for sign in (1, -1):
        assert asymptotic_coefficient(sign, thetas, ETA, DEFAULT_BOUNDARY) <= 1e-6
    # the coefficient itself carries no θ
    other = generic_thetas(rng)
    assert asymptotic_coefficient(1, other, ETA, DEFAULT_BOUNDARY) <= 1e-6


def test_asymptotic_scalar_shares_x_term():
    p = DEFAULT_BOUNDARY
    term = -(np.exp(-ETA) * p.s1 * p.s2P + np.exp(ETA) * p.s2 * p.s1P)
    assert np.isclose(asymptotic_scalar(2, ETA, p), 2.0**-6 * term)


def test_constraint_count():
    for n in (1, 2, 3):
        n_qdet = 2 * (2 * n)
        assert n_qdet + 3 + 2 == 4 * n + 5


# --- T-Q relation -------------------------------------------------------------------


@pytest.fixture(scope="module")
def model():
    return tq_model(default_spec(1, "I"))


@given(cplx(1.0, np.pi), cplx(1.0, np.pi), cplx(1.0, np.pi))
def test_q_crossing_symmetry(u, m1, m2):
    m = tq_model(default_spec(1, "I"))
    mus = np.array([m1, m2])
    assert np.isclose(m.q(2 * m.eta - u, mus), m.q(u, mus), rtol=1e-10, atol=1e-14)


@given(cplx(1.0, np.pi), cplx(1.0, np.pi), cplx(1.0, np.pi))
def test_lambda_crossing_symmetry_any_roots(u, m1, m2):
    m = tq_model(default_spec(1, "I"))
    mus = np.array([m1, m2])
    assume(abs(m.q(u, mus)) > 1e-3 and abs(np.sinh(u - m.eta)) > 1e-3)
    a, b = m.lambda_raw(u, mus), m.lambda_raw(2 * m.eta - u, mus)
    assert abs(a - b) <= 1e-9 * max(1, abs(a))


def test_lambda_limit_at_eta(model):
    mus = np.array([0.3 + 0.4j, -0.5 + 1.1j])
    eps = 1e-4
    lo, hi = model.lambda_raw(model.eta - eps, mus), model.lambda_raw(model.eta + eps, mus)
    assert abs(hi - lo) <= 1e-6 * max(1, abs(hi))
    assert np.isfinite(model.lambda_tq(model.eta, mus))


def test_branch_selection(model):
    assert root_free_constraints(model).max() <= 1e-6
    # the constants alone do not fix the branch: some orbit members fail
    errs = [root_free_constraints(_model_for(model.thetas, model.eta, model.boundary, s)).max() for s in SIGN_ORBIT]
    assert max(errs) > 1e-2


def test_x_matches_asymptotics(model):
    # leading coefficient of Λ̃ from the constants equals the transfer matrix's
    assert root_free_constraints(model)[2:].max() <= 1e-10


def test_converged_lambda_matches_eigenvalues(solved):
    m, sp = solved.model, solved.spec
    rng = np.random.default_rng(11)
    from d22chain.fusion import lambda_staggered
    from d22chain.transfer import transfer_xxz_staggered

    for rs in solved.result.roots:
        for _ in range(10):
            u = random_point(rng, 0.8, 1.2)
            ev = eigen_spectrum(transfer_xxz_staggered(u, sp, solved.pattern))
            lam = lambda_staggered(u, m, rs.mus, solved.pattern)
            assert np.min(np.abs(ev - lam)) <= 1e-8 * np.max(np.abs(ev))


def test_converged_lambda_reproduces_constraints(solved):
    m = solved.model
    c = fusion_constants(m.boundary)
    v0, vi = special_scalars(m.thetas, m.eta, m.boundary)
    for rs in solved.result.roots:
        lam = lambda u: m.lambda_tq(u, rs.mus)  # noqa: E731
        for th in m.thetas:
            for z in (th, -th):
                if abs(np.sinh(z - m.eta) * np.sinh(z + m.eta)) < 1e-10:
                    continue
                want = quantum_det_scalar(z, m.thetas, m.eta, c)
                assert abs(lam(z) * lam(z + 2 * m.eta) - want) <= 1e-8 * max(abs(want), 1e-300)
        assert abs(lam(0.0) - v0) <= 1e-8 * abs(v0)
        assert abs(lam(2 * m.eta) - v0) <= 1e-8 * abs(v0)
        assert abs(lam(IPI) - vi) <= 1e-8 * abs(vi)
        target = asymptotic_scalar(m.n_roots, m.eta, m.boundary)
        for sign in (1, -1):
            u = sign * 30.0 + 0.3j
            val = np.exp(-sign * (m.n_roots + 2) * (u - m.eta)) * lam(u)
            assert abs(val - target) <= 1e-8 * abs(target)


def test_converged_lambda_is_polynomial(solved_one):
    m = solved_one.model
    n_sites = m.n_roots
    deg = 2 * n_sites + 4
    npts = deg + 5
    us = 0.15 + 2j * np.pi * np.arange(npts) / npts
    vand = np.vander(np.exp(us), deg + 1, increasing=True)
    for rs in solved_one.result.roots:
        vals = np.array([np.exp((n_sites + 2) * u) * m.lambda_tq(u, rs.mus) for u in us])
        coef, *_ = np.linalg.lstsq(vand, vals, rcond=None)
        assert np.linalg.norm(vand @ coef - vals) <= 1e-8 * np.linalg.norm(vals)


def test_bae_residue_relation(solved_one):
    # near a root the pole of Λ̃ cancels: Λ̃ stays bounded as u → μ_l
    m = solved_one.model
    for rs in solved_one.result.roots:
        for mu in rs.mus:
            a = m.lambda_raw(mu + 1e-5, rs.mus)
            b = m.lambda_raw(mu - 1e-5, rs.mus)
            assert abs(a - b) <= 1e-3 * max(1, abs(a))
        # a perturbed root set has a genuine pole there
        bad = rs.mus + np.array([1e-2, 0])
        assert abs(m.lambda_raw(bad[0] + 1e-7, bad)) > 1e3 * abs(m.lambda_raw(rs.mus[0] + 1e-7, rs.mus))


def test_bae_reflection_invariance(solved_one):
    m = solved_one.model
    rng = np.random.default_rng(2)
    # holds for arbitrary roots, not only at solutions
    for _ in range(5):
        mus = np.array([random_point(rng, 1.0) for _ in range(m.n_roots)])
        flipped = mus.copy()
        flipped[0] = 2 * m.eta - flipped[0]
        assert np.allclose(m.bae_residuals(flipped), m.bae_residuals(mus), rtol=1e-10)
    for rs in solved_one.result.roots:
        flipped = 2 * m.eta - rs.mus
        assert np.max(m.bae_relative(flipped)) <= 1e-10


@pytest.mark.parametrize("which", ["solved_one", "solved_two"])
def test_lambda_d22_matches_spectrum(request, which):
    s = request.getfixturevalue(which)
    rng = np.random.default_rng(5)
    for rs in s.result.roots:
        for _ in range(10):
            u = random_point(rng, 0.8, 1.2)
            ev = eigen_spectrum(transfer_d22(u, s.spec))
            lam = lambda_d22(u, rs.mus, s.model, s.spec)
            assert np.min(np.abs(ev - lam)) <= 1e-8 * np.max(np.abs(ev))


def test_lambda_d22_at_prefactor_zero(solved_one):
    s = solved_one
    eta = s.spec.eta
    u = (4 * eta - IPI) / 2
    assert abs(np.linalg.det(transfer_d22(u, s.spec))) < 1e-10
    for rs in s.result.roots:
        assert abs(lambda_d22(u, rs.mus, s.model, s.spec)) < 1e-10


def test_lambda_d22_class_mismatch(solved_one, solved_two):
    rs = solved_one.result.roots[0]
    with pytest.raises(ParameterError):
        lambda_d22(0.3, rs.mus, solved_one.model, solved_one.spec, cls="II")
    with pytest.raises(ParameterError):
        lambda_d22(0.3, rs.mus, solved_one.model, solved_two.spec)
