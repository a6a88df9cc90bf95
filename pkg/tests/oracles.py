"""Independent reference computations used by the tests."""

import numpy as np

from d22chain.bae import eigen_branches
from d22chain.transfer import transfer_xxz


def q_from_eigenvalues(model, lam, us):
    """Bethe roots of one eigenvalue branch by solving the T-Q relation for ``Q``.

    With ``w = cosh(u−η)``, ``Q(u) = 2^{-n} Π (w − cosh(μ_l−η))``, so
    ``Λ Q(u) − T₁ a Q(u+2η) − T₂ d Q(u−2η) = x sinh u sinh(u−2η) a d`` is
    linear in the monic polynomial's lower coefficients.  No Newton step.
    """
    n, e = model.n_roots, model.eta
    us = np.asarray(us)

    def powers(u):
        return np.cosh(u - e)[:, None] ** np.arange(n + 1)

    t1, t2, a, d = model.t1(us), model.t2(us), model.a(us), model.d(us)
    mat = lam[:, None] * powers(us) - (t1 * a)[:, None] * powers(us + 2 * e) - (t2 * d)[:, None] * powers(us - 2 * e)
    rhs = 2.0**n * model.x * np.sinh(us) * np.sinh(us - 2 * e) * a * d
    # move the monic top coefficient to the right-hand side
    coef, *_ = np.linalg.lstsq(mat[:, :n], rhs - mat[:, n], rcond=None)
    roots = np.roots(np.concatenate([[1.0], coef[::-1]]))
    return e + np.arccosh(roots.astype(complex))


def reconstructed_roots(model, spec, pattern, count=None, seed=3):
    """Root sets of every eigenvalue branch of the staggered chain."""
    n = model.n_roots
    count = 3 * n + 8 if count is None else count
    rng = np.random.default_rng(seed)
    us = rng.uniform(-0.6, 0.6, count) + 1j * rng.uniform(-1.0, 1.0, count)
    shift = 0.0 if pattern == "plain" else 1j * np.pi / 2
    mats = [transfer_xxz(u + shift, model.thetas, spec.eta, spec.params) for u in us]
    branches = eigen_branches(mats)
    return [q_from_eigenvalues(model, branches[k], us + shift) for k in range(branches.shape[0])]
