"""Multi-start damped Newton solver for the Bethe equations and root classification.

All starts are advanced together as one batch; each start keeps its own
step length.  The system solved is the reduced form of the equations (the
common factor ``sinh μ·sinh(μ−2η)`` divided out, the ``a``, ``d``
denominators cleared), and converged sets are re-certified against the
original equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fusion import TQModel, lambda_staggered
from .tensor import eigen_spectrum, multiset_distance
from .transfer import IPI, ChainSpec, Pattern, transfer_xxz_staggered

TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class SolveConfig:
    starts: int = 256
    max_iter: int = 200
    damping: float = 0.5
    threshold: float = 1e-12
    certify: float = 1e-10
    dedup_tol: float = 1e-7
    collision_tol: float = 1e-6
    seed: int = 20240101
    re_range: float = 3.0
    rounds: int = 8
    target: int | None = None


@dataclass
class RootSet:
    mus: np.ndarray
    residual: float
    matched: int | None = None
    distance: float = np.inf
    key: tuple = field(default=(), repr=False)


@dataclass
class SolveResult:
    roots: list[RootSet]
    status: str
    attempted: int
    converged: int


# --- canonical form ---------------------------------------------------------------


def wrap(z):
    """Reduce modulo ``2iπ`` to the strip ``Im ∈ (−π, π]``."""
    z = np.asarray(z, dtype=np.complex128)
    im = np.pi - np.mod(np.pi - z.imag, 2 * np.pi)
    return z.real + 1j * im


def _key(z, digits=7):
    return (round(float(z.real), digits), round(float(z.imag), digits))


def canonical(mus, eta: complex) -> np.ndarray:
    """Orbit representative of each root under ``μ→μ+2iπ`` and ``μ→2η−μ``, sorted."""
    mus = wrap(mus)
    refl = wrap(2 * eta - mus)
    pick = [a if _key(a) <= _key(b) else b for a, b in zip(mus, refl)]
    return np.array(sorted(pick, key=_key), dtype=np.complex128)


def _mod_dist(a, b):
    return np.abs(wrap(np.asarray(a) - np.asarray(b)))


def _root_dist(a, b, eta):
    """Distance between single roots modulo both symmetries."""
    return np.minimum(_mod_dist(a, b), _mod_dist(a, 2 * eta - b))


def dedup(rootsets: list[RootSet], eta: complex, tol: float = 1e-7) -> list[RootSet]:
    """Quotient by per-root ``2iπ`` shifts, per-root reflection and permutations."""
    out: list[RootSet] = []
    for rs in sorted(rootsets, key=lambda r: tuple(_key(z) for z in canonical(r.mus, eta))):
        c = canonical(rs.mus, eta)
        if any(np.max(_root_dist(c, o.mus, eta)) < tol for o in out):
            continue
        out.append(RootSet(c, rs.residual, rs.matched, rs.distance, tuple(_key(z) for z in c)))
    return out


def is_degenerate(mus, eta: complex, tol: float = 1e-6, model: TQModel | None = None) -> bool:
    """Colliding roots (modulo symmetries), roots on the ``sinh(μ−η)`` poles,
    or (given a model) roots on zeros of ``a`` or ``d``."""
    mus = np.asarray(mus)
    if np.any(_mod_dist(mus, eta) < tol) or np.any(_mod_dist(mus, eta + IPI) < tol):
        return True
    if model is not None:
        for th in model.thetas:
            for c in (th, -th, 2 * eta + th, 2 * eta - th):
                if np.any(_mod_dist(mus, c) < tol):
                    return True
    n = len(mus)
    for i in range(n):
        for j in range(i + 1, n):
            if _root_dist(mus[i], mus[j], eta) < tol:
                return True
    return False


# --- Newton ----------------------------------------------------------------------


def _contour_jacobian(f, z, radius=1e-3, points=8):
    """Jacobian of a holomorphic map by a discrete Cauchy integral per variable.

    ``z`` has shape (batch, n); returns (batch, n, n).
    """
    batch, n = z.shape
    w = np.exp(2j * np.pi * np.arange(points) / points)
    jac = np.empty((batch, n, n), dtype=np.complex128)
    for k in range(n):
        zz = np.repeat(z[None], points, axis=0)
        zz[:, :, k] += radius * w[:, None]
        vals = f(zz)  # (points, batch, n)
        jac[:, :, k] = np.tensordot(1 / w, vals, axes=(0, 0)) / (points * radius)
    return jac


def _norm(v):
    out = np.max(np.abs(v), axis=-1)
    return np.where(np.isfinite(out), out, np.inf)


def newton_batch(f, z0, max_iter=200, threshold=1e-12, halvings=12):
    """Damped Newton with backtracking for a batch of starts.

    Returns final points and their residual norms (``inf`` for failures).
    """
    z = np.array(z0, dtype=np.complex128)
    with np.errstate(all="ignore"):
        fz = f(z)
        nz = _norm(fz)
        active = np.isfinite(nz) & (nz >= threshold)
        lams = 0.5 ** np.arange(halvings)
        for _ in range(max_iter):
            if not active.any():
                break
            idx = np.flatnonzero(active)
            za, fa, na = z[idx], fz[idx], nz[idx]
            jac = _contour_jacobian(f, za)
            ok = np.all(np.isfinite(jac), axis=(1, 2))
            dz = np.zeros_like(za)
            try:
                dz[ok] = np.linalg.solve(jac[ok], -fa[ok][..., None])[..., 0]
            except np.linalg.LinAlgError:
                for i in np.flatnonzero(ok):
                    try:
                        dz[i] = np.linalg.solve(jac[i], -fa[i])
                    except np.linalg.LinAlgError:
                        ok[i] = False
            trial = za[None] + lams[:, None, None] * dz[None]
            ft = f(trial)
            nt = _norm(ft)
            good = nt < (1 - 1e-4 * lams[:, None]) * na[None]
            first = np.argmax(good, axis=0)
            accepted = good[first, np.arange(len(idx))] & ok
            sel = np.arange(len(idx))
            z[idx[accepted]] = trial[first, sel][accepted]
            fz[idx[accepted]] = ft[first, sel][accepted]
            nz[idx[accepted]] = nt[first, sel][accepted]
            stalled = idx[~accepted]
            nz[stalled] = np.where(nz[stalled] < threshold, nz[stalled], np.inf)
            active[stalled] = False
            active &= np.isfinite(nz) & (nz >= threshold)
    nz = np.where(nz < threshold, nz, np.inf)
    return z, nz


def solve_bae(model: TQModel, config: SolveConfig = SolveConfig()) -> SolveResult:
    """Solve the Bethe equations from batches of ``config.starts`` random starts.

    Starts are uniform in ``Re μ ∈ [−r, r]``, ``Im μ ∈ (−π, π]``.  A set is
    kept when the equations converge, no roots collide and the original
    equations hold to ``config.certify`` relative to their terms.  Batches
    alternate between the cleared and the reduced form; further batches run until ``config.target`` distinct sets are found
    (default: the dimension ``2^{2N}`` of the companion chain) or
    ``config.rounds`` batches are spent.
    """
    rng = np.random.default_rng(config.seed)
    n = model.n_roots
    target = 2**n if config.target is None else config.target
    found: list[RootSet] = []
    roots: list[RootSet] = []
    attempted = 0
    systems = (model.cleared_bae, model.reduced_bae)
    for k in range(config.rounds):
        re = rng.uniform(-config.re_range, config.re_range, (config.starts, n))
        im = rng.uniform(-np.pi, np.pi, (config.starts, n))
        attempted += config.starts
        # the two forms have very different basins; alternating them evens out coverage
        system = systems[k % 2]
        z, res = newton_batch(system, re + 1j * im, config.max_iter, config.threshold)
        for mus, r in zip(z, res):
            if not np.isfinite(r) or is_degenerate(mus, model.eta, config.collision_tol, model):
                continue
            with np.errstate(all="ignore"):
                cert = float(np.max(model.bae_relative(mus)))
            if not np.isfinite(cert) or cert > config.certify:
                continue
            found.append(RootSet(canonical(mus, model.eta), cert))
        roots = dedup(found, model.eta, config.dedup_tol)
        if len(roots) >= target:
            break
    status = "ok" if roots else "empty"
    return SolveResult(roots, status, attempted, len(found))


def refine(model: TQModel, mus, config: SolveConfig = SolveConfig()):
    """Run Newton from a single point; returns the canonical roots or ``None``."""
    z, r = newton_batch(model.cleared_bae, np.asarray(mus)[None], config.max_iter, config.threshold)
    if not np.isfinite(r[0]) or is_degenerate(z[0], model.eta, config.collision_tol, model):
        return None
    return canonical(z[0], model.eta)


# --- classification -----------------------------------------------------------------


@dataclass
class Coverage:
    probes: np.ndarray
    branches: np.ndarray  # (n_eig, n_probes) eigenvalue branches
    matched: list[int | None]
    distances: list[float]

    @property
    def n_branches(self) -> int:
        return self.branches.shape[0]

    @property
    def covered(self) -> set[int]:
        return {m for m in self.matched if m is not None}

    @property
    def fraction(self) -> float:
        return len(self.covered) / self.n_branches


def default_probes(count: int = 10, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-0.8, 0.8, count) + 1j * rng.uniform(-1.2, 1.2, count)


def eigen_branches(matrices) -> np.ndarray:
    """Eigenvalue branches of a commuting family, consistently labelled.

    The eigenbasis of a random combination diagonalizes every member when
    the joint spectrum is simple.
    """
    mats = [np.asarray(m) for m in matrices]
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=len(mats)) + 1j * rng.normal(size=len(mats))
    combo = sum(c * m / np.linalg.norm(m) for c, m in zip(coeffs, mats))
    _, vecs = np.linalg.eig(combo)
    inv = np.linalg.inv(vecs)
    return np.array([np.diag(inv @ m @ vecs) for m in mats]).T


def classify_roots(
    rootsets: list[RootSet],
    spec: ChainSpec,
    model: TQModel,
    pattern: Pattern | str | None = None,
    probes=None,
    tol: float = 1e-8,
) -> Coverage:
    """Match each root set's ``Λ̃`` against one eigenvalue branch at every probe."""
    pattern = spec.pattern if pattern is None else Pattern(pattern)
    probes = default_probes() if probes is None else np.asarray(probes)
    mats = [transfer_xxz_staggered(u, spec, pattern) for u in probes]
    branches = eigen_branches(mats)
    # spectrum check guards the labelling against near-degenerate combos
    for k, m in enumerate(mats):
        ev = eigen_spectrum(m)
        if multiset_distance(ev, branches[:, k]) > 1e-8:
            raise RuntimeError("joint eigenbasis failed; spectrum not simple at probes")
    matched, dists = [], []
    for rs in rootsets:
        lam = np.array([lambda_staggered(u, model, rs.mus, pattern) for u in probes])
        rel = np.max(np.abs(branches - lam[None]) / np.abs(branches), axis=1)
        b = int(np.argmin(rel))
        rs.distance = float(rel[b])
        rs.matched = b if rel[b] <= tol else None
        matched.append(rs.matched)
        dists.append(rs.distance)
    return Coverage(probes, branches, matched, dists)
