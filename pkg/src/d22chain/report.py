"""Run configuration, verification suites and machine-readable reports."""

from __future__ import annotations

import json
import os
import platform
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
import scipy

from . import d22, fusion, transfer, xxz
from .bae import SolveConfig, classify_roots, default_probes, solve_bae
from .d22 import BoundaryClass, D22Boundary
from .sampling import DEFAULT_BOUNDARY, DEFAULT_ETA, DEFAULT_SEED, random_point
from .tensor import eigen_spectrum, scaled_residual
from .transfer import ChainSpec, Pattern
from .xxz import ParameterError, XxzBoundary

SUITES = (
    "ybe",
    "rmatrix",
    "rfactor",
    "reflection",
    "kfactor",
    "transfer",
    "transfer-factorization",
    "fusion",
    "constraints",
    "hamiltonian",
    "tq",
)

DEFAULT_TOLERANCES = {
    "ybe": 1e-10,
    "rmatrix": 1e-10,
    "rfactor": 1e-9,
    "reflection": 1e-9,
    "kfactor": 1e-9,
    "transfer": 1e-9,
    "transfer-factorization": 1e-9,
    "fusion": 1e-10,
    "constraints": 1e-9,
    "hamiltonian": 1e-6,
    "tq": 1e-8,
}

SOLVE_MAX_N = 2
ENV_PREFIX = "D22CHAIN_"
_BOUNDARY_KEYS = ("s", "s1", "s2", "sP", "s1P", "s2P")


class ConfigError(ValueError):
    """Configuration is malformed or inconsistent (usage error)."""


# --- complex numbers as decimal strings ----------------------------------------------


def encode_complex(z) -> dict:
    z = complex(z)
    return {"re": repr(z.real), "im": repr(z.imag)}


def decode_complex(v) -> complex:
    if isinstance(v, dict):
        try:
            return complex(float(v["re"]), float(v.get("im", "0")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad complex value {v!r}") from exc
    if isinstance(v, (int, float, str)) and not isinstance(v, bool):
        try:
            return complex(v) if isinstance(v, str) and "j" in v else complex(float(v))
        except ValueError as exc:
            raise ConfigError(f"bad numeric value {v!r}") from exc
    raise ConfigError(f"bad numeric value {v!r}")


# --- run configuration -------------------------------------------------------------


@dataclass
class RunConfig:
    n: int = 1
    cls: str = "I"
    eta: complex = DEFAULT_ETA
    boundary: XxzBoundary = DEFAULT_BOUNDARY
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    tolerances: dict[str, float] = field(default_factory=dict)
    samples: int = 20
    seed: int = DEFAULT_SEED
    starts: int = 256
    rounds: int = 8
    out: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.cls not in ("I", "II"):
            raise ConfigError(f"class must be I or II, got {self.cls!r}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        bad_tol = [k for k in self.tolerances if k not in SUITES]
        if bad_tol:
            raise ConfigError(f"tolerance for unknown suite(s): {', '.join(bad_tol)}")
        if self.samples < 1 or self.starts < 1 or self.rounds < 1:
            raise ConfigError("samples, starts and rounds must be positive")
        if not 1 <= self.n <= transfer.MAX_SITES:
            raise ConfigError(f"N={self.n} outside the supported range 1..{transfer.MAX_SITES}")
        try:
            xxz.check_eta(self.eta)
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def pattern(self) -> Pattern:
        return Pattern.PLAIN if self.cls == "I" else Pattern.SHIFTED

    def chain(self) -> ChainSpec:
        return ChainSpec(self.n, self.eta, D22Boundary(self.cls, self.boundary))

    def tolerance(self, suite: str) -> float:
        return float(self.tolerances.get(suite, DEFAULT_TOLERANCES[suite]))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "class": self.cls,
            "pattern": self.pattern.value,
            "eta": encode_complex(self.eta),
            "boundary": {k: encode_complex(getattr(self.boundary, k)) for k in _BOUNDARY_KEYS},
            "suites": list(self.suites),
            "tolerances": {k: repr(float(v)) for k, v in sorted(self.tolerances.items())},
            "samples": self.samples,
            "seed": self.seed,
            "solve": {"starts": self.starts, "rounds": self.rounds},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {"n", "class", "pattern", "eta", "boundary", "suites", "tolerances", "samples", "seed", "solve", "out"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown configuration key(s): {', '.join(sorted(extra))}")
        kw: dict = {}
        try:
            if "n" in d:
                kw["n"] = int(d["n"])
            if "class" in d:
                kw["cls"] = str(d["class"])
            if "eta" in d:
                kw["eta"] = decode_complex(d["eta"])
            if "boundary" in d:
                b = d["boundary"]
                missing = [k for k in _BOUNDARY_KEYS if k not in b]
                if missing:
                    raise ConfigError(f"boundary is missing {', '.join(missing)}")
                kw["boundary"] = XxzBoundary(*(decode_complex(b[k]) for k in _BOUNDARY_KEYS))
            if "suites" in d:
                kw["suites"] = list(d["suites"])
            if "tolerances" in d:
                kw["tolerances"] = {k: float(v) for k, v in d["tolerances"].items()}
            if "samples" in d:
                kw["samples"] = int(d["samples"])
            if "seed" in d:
                kw["seed"] = int(d["seed"])
            if "solve" in d:
                kw["starts"] = int(d["solve"].get("starts", 256))
                kw["rounds"] = int(d["solve"].get("rounds", 8))
            if "out" in d:
                kw["out"] = d["out"]
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        cfg = cls(**kw)
        if "pattern" in d and d["pattern"] != cfg.pattern.value:
            raise ConfigError(f"pattern {d['pattern']!r} does not match class {cfg.cls}")
        return cfg


def load_config(path: str | None, overrides: dict | None = None, env=None) -> RunConfig:
    """Defaults, then the config file, then ``D22CHAIN_*`` variables, then ``overrides``."""
    env = os.environ if env is None else env
    data: dict = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    mapping = {"SEED": "seed", "N": "n", "CLASS": "class", "SUITE": "suites", "OUT": "out"}
    for var, key in mapping.items():
        val = env.get(ENV_PREFIX + var)
        if val is not None:
            data[key] = val.split(",") if key == "suites" else val
    for key, val in (overrides or {}).items():
        if val is not None:
            data[key] = val
    if isinstance(data.get("pattern"), str) and "class" in data:
        # an overridden class takes its own stagger pattern
        data.pop("pattern")
    return RunConfig.from_dict(data)


# --- report ------------------------------------------------------------------------


@dataclass
class CheckRecord:
    name: str
    identity: str
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "identity": self.identity,
            "residual": repr(float(self.residual)),
            "tolerance": repr(float(self.tolerance)),
            "pass": bool(self.passed),
        }

    @classmethod
    def from_dict(cls, d) -> "CheckRecord":
        return cls(d["name"], d["identity"], float(d["residual"]), float(d["tolerance"]), bool(d["pass"]))


@dataclass
class VerificationReport:
    config: dict
    records: list[CheckRecord] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    environment: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, name: str, identity: str, residual: float, tolerance: float) -> CheckRecord:
        residual = float(residual)
        ok = bool(np.isfinite(residual) and residual <= tolerance)
        rec = CheckRecord(name, identity, residual, tolerance, ok)
        self.records.append(rec)
        return rec

    def to_dict(self) -> dict:
        return {
            "schema": "d22chain-report/1",
            "pass": self.passed,
            "seed": self.config.get("seed"),
            "config": self.config,
            "records": [r.to_dict() for r in self.records],
            "timings": {k: repr(v) for k, v in self.timings.items()},
            "environment": self.environment,
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        validate_report(d)
        return cls(
            config=d["config"],
            records=[CheckRecord.from_dict(r) for r in d["records"]],
            timings={k: float(v) for k, v in d["timings"].items()},
            environment=d["environment"],
            extra=d.get("extra", {}),
        )


def report_schema() -> dict:
    return json.loads(resources.files("d22chain").joinpath("report.schema.json").read_text("utf-8"))


def validate_report(d: dict) -> None:
    import jsonschema

    jsonschema.validate(d, report_schema())


def environment_stamp() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }


# --- suites ------------------------------------------------------------------------


def _max(values) -> float:
    return float(max(values))


def _suite_ybe(cfg, rep, rng, tol):
    k = cfg.samples
    pts = [(random_point(rng), random_point(rng)) for _ in range(k)]
    etas = [complex(rng.uniform(0.1, 1.0) + 1j * rng.uniform(-0.5, 0.5)) for _ in range(k)]
    rep.add("ybe-xxz", "Yang-Baxter equation, XXZ R-matrix",
            _max(xxz.ybe_residual(u, v, e) for (u, v), e in zip(pts, etas)), tol)
    rep.add("ybe-d22", "Yang-Baxter equation, D22 R-matrix",
            _max(d22.ybe_residual(u, v, e) for (u, v), e in zip(pts, etas)), tol)


def _suite_rmatrix(cfg, rep, rng, tol):
    eta = cfg.eta
    us = [random_point(rng) for _ in range(cfg.samples)]
    rep.add("unitarity-xxz", "XXZ unitarity", _max(xxz.unitarity_residual(u, eta) for u in us), tol)
    rep.add("crossing-xxz", "XXZ crossing unitarity", _max(xxz.crossing_residual(u, eta) for u in us), tol)
    rep.add("unitarity-d22", "D22 unitarity", _max(d22.unitarity_residual(u, eta) for u in us), tol)
    rep.add("crossing-d22", "D22 crossing unitarity, both transposition lines",
            _max(max(d22.crossing_residuals(u, eta)) for u in us), tol)
    rep.add("initial-d22", "D22 R(0) proportional to the permutation", d22.initial_condition_residual(eta),
            min(tol, 1e-12) if "rmatrix" not in cfg.tolerances else tol)


def _suite_rfactor(cfg, rep, rng, tol):
    us = [random_point(rng) for _ in range(cfg.samples)]
    worst, diff = 0.0, None
    for u in us:
        r, dd = d22.r_direct_vs_factorized(u, cfg.eta)
        if r >= worst:
            worst, diff = r, dd
    rec = rep.add("r-direct-vs-factorized", "D22 R-matrix: entrywise form vs XXZ factorization", worst, tol)
    if not rec.passed and diff is not None:
        idx = np.argwhere(np.abs(diff) > tol * np.abs(diff).max())
        rep.extra["r-direct-diff"] = [[int(i), int(j), encode_complex(diff[i, j])] for i, j in idx[:64]]


def _suite_reflection(cfg, rep, rng, tol):
    pts = [(random_point(rng), random_point(rng)) for _ in range(cfg.samples)]
    eta, b = cfg.eta, cfg.boundary
    rep.add("reflection-minus-xxz", "XXZ reflection equation",
            _max(xxz.reflection_minus_residual(u, v, eta, *b.minus()) for u, v in pts), tol)
    rep.add("reflection-plus-xxz", "XXZ dual reflection equation",
            _max(xxz.reflection_plus_residual(u, v, eta, *b.plus()) for u, v in pts), tol)
    for cls in ("I", "II"):
        bnd = D22Boundary(cls, b)
        rep.add(f"reflection-minus-d22-{cls}", f"D22 reflection equation, class {cls}",
                _max(d22.reflection_minus_residual(u, v, eta, bnd) for u, v in pts), tol)
        rep.add(f"reflection-plus-d22-{cls}", f"D22 dual reflection equation, class {cls}",
                _max(d22.reflection_plus_residual(u, v, eta, bnd) for u, v in pts), tol)


def _suite_kfactor(cfg, rep, rng, tol):
    us = [random_point(rng) for _ in range(cfg.samples)]
    for cls in ("I", "II"):
        bnd = D22Boundary(cls, cfg.boundary)
        res = [d22.k_factorization_check(u, cfg.eta, bnd) for u in us]
        rep.add(f"kfactor-plus-{cls}", f"K+ from XXZ blocks, class {cls}", _max(r[0] for r in res), tol)
        rep.add(f"kfactor-minus-{cls}", f"K- from XXZ blocks, class {cls}", _max(r[1] for r in res), tol)


def _suite_transfer(cfg, rep, rng, tol):
    spec = cfg.chain()
    pts = [(random_point(rng, 1.0), random_point(rng, 1.0)) for _ in range(min(cfg.samples, 5))]
    rep.add("commute-d22", "[t(u), t(v)] = 0",
            _max(transfer.commutator_residual(transfer.transfer_d22(u, spec), transfer.transfer_d22(v, spec))
                 for u, v in pts), tol)
    ts = lambda x: transfer.transfer_xxz_staggered(x, spec, spec.pattern)  # noqa: E731
    rep.add("commute-xxz", "[t_s(u), t_s(v)] = 0", _max(transfer.commutator_residual(ts(u), ts(v)) for u, v in pts), tol)
    rep.add("commute-xxz-shift", "[t_s(u+i pi), t_s(v)] = 0",
            _max(transfer.commutator_residual(ts(u + transfer.IPI), ts(v)) for u, v in pts), tol)


def _suite_factorization(cfg, rep, rng, tol):
    spec = cfg.chain()
    t = tol if spec.n == 1 else max(tol, 1e-8) if "transfer-factorization" not in cfg.tolerances else tol
    results = []
    while len(results) < cfg.samples:
        u = random_point(rng, 1.0)
        try:
            results.append(transfer.factorization_residual(u, spec))
        except ParameterError:
            continue
    rep.add("factorization-conjugated", "t(u) vs product of staggered XXZ transfer matrices, conjugated",
            _max(r.conjugated for r in results), t)
    rep.add("factorization-spectrum", "t(u) vs product of staggered XXZ transfer matrices, spectra",
            _max(r.spectrum for r in results), max(t, 1e-8) if "transfer-factorization" not in cfg.tolerances else t)
    rep.extra["factorization-raw"] = repr(_max(r.raw for r in results))
    rep.extra["factorization-plain-s"] = repr(_max(r.plain_s for r in results))


def _suite_fusion(cfg, rep, rng, tol):
    us = [random_point(rng) for _ in range(cfg.samples)]
    eta, b = cfg.eta, cfg.boundary
    p = fusion.projector_psi0(eta)
    rep.add("projector-idempotent", "projector squares to itself", float(np.linalg.norm(p @ p - p)), tol)
    rep.add("projector-degeneration", "(I - P) R(2 eta) = 0",
            float(np.linalg.norm((np.eye(4) - p) @ xxz.r_xxz(2 * eta, eta))), tol)
    rep.add("fused-r", "fused R-matrix scalar, both orderings", _max(max(fusion.fused_r_identity(u, eta)) for u in us), tol)
    rep.add("fused-k", "fused K-matrix scalars", _max(max(fusion.fused_k_identities(u, eta, b)) for u in us), tol)


def _suite_constraints(cfg, rep, rng, tol):
    eta, b = cfg.eta, cfg.boundary
    thetas = [random_point(rng, 0.6, 1.0) for _ in range(2 * cfg.n)]
    q = [fusion.quantum_det_value(sg, j, thetas, eta, b)[1] for sg in (1, -1) for j in range(2 * cfg.n)]
    rep.add("quantum-determinant", "t(+-theta_j) t(+-theta_j + 2 eta) equals the closed form", _max(q), tol)
    rep.add("special-values", "t(0), t(2 eta), t(i pi)", _max(fusion.special_values(thetas, eta, b)), tol)
    asym_tol = max(tol, 1e-6) if "constraints" not in cfg.tolerances else tol
    rep.add("asymptotics", "leading coefficients at Re u = +-20",
            _max(fusion.asymptotic_coefficient(s, thetas, eta, b) for s in (1, -1)), asym_tol)


def _suite_hamiltonian(cfg, rep, rng, tol):
    spec = cfg.chain()
    if spec.cls is not BoundaryClass.I:
        try:
            transfer.hamiltonian(spec)
            ok = 1.0
        except transfer.UnsupportedError:
            ok = 0.0
        rep.add("hamiltonian-class-II-rejected", "class II has no first-derivative Hamiltonian", ok, 0.5)
        return
    h = transfer.hamiltonian(spec)
    rep.add("hamiltonian-fd", "Hamiltonian vs log-derivative of t(u)",
            scaled_residual(h, transfer.hamiltonian_from_transfer(spec)), tol)
    v = random_point(rng, 1.0)
    rep.add("hamiltonian-commutes", "[H, t(v)] = 0",
            transfer.commutator_residual(h, transfer.transfer_d22(v, spec)), min(tol, 1e-8))


def _solve_and_certify(cfg, rep, tol):
    spec = cfg.chain()
    if spec.n > SOLVE_MAX_N:
        raise ConfigError(f"Bethe root search is capped at N={SOLVE_MAX_N} (requested N={spec.n})")
    model = fusion.tq_model(spec)
    rep.add("tq-branch", "root-free constraints fix the alpha sign branch",
            float(fusion.root_free_constraints(model).max()), 1e-6)
    result = solve_bae(model, SolveConfig(starts=cfg.starts, rounds=cfg.rounds, seed=cfg.seed))
    probes = default_probes()
    cov = classify_roots(result.roots, spec, model, probes=probes, tol=tol)
    rep.add("tq-coverage", "fraction of staggered eigenvalues reproduced by T-Q", 1.0 - cov.fraction, 0.0)
    worst = 0.0
    certified = []
    for rs in result.roots:
        if rs.matched is None:
            continue
        dist = 0.0
        for u in probes:
            ev = eigen_spectrum(transfer.transfer_d22(u, spec))
            lam = fusion.lambda_d22(u, rs.mus, model, spec)
            dist = max(dist, float(np.min(np.abs(ev - lam)) / np.max(np.abs(ev))))
        worst = max(worst, dist)
        certified.append(rs)
    rep.add("tq-d22-eigenvalues", "reconstructed D22 eigenvalues match t(u)", worst if certified else np.inf, tol)
    rep.extra["branch-signs"] = list(model.signs)
    rep.extra["solve-status"] = result.status
    rep.extra["roots"] = [
        {
            "mus": [encode_complex(z) for z in rs.mus],
            "residual": repr(rs.residual),
            "branch": rs.matched,
            "distance": repr(rs.distance),
        }
        for rs in result.roots
    ]
    return result, cov


def _suite_tq(cfg, rep, rng, tol):
    _solve_and_certify(cfg, rep, tol)


_RUNNERS = {
    "ybe": _suite_ybe,
    "rmatrix": _suite_rmatrix,
    "rfactor": _suite_rfactor,
    "reflection": _suite_reflection,
    "kfactor": _suite_kfactor,
    "transfer": _suite_transfer,
    "transfer-factorization": _suite_factorization,
    "fusion": _suite_fusion,
    "constraints": _suite_constraints,
    "hamiltonian": _suite_hamiltonian,
    "tq": _suite_tq,
}


def run_verify(cfg: RunConfig) -> VerificationReport:
    """Run the selected suites in canonical order; each suite has its own seeded stream."""
    rep = VerificationReport(cfg.to_dict(), environment=environment_stamp())
    for i, suite in enumerate(SUITES):
        if suite not in cfg.suites:
            continue
        rng = np.random.default_rng([cfg.seed, i])
        t0 = time.perf_counter()
        _RUNNERS[suite](cfg, rep, rng, cfg.tolerance(suite))
        rep.timings[suite] = time.perf_counter() - t0
    return rep


def run_solve(cfg: RunConfig) -> VerificationReport:
    """Solve the Bethe equations, classify the roots and certify the D22 eigenvalues."""
    rep = VerificationReport(cfg.to_dict(), environment=environment_stamp())
    t0 = time.perf_counter()
    _solve_and_certify(cfg, rep, cfg.tolerance("tq"))
    rep.timings["solve"] = time.perf_counter() - t0
    return rep


def spectrum(cfg: RunConfig, u: complex) -> dict:
    """Eigenvalues of ``t(u)`` and of the staggered companion at ``u``."""
    spec = cfg.chain()
    t = eigen_spectrum(transfer.transfer_d22(u, spec))
    ts = eigen_spectrum(transfer.transfer_xxz_staggered(u, spec, spec.pattern))
    order = lambda v: sorted(v, key=lambda z: (round(z.real, 12), round(z.imag, 12)))  # noqa: E731
    return {
        "u": encode_complex(u),
        "d22": [encode_complex(z) for z in order(t)],
        "staggered": [encode_complex(z) for z in order(ts)],
    }


def summary_lines(rep: VerificationReport) -> list[str]:
    lines = []
    for r in rep.records:
        flag = "PASS" if r.passed else "FAIL"
        lines.append(f"{flag}  {r.name:<34} residual={r.residual:.3e}  tol={r.tolerance:.1e}")
    lines.append("overall: " + ("PASS" if rep.passed else "FAIL"))
    return lines
