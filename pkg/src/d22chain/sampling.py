"""Seeded draws of generic model parameters and spectral points."""

from __future__ import annotations

import numpy as np

from .d22 import BoundaryClass, D22Boundary
from .transfer import ChainSpec
from .xxz import XxzBoundary

DEFAULT_ETA = 0.37
DEFAULT_BOUNDARY = XxzBoundary(0.23, 0.51, -0.29, 0.41, -0.33, 0.27)
DEFAULT_SEED = 20240101


def default_spec(n: int = 1, cls: BoundaryClass | str = "I") -> ChainSpec:
    return ChainSpec(n, DEFAULT_ETA, D22Boundary(cls, DEFAULT_BOUNDARY))


def random_point(rng: np.random.Generator, re: float = 2.0, im: float = np.pi) -> complex:
    return complex(rng.uniform(-re, re) + 1j * rng.uniform(-im, im))


def random_eta(rng: np.random.Generator) -> complex:
    """Crossing parameter away from degenerate points, with ``Re cosh η > 0``."""
    while True:
        eta = complex(rng.uniform(0.15, 0.9) + 1j * rng.uniform(-0.4, 0.4))
        if abs(np.sinh(eta)) > 1e-3 and np.cosh(eta).real > 0:
            return eta


def _coupling(rng):
    mag = rng.uniform(0.2, 0.9)
    return complex(rng.choice([-1, 1]) * mag + 1j * rng.uniform(-0.2, 0.2))


def random_boundary(rng: np.random.Generator) -> XxzBoundary:
    """Generic non-diagonal boundary parameters with ``|s1 s2|, |s1′ s2′| ≥ 1e-3``."""
    while True:
        s = complex(rng.uniform(-0.8, 0.8) + 1j * rng.uniform(-0.3, 0.3))
        sp = complex(rng.uniform(-0.8, 0.8) + 1j * rng.uniform(-0.3, 0.3))
        b = XxzBoundary(s, _coupling(rng), _coupling(rng), sp, _coupling(rng), _coupling(rng))
        if abs(b.s1 * b.s2) >= 1e-3 and abs(b.s1P * b.s2P) >= 1e-3:
            return b


def random_spec(rng: np.random.Generator, n: int = 1, cls: BoundaryClass | str = "I") -> ChainSpec:
    return ChainSpec(n, random_eta(rng), D22Boundary(cls, random_boundary(rng)))
