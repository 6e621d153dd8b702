"""Synthetic point clouds: wrapped Gaussian blobs and uniform boxes.

Presets mirror the published demos in 1, 2 and 3 dimensions. Blob
placements are our own; each preset contains one blob centred on a
periodic face (or corner) so that it only forms a single cluster when the
periodic boundary is honoured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dbscan import DbscanParams
from .exceptions import ParameterError
from .geometry import BoundarySpec, DomainSpec, as_points, wrap_points


@dataclass(frozen=True)
class BlobSpec:
    center: tuple
    sigma: tuple
    count: int

    def __post_init__(self):
        center = tuple(float(c) for c in np.atleast_1d(self.center))
        sigma = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        if sigma.size == 1:
            sigma = np.repeat(sigma, len(center))
        if len(sigma) != len(center):
            raise ParameterError("sigma must be a scalar or have one entry per dimension")
        if not np.all(np.isfinite(sigma)) or np.any(sigma <= 0):
            raise ParameterError(f"sigma must be finite and positive, got {tuple(sigma)}")
        if int(self.count) != self.count or self.count < 0:
            raise ParameterError(f"count must be a non-negative integer, got {self.count!r}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "sigma", tuple(float(s) for s in sigma))
        object.__setattr__(self, "count", int(self.count))


def _extent(d: BoundarySpec):
    if d.lower is None:
        return 0.0, 1.0
    return d.lower, d.upper


def generate_blobs(specs, domain: DomainSpec, seed: int) -> np.ndarray:
    """Draw each blob from an axis-aligned Gaussian, then wrap periodic axes.

    Points come out blob by blob in the order of ``specs``.
    """
    rng = np.random.default_rng(seed)
    parts = []
    for spec in specs:
        if len(spec.center) != domain.ndim:
            raise ParameterError(
                f"blob center has {len(spec.center)} coordinates, domain has {domain.ndim}"
            )
        for c, d in zip(spec.center, domain.dims):
            if d.lower is not None and not d.lower <= c <= d.upper:
                raise ParameterError(f"blob center {spec.center} lies outside the domain")
        parts.append(rng.normal(spec.center, spec.sigma, size=(spec.count, domain.ndim)))
    if not parts:
        return np.zeros((0, domain.ndim))
    return wrap_points(np.vstack(parts), domain)


def generate_uniform(n: int, domain: DomainSpec, seed: int) -> np.ndarray:
    """``n`` i.i.d. uniform points in the domain box; open axes without an
    extent use [0, 1)."""
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n}")
    rng = np.random.default_rng(seed)
    lo, hi = np.array([_extent(d) for d in domain.dims]).T
    X = lo + rng.random((int(n), domain.ndim)) * (hi - lo)
    return wrap_points(X, domain)


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    domain: DomainSpec
    epsilon: float
    blobs: tuple
    n_background: int = 0
    min_points: int = 5
    seed: int = 0
    straddling: int = 0  # index into ``blobs`` of the blob that crosses a periodic face

    def generate(self, seed=None) -> np.ndarray:
        seed = self.seed if seed is None else seed
        X = generate_blobs(self.blobs, self.domain, seed)
        if self.n_background:
            noise = generate_uniform(self.n_background, self.domain, seed + 1)
            X = np.vstack([X, noise])
        return as_points(X, self.domain.ndim)

    def blob_slice(self, i: int) -> slice:
        start = sum(b.count for b in self.blobs[:i])
        return slice(start, start + self.blobs[i].count)

    def boundary_args(self) -> list:
        return [arg for d in self.domain.dims for arg in ("--dim", str(d))]


def _p(n=1):
    return DomainSpec.all_periodic(n)


PRESETS = {
    p.name: p
    for p in [
        Preset(
            "fig1",
            "2D doubly periodic, eps=0.06L, blob straddling the left/right face",
            _p(2),
            0.06,
            (
                BlobSpec((0.0, 0.5), 0.04, 150),
                BlobSpec((0.45, 0.2), 0.035, 100),
                BlobSpec((0.6, 0.75), 0.04, 120),
            ),
            n_background=40,
        ),
        Preset(
            "fig2",
            "1D periodic, eps=0.05L, blob straddling x=0",
            _p(1),
            0.05,
            (
                BlobSpec((0.0,), 0.02, 60),
                BlobSpec((0.35,), 0.015, 40),
                BlobSpec((0.65,), 0.02, 50),
            ),
            n_background=10,
        ),
        Preset(
            "fig3",
            "2D doubly periodic, eps=0.08L, blob across a corner",
            _p(2),
            0.08,
            (
                BlobSpec((0.0, 0.0), 0.05, 160),
                BlobSpec((0.5, 0.5), 0.05, 120),
                BlobSpec((0.3, 0.8), 0.04, 90),
            ),
            n_background=40,
        ),
        Preset(
            "fig3_single",
            "2D periodic in x, open in y, eps=0.08L, blob straddling the x face",
            DomainSpec([BoundarySpec.periodic(0, 1), BoundarySpec.open(0, 1)]),
            0.08,
            (
                BlobSpec((0.0, 0.5), 0.05, 160),
                BlobSpec((0.5, 0.2), 0.05, 120),
                BlobSpec((0.55, 0.8), 0.04, 90),
            ),
            n_background=40,
        ),
        Preset(
            "fig4",
            "3D triply periodic, eps=0.08L, blob across a corner",
            _p(3),
            0.08,
            (
                BlobSpec((0.0, 0.0, 0.0), 0.05, 400),
                BlobSpec((0.5, 0.5, 0.5), 0.05, 250),
                BlobSpec((0.2, 0.75, 0.25), 0.04, 200),
            ),
            n_background=60,
        ),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ParameterError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def random_instance(rng: np.random.Generator, n_range=(10, 500), periodic_prob=0.7):
    """Random ``(points, domain, params)`` for randomized testing.

    1-3 dimensions, each periodic with probability ``periodic_prob`` (random
    bounds and period) or open on [0, 1). ``epsilon`` is drawn from
    (0.01, 0.4) times the shortest period, ``min_points`` from 2..8. Points
    are uniform or a few Gaussian blobs of width comparable to ``epsilon``.
    """
    ndim = int(rng.integers(1, 4))
    dims = []
    for _ in range(ndim):
        if rng.random() < periodic_prob:
            lo = float(rng.uniform(-1.0, 1.0))
            dims.append(BoundarySpec.periodic(lo, lo + float(rng.uniform(0.5, 2.0))))
        else:
            dims.append(BoundarySpec.open(0.0, 1.0))
    domain = DomainSpec(dims)
    L = min((d.period for d in dims if d.is_periodic), default=1.0)
    epsilon = float(rng.uniform(0.01, 0.4)) * L
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    if rng.random() < 0.5:
        X = generate_uniform(n, domain, int(rng.integers(2**31)))
    else:
        k = int(rng.integers(1, 6))
        lo, hi = np.array([(d.lower, d.upper) for d in dims]).T
        specs = [
            BlobSpec(tuple(lo + rng.random(ndim) * (hi - lo)), float(rng.uniform(0.3, 1.5)) * epsilon, int(size))
            for size in rng.multinomial(n, np.ones(k) / k)
        ]
        X = generate_blobs(specs, domain, int(rng.integers(2**31)))
    return X, domain, DbscanParams(epsilon, int(rng.integers(2, 9)))
