"""Domain description and the minimum-image metric.

A domain is a list of per-dimension boundaries. Each dimension is either
open (unbounded) or periodic on a half-open interval ``[lower, upper)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import InputShapeError, ParameterError

OPEN = "open"
PERIODIC = "periodic"


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary of a single dimension.

    For an open dimension ``lower``/``upper`` are optional and only used as
    the sampling extent by the synthetic data generators.
    """

    kind: str = OPEN
    lower: Optional[float] = None
    upper: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (OPEN, PERIODIC):
            raise ParameterError(f"unknown boundary kind {self.kind!r}")
        if self.kind == PERIODIC:
            if self.lower is None or self.upper is None:
                raise ParameterError("periodic boundary needs lower and upper")
            if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
                raise ParameterError("periodic bounds must be finite")
            if not self.lower < self.upper:
                raise ParameterError(
                    f"periodic boundary needs lower < upper, got [{self.lower}, {self.upper})"
                )
        elif (self.lower is None) != (self.upper is None):
            raise ParameterError("open extent needs both lower and upper or neither")
        elif self.lower is not None and not self.lower < self.upper:
            raise ParameterError("open extent needs lower < upper")

    @classmethod
    def open(cls, lower: Optional[float] = None, upper: Optional[float] = None) -> "BoundarySpec":
        return cls(OPEN, lower, upper)

    @classmethod
    def periodic(cls, lower: float = 0.0, upper: float = 1.0) -> "BoundarySpec":
        return cls(PERIODIC, float(lower), float(upper))

    @classmethod
    def parse(cls, text: str) -> "BoundarySpec":
        """Parse ``open``, ``open:lo:hi`` or ``periodic:lo:hi``."""
        parts = text.strip().split(":")
        kind = parts[0].lower()
        if kind not in (OPEN, PERIODIC):
            raise ParameterError(f"bad boundary spec {text!r}: kind must be 'open' or 'periodic'")
        if len(parts) == 1:
            if kind == PERIODIC:
                raise ParameterError(f"bad boundary spec {text!r}: use periodic:LO:HI")
            return cls.open()
        if len(parts) != 3:
            raise ParameterError(f"bad boundary spec {text!r}: expected KIND:LO:HI")
        try:
            lo, hi = float(parts[1]), float(parts[2])
        except ValueError:
            raise ParameterError(f"bad boundary spec {text!r}: bounds are not numbers") from None
        return cls(kind, lo, hi)

    @property
    def is_periodic(self) -> bool:
        return self.kind == PERIODIC

    @property
    def period(self) -> float:
        if not self.is_periodic:
            raise ParameterError("open dimension has no period")
        return self.upper - self.lower

    def __str__(self):
        if self.lower is None:
            return self.kind
        return f"{self.kind}:{self.lower:g}:{self.upper:g}"


@dataclass(frozen=True)
class DomainSpec:
    """Ordered per-dimension boundaries; ``len(dims)`` is the dimensionality."""

    dims: tuple

    def __init__(self, dims: Iterable[BoundarySpec]):
        dims = tuple(dims)
        if len(dims) < 1:
            raise ParameterError("domain needs at least one dimension")
        for d in dims:
            if not isinstance(d, BoundarySpec):
                raise ParameterError(f"expected BoundarySpec, got {type(d).__name__}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def all_periodic(cls, ndim: int, lower: float = 0.0, upper: float = 1.0) -> "DomainSpec":
        return cls([BoundarySpec.periodic(lower, upper)] * ndim)

    @classmethod
    def all_open(cls, ndim: int) -> "DomainSpec":
        return cls([BoundarySpec.open()] * ndim)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def periodic_mask(self) -> np.ndarray:
        return np.array([d.is_periodic for d in self.dims], dtype=bool)

    @property
    def any_periodic(self) -> bool:
        return bool(self.periodic_mask.any())

    @property
    def lower(self) -> np.ndarray:
        """Lower bounds; NaN for dimensions without an extent."""
        return np.array([np.nan if d.lower is None else d.lower for d in self.dims])

    @property
    def upper(self) -> np.ndarray:
        return np.array([np.nan if d.upper is None else d.upper for d in self.dims])

    @property
    def periods(self) -> np.ndarray:
        """Period length per dimension; ``inf`` for open dimensions."""
        return np.array([d.period if d.is_periodic else np.inf for d in self.dims])

    def check_epsilon(self, epsilon: float) -> None:
        """Reject radii that are not strictly below half of every period."""
        for k, d in enumerate(self.dims):
            if d.is_periodic and not 2.0 * epsilon < d.period:
                raise ParameterError(
                    f"2*eps must be smaller than the period: eps={epsilon:g}, "
                    f"period={d.period:g} in dimension {k}"
                )

    def __str__(self):
        return " ".join(str(d) for d in self.dims)


def as_points(points, ndim: Optional[int] = None) -> np.ndarray:
    """Coerce to a C-contiguous float64 ``(N, D)`` array.

    A 1-D input is read as N points in one dimension.
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1) if ndim in (None, 1) else X.reshape(-1, ndim)
    if X.ndim != 2:
        raise InputShapeError(f"points must be a 2-D array, got shape {X.shape}")
    if ndim is not None and X.shape[1] != ndim and X.shape[0] > 0:
        raise InputShapeError(f"points have {X.shape[1]} dimensions, domain has {ndim}")
    if ndim is not None and X.shape[0] == 0:
        X = X.reshape(0, ndim)
    if not np.all(np.isfinite(X)):
        raise InputShapeError("points contain non-finite coordinates")
    return np.ascontiguousarray(X)


def wrap_points(points, domain: DomainSpec) -> np.ndarray:
    """Map periodic coordinates into ``[lower, upper)``; open ones pass through."""
    X = as_points(points, domain.ndim).copy()
    for k, d in enumerate(domain.dims):
        if not d.is_periodic:
            continue
        col = d.lower + np.mod(X[:, k] - d.lower, d.period)
        # mod of a tiny negative number can round up to the full period
        col[col >= d.upper] = d.lower
        X[:, k] = col
    return X


def is_wrapped(points: np.ndarray, domain: DomainSpec) -> bool:
    for k, d in enumerate(domain.dims):
        if d.is_periodic:
            col = points[:, k]
            if np.any(col < d.lower) or np.any(col >= d.upper):
                return False
    return True


def _axis_deltas(a: np.ndarray, b: np.ndarray, domain: DomainSpec) -> np.ndarray:
    delta = np.abs(a - b)
    for k, d in enumerate(domain.dims):
        if d.is_periodic:
            L = d.period
            dk = np.mod(delta[..., k], L)
            delta[..., k] = np.minimum(dk, L - dk)
    return delta


def min_image_sqdist(a, b, domain: DomainSpec) -> np.ndarray:
    """Squared minimum-image distance, broadcasting over leading axes.

    Per-axis squares are accumulated in dimension order; every distance test
    in the package uses this order so that boundary comparisons agree.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[-1] != domain.ndim or b.shape[-1] != domain.ndim:
        raise InputShapeError(
            f"vectors of length {a.shape[-1]} and {b.shape[-1]} in a {domain.ndim}-D domain"
        )
    delta = _axis_deltas(a, b, domain)
    out = delta[..., 0] * delta[..., 0]
    for k in range(1, domain.ndim):
        out = out + delta[..., k] * delta[..., k]
    return out


def min_image_distance(a: Sequence[float], b: Sequence[float], domain: DomainSpec) -> float:
    """Euclidean distance with each periodic axis difference taken as
    ``min(|d|, L - |d|)``."""
    return float(np.sqrt(min_image_sqdist(a, b, domain)))
