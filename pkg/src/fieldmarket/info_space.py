"""Assets as charged points in a normalized information feature space.

An asset is summarized by a feature vector (its coordinates in "information
space") and a nonnegative scalar charge. Distances between assets are plain
Euclidean distances in the normalized space; economically similar assets sit
close together, so they couple strongly through the inverse-square field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, DomainError, NonFiniteError

NORMALIZATION_METHODS = ("zscore", "minmax", "identity")


def _require_finite(values: Iterable[float], what: str) -> None:
    for v in values:
        if not math.isfinite(v):
            raise NonFiniteError(f"{what} contains a non-finite value: {v!r}")


@dataclass(frozen=True)
class FeatureVector:
    """Point in the normalized information space (dimensionless coordinates)."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if len(vals) == 0:
            raise DimensionMismatchError("feature vector needs at least one coordinate")
        _require_finite(vals, "feature vector")
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class InformationCharge:
    """An asset's position in information space plus its scalar charge.

    The charge magnitude is supplied by the caller (for example traded value);
    it is never derived internally.
    """

    asset_id: str
    position: FeatureVector
    magnitude: float

    def __post_init__(self) -> None:
        mag = float(self.magnitude)
        if not math.isfinite(mag):
            raise NonFiniteError(f"charge magnitude for {self.asset_id!r} is not finite")
        if mag < 0:
            raise DomainError(f"charge magnitude for {self.asset_id!r} must be >= 0, got {mag}")
        object.__setattr__(self, "magnitude", mag)


@dataclass(frozen=True)
class NormalizationSpec:
    """Per-feature affine normalization: coordinate = (raw - center) / scale.

    The method tag records how center/scale were derived; ``identity`` uses
    center 0 and scale 1 so raw values pass through unchanged.
    """

    center: tuple[float, ...]
    scale: tuple[float, ...]
    method: str

    def __post_init__(self) -> None:
        center = tuple(float(c) for c in self.center)
        scale = tuple(float(s) for s in self.scale)
        if self.method not in NORMALIZATION_METHODS:
            raise DomainError(
                f"unknown normalization method {self.method!r}; expected one of {NORMALIZATION_METHODS}"
            )
        if len(center) != len(scale):
            raise DimensionMismatchError(
                f"center has {len(center)} features but scale has {len(scale)}"
            )
        if len(center) == 0:
            raise DimensionMismatchError("normalization spec needs at least one feature")
        _require_finite(center, "normalization center")
        _require_finite(scale, "normalization scale")
        for i, s in enumerate(scale):
            if s <= 0:
                raise DomainError(f"scale for feature {i + 1} must be > 0, got {s}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "scale", scale)

    @property
    def dimension(self) -> int:
        return len(self.center)

    @classmethod
    def identity(cls, dimension: int) -> "NormalizationSpec":
        if dimension < 1:
            raise DimensionMismatchError("dimension must be >= 1")
        return cls((0.0,) * dimension, (1.0,) * dimension, "identity")

    @classmethod
    def zscore_from(cls, samples: Sequence[Sequence[float]]) -> "NormalizationSpec":
        """Center on the column mean, scale by the population standard deviation."""
        columns = _columns(samples)
        centers = []
        scales = []
        for i, col in enumerate(columns):
            mean = math.fsum(col) / len(col)
            var = math.fsum((x - mean) ** 2 for x in col) / len(col)
            std = math.sqrt(var)
            if std == 0.0:
                raise DomainError(f"feature {i + 1} is constant; zscore scale would be 0")
            centers.append(mean)
            scales.append(std)
        return cls(tuple(centers), tuple(scales), "zscore")

    @classmethod
    def minmax_from(cls, samples: Sequence[Sequence[float]]) -> "NormalizationSpec":
        """Center on the column minimum, scale by the column range."""
        columns = _columns(samples)
        centers = []
        scales = []
        for i, col in enumerate(columns):
            lo, hi = min(col), max(col)
            if hi == lo:
                raise DomainError(f"feature {i + 1} is constant; minmax scale would be 0")
            centers.append(lo)
            scales.append(hi - lo)
        return cls(tuple(centers), tuple(scales), "minmax")


def _columns(samples: Sequence[Sequence[float]]) -> list[list[float]]:
    if len(samples) == 0:
        raise DomainError("need at least one sample to fit a normalization spec")
    width = len(samples[0])
    if width == 0:
        raise DimensionMismatchError("samples need at least one feature")
    cols: list[list[float]] = [[] for _ in range(width)]
    for row in samples:
        if len(row) != width:
            raise DimensionMismatchError(
                f"sample has {len(row)} features, expected {width}"
            )
        for i, v in enumerate(row):
            f = float(v)
            if not math.isfinite(f):
                raise NonFiniteError("samples contain a non-finite value")
            cols[i].append(f)
    return cols


def normalize_features(raw: Sequence[float], spec: NormalizationSpec) -> FeatureVector:
    """Apply the spec's affine map to one raw feature row.

    Raises DimensionMismatchError when the row width differs from the spec,
    and NonFiniteError on NaN/inf inputs. Zero or negative scales are rejected
    when the spec is constructed (DomainError).
    """
    values = tuple(float(v) for v in raw)
    if len(values) != spec.dimension:
        raise DimensionMismatchError(
            f"raw row has {len(values)} features but spec expects {spec.dimension}"
        )
    _require_finite(values, "raw features")
    if spec.method == "identity":
        return FeatureVector(values)
    coords = tuple((v - c) / s for v, c, s in zip(values, spec.center, spec.scale))
    return FeatureVector(coords)


def info_distance(a: FeatureVector, b: FeatureVector) -> float:
    """Euclidean information distance between two assets' positions.

    Returns the raw distance; the singularity floor is applied later by the
    field computations, not here.
    """
    if a.dimension != b.dimension:
        raise DimensionMismatchError(
            f"cannot compare a {a.dimension}-dim vector with a {b.dimension}-dim vector"
        )
    return math.dist(a.values, b.values)


def total_charge(sources: Sequence[InformationCharge]) -> float:
    """Total charge of a source set; empty input sums to 0."""
    return math.fsum(s.magnitude for s in sources)
