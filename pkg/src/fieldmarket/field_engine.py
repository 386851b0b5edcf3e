"""Inverse-square superposition of information charges.

Each source charge q at distance r contributes field intensity k_b * q / r**2
directed away from the source. Distances below the configured floor are
treated as coincident: the scalar law clamps the denominator at the floor,
while the vector sum drops the contribution (a coincident source has no
direction) and logs it as degenerate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError, EmptyInputError, NonFiniteError
from .info_space import FeatureVector, InformationCharge

logger = logging.getLogger(__name__)

DEFAULT_COUPLING = 1.0
DEFAULT_DISTANCE_FLOOR = 1e-6


@dataclass(frozen=True)
class FieldParams:
    """Coupling constant and the singularity floor for distances."""

    k_b: float = DEFAULT_COUPLING
    distance_floor: float = DEFAULT_DISTANCE_FLOOR

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k_b) and math.isfinite(self.distance_floor)):
            raise NonFiniteError("field parameters must be finite")
        if self.k_b <= 0:
            raise DomainError(f"k_b must be > 0, got {self.k_b}")
        if self.distance_floor <= 0:
            raise DomainError(f"distance_floor must be > 0, got {self.distance_floor}")


@dataclass(frozen=True)
class FieldVector:
    """Field intensity at a point, with components along the feature axes."""

    components: tuple[float, ...]

    def __post_init__(self) -> None:
        comps = tuple(float(c) for c in self.components)
        if len(comps) == 0:
            raise DimensionMismatchError("field vector needs at least one component")
        for c in comps:
            if not math.isfinite(c):
                raise NonFiniteError("field vector has a non-finite component")
        object.__setattr__(self, "components", comps)

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def magnitude(self) -> float:
        return math.hypot(*self.components)


def field_magnitude(q_total: float, r: float, params: FieldParams | None = None) -> float:
    """Scalar field intensity k_b * Q / max(r, floor)**2 at distance r."""
    params = params or FieldParams()
    q_total = float(q_total)
    r = float(r)
    if not (math.isfinite(q_total) and math.isfinite(r)):
        raise NonFiniteError("charge and distance must be finite")
    if q_total < 0:
        raise DomainError(f"total charge must be >= 0, got {q_total}")
    if r < 0:
        raise DomainError(f"distance must be >= 0, got {r}")
    return params.k_b * q_total / max(r, params.distance_floor) ** 2


def field_at(
    sources: Sequence[InformationCharge],
    point: FeatureVector,
    params: FieldParams | None = None,
) -> FieldVector:
    """Superpose the field of every source at ``point``.

    Sources closer than the distance floor contribute nothing to the vector
    (their direction is undefined at the point itself); they are logged and
    counted as degenerate rather than rejected, since coincident assets are
    legitimate data.
    """
    params = params or FieldParams()
    dim = point.dimension
    per_axis: list[list[float]] = [[] for _ in range(dim)]
    degenerate = 0
    for src in sources:
        if src.position.dimension != dim:
            raise DimensionMismatchError(
                f"source {src.asset_id!r} has dimension {src.position.dimension}, point has {dim}"
            )
        r = math.dist(src.position.values, point.values)
        if r < params.distance_floor:
            degenerate += 1
            logger.warning(
                "source %r is within the distance floor of the query point "
                "(r=%.3g); clamped magnitude %.6g dropped from the vector sum",
                src.asset_id,
                r,
                params.k_b * src.magnitude / params.distance_floor**2,
            )
            continue
        coef = params.k_b * src.magnitude / r**3
        for i in range(dim):
            per_axis[i].append(coef * (point.values[i] - src.position.values[i]))
    if degenerate:
        logger.debug("field_at dropped %d degenerate source(s)", degenerate)
    return FieldVector(tuple(math.fsum(terms) for terms in per_axis))


def force_on(a: float, field: FieldVector) -> FieldVector:
    """Force on a probe charge ``a``: the field scaled componentwise.

    This is the demand-side request force acting on a share's rate.
    """
    a = float(a)
    if not math.isfinite(a):
        raise NonFiniteError("probe charge must be finite")
    if a < 0:
        raise DomainError(f"probe charge must be >= 0, got {a}")
    return FieldVector(tuple(a * c for c in field.components))


def pairwise_force(
    q_i: float, q_total: float, r: float, params: FieldParams | None = None
) -> float:
    """Scalar interaction force k_b * q_i * Q / max(r, floor)**2."""
    params = params or FieldParams()
    q_i = float(q_i)
    if not math.isfinite(q_i):
        raise NonFiniteError("charge must be finite")
    if q_i < 0:
        raise DomainError(f"charge must be >= 0, got {q_i}")
    return q_i * field_magnitude(q_total, r, params)


def field_decay_profile(
    source: InformationCharge,
    r_values: Sequence[float],
    params: FieldParams | None = None,
) -> list[tuple[float, float]]:
    """Plot-ready (distance, magnitude) pairs for one source, in input order."""
    params = params or FieldParams()
    if len(r_values) == 0:
        raise EmptyInputError("r_values must not be empty")
    profile = []
    for r in r_values:
        r = float(r)
        if not math.isfinite(r):
            raise NonFiniteError("distances must be finite")
        if r <= 0:
            raise DomainError(f"distances must be > 0, got {r}")
        profile.append((r, field_magnitude(source.magnitude, r, params)))
    return profile


def field_at_points(
    sources: Sequence[InformationCharge],
    points: np.ndarray,
    params: FieldParams,
) -> np.ndarray:
    """Vectorized field evaluation at an (m, dim) array of points.

    Matches field_at semantics, including dropping sub-floor contributions.
    Used by the work integrator, where many samples per call matter.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise DimensionMismatchError("points must be an (m, dim) array")
    if not sources:
        return np.zeros_like(points)
    pos = np.array([s.position.values for s in sources], dtype=float)
    charge = np.array([s.magnitude for s in sources], dtype=float)
    if pos.shape[1] != points.shape[1]:
        raise DimensionMismatchError(
            f"sources have dimension {pos.shape[1]}, points have {points.shape[1]}"
        )
    diff = points[:, None, :] - pos[None, :, :]
    r = np.sqrt(np.sum(diff * diff, axis=2))
    live = r >= params.distance_floor
    r_safe = np.where(live, r, 1.0)
    coef = np.where(live, params.k_b * charge[None, :] / r_safe**3, 0.0)
    return np.sum(coef[:, :, None] * diff, axis=1)
