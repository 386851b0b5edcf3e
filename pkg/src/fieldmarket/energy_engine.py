"""Work and potential-energy accounting for the conservative information field.

All work values follow the mechanical-force convention: the work done holding
a probe charge against the field. Moving a positive probe outward from a
positive source therefore yields negative work. The field-force work is the
negation; pass ``convention="field"`` where the other sign is wanted.

The stock-market potential is linear in the rate above a reference level (a
gravitational analogy): W(v) = mass * (v - reference), clamped at zero below
the reference. The reference is either fixed or a rolling minimum (support).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegeneratePathError,
    DimensionMismatchError,
    DomainError,
    NonFiniteError,
)
from .field_engine import DEFAULT_DISTANCE_FLOOR, FieldParams, field_at_points
from .info_space import FeatureVector, InformationCharge

logger = logging.getLogger(__name__)

WORK_CONVENTIONS = ("mechanical", "field")

# Per-segment quadrature: refine until two successive composite-Simpson
# levels agree to this relative tolerance, or the sample cap is reached.
QUAD_REL_TOL = 1e-9
QUAD_MAX_LEVEL = 19  # 2**19 intervals -> at most 2**19 + 1 < 2**20 samples
_QUAD_MIN_LEVEL = 3  # never accept convergence before n = 8 intervals


@dataclass(frozen=True)
class PolylinePath:
    """Ordered path vertices in information space.

    A single vertex is a legal degenerate path; consecutive duplicate
    vertices are permitted and contribute zero work.
    """

    vertices: tuple[FeatureVector, ...]

    def __post_init__(self) -> None:
        verts = tuple(self.vertices)
        if len(verts) == 0:
            raise DomainError("a path needs at least one vertex")
        dim = verts[0].dimension
        for v in verts[1:]:
            if v.dimension != dim:
                raise DimensionMismatchError("all path vertices must share one dimension")
        object.__setattr__(self, "vertices", verts)

    @property
    def dimension(self) -> int:
        return self.vertices[0].dimension

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "PolylinePath":
        return cls(tuple(FeatureVector(tuple(p)) for p in points))


@dataclass(frozen=True)
class PotentialModel:
    """Mass analogue plus the reference-level rule for the linear potential.

    ``reference_rule`` is ``"rolling_min"`` (trailing window of ``window``
    bars, the support level) or ``"fixed"`` (constant ``v_ref``).
    """

    mass: float = 1.0
    reference_rule: str = "rolling_min"
    window: int = 20
    v_ref: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.mass) or self.mass <= 0:
            raise DomainError(f"mass must be finite and > 0, got {self.mass}")
        if self.reference_rule not in ("rolling_min", "fixed"):
            raise DomainError(
                f"reference_rule must be 'rolling_min' or 'fixed', got {self.reference_rule!r}"
            )
        if self.reference_rule == "rolling_min":
            if int(self.window) != self.window or self.window < 1:
                raise DomainError(f"rolling window must be an integer >= 1, got {self.window}")
            object.__setattr__(self, "window", int(self.window))
        else:
            if self.v_ref is None or not math.isfinite(float(self.v_ref)):
                raise DomainError("fixed reference rule needs a finite v_ref")
            object.__setattr__(self, "v_ref", float(self.v_ref))

    @classmethod
    def fixed(cls, v_ref: float, mass: float = 1.0) -> "PotentialModel":
        return cls(mass=mass, reference_rule="fixed", v_ref=v_ref)

    @classmethod
    def rolling_min(cls, window: int, mass: float = 1.0) -> "PotentialModel":
        return cls(mass=mass, reference_rule="rolling_min", window=window)

    @classmethod
    def from_rule(cls, rule: str, mass: float = 1.0) -> "PotentialModel":
        """Build from the config syntax ``fixed:<value>`` or ``rolling_min:<window>``."""
        name, sep, arg = rule.partition(":")
        if not sep:
            raise DomainError(f"reference rule {rule!r} is missing a ':<value>' part")
        if name == "fixed":
            try:
                return cls.fixed(float(arg), mass=mass)
            except ValueError:
                raise DomainError(f"bad fixed reference value {arg!r}") from None
        if name == "rolling_min":
            try:
                return cls.rolling_min(int(arg), mass=mass)
            except ValueError:
                raise DomainError(f"bad rolling window {arg!r}") from None
        raise DomainError(f"unknown reference rule {name!r}")

    def rule_string(self) -> str:
        if self.reference_rule == "fixed":
            return f"fixed:{self.v_ref:.12g}"
        return f"rolling_min:{self.window}"


def _check_convention(convention: str) -> None:
    if convention not in WORK_CONVENTIONS:
        raise DomainError(f"convention must be one of {WORK_CONVENTIONS}, got {convention!r}")


def work_closed_form(
    k: float,
    q0: float,
    q: float,
    r1: float,
    r2: float,
    floor: float = DEFAULT_DISTANCE_FLOOR,
    convention: str = "mechanical",
) -> float:
    """Closed-form work k*q0*q*(1/r2 - 1/r1) for a radial move in one source's field.

    Path independence makes this exact for any route between radii r1 and r2.
    Radii below ``floor`` are rejected.
    """
    _check_convention(convention)
    for name, v in (("k", k), ("q0", q0), ("q", q), ("r1", r1), ("r2", r2)):
        if not math.isfinite(float(v)):
            raise NonFiniteError(f"{name} must be finite")
    if k <= 0:
        raise DomainError(f"k must be > 0, got {k}")
    if q0 < 0 or q < 0:
        raise DomainError("charges must be >= 0")
    if r1 < floor or r2 < floor:
        raise DomainError(f"radii must be >= the distance floor {floor}, got r1={r1}, r2={r2}")
    work = k * q0 * q * (1.0 / r2 - 1.0 / r1)
    return work if convention == "mechanical" else -work


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = float(np.dot(p - a, ab)) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(a + t * ab - p))


def _integrate_segment(
    sources: Sequence[InformationCharge],
    a: np.ndarray,
    b: np.ndarray,
    params: FieldParams,
) -> float:
    """Integral of E . dl along one segment, by composite Simpson doubling.

    Levels double the interval count until two successive values agree to
    QUAD_REL_TOL relative to max(|integral|, integral of |integrand|); the
    absolute-value scale keeps near-cancelling segments (tangential moves)
    from demanding impossible relative accuracy.
    """
    direction = b - a
    prev = None
    value = 0.0
    for level in range(1, QUAD_MAX_LEVEL + 1):
        n = 2**level
        t = np.linspace(0.0, 1.0, n + 1)
        samples = a[None, :] + t[:, None] * direction[None, :]
        tangential = field_at_points(sources, samples, params) @ direction
        if not np.all(np.isfinite(tangential)):
            raise NonFiniteError("field sample along the path is not finite")
        h = 1.0 / n
        weights = np.ones(n + 1)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        value = float(h / 3.0 * np.dot(weights, tangential))
        abs_scale = float(h / 3.0 * np.dot(weights, np.abs(tangential)))
        if prev is not None and level >= _QUAD_MIN_LEVEL:
            tol = QUAD_REL_TOL * max(abs(value), abs_scale)
            if abs(value - prev) <= tol:
                return value
        prev = value
    logger.warning("segment quadrature hit the %d-sample cap before converging", 2**QUAD_MAX_LEVEL + 1)
    return value


def work_line_integral(
    sources: Sequence[InformationCharge],
    q0: float,
    path: PolylinePath,
    params: FieldParams | None = None,
    convention: str = "mechanical",
) -> float:
    """Numeric work for moving probe charge q0 along a polyline.

    Integrates -q0 * E . dl segment by segment with adaptive refinement.
    The path must stay at least the distance floor away from every source;
    a path through a charge raises DegeneratePathError.
    """
    params = params or FieldParams()
    _check_convention(convention)
    q0 = float(q0)
    if not math.isfinite(q0):
        raise NonFiniteError("q0 must be finite")
    if q0 < 0:
        raise DomainError(f"q0 must be >= 0, got {q0}")
    dim = path.dimension
    for src in sources:
        if src.position.dimension != dim:
            raise DimensionMismatchError(
                f"source {src.asset_id!r} dimension {src.position.dimension} != path dimension {dim}"
            )
    verts = [np.array(v.values, dtype=float) for v in path.vertices]
    positions = [np.array(s.position.values, dtype=float) for s in sources]
    segment_values = []
    for a, b in zip(verts, verts[1:]):
        if np.array_equal(a, b):
            continue
        for src, pos in zip(sources, positions):
            d = _point_segment_distance(pos, a, b)
            if d < params.distance_floor:
                raise DegeneratePathError(
                    f"path passes within {params.distance_floor} of source {src.asset_id!r} (distance {d:.3g})"
                )
        segment_values.append(_integrate_segment(sources, a, b, params))
    work = -q0 * math.fsum(segment_values)
    return work if convention == "mechanical" else -work


def market_work(r_force: float, delta_p: float) -> float:
    """Work done by the market force over a rate move: R * delta_p."""
    r_force = float(r_force)
    delta_p = float(delta_p)
    if not (math.isfinite(r_force) and math.isfinite(delta_p)):
        raise NonFiniteError("market work inputs must be finite")
    if r_force < 0:
        raise DomainError(f"request force must be >= 0, got {r_force}")
    return r_force * delta_p


def potential_at_rate(v: float, model: PotentialModel, reference: float) -> float:
    """Potential energy mass * (v - reference), clamped at 0 below the reference."""
    v = float(v)
    reference = float(reference)
    if not (math.isfinite(v) and math.isfinite(reference)):
        raise NonFiniteError("rate and reference must be finite")
    height = v - reference
    if height < 0:
        return 0.0
    return model.mass * height


def potential_delta(v2: float, v1: float, model: PotentialModel, reference: float) -> float:
    """Potential-energy difference W(v2) - W(v1) against a shared reference."""
    return potential_at_rate(v2, model, reference) - potential_at_rate(v1, model, reference)
