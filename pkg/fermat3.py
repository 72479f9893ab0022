"""
Three-terminal Steiner (Fermat-Torricelli) point.

Closed-form junction and length for triangles whose angles are all below
2*pi/3, the two-side fallback otherwise, and the circle through P1, P2 on
which the junction moves when P3 wanders.
"""
import enum
import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from commons import SQRT3
from geom_core import (
  DEFAULT_TOLERANCE,
  CoincidentPoints,
  Point,
  pairwise_distance,
  signed_area2,
)


logger = logging.getLogger(__name__)


class SolutionKind(enum.Enum):
  INTERIOR = 'interior'
  DEGENERATE_AT_VERTEX = 'degenerate_at_vertex'


@dataclass(frozen=True)
class AngleCondition:
  """Outcome of the three angle inequalities; wide_at is the 1-based vertex index with angle >= 2*pi/3."""
  margins: Tuple[float, float, float]
  wide_at: Optional[int] = None

  @property
  def all_sharp(self):
    return self.wide_at is None


@dataclass(frozen=True)
class Solution3:
  kind: SolutionKind
  length: float
  s_abs: float
  steiner: Optional[Point] = None
  kappas: Optional[Tuple[float, float, float]] = None
  vertex: Optional[int] = None


@dataclass(frozen=True)
class Circle:
  center: Point
  radius: float

  def __post_init__(self):
    if not self.radius > 0.:
      raise ValueError("circle radius must be positive, got {}".format(self.radius))

  def distance_to(self, p):
    """Distance from p to the circumference."""
    return abs(pairwise_distance(self.center, p) - self.radius)


def _sides(t):
  return (pairwise_distance(t.p1, t.p2),
          pairwise_distance(t.p1, t.p3),
          pairwise_distance(t.p2, t.p3))


def fermat_condition(t, tol=DEFAULT_TOLERANCE):
  r12, r13, r23 = _sides(t)
  margins = (
    r12 ** 2 + r13 ** 2 + r12 * r13 - r23 ** 2,
    r23 ** 2 + r12 ** 2 + r12 * r23 - r13 ** 2,
    r13 ** 2 + r23 ** 2 + r13 * r23 - r12 ** 2,
  )
  thr = tol.area_threshold(t.scale)
  if all(m > thr for m in margins):
    return AngleCondition(margins)
  # at most one angle of a triangle can reach 2*pi/3
  wide = min(range(3), key=lambda i: margins[i])
  return AngleCondition(margins, wide_at=wide + 1)


def solve3(t, tol=DEFAULT_TOLERANCE):
  r12, r13, r23 = _sides(t)
  s_abs = abs(signed_area2(t.p1, t.p2, t.p3))
  cond = fermat_condition(t, tol)

  if not cond.all_sharp:
    j = cond.wide_at
    length = {1: r12 + r13, 2: r12 + r23, 3: r13 + r23}[j]
    logger.debug("angle at P%d reaches 2pi/3, two-side tree of length %.17g", j, length)
    return Solution3(SolutionKind.DEGENERATE_AT_VERTEX, length, s_abs, vertex=j)

  kappa1 = SQRT3 / 2. * (r12 ** 2 + r13 ** 2 - r23 ** 2) + s_abs
  kappa2 = SQRT3 / 2. * (r23 ** 2 + r12 ** 2 - r13 ** 2) + s_abs
  kappa3 = SQRT3 / 2. * (r13 ** 2 + r23 ** 2 - r12 ** 2) + s_abs
  d2 = (r12 ** 2 + r13 ** 2 + r23 ** 2) / 2. + SQRT3 * s_abs

  # products of kappas keep the weights finite as one kappa goes to zero
  denom = 2. * SQRT3 * s_abs * d2
  w1, w2, w3 = kappa2 * kappa3, kappa1 * kappa3, kappa1 * kappa2
  steiner = Point(
    (w1 * t.p1.x + w2 * t.p2.x + w3 * t.p3.x) / denom,
    (w1 * t.p1.y + w2 * t.p2.y + w3 * t.p3.y) / denom)
  return Solution3(SolutionKind.INTERIOR, math.sqrt(d2), s_abs,
                   steiner=steiner, kappas=(kappa1, kappa2, kappa3))


def length_via_kappas(sol):
  return math.sqrt(sum(sol.kappas) / SQRT3)


def equilateral_apex(a, b):
  """Third vertex Q of the equilateral triangle on ab with a, b, Q running clockwise."""
  return Point(
    0.5 * a.x + 0.5 * b.x - SQRT3 / 2. * a.y + SQRT3 / 2. * b.y,
    SQRT3 / 2. * a.x - SQRT3 / 2. * b.x + 0.5 * a.y + 0.5 * b.y)


def steiner_circle(p1, p2):
  """
  Circle through p1, p2 and the apex q1 of the equilateral triangle erected on
  p1p2 away from any P3 that makes P1P2P3 counterclockwise.

  Returns:
    (Circle, q1)
  """
  r12 = pairwise_distance(p1, p2)
  if r12 == 0.:
    raise CoincidentPoints("circle through coincident points {}".format(p1.as_tuple()))
  k = 1. / (2. * SQRT3)
  center = Point(
    0.5 * p1.x + 0.5 * p2.x - k * p1.y + k * p2.y,
    k * p1.x - k * p2.x + 0.5 * p1.y + 0.5 * p2.y)
  return Circle(center, r12 / SQRT3), equilateral_apex(p1, p2)


def construction_circle(t):
  """steiner_circle on the side P1P2 taken in the order that makes the triangle counterclockwise."""
  if signed_area2(t.p1, t.p2, t.p3) > 0.:
    return steiner_circle(t.p1, t.p2)
  return steiner_circle(t.p2, t.p1)
