"""Planar primitives shared by the three- and four-terminal solvers."""
import math
import logging
from dataclasses import dataclass

import commons


logger = logging.getLogger(__name__)


class GeometryError(ValueError):
  """Terminals violate a geometric precondition."""


class NonFinite(GeometryError):
  pass


class Degenerate(GeometryError):
  pass


class NotCCW(GeometryError):
  pass


class NotConvex(GeometryError):
  pass


class CoincidentPoints(GeometryError):
  pass


@dataclass(frozen=True)
class Point:
  x: float
  y: float

  def __post_init__(self):
    x, y = float(self.x), float(self.y)
    if not (math.isfinite(x) and math.isfinite(y)):
      raise NonFinite("non-finite coordinate ({}, {})".format(self.x, self.y))
    object.__setattr__(self, 'x', x)
    object.__setattr__(self, 'y', y)

  @classmethod
  def from_pair(cls, pair):
    if len(pair) != 2:
      raise GeometryError("expected a coordinate pair, got {!r}".format(pair))
    return cls(pair[0], pair[1])

  def __add__(self, other):
    return Point(self.x + other.x, self.y + other.y)

  def __sub__(self, other):
    return Point(self.x - other.x, self.y - other.y)

  def __mul__(self, k):
    return Point(self.x * k, self.y * k)

  __rmul__ = __mul__

  def norm(self):
    return math.hypot(self.x, self.y)

  def as_tuple(self):
    return (self.x, self.y)


@dataclass(frozen=True)
class Tolerance:
  eps_geom: float = 1e-9
  eps_solve: float = 1e-12

  def __post_init__(self):
    if not (0. < self.eps_solve <= self.eps_geom < 1.):
      raise ValueError("tolerances must satisfy 0 < eps_solve <= eps_geom < 1, got {} and {}".format(
        self.eps_solve, self.eps_geom))

  @classmethod
  def from_hparams(cls, hps, **overrides):
    kwargs = {k: float(hps[k]) for k in ('eps_geom', 'eps_solve') if k in hps}
    kwargs.update({k: float(v) for k, v in overrides.items() if v is not None})
    return cls(**kwargs)

  def length_threshold(self, scale):
    return self.eps_geom * scale

  def area_threshold(self, scale):
    # signed areas and the delta values are quadratic in coordinates
    return self.eps_geom * scale * scale


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class Triangle:
  """Three terminals spanning a nonzero area, in either orientation."""
  p1: Point
  p2: Point
  p3: Point

  def __post_init__(self):
    if signed_area2(self.p1, self.p2, self.p3) == 0.:
      raise Degenerate("terminals {}, {}, {} are collinear".format(
        self.p1.as_tuple(), self.p2.as_tuple(), self.p3.as_tuple()))

  @property
  def points(self):
    return (self.p1, self.p2, self.p3)

  @property
  def scale(self):
    return commons.scale_of(self.points)


@dataclass(frozen=True)
class Quad:
  """Four terminals forming a strictly convex counterclockwise quadrilateral."""
  p1: Point
  p2: Point
  p3: Point
  p4: Point

  def __post_init__(self):
    _check_turns(quad_turns(self.points), 0.)

  @property
  def points(self):
    return (self.p1, self.p2, self.p3, self.p4)

  @property
  def scale(self):
    return commons.scale_of(self.points)

  def rotated(self, k=1):
    """Relabel so that the new P1 is the old P_{k+1}; cyclic rotations keep a valid quad valid."""
    pts = self.points
    k %= 4
    return Quad(*(pts[k:] + pts[:k]))


def pairwise_distance(a, b):
  return math.hypot(a.x - b.x, a.y - b.y)


def signed_area2(a, b, c):
  """Doubled signed area of triangle abc; positive iff a, b, c run counterclockwise."""
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def cross(u, v):
  return u.x * v.y - u.y * v.x


def dot(u, v):
  return u.x * v.x + u.y * v.y


def angle_at(vertex, a, b):
  """Angle a-vertex-b in [0, pi]."""
  u, v = a - vertex, b - vertex
  return abs(math.atan2(cross(u, v), dot(u, v)))


def scale(points):
  return commons.scale_of(points)


def validate_triangle(p1, p2, p3, tol=DEFAULT_TOLERANCE):
  s = commons.scale_of((p1, p2, p3))
  if s == 0. or abs(signed_area2(p1, p2, p3)) <= tol.area_threshold(s):
    raise Degenerate("terminals {}, {}, {} are collinear within tolerance".format(
      p1.as_tuple(), p2.as_tuple(), p3.as_tuple()))
  return Triangle(p1, p2, p3)


def validate_quad(p1, p2, p3, p4, tol=DEFAULT_TOLERANCE):
  """
  Accept four terminals forming a strictly convex counterclockwise quadrilateral.

  The turn at every vertex is the doubled area of the triangle (previous, vertex,
  next); all four must be positive beyond eps_geom * scale**2.
  """
  pts = (p1, p2, p3, p4)
  s = commons.scale_of(pts)
  if s == 0.:
    raise Degenerate("all four terminals coincide")
  thr = tol.area_threshold(s)
  turns = quad_turns(pts)
  logger.debug("quad turns %s (threshold %.3e)", turns, thr)
  _check_turns(turns, thr)
  return Quad(*pts)


def quad_turns(pts):
  """Doubled area of (previous, vertex, next) at each of the four vertices."""
  return [signed_area2(pts[i - 1], pts[i], pts[(i + 1) % 4]) for i in range(4)]


def _check_turns(turns, thr):
  for i, turn in enumerate(turns):
    if abs(turn) <= thr:
      raise Degenerate("terminals P{}, P{}, P{} are collinear within tolerance".format(
        (i - 1) % 4 + 1, i + 1, (i + 1) % 4 + 1))
  if all(turn < 0. for turn in turns):
    raise NotCCW("terminals form a convex quadrilateral numbered clockwise")
  if not all(turn > 0. for turn in turns):
    raise NotConvex("terminals do not form a convex quadrilateral in the given order")


def diagonal_angle(q):
  """Angle between the diagonal vectors P1P3 and P2P4, in [0, pi]."""
  u, v = q.p3 - q.p1, q.p4 - q.p2
  return abs(math.atan2(cross(u, v), dot(u, v)))
