"""
Four-terminal full Steiner trees.

Closed-form junctions for the topology P1,P2 | S1 S2 | P4,P3 and, through the
cyclic relabeling P1->P2->P3->P4->P1, for its alternate P4,P1 | S1 S2 | P3,P2;
existence diagnostics, independent length identities and the loci traced by
the junctions when P3 wanders.
"""
import enum
import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

import commons
from commons import SQRT3, TWO_PI_3
from fermat3 import Circle, equilateral_apex, steiner_circle
from geom_core import (
  DEFAULT_TOLERANCE,
  Degenerate,
  GeometryError,
  NotConvex,
  Point,
  angle_at,
  dot,
  diagonal_angle,
  pairwise_distance,
  signed_area2,
  validate_quad,
)


logger = logging.getLogger(__name__)

DELTA_NAMES = ('delta', 'delta1', 'delta2', 'delta3', 'delta4')


class Topology(enum.Enum):
  T12_34 = 'T12_34'
  T41_23 = 'T41_23'


EDGE_LABELS = {
  Topology.T12_34: (('P1', 'S1'), ('P2', 'S1'), ('P3', 'S2'), ('P4', 'S2'), ('S1', 'S2')),
  Topology.T41_23: (('P4', 'S1'), ('P1', 'S1'), ('P2', 'S2'), ('P3', 'S2'), ('S1', 'S2')),
}


class NoFullTree(ValueError):
  """A full Steiner tree of the requested topology does not exist."""

  def __init__(self, topology, failing):
    self.topology = topology
    self.failing = tuple(failing)
    super().__init__("no full Steiner tree of topology {}: non-positive {}".format(
      topology.value, ", ".join(self.failing)))


class CollinearTerminals(GeometryError):
  pass


class WrongOrientation(GeometryError):
  pass


@dataclass(frozen=True)
class Scratch4:
  tau1: float
  tau2: float
  eta1: float
  eta2: float
  delta: float
  delta1: float
  delta2: float
  delta3: float
  delta4: float
  t_quad: float

  @property
  def deltas(self):
    return {name: getattr(self, name) for name in DELTA_NAMES}


@dataclass(frozen=True)
class Existence:
  failing: Tuple[str, ...]
  scratch: Scratch4

  @property
  def exists(self):
    return not self.failing


@dataclass(frozen=True)
class FullTree:
  topology: Topology
  s1: Point
  s2: Point
  edge_lengths: Tuple[float, float, float, float, float]
  length: float

  @property
  def edges(self):
    return tuple(zip(EDGE_LABELS[self.topology], self.edge_lengths))


@dataclass(frozen=True)
class Failure:
  topology: Topology
  failing: Tuple[str, ...]


@dataclass(frozen=True)
class Smt4Result:
  chosen: Optional[FullTree]
  alternate: Optional[FullTree]
  tie: bool
  length_gap_sq: Optional[float]
  failures: Tuple[Failure, ...] = ()

  @property
  def has_full_tree(self):
    return self.chosen is not None

  def tree(self, topology):
    for t in (self.chosen, self.alternate):
      if t is not None and t.topology is topology:
        return t
    return None


@dataclass(frozen=True)
class LocusReport:
  c_small: Circle
  c_hat: Circle
  q1: Point
  i_point: Point
  s_124: float


@dataclass(frozen=True)
class SweepRow:
  p3: Point
  smt: Optional[Smt4Result]
  diagnostic: Optional[str]
  on_c_small: Optional[bool]
  on_c_hat: Optional[bool]

  @property
  def tree(self):
    return None if self.smt is None else self.smt.tree(Topology.T12_34)


def scratch(q):
  x1, y1 = q.p1.x, q.p1.y
  x2, y2 = q.p2.x, q.p2.y
  x3, y3 = q.p3.x, q.p3.y
  x4, y4 = q.p4.x, q.p4.y

  tau1 = 2. * x1 - x2 - 2. * x3 + x4 + SQRT3 * (y2 - y4)
  tau2 = -x1 + 2. * x2 + x3 - 2. * x4 + SQRT3 * (y3 - y1)
  eta1 = -(tau1 + 2. * tau2) / SQRT3
  eta2 = (2. * tau1 + tau2) / SQRT3

  return Scratch4(
    tau1=tau1,
    tau2=tau2,
    eta1=eta1,
    eta2=eta2,
    delta=-(x1 - x3) * eta1 + (y1 - y3) * tau1,
    delta1=(x1 - x2) * eta2 - (y1 - y2) * tau2,
    delta2=(x1 - x2) * eta1 - (y1 - y2) * tau1,
    delta3=-(x3 - x4) * eta2 + (y3 - y4) * tau2,
    delta4=-(x3 - x4) * eta1 + (y3 - y4) * tau1,
    t_quad=tau1 * tau1 + tau1 * tau2 + tau2 * tau2)


def existence(q, tol=DEFAULT_TOLERANCE):
  sc = scratch(q)
  thr = tol.area_threshold(q.scale)
  failing = tuple(name for name, value in sc.deltas.items() if not value > thr)
  if failing:
    logger.debug("full tree fails on %s (threshold %.3e)", failing, thr)
  return Existence(failing, sc)


def solve_topology(q, tol=DEFAULT_TOLERANCE):
  """
  Full Steiner tree P1,P2 | S1 S2 | P4,P3.

  Raises:
    NoFullTree: some delta is not positive beyond eps_geom * scale**2.
  """
  ex = existence(q, tol)
  if not ex.exists:
    raise NoFullTree(Topology.T12_34, ex.failing)
  sc = ex.scratch
  k = SQRT3 / 2. / sc.t_quad
  s1 = Point(q.p1.x - k * sc.delta1 * sc.tau1, q.p1.y - k * sc.delta1 * sc.eta1)
  s2 = Point(q.p3.x + k * sc.delta3 * sc.tau1, q.p3.y + k * sc.delta3 * sc.eta1)

  root = math.sqrt(sc.t_quad)  # sqrt(3) * length
  edge_lengths = (sc.delta1 / root, sc.delta2 / root, sc.delta3 / root,
                  sc.delta4 / root, sc.delta / root)
  return FullTree(Topology.T12_34, s1, s2, edge_lengths, math.sqrt(sc.t_quad / 3.))


def s1_via_p2(q):
  """Junction S1 written from P2 instead of P1; must agree with solve_topology."""
  sc = scratch(q)
  k = SQRT3 / 2. / sc.t_quad
  return Point(q.p2.x - k * sc.delta2 * sc.tau2, q.p2.y - k * sc.delta2 * sc.eta2)


def alternate_quad(q):
  """Relabel (P1, P2, P3, P4) -> (P2, P3, P4, P1)."""
  return q.rotated(1)


def solve_alternate(q, tol=DEFAULT_TOLERANCE):
  """Full Steiner tree P4,P1 | S1 S2 | P3,P2; S1 is the junction next to P4 and P1."""
  try:
    t = solve_topology(alternate_quad(q), tol)
  except NoFullTree as e:
    raise NoFullTree(Topology.T41_23, e.failing) from e
  e = t.edge_lengths
  # relabeled edges are (P2,S2) (P3,S2) (P4,S1) (P1,S1) (S1,S2) in original labels
  return FullTree(Topology.T41_23, s1=t.s2, s2=t.s1,
                  edge_lengths=(e[2], e[3], e[0], e[1], e[4]), length=t.length)


def solve_smt4(q, tol=DEFAULT_TOLERANCE):
  trees, failures = [], []
  for topology, solver in ((Topology.T12_34, solve_topology), (Topology.T41_23, solve_alternate)):
    try:
      trees.append(solver(q, tol))
    except NoFullTree as e:
      failures.append(Failure(topology, e.failing))
  failures = tuple(failures)

  if not trees:
    logger.info("no full Steiner tree in either topology")
    return Smt4Result(None, None, False, None, failures)
  if len(trees) == 1:
    return Smt4Result(trees[0], None, False, None, failures)

  main, alt = trees
  gap = main.length ** 2 - alt.length ** 2
  tie = abs(gap) <= tol.area_threshold(q.scale)
  if tie or gap < 0.:
    return Smt4Result(main, alt, tie, gap, failures)
  return Smt4Result(alt, main, False, gap, failures)


def length_via_diagonals(q):
  r13 = pairwise_distance(q.p1, q.p3)
  r24 = pairwise_distance(q.p2, q.p4)
  psi = diagonal_angle(q)
  d2 = r13 ** 2 + r24 ** 2 + 2. * r13 * r24 * math.cos(TWO_PI_3 - psi)
  return math.sqrt(max(d2, 0.))


def length_via_triangle(q):
  """Third side of the triangle built on the two diagonals with included angle psi + pi/3."""
  r13 = pairwise_distance(q.p1, q.p3)
  r24 = pairwise_distance(q.p2, q.p4)
  psi = diagonal_angle(q)
  d2 = r13 ** 2 + r24 ** 2 - 2. * r13 * r24 * math.cos(psi + math.pi / 3.)
  return math.sqrt(max(d2, 0.))


def length_via_ab(q):
  x1, y1, x2, y2 = q.p1.x, q.p1.y, q.p2.x, q.p2.y
  x3, y3, x4, y4 = q.p3.x, q.p3.y, q.p4.x, q.p4.y
  a = SQRT3 * (x1 - x2 - x3 + x4) + (y1 + y2 - y3 - y4)
  b = (x1 + x2 - x3 - x4) + SQRT3 * (-y1 + y2 + y3 - y4)
  return 0.5 * math.hypot(a, b)


def q_points(q):
  """Apexes of the equilateral triangles erected outward on P1P2 and P3P4."""
  return equilateral_apex(q.p1, q.p2), equilateral_apex(q.p3, q.p4)


def containment_determinants(q, tree):
  """
  Signed doubled areas of each junction against the four sides, measured and in
  closed form. Positive throughout iff both junctions are strictly inside.

  Returns:
    dict with 's1', 's2' (measured) and 's1_closed', 's2_closed', each a tuple
    over the sides P1P2, P2P3, P3P4, P4P1.
  """
  sc = scratch(q)
  d, d1, d2, d3, d4 = (sc.delta, sc.delta1, sc.delta2, sc.delta3, sc.delta4)
  k = SQRT3 / 2. / sc.t_quad
  sides = ((q.p1, q.p2), (q.p2, q.p3), (q.p3, q.p4), (q.p4, q.p1))
  return {
    's1': tuple(signed_area2(a, b, tree.s1) for a, b in sides),
    's2': tuple(signed_area2(a, b, tree.s2) for a, b in sides),
    's1_closed': (k * d1 * d2, k * (d * d2 + d2 * d3),
                  k * (d3 * d4 + d3 * d + d4 * d), k * (d * d1 + d1 * d4)),
    's2_closed': (k * (d1 * d2 + d1 * d + d2 * d), k * (d * d3 + d3 * d2),
                  k * d3 * d4, k * (d * d4 + d4 * d1)),
  }


def junction_angles(q, tree):
  """The three angles at each junction, keyed like 'S1:P1-P2'."""
  where = {'P1': q.p1, 'P2': q.p2, 'P3': q.p3, 'P4': q.p4, 'S1': tree.s1, 'S2': tree.s2}
  angles = {}
  for junction in ('S1', 'S2'):
    nbrs = [b if a == junction else a for a, b in EDGE_LABELS[tree.topology] if junction in (a, b)]
    for i in range(3):
      for j in range(i + 1, 3):
        key = "{}:{}-{}".format(junction, nbrs[i], nbrs[j])
        angles[key] = angle_at(where[junction], where[nbrs[i]], where[nbrs[j]])
  return angles


def diagonal_dot(q):
  return dot(q.p3 - q.p1, q.p4 - q.p2)


def normalize_quad(points, tol=DEFAULT_TOLERANCE):
  """
  Reorder four terminals into counterclockwise convex order starting from the
  lexicographically smallest one.

  Returns:
    (Quad, permutation) where permutation[i] is the input index of new P_{i+1}.
  """
  xy = np.array([p.as_tuple() for p in points], dtype=np.float64)
  try:
    hull = ConvexHull(xy)
  except QhullError as e:
    raise Degenerate("terminals span no area: {}".format(str(e).splitlines()[0])) from e
  order = [int(i) for i in hull.vertices]
  if len(order) != 4:
    raise NotConvex("only {} of 4 terminals are convex-hull vertices".format(len(order)))
  start = min(range(4), key=lambda i: (points[order[i]].x, points[order[i]].y))
  order = order[start:] + order[:start]
  quad = validate_quad(*(points[i] for i in order), tol=tol)
  return quad, tuple(order)


def wandering_loci(p1, p2, p4, tol=DEFAULT_TOLERANCE):
  """
  Circles carrying S1 and S2 of the topology P1,P2 | S1 S2 | P4,P3 while P3 moves.

  Raises:
    CollinearTerminals: P1, P2, P4 collinear within tolerance.
    WrongOrientation: P1, P2, P4 numbered clockwise.
  """
  s124 = signed_area2(p1, p2, p4)
  scale = commons.scale_of((p1, p2, p4))
  if scale == 0. or abs(s124) <= tol.area_threshold(scale):
    raise CollinearTerminals("fixed terminals P1, P2, P4 are collinear within tolerance")
  if s124 < 0.:
    raise WrongOrientation("fixed terminals P1, P2, P4 must be numbered counterclockwise")

  c_small, q1 = steiner_circle(p1, p2)

  x1, y1, x2, y2, x4, y4 = p1.x, p1.y, p2.x, p2.y, p4.x, p4.y
  k = 1. / (2. * SQRT3)
  center = Point(0.5 * x1 + 0.5 * x4 + k * (-y1 + 2. * y2 - y4),
                 0.5 * y1 + 0.5 * y4 + k * (x1 - 2. * x2 + x4))
  r12 = pairwise_distance(p1, p2)
  r14 = pairwise_distance(p1, p4)
  r24 = pairwise_distance(p2, p4)
  radius = math.sqrt(((r12 ** 2 + r14 ** 2 + r24 ** 2) / 2. + SQRT3 * s124) / 3.)

  m = s124 / (SQRT3 * r24 ** 2)
  i_point = Point(x1 + m * (SQRT3 * (y4 - y2) + x2 - x4),
                  y1 + m * (SQRT3 * (x2 - x4) + y2 - y4))
  return LocusReport(c_small, Circle(center, radius), q1, i_point, s124)


def sample_polyline(path, samples):
  """Points evenly spaced by arc length along a polyline, endpoints included."""
  pts = [path[0]]
  for p in path[1:]:
    if p != pts[-1]:
      pts.append(p)
  if len(pts) == 1 or samples <= 1:
    return [pts[0]]

  xy = np.array([p.as_tuple() for p in pts])
  cum = np.concatenate([[0.], np.cumsum(np.hypot(*np.diff(xy, axis=0).T))])
  at = np.linspace(0., cum[-1], samples)
  xs = np.interp(at, cum, xy[:, 0])
  ys = np.interp(at, cum, xy[:, 1])
  return [Point(x, y) for x, y in zip(xs, ys)]


def loci_sweep(p1, p2, p4, path, tol=DEFAULT_TOLERANCE):
  """
  Solve the quad (P1, P2, P3, P4) for every P3 in path and test S1 against the
  small circle and S2 against the large one. Invalid positions give diagnostic
  rows.
  """
  locus = wandering_loci(p1, p2, p4, tol)
  rows = []
  for p3 in path:
    try:
      q = validate_quad(p1, p2, p3, p4, tol)
    except GeometryError as e:
      rows.append(SweepRow(p3, None, "{}: {}".format(type(e).__name__, e), None, None))
      continue
    smt = solve_smt4(q, tol)
    tree = smt.tree(Topology.T12_34)
    if tree is None:
      failing = next(f.failing for f in smt.failures if f.topology is Topology.T12_34)
      rows.append(SweepRow(p3, smt, "NoFullTree: non-positive " + ", ".join(failing), None, None))
      continue
    thr = tol.length_threshold(q.scale)
    rows.append(SweepRow(p3, smt, None,
                         locus.c_small.distance_to(tree.s1) <= thr,
                         locus.c_hat.distance_to(tree.s2) <= thr))
  logger.debug("sweep: %d of %d positions carry a full tree",
               sum(r.tree is not None for r in rows), len(rows))
  return rows
