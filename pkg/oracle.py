"""
Numerical cross-check of the closed-form junctions.

The five-edge objective of the topology P1,P2 | S1 S2 | P4,P3, its
stationarity system, an alternating Weiszfeld solver (vectorized over a
stack of quads), gradient checks and the identity suite used by `cli.py verify`.
The alternate topology is checked by relabeling the quad, never by a
separate code path.
"""
import enum
import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import torch

import commons
import steiner4
from commons import SQRT3, TWO_PI_3
from fermat3 import equilateral_apex
from geom_core import (
  DEFAULT_TOLERANCE,
  CoincidentPoints,
  GeometryError,
  Point,
  Tolerance,
  diagonal_angle,
  pairwise_distance,
  signed_area2,
  validate_quad,
)
from steiner4 import FullTree, Topology


logger = logging.getLogger(__name__)


class InitMode(enum.Enum):
  DIAGONAL_INTERSECTION = 'diagonal_intersection'
  CENTROIDS = 'centroids'
  EXPLICIT = 'explicit'


@dataclass(frozen=True)
class OracleConfig:
  max_iters: int = 100000
  tol: Tolerance = DEFAULT_TOLERANCE
  init: InitMode = InitMode.DIAGONAL_INTERSECTION
  init_points: Optional[Tuple[Point, Point]] = None
  init_offset: float = 1e-3
  residual_tol: float = 1e-6

  def __post_init__(self):
    if self.max_iters < 1:
      raise ValueError("max_iters must be at least 1, got {}".format(self.max_iters))
    if self.init is InitMode.EXPLICIT and self.init_points is None:
      raise ValueError("explicit initialization needs init_points")

  @classmethod
  def from_hparams(cls, hps, tol=DEFAULT_TOLERANCE):
    return cls(
      max_iters=int(hps.max_iters),
      tol=tol,
      init=InitMode(hps.init),
      init_offset=float(hps.init_offset),
      residual_tol=float(hps.residual_tol))


@dataclass(frozen=True)
class OracleResult:
  s1: Point
  s2: Point
  objective: float
  residual_inf: float
  iters: int
  converged: bool
  history: Tuple[float, ...] = ()


@dataclass(frozen=True)
class Residual:
  values: Tuple[float, float, float, float]
  inf_norm: float


@dataclass(frozen=True)
class FermatResult:
  steiner: Point
  objective: float
  iters: int
  converged: bool


def objective(q, s1, s2):
  return (pairwise_distance(s1, q.p1) + pairwise_distance(s1, q.p2)
          + pairwise_distance(s1, s2)
          + pairwise_distance(s2, q.p3) + pairwise_distance(s2, q.p4))


def stationary_residual(q, s1, s2, tol=DEFAULT_TOLERANCE):
  """
  Left-hand sides of the stationarity system in the order x(S1), y(S1), x(S2), y(S2);
  each is a sum of three unit vectors pointing at the junction.

  Raises:
    CoincidentPoints: a junction sits within eps_solve * scale of a neighbour.
  """
  floor = tol.eps_solve * q.scale
  values = []
  for s, nbrs in ((s1, (q.p1, q.p2, s2)), (s2, (q.p3, q.p4, s1))):
    gx = gy = 0.
    for n in nbrs:
      r = pairwise_distance(s, n)
      if r <= floor:
        raise CoincidentPoints("junction {} coincides with neighbour {}".format(s.as_tuple(), n.as_tuple()))
      gx += (s.x - n.x) / r
      gy += (s.y - n.y) / r
    values.extend((gx, gy))
  return Residual(tuple(values), max(abs(v) for v in values))


def finite_difference_gradient(q, s1, s2, h):
  """Central differences of the objective with respect to (x(S1), y(S1), x(S2), y(S2))."""
  x0 = [s1.x, s1.y, s2.x, s2.y]

  def f(x):
    return objective(q, Point(x[0], x[1]), Point(x[2], x[3]))

  grad = []
  for j in range(4):
    xp, xm = list(x0), list(x0)
    xp[j] += h
    xm[j] -= h
    grad.append((f(xp) - f(xm)) / (2. * h))
  return tuple(grad)


def autograd_gradient(q, s1, s2):
  P = torch.tensor([p.as_tuple() for p in q.points], dtype=torch.float64)
  x = torch.tensor([s1.x, s1.y, s2.x, s2.y], dtype=torch.float64, requires_grad=True)
  a, b = x[:2], x[2:]
  f = (torch.linalg.norm(a - P[0]) + torch.linalg.norm(a - P[1]) + torch.linalg.norm(a - b)
       + torch.linalg.norm(b - P[2]) + torch.linalg.norm(b - P[3]))
  f.backward()
  return tuple(x.grad.tolist())


def _unit(v):
  return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _cross(u, v):
  return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _quad_array(quads):
  return np.array([[p.as_tuple() for p in q.points] for q in quads], dtype=np.float64)


def _initial_points(P, cfg, scale):
  n = P.shape[0]
  if cfg.init is InitMode.EXPLICIT:
    a, b = cfg.init_points
    return np.tile(a.as_tuple(), (n, 1)), np.tile(b.as_tuple(), (n, 1))
  if cfg.init is InitMode.CENTROIDS:
    g = P.mean(axis=1)
    return (P[:, 0] + P[:, 1] + g) / 3., (P[:, 2] + P[:, 3] + g) / 3.

  u, v = P[:, 2] - P[:, 0], P[:, 3] - P[:, 1]
  t = _cross(P[:, 1] - P[:, 0], v) / _cross(u, v)
  x = P[:, 0] + t[:, None] * u
  # bisector of the diagonal angle that opens towards P1P2
  b = _unit(_unit(P[:, 0] - x) + _unit(P[:, 1] - x))
  off = (cfg.init_offset * scale)[:, None]
  return x + off * b, x - off * b


def _weiszfeld_step(s, nbrs, floor, direction):
  """One inverse-distance weighted average of each row's three neighbours."""
  dist = np.linalg.norm(nbrs - s[:, None, :], axis=2)
  close = dist.min(axis=1) <= floor
  if close.any():
    s = s.copy()
    s[close] += floor[close, None] * direction[close]
    dist = np.linalg.norm(nbrs - s[:, None, :], axis=2)
    dist = np.maximum(dist, floor[:, None])
  w = 1. / dist
  return (w[:, :, None] * nbrs).sum(axis=1) / w.sum(axis=1, keepdims=True)


def _objective_array(P, s1, s2):
  n = np.linalg.norm
  return (n(s1 - P[:, 0], axis=1) + n(s1 - P[:, 1], axis=1) + n(s1 - s2, axis=1)
          + n(s2 - P[:, 2], axis=1) + n(s2 - P[:, 3], axis=1))


def _residual_array(P, s1, s2):
  def unit_sum(s, nbrs):
    diff = s[:, None, :] - nbrs
    return (diff / np.linalg.norm(diff, axis=2, keepdims=True)).sum(axis=1)

  with np.errstate(divide='ignore', invalid='ignore'):
    r1 = unit_sum(s1, np.stack([P[:, 0], P[:, 1], s2], axis=1))
    r2 = unit_sum(s2, np.stack([P[:, 2], P[:, 3], s1], axis=1))
  return np.concatenate([r1, r2], axis=1)


def solve_numeric_batch(quads, cfg=OracleConfig(), trace=False):
  """
  Alternating Weiszfeld iteration for a list of quads at once.

  Each sweep replaces S1 by the 1/distance weighted average of P1, P2, S2 and then
  S2 by that of P3, P4 and the new S1. A row stops once the largest coordinate
  change is at most eps_solve * scale; it is reported converged when, in
  addition, the stationarity residual is at most cfg.residual_tol.
  """
  quads = list(quads)
  P = _quad_array(quads)
  n = P.shape[0]
  scale = np.array([q.scale for q in quads])
  floor = cfg.tol.eps_solve * scale

  s1, s2 = _initial_points(P, cfg, scale)
  dir1 = np.tile([1., 0.], (n, 1))
  dir2 = np.tile([-1., 0.], (n, 1))
  done = np.zeros(n, dtype=bool)
  iters = np.zeros(n, dtype=np.int64)
  history = [_objective_array(P, s1, s2)] if trace else None

  for it in range(1, cfg.max_iters + 1):
    new1 = _weiszfeld_step(s1, np.stack([P[:, 0], P[:, 1], s2], axis=1), floor, dir1)
    new2 = _weiszfeld_step(s2, np.stack([P[:, 2], P[:, 3], new1], axis=1), floor, dir2)
    d1, d2 = new1 - s1, new2 - s2
    step = np.maximum(np.abs(d1).max(axis=1), np.abs(d2).max(axis=1))

    live = ~done
    for d, direction in ((d1, dir1), (d2, dir2)):
      norm = np.linalg.norm(d, axis=1)
      moved = live & (norm > 0.)
      direction[moved] = d[moved] / norm[moved, None]
    s1 = np.where(live[:, None], new1, s1)
    s2 = np.where(live[:, None], new2, s2)
    iters[live] = it
    if trace:
      history.append(_objective_array(P, s1, s2))

    done |= live & (step <= floor)
    if done.all():
      break

  obj = _objective_array(P, s1, s2)
  res = np.abs(_residual_array(P, s1, s2)).max(axis=1)
  results = []
  for i in range(n):
    converged = bool(done[i]) and bool(res[i] <= cfg.residual_tol)
    if not converged:
      logger.debug("oracle row %d stopped after %d sweeps, residual %.3e", i, iters[i], res[i])
    hist = tuple(float(h[i]) for h in history[:iters[i] + 1]) if trace else ()
    results.append(OracleResult(
      s1=Point(*s1[i]), s2=Point(*s2[i]), objective=float(obj[i]),
      residual_inf=float(res[i]), iters=int(iters[i]), converged=converged, history=hist))
  return results


def solve_numeric(q, cfg=OracleConfig(), trace=False):
  return solve_numeric_batch([q], cfg, trace)[0]


def solve_fermat_numeric(t, cfg=OracleConfig()):
  """Single-junction Weiszfeld iteration with the vertex optimality test for wide angles."""
  P = np.array([p.as_tuple() for p in t.points], dtype=np.float64)
  floor = cfg.tol.eps_solve * t.scale
  s = P.mean(axis=0)
  direction = np.array([1., 0.])
  converged = False
  it = 0

  for it in range(1, cfg.max_iters + 1):
    dist = np.linalg.norm(P - s, axis=1)
    j = int(np.argmin(dist))
    if dist[j] <= floor:
      others = np.delete(P, j, axis=0)
      pull = _unit(others - P[j]).sum(axis=0)
      if np.linalg.norm(pull) <= 1.:
        s = P[j].copy()
        converged = True
        break
      s = s + floor * direction
      dist = np.maximum(np.linalg.norm(P - s, axis=1), floor)
    w = 1. / dist
    new = (w[:, None] * P).sum(axis=0) / w.sum()
    d = new - s
    if np.linalg.norm(d) > 0.:
      direction = d / np.linalg.norm(d)
    s = new
    if np.abs(d).max() <= floor:
      converged = True
      break

  steiner = Point(*s)
  obj = sum(pairwise_distance(steiner, p) for p in t.points)
  return FermatResult(steiner, obj, it, converged)


@dataclass(frozen=True)
class VerifyLimits:
  identity_tol: float = 1e-9
  angle_tol: float = 1e-9
  agreement_tol: float = 1e-6
  point_tol: float = 1e-5
  residual_tol: float = 1e-9
  gradient_tol: float = 1e-5
  fd_step: float = 1e-6

  @classmethod
  def from_hparams(cls, hps):
    return cls(**{k: float(v) for k, v in hps.items()})


@dataclass(frozen=True)
class IdentityCheck:
  name: str
  error: float
  limit: float
  passed: bool


def _check(name, error, limit):
  return IdentityCheck(name, float(error), float(limit), bool(error <= limit))


def frame_of(q, tree):
  """Quad and junctions of a tree written in the labels of the topology P1,P2 | S1 S2 | P4,P3."""
  if tree.topology is Topology.T12_34:
    return q, tree.s1, tree.s2
  return steiner4.alternate_quad(q), tree.s2, tree.s1


def tree_checks(q, tree, limits=VerifyLimits(), cfg=OracleConfig(), points=None, with_oracle=True):
  """
  Identity checks of one tree. points, when given, replaces the computed
  junctions (written in the tree's own labels) so that a corrupted solution can
  be fed through the same checks. with_oracle=False leaves out the numeric
  solve, for callers that batch it.
  """
  fq, s1, s2 = frame_of(q, tree)
  if points is not None:
    s1, s2 = points if tree.topology is Topology.T12_34 else points[::-1]
  prefix = tree.topology.value + "."
  scale = fq.scale
  lin, area = limits.identity_tol * scale, limits.identity_tol * scale * scale
  sc = steiner4.scratch(fq)
  d = tree.length
  frame_tree = FullTree(Topology.T12_34, s1, s2, tree.edge_lengths, d)
  checks = []

  checks.append(_check(prefix + "delta_sum",
                       abs(sum(sc.deltas.values()) - sc.t_quad / SQRT3), area))
  checks.append(_check(prefix + "edge_sum", abs(objective(fq, s1, s2) - d), lin))
  angles = steiner4.junction_angles(fq, frame_tree)
  checks.append(_check(prefix + "angles_120",
                       max(abs(a - TWO_PI_3) for a in angles.values()), limits.angle_tol))

  q1, q2 = steiner4.q_points(fq)
  for name, value in (("length_ab", steiner4.length_via_ab(fq)),
                      ("length_diagonals", steiner4.length_via_diagonals(fq)),
                      ("length_triangle", steiner4.length_via_triangle(fq)),
                      ("length_q1q2", pairwise_distance(q1, q2))):
    checks.append(_check(prefix + name, abs(value - d), lin))
  checks.append(_check(prefix + "s1_from_p2", pairwise_distance(steiner4.s1_via_p2(fq), s1), lin))

  dets = steiner4.containment_determinants(fq, frame_tree)
  measured = dets['s1'] + dets['s2']
  closed = dets['s1_closed'] + dets['s2_closed']
  gap = max(abs(m - c) for m, c in zip(measured, closed))
  checks.append(IdentityCheck(prefix + "containment", gap, area,
                              min(measured) > 0. and gap <= area))

  try:
    residual = stationary_residual(fq, s1, s2, cfg.tol)
    checks.append(_check(prefix + "stationarity", residual.inf_norm, limits.residual_tol))
    auto = autograd_gradient(fq, s1, s2)
    checks.append(_check(prefix + "gradient_autograd",
                         max(abs(a - r) for a, r in zip(auto, residual.values)), limits.residual_tol))
    fd = finite_difference_gradient(fq, s1, s2, limits.fd_step * scale)
    checks.append(_check(prefix + "gradient_fd",
                         max(abs(a - r) for a, r in zip(fd, residual.values)), limits.gradient_tol))
  except CoincidentPoints:
    checks.append(IdentityCheck(prefix + "stationarity", math.inf, limits.residual_tol, False))

  if with_oracle:
    checks.extend(agreement_checks(fq, tree.topology, s1, s2, d, solve_numeric(fq, cfg), limits))
  return checks


def diagonal_criterion_checks(q, limits=VerifyLimits(), tol=DEFAULT_TOLERANCE):
  """
  delta > 0 exactly when the diagonal angle is below 2pi/3, checked for both
  labelings whether or not a tree exists. Labelings with delta or the angle
  inside its tolerance band are skipped.
  """
  checks = []
  for topology, fq in ((Topology.T12_34, q), (Topology.T41_23, steiner4.alternate_quad(q))):
    delta = steiner4.scratch(fq).delta
    psi = diagonal_angle(fq)
    if abs(delta) <= tol.area_threshold(fq.scale) or abs(psi - TWO_PI_3) <= limits.angle_tol:
      continue
    agree = (delta > 0.) == (psi < TWO_PI_3)
    checks.append(IdentityCheck(topology.value + ".diagonal_criterion", 0. if agree else 1., 0., agree))
  return checks


def agreement_checks(fq, topology, s1, s2, length, num, limits=VerifyLimits()):
  """Closed form against an oracle run on the frame quad fq."""
  prefix = topology.value + "."
  scale = fq.scale
  return [
    IdentityCheck(prefix + "oracle_converged", num.residual_inf, limits.agreement_tol, num.converged),
    _check(prefix + "oracle_length", abs(num.objective - length), limits.agreement_tol * scale),
    _check(prefix + "oracle_points",
           max(pairwise_distance(num.s1, s1), pairwise_distance(num.s2, s2)),
           limits.point_tol * scale),
  ]


def identity_checks(q, smt, limits=VerifyLimits(), cfg=OracleConfig(), points=None, with_oracle=True):
  """
  All identity checks of a solved quad: the diagonal criterion for both
  labelings, then the checks of every tree that exists. points override the
  chosen tree's junctions.
  """
  checks = diagonal_criterion_checks(q, limits, cfg.tol)
  for tree in (smt.chosen, smt.alternate):
    if tree is not None:
      checks.extend(tree_checks(q, tree, limits, cfg,
                                points if tree is smt.chosen else None, with_oracle))

  if smt.chosen is not None and smt.alternate is not None:
    scale = q.scale
    area = limits.identity_tol * scale * scale
    main = smt.tree(Topology.T12_34)
    alt = smt.tree(Topology.T41_23)
    gap = main.length ** 2 - alt.length ** 2
    checks.append(_check("length_gap", abs(gap + 2. * steiner4.diagonal_dot(q)), area))
    if smt.tie:
      checks.append(_check("junction_edge_tie", abs(main.edge_lengths[4] - alt.edge_lengths[4]),
                           limits.identity_tol * scale))
  return tuple(checks)


def locus_checks(locus, p2, p4, limits=VerifyLimits()):
  """
  I on the line P2P4 and on both circles, and the large circle through the
  vertices of the equilateral triangle on Q1P4.
  """
  scale = commons.scale_of((locus.q1, p2, p4))
  lin = limits.identity_tol * scale
  apex = equilateral_apex(p4, locus.q1)
  c_hat = locus.c_hat
  return (
    _check("i_on_line_p2p4", abs(signed_area2(p2, p4, locus.i_point)) / pairwise_distance(p2, p4), lin),
    _check("i_on_c", locus.c_small.distance_to(locus.i_point), lin),
    _check("i_on_c_hat", c_hat.distance_to(locus.i_point), lin),
    _check("c_hat_through_q1", c_hat.distance_to(locus.q1), lin),
    _check("c_hat_through_p4", c_hat.distance_to(p4), lin),
    _check("c_hat_through_apex", c_hat.distance_to(apex), lin),
  )


@dataclass(frozen=True)
class SuiteFailure:
  index: int
  name: str
  error: float


@dataclass(frozen=True)
class SuiteSummary:
  quads: int
  trees: int
  checks: int
  failures: Tuple[SuiteFailure, ...]

  @property
  def passed(self):
    return not self.failures


def random_quads(rng, n, min_delta=0.02, tol=DEFAULT_TOLERANCE):
  """
  n valid quads whose topology P1,P2 | S1 S2 | P4,P3 exists with every delta at
  least min_delta * scale**2, and whose alternate topology is at least as far
  from its existence boundary.
  """
  quads = []
  while len(quads) < n:
    xy = commons.random_convex_xy(rng)
    try:
      q = validate_quad(*(Point(x, y) for x, y in xy), tol=tol)
    except GeometryError:
      continue
    margin = min_delta * q.scale ** 2
    main = min(steiner4.scratch(q).deltas.values())
    alt = min(steiner4.scratch(steiner4.alternate_quad(q)).deltas.values())
    if main >= margin and abs(alt) >= margin:
      quads.append(q)
  return quads


def run_random_suite(n, seed, min_delta=0.02, limits=VerifyLimits(), cfg=OracleConfig(), tol=DEFAULT_TOLERANCE):
  """Identity checks over n seeded random quads; the oracle runs once as a batch over every tree."""
  rng = np.random.default_rng(seed)
  quads = random_quads(rng, n, min_delta, tol)
  failures, frames = [], []
  n_checks = 0
  for i, q in enumerate(quads):
    smt = steiner4.solve_smt4(q, tol)
    for check in identity_checks(q, smt, limits, cfg, with_oracle=False):
      n_checks += 1
      if not check.passed:
        failures.append(SuiteFailure(i, check.name, check.error))
    for tree in (smt.chosen, smt.alternate):
      if tree is not None:
        frames.append((i, tree, frame_of(q, tree)))

  numeric = solve_numeric_batch([f[0] for _, _, f in frames], cfg)
  for (i, tree, (fq, s1, s2)), num in zip(frames, numeric):
    for check in agreement_checks(fq, tree.topology, s1, s2, tree.length, num, limits):
      n_checks += 1
      if not check.passed:
        failures.append(SuiteFailure(i, check.name, check.error))

  logger.info("random suite: %d quads, %d trees, %d checks, %d failures",
              len(quads), len(frames), n_checks, len(failures))
  return SuiteSummary(len(quads), len(frames), n_checks, tuple(failures))
