import math

import numpy as np
import pytest

import commons
import oracle
import steiner4
from conftest import SQRT3, quad_of
from geom_core import CoincidentPoints, Point, pairwise_distance
from oracle import (
  InitMode,
  OracleConfig,
  VerifyLimits,
  autograd_gradient,
  diagonal_criterion_checks,
  finite_difference_gradient,
  identity_checks,
  objective,
  solve_numeric,
  solve_numeric_batch,
  stationary_residual,
)


def test_objective(reference_quad, unit_square):
  tree = steiner4.solve_topology(reference_quad)
  assert objective(reference_quad, tree.s1, tree.s2) == pytest.approx(14.912651, abs=1e-6)
  c = Point(0.5, 0.5)
  assert objective(unit_square, c, c) == pytest.approx(2. * math.sqrt(2.), abs=1e-15)
  q = reference_quad
  expected = pairwise_distance(q.p1, q.p2) + pairwise_distance(q.p1, q.p3) + pairwise_distance(q.p3, q.p4)
  assert objective(q, q.p1, q.p3) == pytest.approx(expected, abs=1e-12)


def test_stationary_residual(reference_quad, unit_square):
  tree = steiner4.solve_topology(reference_quad)
  assert stationary_residual(reference_quad, tree.s1, tree.s2).inf_norm < 1e-9
  exact = stationary_residual(unit_square, Point(0.5, SQRT3 / 6.), Point(0.5, 1. - SQRT3 / 6.))
  assert exact.inf_norm < 1e-12
  off = stationary_residual(unit_square, Point(0.3, 0.3), Point(0.7, 0.7))
  assert off.inf_norm > 0.1
  assert len(off.values) == 4


def test_stationary_residual_coincident(unit_square):
  with pytest.raises(CoincidentPoints):
    stationary_residual(unit_square, unit_square.p1, Point(0.5, 0.5))
  with pytest.raises(CoincidentPoints):
    stationary_residual(unit_square, Point(0.5, 0.5), Point(0.5, 0.5))


def test_solve_numeric_reference(reference_quad):
  res = solve_numeric(reference_quad)
  assert res.converged
  assert res.objective == pytest.approx(14.912651, abs=1e-6)
  np.testing.assert_allclose(res.s1.as_tuple(), (2.541631, 5.367094), atol=1e-6)
  np.testing.assert_allclose(res.s2.as_tuple(), (5.626509, 5.941984), atol=1e-6)
  assert res.residual_inf <= 1e-6


def test_solve_numeric_unit_square(unit_square):
  res = solve_numeric(unit_square)
  assert res.converged
  assert res.objective == pytest.approx(1. + SQRT3, abs=1e-6)
  np.testing.assert_allclose(res.s1.as_tuple(), (0.5, SQRT3 / 6.), atol=1e-6)
  np.testing.assert_allclose(res.s2.as_tuple(), (0.5, 1. - SQRT3 / 6.), atol=1e-6)


def test_solve_numeric_orthogonal(orthogonal_quad):
  res = solve_numeric(orthogonal_quad)
  assert res.converged
  assert res.objective == pytest.approx(15.030737, abs=1e-6)


@pytest.mark.parametrize("init", [InitMode.DIAGONAL_INTERSECTION, InitMode.CENTROIDS])
def test_init_modes_agree(reference_quad, init):
  res = solve_numeric(reference_quad, OracleConfig(init=init))
  assert res.converged
  assert res.objective == pytest.approx(math.sqrt(115. + 62. * SQRT3), abs=1e-6)


def test_explicit_init(reference_quad):
  cfg = OracleConfig(init=InitMode.EXPLICIT, init_points=(Point(3, 4), Point(6, 4)))
  res = solve_numeric(reference_quad, cfg)
  assert res.converged
  assert res.objective == pytest.approx(14.912651, abs=1e-6)


def test_config_validation(hps):
  with pytest.raises(ValueError):
    OracleConfig(max_iters=0)
  with pytest.raises(ValueError):
    OracleConfig(init=InitMode.EXPLICIT)
  cfg = OracleConfig.from_hparams(hps.oracle)
  assert cfg.init is InitMode.DIAGONAL_INTERSECTION
  assert cfg.max_iters == 100000
  assert VerifyLimits.from_hparams(hps.verify) == VerifyLimits()


def test_iteration_budget_is_reported(reference_quad):
  res = solve_numeric(reference_quad, OracleConfig(max_iters=2))
  assert res.iters == 2
  assert not res.converged


def test_objective_descends(reference_quad, rng):
  quads = [reference_quad] + oracle.random_quads(rng, 20)
  for q, res in zip(quads, solve_numeric_batch(quads, trace=True)):
    hist = np.array(res.history)
    assert len(hist) == res.iters + 1
    assert np.all(np.diff(hist) <= 1e-12 * q.scale)


def test_gradients_agree_at_random_placements(reference_quad, rng):
  q = reference_quad
  center = np.mean([p.as_tuple() for p in q.points], axis=0)
  xy = commons.rand_placement_xy(rng, center, q.scale, 400)
  checked = 0
  for i in range(0, len(xy), 2):
    s1, s2 = Point(*xy[i]), Point(*xy[i + 1])
    nbrs = ((s1, (q.p1, q.p2, s2)), (s2, (q.p3, q.p4)))
    if min(pairwise_distance(s, n) for s, ns in nbrs for n in ns) < 1e-2 * q.scale:
      continue
    residual = stationary_residual(q, s1, s2).values
    fd = finite_difference_gradient(q, s1, s2, 1e-6 * q.scale)
    np.testing.assert_allclose(fd, residual, rtol=0., atol=1e-5)
    np.testing.assert_allclose(autograd_gradient(q, s1, s2), residual, rtol=0., atol=1e-12)
    checked += 1
    if checked == 100:
      break
  assert checked == 100


def test_oracle_matches_closed_form_on_random_quads(rng):
  quads = oracle.random_quads(rng, 1000)
  trees = [steiner4.solve_topology(q) for q in quads]
  results = solve_numeric_batch(quads)
  for q, tree, res in zip(quads, trees, results):
    assert res.converged
    assert abs(res.objective - tree.length) <= 1e-6 * q.scale
    assert pairwise_distance(res.s1, tree.s1) <= 1e-5 * q.scale
    assert pairwise_distance(res.s2, tree.s2) <= 1e-5 * q.scale
    assert stationary_residual(q, tree.s1, tree.s2).inf_norm <= 1e-9


def test_identity_checks_reference(reference_quad):
  smt = steiner4.solve_smt4(reference_quad)
  checks = identity_checks(reference_quad, smt)
  failed = [c for c in checks if not c.passed]
  assert not failed, failed
  names = {c.name for c in checks}
  assert {"T12_34.delta_sum", "T41_23.angles_120", "T12_34.length_q1q2", "length_gap"} <= names


def test_identity_checks_unit_square_tie(unit_square):
  smt = steiner4.solve_smt4(unit_square)
  checks = identity_checks(unit_square, smt)
  assert all(c.passed for c in checks)
  assert "junction_edge_tie" in {c.name for c in checks}


def test_identity_checks_catch_corrupted_points(reference_quad):
  smt = steiner4.solve_smt4(reference_quad)
  checks = identity_checks(reference_quad, smt, points=(Point(2.6, 5.3), Point(5.6, 5.9)))
  failed = {c.name for c in checks if not c.passed}
  assert "T12_34.edge_sum" in failed
  assert "T12_34.stationarity" in failed
  assert not any(name.startswith("T41_23") for name in failed)


def test_diagonal_criterion_without_any_tree():
  q = quad_of((0, 0), (6, -1), (10, 0), (4, 1))
  smt = steiner4.solve_smt4(q)
  assert not smt.has_full_tree
  checks = {c.name: c for c in identity_checks(q, smt)}
  assert set(checks) == {"T12_34.diagonal_criterion", "T41_23.diagonal_criterion"}
  assert all(c.passed for c in checks.values())


def test_diagonal_criterion_covers_negative_deltas(rng):
  negative = 0
  for q in oracle.random_quads(rng, 300):
    checks = {c.name: c for c in diagonal_criterion_checks(q)}
    assert all(c.passed for c in checks.values())
    assert "T12_34.diagonal_criterion" in checks
    if steiner4.scratch(steiner4.alternate_quad(q)).delta < -1e-6 * q.scale ** 2:
      assert "T41_23.diagonal_criterion" in checks
      negative += 1
  assert negative > 0


def test_random_identity_suite():
  summary = oracle.run_random_suite(1000, seed=1234)
  assert summary.quads == 1000
  assert summary.trees >= 1000
  assert summary.passed, summary.failures[:10]
