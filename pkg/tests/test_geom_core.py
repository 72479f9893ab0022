import math
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import commons
from geom_core import (
  CoincidentPoints,
  Degenerate,
  GeometryError,
  NonFinite,
  NotCCW,
  NotConvex,
  Point,
  Quad,
  Tolerance,
  Triangle,
  angle_at,
  diagonal_angle,
  pairwise_distance,
  scale,
  signed_area2,
  validate_quad,
  validate_triangle,
)


def test_point_rejects_non_finite():
  with pytest.raises(NonFinite):
    Point(float('nan'), 0.)
  with pytest.raises(NonFinite):
    Point(0., float('inf'))
  assert issubclass(NonFinite, ValueError)


def test_point_arithmetic():
  a, b = Point(1, 2), Point(4, 6)
  assert (b - a).norm() == 5.
  assert a + b == Point(5, 8)
  assert 2 * a == a * 2 == Point(2, 4)
  assert Point.from_pair([3, 4]).as_tuple() == (3., 4.)
  with pytest.raises(GeometryError):
    Point.from_pair([1, 2, 3])


def test_pairwise_distance():
  assert pairwise_distance(Point(0, 0), Point(3, 4)) == 5.
  assert pairwise_distance(Point(1, 1), Point(1, 1)) == 0.


def test_signed_area2_orientation():
  a, b, c = Point(0, 0), Point(1, 0), Point(0, 1)
  assert signed_area2(a, b, c) == 1.
  assert signed_area2(a, c, b) == -1.
  assert signed_area2(a, b, Point(2, 0)) == 0.


def test_scale_and_thresholds():
  pts = (Point(0, 0), Point(3, 0), Point(0, 4))
  assert scale(pts) == 5.
  assert scale(pts[:1]) == 0.
  tol = Tolerance(eps_geom=1e-6, eps_solve=1e-9)
  assert tol.length_threshold(5.) == pytest.approx(5e-6)
  assert tol.area_threshold(5.) == pytest.approx(25e-6)


@pytest.mark.parametrize("eps_geom, eps_solve", [(0., 1e-12), (1e-9, 1e-6), (1., 1e-12), (1e-9, 0.)])
def test_tolerance_rejects_bad_ranges(eps_geom, eps_solve):
  with pytest.raises(ValueError):
    Tolerance(eps_geom=eps_geom, eps_solve=eps_solve)


def test_tolerance_from_hparams(hps):
  tol = Tolerance.from_hparams(hps.tolerance)
  assert tol == Tolerance()
  tol = Tolerance.from_hparams(hps.tolerance, eps_geom=1e-7, eps_solve=None)
  assert tol.eps_geom == 1e-7 and tol.eps_solve == 1e-12


def test_angle_at():
  assert angle_at(Point(0, 0), Point(1, 0), Point(0, 1)) == pytest.approx(math.pi / 2.)
  assert angle_at(Point(0, 0), Point(1, 0), Point(-1, 0)) == pytest.approx(math.pi)


def test_validate_triangle():
  t = validate_triangle(Point(0, 0), Point(1, 0), Point(0, 1))
  assert t.scale == pytest.approx(math.sqrt(2.))
  with pytest.raises(Degenerate):
    validate_triangle(Point(0, 0), Point(1, 0), Point(2, 0))
  with pytest.raises(Degenerate):
    validate_triangle(Point(1, 1), Point(1, 1), Point(1, 1))


def test_validate_quad_reference(reference_quad):
  assert reference_quad.scale == pytest.approx(math.sqrt(65.))


def test_validate_quad_clockwise():
  with pytest.raises(NotCCW):
    validate_quad(Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0))


def test_validate_quad_non_convex():
  with pytest.raises(NotConvex):
    validate_quad(Point(0, 0), Point(4, 0), Point(1, 1), Point(0, 4))
  with pytest.raises(NotConvex):
    validate_quad(Point(0, 0), Point(1, 1), Point(1, 0), Point(0, 1))


def test_validate_quad_collinear_triple():
  with pytest.raises(Degenerate):
    validate_quad(Point(0, 0), Point(1, 0), Point(2, 0), Point(1, 1))
  with pytest.raises(Degenerate):
    validate_quad(Point(0, 0), Point(0, 0), Point(1, 1), Point(0, 1))


def test_validate_quad_accepts_exactly_the_cyclic_rotations():
  pts = (Point(2, 6), Point(1, 1), Point(9, 2), Point(6, 7))
  accepted = []
  for perm in itertools.permutations(range(4)):
    try:
      validate_quad(*(pts[i] for i in perm))
    except GeometryError:
      continue
    accepted.append(perm)
  assert sorted(accepted) == sorted([(0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2)])


def test_rotated_relabels(reference_quad):
  r = reference_quad.rotated(1)
  assert r.points == reference_quad.points[1:] + reference_quad.points[:1]
  assert reference_quad.rotated(4) == reference_quad


def test_diagonal_angle(reference_quad, orthogonal_quad, unit_square):
  # <P1P3, P2P4> = 11 for the reference quad
  assert diagonal_angle(reference_quad) == pytest.approx(math.acos(11. / math.sqrt(65. * 61.)), abs=1e-12)
  assert diagonal_angle(orthogonal_quad) == pytest.approx(math.pi / 2., abs=1e-12)
  assert diagonal_angle(unit_square) == pytest.approx(math.pi / 2., abs=1e-12)


def test_coincident_points_is_geometry_error():
  assert issubclass(CoincidentPoints, GeometryError)


def test_random_convex_xy_is_valid(rng):
  for _ in range(200):
    xy = commons.random_convex_xy(rng)
    validate_quad(*(Point(x, y) for x, y in xy))


def test_triangle_rejects_collinear_terminals():
  with pytest.raises(Degenerate):
    Triangle(Point(0, 0), Point(1, 0), Point(2, 0))
  with pytest.raises(Degenerate):
    Triangle(Point(3, 3), Point(3, 3), Point(5, 1))
  assert Triangle(Point(0, 0), Point(0, 1), Point(1, 0)).scale == pytest.approx(math.sqrt(2.))


def test_quad_enforces_strict_ccw_convexity(reference_quad):
  with pytest.raises(NotCCW):
    Quad(Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0))
  with pytest.raises(NotConvex):
    Quad(Point(0, 0), Point(4, 0), Point(1, 1), Point(0, 4))
  with pytest.raises(Degenerate):
    Quad(Point(0, 0), Point(1, 0), Point(2, 0), Point(1, 1))
  assert Quad(*reference_quad.points) == reference_quad


def test_tolerance_band_is_looser_than_construction():
  pts = (Point(0, 0), Point(1, 0), Point(2, 1e-12), Point(1, 1))
  Quad(*pts)
  with pytest.raises(Degenerate):
    validate_quad(*pts)


coords = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
points = st.builds(Point, coords, coords)
factors = st.floats(min_value=-2., max_value=2.).map(lambda e: 10. ** e)


@given(points, points, points)
def test_signed_area2_changes_sign_under_swaps(a, b, c):
  base = signed_area2(a, b, c)
  for swapped in ((b, a, c), (a, c, b), (c, b, a)):
    assert signed_area2(*swapped) == pytest.approx(-base, abs=1e-6)
  assert signed_area2(b, c, a) == pytest.approx(base, abs=1e-6)


@given(points, points, points, points)
def test_signed_area2_translation_invariant(a, b, c, shift):
  moved = [p + shift for p in (a, b, c)]
  assert signed_area2(*moved) == pytest.approx(signed_area2(a, b, c), abs=1e-6)


@given(points, points, points, factors)
def test_signed_area2_scales_quadratically(a, b, c, s):
  scaled = [s * p for p in (a, b, c)]
  assert signed_area2(*scaled) == pytest.approx(s * s * signed_area2(a, b, c), abs=1e-5 * s * s)


@given(points, points, points)
def test_signed_area2_negates_under_reflection(a, b, c):
  mirrored = [Point(-p.x, p.y) for p in (a, b, c)]
  assert signed_area2(*mirrored) == -signed_area2(a, b, c)


@given(points, points, points)
def test_triangle_inequality(a, b, c):
  ab, bc, ac = pairwise_distance(a, b), pairwise_distance(b, c), pairwise_distance(a, c)
  assert ac <= ab + bc + 1e-12 * (ab + bc + 1.)


@st.composite
def convex_quads(draw):
  seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
  xy = commons.random_convex_xy(np.random.default_rng(seed))
  return validate_quad(*(Point(x, y) for x, y in xy))


@settings(max_examples=100, deadline=None)
@given(convex_quads(),
       st.floats(min_value=0., max_value=2. * math.pi),
       factors,
       st.tuples(st.floats(min_value=-10., max_value=10.), st.floats(min_value=-10., max_value=10.)))
def test_diagonal_angle_similarity_invariant(q, angle, factor, shift):
  # shift in units of the quad size
  dx, dy = shift[0] * q.scale, shift[1] * q.scale
  pts = []
  for p in q.points:
    x, y = commons.rotate_xy(p.x, p.y, angle)
    pts.append(Point(factor * (x + dx), factor * (y + dy)))
  assert diagonal_angle(validate_quad(*pts)) == pytest.approx(diagonal_angle(q), abs=1e-9)
