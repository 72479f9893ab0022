import math
import numpy as np


SQRT3 = math.sqrt(3.)
TWO_PI_3 = 2. * math.pi / 3.


def scale_of(points):
  """Largest pairwise distance of a point collection (0 for fewer than two points)."""
  points = list(points)
  scale = 0.
  for i, a in enumerate(points):
    for b in points[i + 1:]:
      scale = max(scale, math.hypot(a.x - b.x, a.y - b.y))
  return scale


def rotate_xy(x, y, angle):
  c, s = math.cos(angle), math.sin(angle)
  return c * x - s * y, s * x + c * y


def random_convex_xy(rng, n_points=4, min_gap=0.35, max_stretch=2.0, log_scale=2.0):
  """
  Vertices of a random strictly convex polygon, counterclockwise.

  PARAMS
  ------
  rng: numpy Generator
  n_points: number of vertices
  min_gap: smallest angular gap (radians) between consecutive vertices on the
    generating ellipse
  max_stretch: bound of the random anisotropic stretch along x
  log_scale: overall size is 10**U(-log_scale, log_scale)

  The polygon is an ellipse sample mapped by a rotation, a positive scaling and
  a shift, so orientation and convexity survive the transform.
  """
  while True:
    theta = np.sort(rng.uniform(0., 2. * math.pi, n_points))
    gaps = np.diff(np.concatenate([theta, theta[:1] + 2. * math.pi]))
    if gaps.min() >= min_gap:
      break
  stretch = math.exp(rng.uniform(-math.log(max_stretch), math.log(max_stretch)))
  size = 10. ** rng.uniform(-log_scale, log_scale)
  angle = rng.uniform(0., 2. * math.pi)
  shift = rng.uniform(-10., 10., 2) * size

  xy = np.stack([stretch * np.cos(theta), np.sin(theta)], axis=1)
  c, s = math.cos(angle), math.sin(angle)
  xy = xy @ np.array([[c, s], [-s, c]])
  return xy * size + shift


def rand_placement_xy(rng, center_xy, radius, n_points):
  """Uniform samples in a disc; used to scatter trial junctions around a polygon."""
  r = radius * np.sqrt(rng.uniform(0., 1., n_points))
  phi = rng.uniform(0., 2. * math.pi, n_points)
  return np.stack([center_xy[0] + r * np.cos(phi), center_xy[1] + r * np.sin(phi)], axis=1)
