import os
import sys
import math

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
  sys.path.insert(0, ROOT)

import utils
from geom_core import Point, validate_quad, validate_triangle

SQRT3 = math.sqrt(3.)


def quad_of(*pairs):
  return validate_quad(*(Point(x, y) for x, y in pairs))


def triangle_of(*pairs):
  return validate_triangle(*(Point(x, y) for x, y in pairs))


def instance_path(name):
  return os.path.join(ROOT, "instances", name)


@pytest.fixture
def hps():
  return utils.get_hparams_from_file(os.path.join(ROOT, "configs", "default.json"))


@pytest.fixture
def rng():
  return np.random.default_rng(20140517)


@pytest.fixture
def reference_quad():
  return quad_of((2, 6), (1, 1), (9, 2), (6, 7))


@pytest.fixture
def orthogonal_quad():
  return quad_of((1, 6), (2, 1), (6, 1), (8, 7))


@pytest.fixture
def unit_square():
  return quad_of((0, 0), (1, 0), (1, 1), (0, 1))


@pytest.fixture
def reference_triangle():
  return triangle_of((4, 4), (2, 1), (7, 1))
