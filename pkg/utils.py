import os
import sys
import enum
import json
import math
import logging
import dataclasses
from dataclasses import dataclass
from typing import Any, Optional, Tuple

from geom_core import GeometryError, Point

logging.basicConfig(stream=sys.stderr)
logger = logging


class InstanceError(GeometryError):
  """Malformed instance file or inline coordinates."""


def get_hparams_from_file(config_path):
  with open(config_path, "r") as f:
    data = f.read()
  config = json.loads(data)

  hparams = HParams(**config)
  return hparams


def get_logger(name, log_dir=None, filename="steiner.log", level=logging.INFO):
  global logger
  logger = logging.getLogger(name)
  logger.setLevel(level)

  if log_dir is not None:
    formatter = logging.Formatter("%(asctime)s\t%(name)s\t%(levelname)s\t%(message)s")
    if not os.path.exists(log_dir):
      os.makedirs(log_dir)
    h = logging.FileHandler(os.path.join(log_dir, filename))
    h.setLevel(logging.DEBUG)
    h.setFormatter(formatter)
    logger.addHandler(h)
  return logger


def parse_point(text):
  """'x,y' -> Point."""
  parts = text.split(',')
  if len(parts) != 2:
    raise InstanceError("expected a coordinate pair 'x,y', got {!r}".format(text))
  try:
    return Point(float(parts[0]), float(parts[1]))
  except ValueError as e:
    raise InstanceError("bad coordinate pair {!r}: {}".format(text, e)) from e


def _point(pair):
  if not isinstance(pair, (list, tuple)) or len(pair) != 2:
    raise InstanceError("expected a coordinate pair [x, y], got {!r}".format(pair))
  try:
    return Point(float(pair[0]), float(pair[1]))
  except (TypeError, ValueError) as e:
    raise InstanceError("bad coordinate pair {!r}: {}".format(pair, e)) from e


@dataclass(frozen=True)
class InstanceFile:
  terminals: Tuple[Point, ...]
  labels: Optional[Tuple[str, ...]] = None
  tolerance: Optional[dict] = None
  path: Tuple[Point, ...] = ()
  samples: Optional[int] = None

  def __post_init__(self):
    if len(self.terminals) not in (3, 4):
      raise InstanceError("an instance has 3 or 4 terminals, got {}".format(len(self.terminals)))
    if self.labels is not None and len(self.labels) != len(self.terminals):
      raise InstanceError("{} labels for {} terminals".format(len(self.labels), len(self.terminals)))
    if self.samples is not None and self.samples < 1:
      raise InstanceError("samples must be at least 1, got {}".format(self.samples))

  @classmethod
  def from_dict(cls, data):
    if not isinstance(data, dict) or 'terminals' not in data:
      raise InstanceError("instance must be an object with a 'terminals' list")
    labels = data.get('labels')
    samples = data.get('samples')
    return cls(
      terminals=tuple(_point(p) for p in data['terminals']),
      labels=None if labels is None else tuple(str(s) for s in labels),
      tolerance=data.get('tolerance'),
      path=tuple(_point(p) for p in data.get('path', ())),
      samples=None if samples is None else int(samples))


def load_instance(filename):
  try:
    with open(filename, "r") as f:
      data = json.load(f)
  except (OSError, json.JSONDecodeError) as e:
    raise InstanceError("cannot read instance {}: {}".format(filename, e)) from e
  return InstanceFile.from_dict(data)


def to_jsonable(obj):
  """Plain JSON structure with dataclass fields kept in declaration order."""
  if isinstance(obj, Point):
    return [obj.x, obj.y]
  if isinstance(obj, enum.Enum):
    return obj.value
  if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
    return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
  if isinstance(obj, HParams):
    return {k: to_jsonable(v) for k, v in obj.items()}
  if isinstance(obj, dict):
    return {str(k): to_jsonable(v) for k, v in obj.items()}
  if isinstance(obj, (list, tuple)):
    return [to_jsonable(v) for v in obj]
  if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
    return obj
  if isinstance(obj, float) or hasattr(obj, '__float__'):
    v = float(obj)
    # JSON has no infinities; a non-finite number is reported as null
    return v if math.isfinite(v) else None
  raise TypeError("cannot serialize {!r}".format(type(obj)))


@dataclass
class SolutionReport:
  command: str
  instance: Any
  solution: Any
  oracle: Any = None
  checks: Any = None
  timings: Any = None
  status: str = "ok"

  def to_json(self):
    return json.dumps(to_jsonable(self), indent=2, allow_nan=False) + "\n"


def dump_report(report, filename=None):
  text = report.to_json()
  if filename is None:
    sys.stdout.write(text)
  else:
    with open(filename, "w") as f:
      f.write(text)
  return text


class HParams():
  def __init__(self, **kwargs):
    for k, v in kwargs.items():
      if type(v) == dict:
        v = HParams(**v)
      self[k] = v

  def keys(self):
    return self.__dict__.keys()

  def items(self):
    return self.__dict__.items()

  def values(self):
    return self.__dict__.values()

  def get(self, key, default=None):
    return self.__dict__.get(key, default)

  def to_dict(self):
    return {k: v.to_dict() if isinstance(v, HParams) else v for k, v in self.items()}

  def __len__(self):
    return len(self.__dict__)

  def __getitem__(self, key):
    return getattr(self, key)

  def __setitem__(self, key, value):
    return setattr(self, key, value)

  def __contains__(self, key):
    return key in self.__dict__

  def __repr__(self):
    return self.__dict__.__repr__()
