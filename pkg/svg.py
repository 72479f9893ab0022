"""SVG 1.1 figures of the constructions: terminals, trees, circles and loci."""
import logging

import steiner4
from fermat3 import SolutionKind, construction_circle, steiner_circle
from steiner4 import Topology


logger = logging.getLogger(__name__)

DEFAULT_STYLE = {
  'width': 640,
  'height': 640,
  'margin': 32,
  'stroke_width': 1.5,
  'point_radius': 3.5,
  'font_size': 12,
  'colors': {
    'terminal': 'black',
    'steiner': 'crimson',
    'tree': 'crimson',
    'alternate': 'steelblue',
    'polygon': 'gray',
    'circle': 'darkgreen',
    'construction': 'orange',
    'path': 'gray',
    'trail': 'purple',
  },
}


def _fmt(v):
  s = "{:.6f}".format(v)
  return "0.000000" if s == "-0.000000" else s


def _escape(text):
  return str(text).replace('&', '&amp;').replace('<', '&lt;').replace('>', '&gt;')


class SvgFigure:
  """
  Accumulates SVG elements in world coordinates; y grows upwards in the world
  and downwards on screen. Every element carries a unique id.
  """

  def __init__(self, bounds, style=None):
    style = dict(DEFAULT_STYLE, **(style or {}))
    self.width = float(style['width'])
    self.height = float(style['height'])
    self.margin = float(style['margin'])
    self.stroke_width = float(style['stroke_width'])
    self.point_radius = float(style['point_radius'])
    self.font_size = float(style['font_size'])
    self.colors = dict(DEFAULT_STYLE['colors'], **style.get('colors', {}))

    xmin, ymin, xmax, ymax = bounds
    dx, dy = xmax - xmin, ymax - ymin
    span = max(dx, dy, 1e-300)
    kx = (self.width - 2. * self.margin) / max(dx, span * 1e-6)
    ky = (self.height - 2. * self.margin) / max(dy, span * 1e-6)
    self._k = min(kx, ky)
    self._x0, self._y0 = xmin, ymin
    self._elements = []
    self._ids = set()

  def __len__(self):
    return len(self._elements)

  @property
  def ids(self):
    return [i for i, _ in self._elements]

  def _sx(self, x):
    return self.margin + (x - self._x0) * self._k

  def _sy(self, y):
    return self.height - self.margin - (y - self._y0) * self._k

  def _add(self, element_id, body):
    if element_id in self._ids:
      raise ValueError("duplicate svg element id {}".format(element_id))
    self._ids.add(element_id)
    self._elements.append((element_id, body.format(id=element_id)))

  def line(self, element_id, a, b, color, dashed=False):
    dash = ' stroke-dasharray="6 4"' if dashed else ''
    self._add(element_id, '<line id="{{id}}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"{} />'.format(
      _fmt(self._sx(a.x)), _fmt(self._sy(a.y)), _fmt(self._sx(b.x)), _fmt(self._sy(b.y)),
      color, _fmt(self.stroke_width), dash))

  def point(self, element_id, p, color, label=None):
    body = '<circle id="{{id}}" cx="{}" cy="{}" r="{}" fill="{}" />'.format(
      _fmt(self._sx(p.x)), _fmt(self._sy(p.y)), _fmt(self.point_radius), color)
    if label is not None:
      body += '<text x="{}" y="{}" font-family="sans-serif" font-size="{}" fill="{}">{}</text>'.format(
        _fmt(self._sx(p.x) + 2. * self.point_radius), _fmt(self._sy(p.y) - 2. * self.point_radius),
        _fmt(self.font_size), color, _escape(label))
    self._add(element_id, body)

  def circle(self, element_id, c, color, dashed=False):
    dash = ' stroke-dasharray="6 4"' if dashed else ''
    self._add(element_id, '<circle id="{{id}}" cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="{}"{} />'.format(
      _fmt(self._sx(c.center.x)), _fmt(self._sy(c.center.y)), _fmt(c.radius * self._k),
      color, _fmt(self.stroke_width), dash))

  def polyline(self, element_id, points, color, closed=False, dashed=False):
    tag = 'polygon' if closed else 'polyline'
    dash = ' stroke-dasharray="6 4"' if dashed else ''
    coords = " ".join("{},{}".format(_fmt(self._sx(p.x)), _fmt(self._sy(p.y))) for p in points)
    self._add(element_id, '<{} id="{{id}}" points="{}" fill="none" stroke="{}" stroke-width="{}"{} />'.format(
      tag, coords, color, _fmt(self.stroke_width), dash))

  def __str__(self):
    body = "\n".join("  " + e for _, e in self._elements)
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
            '{body}\n</svg>\n').format(w=_fmt(self.width), h=_fmt(self.height), body=body)

  def to_file(self, filename):
    with open(filename, 'w') as f:
      f.write(str(self))
    logger.info("wrote %d svg elements to %s", len(self), filename)


def _bounds(points, circles=()):
  xs = [p.x for p in points]
  ys = [p.y for p in points]
  for c in circles:
    xs += [c.center.x - c.radius, c.center.x + c.radius]
    ys += [c.center.y - c.radius, c.center.y + c.radius]
  return min(xs), min(ys), max(xs), max(ys)


def draw_solution3(t, sol, style=None):
  """Terminals, tree edges, the construction circle on P1P2 and its apex Q1."""
  circle, q1 = construction_circle(t)
  pts = list(t.points) + [q1] + ([sol.steiner] if sol.steiner is not None else [])
  fig = SvgFigure(_bounds(pts, [circle]), style)
  colors = fig.colors

  fig.circle("circle-c", circle, colors['circle'], dashed=True)
  fig.point("point-Q1", q1, colors['construction'], label="Q1")
  names = ('P1', 'P2', 'P3')
  if sol.kind is SolutionKind.INTERIOR:
    fig.line("construction-Q1-P3", q1, t.p3, colors['construction'], dashed=True)
    for name, p in zip(names, t.points):
      fig.line("edge-S-" + name, sol.steiner, p, colors['tree'])
    fig.point("steiner-S", sol.steiner, colors['steiner'], label="S")
  else:
    j = sol.vertex - 1
    for i, name in enumerate(names):
      if i != j:
        fig.line("edge-{}-{}".format(names[j], name), t.points[j], t.points[i], colors['tree'])
  for name, p in zip(names, t.points):
    fig.point("terminal-" + name, p, colors['terminal'], label=name)
  return fig


def _frame_circles(q, topology):
  fq = q if topology is Topology.T12_34 else steiner4.alternate_quad(q)
  c1, q1 = steiner_circle(fq.p1, fq.p2)
  c2, q2 = steiner_circle(fq.p3, fq.p4)
  return (c1, q1), (c2, q2)


def draw_smt4(q, smt, style=None):
  """Quad outline, chosen tree solid, alternate dashed, Q-points and their circles per tree."""
  trees = [t for t in (smt.chosen, smt.alternate) if t is not None]
  pts = list(q.points)
  circles = []
  for tree in trees:
    pts += [tree.s1, tree.s2]
    for c, apex in _frame_circles(q, tree.topology):
      circles.append(c)
      pts.append(apex)
  fig = SvgFigure(_bounds(pts, circles), style)
  colors = fig.colors

  fig.polyline("quad", q.points, colors['polygon'], closed=True)
  where = {'P1': q.p1, 'P2': q.p2, 'P3': q.p3, 'P4': q.p4}
  for tree in trees:
    tag = tree.topology.value
    alternate = tree is not smt.chosen
    color = colors['alternate'] if alternate else colors['tree']
    (c1, q1), (c2, q2) = _frame_circles(q, tree.topology)
    fig.circle("circle-{}-1".format(tag), c1, colors['circle'], dashed=True)
    fig.circle("circle-{}-2".format(tag), c2, colors['circle'], dashed=True)
    fig.line("construction-{}-Q1-Q2".format(tag), q1, q2, colors['construction'], dashed=True)
    fig.point("point-{}-Q1".format(tag), q1, colors['construction'], label="Q1")
    fig.point("point-{}-Q2".format(tag), q2, colors['construction'], label="Q2")

    junction = {'S1': tree.s1, 'S2': tree.s2}
    for a, b in steiner4.EDGE_LABELS[tree.topology]:
      pa = where.get(a, junction.get(a))
      pb = junction[b]
      fig.line("edge-{}-{}-{}".format(tag, a, b), pa, pb, color, dashed=alternate)
    fig.point("steiner-{}-S1".format(tag), tree.s1, color, label="S1")
    fig.point("steiner-{}-S2".format(tag), tree.s2, color, label="S2")
  for name, p in where.items():
    fig.point("terminal-" + name, p, colors['terminal'], label=name)
  return fig


def draw_loci(p1, p2, p4, locus, path, rows, style=None):
  """Fixed terminals, both circles, the point I, the path of P3 and the junction trails."""
  trail1 = [r.tree.s1 for r in rows if r.tree is not None]
  trail2 = [r.tree.s2 for r in rows if r.tree is not None]
  pts = [p1, p2, p4, locus.q1, locus.i_point] + list(path) + trail1 + trail2
  fig = SvgFigure(_bounds(pts, [locus.c_small, locus.c_hat]), style)
  colors = fig.colors

  fig.circle("circle-c", locus.c_small, colors['circle'], dashed=True)
  fig.circle("circle-c-hat", locus.c_hat, colors['circle'], dashed=True)
  fig.line("construction-P2-P4", p2, p4, colors['construction'], dashed=True)
  if len(path) > 1:
    fig.polyline("path-P3", path, colors['path'], dashed=True)
  if len(trail1) > 1:
    fig.polyline("trail-S1", trail1, colors['trail'])
    fig.polyline("trail-S2", trail2, colors['trail'])
  fig.point("point-Q1", locus.q1, colors['construction'], label="Q1")
  fig.point("point-I", locus.i_point, colors['construction'], label="I")
  for name, p in (('P1', p1), ('P2', p2), ('P4', p4)):
    fig.point("terminal-" + name, p, colors['terminal'], label=name)
  return fig
