"""
Command-line front end.

  python cli.py solve3 -i instances/triangle_reference.json --svg tri.svg
  python cli.py solve4 2,6 1,1 9,2 6,7 --verify
  python cli.py loci -i instances/loci_reference.json --svg loci.svg
  python cli.py verify -i instances/unit_square.json
  python cli.py verify --random 1000 --seed 1234

Exit codes: 0 success, 2 invalid input, 3 no full Steiner tree, 4 failed verification.
"""
import os
import sys
import time
import argparse
import logging

import utils
import fermat3
import oracle
import steiner4
import svg
from geom_core import (
  GeometryError, Point, Tolerance, diagonal_angle, pairwise_distance, validate_quad, validate_triangle,
)
from utils import InstanceError, InstanceFile, SolutionReport

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_FULL_TREE = 3
EXIT_VERIFY_FAILED = 4

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "configs", "default.json")


def get_parser():
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument('-c', '--config', type=str, default=DEFAULT_CONFIG,
                      help='JSON file for configuration')
  common.add_argument('-i', '--instance', type=str, default=None,
                      help='JSON instance file')
  common.add_argument('points', nargs='*', metavar='X,Y',
                      help='inline terminals, used when no instance file is given')
  common.add_argument('--tol', type=float, default=None,
                      help='override tolerance.eps_geom')
  common.add_argument('--json', type=str, default=None, metavar='PATH',
                      help='write the report to PATH instead of stdout')
  common.add_argument('--timings', action='store_true',
                      help='include wall-clock timings in the report')
  common.add_argument('-v', '--verbose', action='store_true')
  common.add_argument('--log-dir', type=str, default=None,
                      help='also log to <log-dir>/steiner.log')

  parser = argparse.ArgumentParser(prog='cli.py', description='Closed-form Steiner trees for 3 and 4 terminals')
  sub = parser.add_subparsers(dest='command', required=True)

  p = sub.add_parser('solve3', parents=[common], help='three-terminal Steiner point')
  p.add_argument('--svg', type=str, default=None, metavar='PATH')
  p.add_argument('--verify', action='store_true', help='cross-check with the numeric oracle')

  p = sub.add_parser('solve4', parents=[common], help='four-terminal full Steiner trees')
  p.add_argument('--svg', type=str, default=None, metavar='PATH')
  p.add_argument('--verify', action='store_true', help='cross-check with the numeric oracle')
  p.add_argument('--normalize', action='store_true',
                 help='reorder terminals into counterclockwise convex order')

  p = sub.add_parser('loci', parents=[common], help='junction loci while P3 wanders; terminals are P1 P2 P4')
  p.add_argument('--svg', type=str, default=None, metavar='PATH')
  p.add_argument('--path', nargs='+', default=None, metavar='X,Y', help='polyline of P3 positions')
  p.add_argument('--samples', type=int, default=None)

  p = sub.add_parser('verify', parents=[common], help='identity suite and oracle agreement')
  p.add_argument('--check-point', type=str, default=None, metavar='X1,Y1,X2,Y2',
                 help='junctions to check in place of the computed ones')
  p.add_argument('--random', type=int, default=None, metavar='N',
                 help='run the suite on N seeded random quads')
  p.add_argument('--seed', type=int, default=None)
  return parser


def _instance(args, n_terminals):
  if args.instance is not None:
    inst = utils.load_instance(args.instance)
  elif args.points:
    inst = InstanceFile(tuple(utils.parse_point(s) for s in args.points))
  else:
    raise InstanceError("give an instance file (-i) or inline terminals")
  if len(inst.terminals) != n_terminals:
    raise InstanceError("{} needs {} terminals, got {}".format(args.command, n_terminals, len(inst.terminals)))
  return inst


def _tolerance(hps, args, inst=None):
  overrides = dict(inst.tolerance or {}) if inst is not None else {}
  if args.tol is not None:
    overrides['eps_geom'] = args.tol
  return Tolerance.from_hparams(hps.tolerance, **overrides)


def _echo(inst, tol, **extra):
  echo = {'terminals': inst.terminals, 'labels': inst.labels, 'tolerance': tol}
  echo.update(extra)
  return echo


def cmd_solve3(args, hps, timer):
  inst = _instance(args, 3)
  tol = _tolerance(hps, args, inst)
  t = validate_triangle(*inst.terminals, tol=tol)
  sol = timer('solve', fermat3.solve3, t, tol)

  check = None
  if args.verify:
    cfg = oracle.OracleConfig.from_hparams(hps.oracle, tol)
    num = timer('oracle', oracle.solve_fermat_numeric, t, cfg)
    limits = oracle.VerifyLimits.from_hparams(hps.verify)
    at = sol.steiner if sol.steiner is not None else t.points[sol.vertex - 1]
    point_error = pairwise_distance(num.steiner, at)
    length_error = abs(num.objective - sol.length)
    check = {
      'result': num,
      'length_error': length_error,
      'point_error': point_error,
      'agreed': (num.converged and length_error <= limits.agreement_tol * t.scale
                 and point_error <= limits.point_tol * t.scale),
    }

  if args.svg:
    svg.draw_solution3(t, sol, hps.svg.to_dict()).to_file(args.svg)
  return EXIT_OK, SolutionReport('solve3', _echo(inst, tol), sol, oracle=check)


def cmd_solve4(args, hps, timer):
  inst = _instance(args, 4)
  tol = _tolerance(hps, args, inst)
  if args.normalize:
    q, perm = steiner4.normalize_quad(inst.terminals, tol)
  else:
    q, perm = validate_quad(*inst.terminals, tol=tol), (0, 1, 2, 3)
  smt = timer('solve', steiner4.solve_smt4, q, tol)

  alt_q = steiner4.alternate_quad(q)
  solution = {
    'permutation': perm,
    'quad': q,
    'psi': diagonal_angle(q),
    'scratch': steiner4.scratch(q),
    'alternate_scratch': steiner4.scratch(alt_q),
    'result': smt,
  }

  check = None
  if args.verify and smt.has_full_tree:
    cfg = oracle.OracleConfig.from_hparams(hps.oracle, tol)
    limits = oracle.VerifyLimits.from_hparams(hps.verify)
    check = []
    for tree in (smt.chosen, smt.alternate):
      if tree is None:
        continue
      fq, s1, s2 = oracle.frame_of(q, tree)
      num = timer('oracle_' + tree.topology.value, oracle.solve_numeric, fq, cfg)
      agreement = oracle.agreement_checks(fq, tree.topology, s1, s2, tree.length, num, limits)
      check.append({
        'topology': tree.topology,
        'result': num,
        'checks': agreement,
        'agreed': all(c.passed for c in agreement),
      })

  if args.svg:
    svg.draw_smt4(q, smt, hps.svg.to_dict()).to_file(args.svg)

  report = SolutionReport('solve4', _echo(inst, tol), solution, oracle=check)
  if not smt.has_full_tree:
    report.status = "no_full_tree"
    return EXIT_NO_FULL_TREE, report
  return EXIT_OK, report


def cmd_loci(args, hps, timer):
  inst = _instance(args, 3)
  tol = _tolerance(hps, args, inst)
  p1, p2, p4 = inst.terminals
  if args.path is not None:
    path = [utils.parse_point(s) for s in args.path]
  else:
    path = list(inst.path)
  if not path:
    raise InstanceError("loci needs a path for P3 (--path or 'path' in the instance)")
  samples = next(s for s in (args.samples, inst.samples, int(hps.loci.samples)) if s is not None)
  if samples < 1:
    raise InstanceError("loci needs at least one sample, got {}".format(samples))

  locus = steiner4.wandering_loci(p1, p2, p4, tol)
  positions = steiner4.sample_polyline(path, samples)
  rows = timer('sweep', steiner4.loci_sweep, p1, p2, p4, positions, tol)
  checks = oracle.locus_checks(locus, p2, p4, oracle.VerifyLimits.from_hparams(hps.verify))

  if args.svg:
    svg.draw_loci(p1, p2, p4, locus, positions, rows, hps.svg.to_dict()).to_file(args.svg)
  echo = _echo(inst, tol, path=path, samples=samples)
  return EXIT_OK, SolutionReport('loci', echo, {'locus': locus, 'rows': rows}, checks=checks)


def _check_points(text):
  parts = text.split(',')
  if len(parts) != 4:
    raise InstanceError("--check-point expects x1,y1,x2,y2, got {!r}".format(text))
  try:
    x1, y1, x2, y2 = (float(v) for v in parts)
  except ValueError as e:
    raise InstanceError("bad --check-point {!r}: {}".format(text, e)) from e
  return Point(x1, y1), Point(x2, y2)


def cmd_verify(args, hps, timer):
  cfg_tol = _tolerance(hps, args)
  limits = oracle.VerifyLimits.from_hparams(hps.verify)

  if args.random is not None:
    if args.random < 1:
      raise InstanceError("--random needs a positive count")
    seed = int(hps.random.seed) if args.seed is None else args.seed
    cfg = oracle.OracleConfig.from_hparams(hps.oracle, cfg_tol)
    summary = timer('suite', oracle.run_random_suite, args.random, seed,
                    float(hps.random.min_delta), limits, cfg, cfg_tol)
    report = SolutionReport('verify', {'random': args.random, 'seed': seed, 'tolerance': cfg_tol},
                            None, checks=summary)
    if not summary.passed:
      report.status = "verification_failed"
      return EXIT_VERIFY_FAILED, report
    return EXIT_OK, report

  inst = _instance(args, 4)
  tol = _tolerance(hps, args, inst)
  q = validate_quad(*inst.terminals, tol=tol)
  smt = timer('solve', steiner4.solve_smt4, q, tol)
  points = _check_points(args.check_point) if args.check_point else None
  report = SolutionReport('verify', _echo(inst, tol, check_point=points), smt)
  if not smt.has_full_tree:
    report.status = "no_full_tree"
    return EXIT_NO_FULL_TREE, report

  cfg = oracle.OracleConfig.from_hparams(hps.oracle, tol)
  checks = timer('checks', oracle.identity_checks, q, smt, limits, cfg, points)
  report.checks = checks
  failed = [c.name for c in checks if not c.passed]
  if failed:
    utils.logger.warning("failed identities: %s", ", ".join(failed))
    report.status = "verification_failed"
    return EXIT_VERIFY_FAILED, report
  return EXIT_OK, report


COMMANDS = {
  'solve3': cmd_solve3,
  'solve4': cmd_solve4,
  'loci': cmd_loci,
  'verify': cmd_verify,
}


class Timer:
  def __init__(self, logger):
    self.logger = logger
    self.timings = {}

  def __call__(self, name, fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    self.timings[name] = time.perf_counter() - start
    self.logger.debug("%s took %.6f s", name, self.timings[name])
    return out


def main(argv=None):
  parser = get_parser()
  try:
    args = parser.parse_args(argv)
  except SystemExit as e:
    return EXIT_INVALID if e.code else EXIT_OK

  level = logging.DEBUG if args.verbose else logging.INFO
  logging.getLogger().setLevel(logging.DEBUG if args.verbose else logging.WARNING)
  logger = utils.get_logger('steiner', args.log_dir, level=level)

  try:
    hps = utils.get_hparams_from_file(args.config)
  except (OSError, ValueError) as e:
    logger.error("cannot load config %s: %s", args.config, e)
    return EXIT_INVALID

  timer = Timer(logger)
  try:
    code, report = COMMANDS[args.command](args, hps, timer)
  except GeometryError as e:
    logger.error("%s: %s", type(e).__name__, e)
    return EXIT_INVALID
  except ValueError as e:
    logger.error("invalid input: %s", e)
    return EXIT_INVALID

  if args.timings:
    report.timings = timer.timings
  utils.dump_report(report, args.json)
  return code


if __name__ == "__main__":
  sys.exit(main())
