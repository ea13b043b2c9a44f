from __future__ import division
from __future__ import print_function

import argparse
import logging
import os
import pprint
import sys

dir_path = os.path.dirname(os.path.realpath(__file__))
sys.path.append(dir_path)

from criteria import KINDS as CRITERIA_KINDS
from criteria import check_criterion, compute_margins, spec_from_cfg
from encircle import exterior_regions, find_crossings
from freq import FrequencyGrid, check_same_grid
from miscc.config import cfg, cfg_from_file
from miscc.datasets import FORMATS, load_response_csv
from miscc.errors import (MarginalCondition, OpenLoopRhpPoles, StabilityError,
                          UnresolvedZeroCrossing, UsageError)
from miscc.utils import output_path, save_bode_plot, save_nyquist_plot
from model import ScenarioSpec, build_scenario
from report import bode_frame, nyquist_frame, write_frame, write_report
from rhp_id import UNDETERMINED, census, identify_breakpoints, open_loop_rhp_poles
from verdict import (INDETERMINATE, MARGINAL, STABLE, UNSTABLE, SubsystemModel,
                     assess_stability, select_proper_ratio)

logger = logging.getLogger(__name__)

EXIT_CODES = {STABLE: 0, UNSTABLE: 1, MARGINAL: 2, INDETERMINATE: 2}
EXIT_USAGE = 3
COMMANDS = ('analyze', 'bode', 'nyquist', 'margins', 'criteria', 'identify-rhp', 'case-study')


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_args(argv=None):
    parser = _Parser(prog='main.py', description='Impedance-based stability analysis')
    sub = parser.add_subparsers(dest='command', metavar='{}'.format('|'.join(COMMANDS)))
    sub.required = True

    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument('--cfg', dest='cfg_file', help='optional config file', default=None, type=str)
        p.add_argument('--num', dest='num', type=str, default=None, help='response CSV of the first subsystem')
        p.add_argument('--den', dest='den', type=str, default=None, help='response CSV of the second subsystem')
        p.add_argument('--format', dest='fmt', choices=sorted(FORMATS), default='complex')
        p.add_argument('--kind', dest='kind', choices=['impedance', 'admittance'], default='impedance')
        p.add_argument('--force-orientation', dest='force_orientation', type=str, default=None,
                       help="'num', 'den' or a subsystem id to put on top of the ratio")
        p.add_argument('--scenario', dest='scenario', type=int, choices=[1, 2], default=None)
        p.add_argument('--ppd', dest='ppd', type=int, default=None)
        p.add_argument('--fmin', dest='fmin', type=float, default=None)
        p.add_argument('--fmax', dest='fmax', type=float, default=None)
        p.add_argument('--tol-deg', dest='tol_deg', type=float, default=None)
        p.add_argument('--out', dest='out', type=str, default=None, help='output file or directory')
        p.add_argument('--plot', dest='plot', type=str, default=None, help='SVG file for the Bode plot')
        if name == 'criteria':
            p.add_argument('--criterion', dest='criteria', action='append', choices=CRITERIA_KINDS,
                           default=None)
            p.add_argument('--gm-db', dest='gm_db', type=float, default=None)
            p.add_argument('--pm-deg', dest='pm_deg', type=float, default=None)
    return parser.parse_args(argv)


def _setup_logging():
    name = os.environ.get('STAB_LOG', 'WARNING').upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(level)


def _apply_args(args):
    if args.cfg_file is not None:
        cfg_from_file(args.cfg_file)
    if args.ppd is not None:
        if args.ppd < 1:
            raise UsageError("--ppd must be at least 1, got '{}'".format(args.ppd))
        cfg.FREQ.POINTS_PER_DECADE = args.ppd
    if args.fmin is not None:
        cfg.FREQ.F_MIN = args.fmin
    if args.fmax is not None:
        cfg.FREQ.F_MAX = args.fmax
    if args.tol_deg is not None:
        if not args.tol_deg > 0:
            raise UsageError("--tol-deg must be positive, got '{}'".format(args.tol_deg))
        cfg.TOL.DEG = args.tol_deg
    if args.scenario is not None:
        cfg.SCENARIO.ID = args.scenario
    if getattr(args, 'gm_db', None) is not None:
        cfg.CRITERIA.GM_DB = args.gm_db
    if getattr(args, 'pm_deg', None) is not None:
        cfg.CRITERIA.PM_DEG = args.pm_deg
    if not 0 < cfg.FREQ.F_MIN < cfg.FREQ.F_MAX:
        raise UsageError("Required 0 < fmin < fmax but {} and {} are given".format(
            cfg.FREQ.F_MIN, cfg.FREQ.F_MAX))
    logger.debug('Using config:\n%s', pprint.pformat(cfg))


#############################
def _id_of(path, other):
    stem = os.path.splitext(os.path.basename(path))[0]
    other = os.path.splitext(os.path.basename(other))[0] if other else None
    return stem if stem != other else path


def load_models(args):
    """The two subsystems: CSV files if given, the case-study scenario otherwise.

    Return:
        (a, b, force, valid_below_hz)
    """
    if args.num is None and args.den is None:
        spec = ScenarioSpec.from_cfg(args.scenario)
        models = build_scenario(spec)
        force = {'num': 'Y_to1', 'den': 'Y_to2'}.get(args.force_orientation, args.force_orientation)
        return models['Y_to1'], models['Y_to2'], force, spec.inverter1.fs / 2.0
    if args.num is None or args.den is None:
        raise UsageError("--num and --den go together")
    id_a, id_b = _id_of(args.num, args.den), _id_of(args.den, args.num)
    a = SubsystemModel(id_a, args.kind,
                       sampled=load_response_csv(args.num, args.fmt, args.kind, label=id_a))
    b = SubsystemModel(id_b, args.kind,
                       sampled=load_response_csv(args.den, args.fmt, args.kind, label=id_b))
    force = {'num': id_a, 'den': id_b}.get(args.force_orientation, args.force_orientation)
    return a, b, force, None


def _grid_for(a, b):
    if a.sampled is not None and b.sampled is not None:
        return check_same_grid(a.sampled, b.sampled)
    return FrequencyGrid().frequencies()


def oriented_bode(a, b, force):
    orientation = select_proper_ratio(a, b, force=force)
    num_m, den_m = (a, b) if orientation.numerator_id == a.id else (b, a)
    f = _grid_for(a, b)
    return orientation, num_m, den_m, num_m.bode_on(f), den_m.bode_on(f)


def _regions_and_crossings(b1, b2):
    regions = exterior_regions(b1, b2)
    try:
        return regions, find_crossings(b1, b2, regions, cfg.TOL.DEG)
    except (MarginalCondition, UnresolvedZeroCrossing) as exc:
        logger.warning('Crossings not classified: %s', exc)
        return regions, []


def _census(model, b):
    return census(model.exact if model.exact is not None else b)


def _emit(report, args, stem):
    path = output_path(args.out, stem, 'json')
    if path is not None:
        write_report(report, path)


#############################
def cmd_analyze(args):
    a, b, force, valid_below = load_models(args)
    grid = None if a.sampled is not None else FrequencyGrid()
    report = assess_stability(a, b, force_orientation=force, grid=grid, tol_deg=cfg.TOL.DEG,
                              valid_below_hz=valid_below)
    _emit(report, args, 'report')
    _print_report(report)
    if args.plot:
        f = _grid_for(a, b)
        num_m, den_m = (a, b) if report.orientation.numerator_id == a.id else (b, a)
        save_bode_plot(num_m.bode_on(f), den_m.bode_on(f), args.plot, report.regions, report.crossings)
    return EXIT_CODES[report.verdict]


def _print_report(report):
    o = report.orientation
    print('Ratio: {}/{} ({})'.format(o.numerator_id, o.denominator_id, o.basis))
    print('P (open-loop RHP poles): {}'.format(report.P_open_loop))
    enc = report.encirclements
    if enc is not None:
        print('N_CC = {}, N_ACC = {}, N = {}'.format(enc.N_CC, enc.N_ACC, enc.N))
        for c in report.crossings:
            print('  {}'.format(c))
    for name, v in report.cross_checks.items():
        print('Cross-check {}: {}'.format(name, v))
    print('Verdict: {}'.format(report.verdict))


def cmd_bode(args):
    a, b, force, _ = load_models(args)
    _, _, _, b1, b2 = oriented_bode(a, b, force)
    regions, crossings = _regions_and_crossings(b1, b2)
    df = bode_frame(b1, b2, regions, crossings)
    path = output_path(args.out, 'bode', 'csv')
    write_frame(df, path if path is not None else sys.stdout)
    if args.plot:
        save_bode_plot(b1, b2, args.plot, regions, crossings)
    return 0


def cmd_nyquist(args):
    a, b, force, _ = load_models(args)
    _, _, _, b1, b2 = oriented_bode(a, b, force)
    df = nyquist_frame(b1, b2)
    path = output_path(args.out, 'nyquist', 'csv')
    write_frame(df, path if path is not None else sys.stdout)
    if args.plot:
        save_nyquist_plot(df['re'].values + 1j * df['im'].values, args.plot)
    return 0


def cmd_margins(args):
    a, b, force, _ = load_models(args)
    _, num_m, den_m, b1, b2 = oriented_bode(a, b, force)
    p = open_loop_rhp_poles(_census(num_m, b1), _census(den_m, b2))
    try:
        m = compute_margins(b1, b2, p_open_loop=p)
    except OpenLoopRhpPoles as exc:
        print(exc)
        return EXIT_CODES[INDETERMINATE]
    _emit(m, args, 'margins')
    print('GM = {:.4g} dB at {}, PM = {:.4g} deg at {}'.format(
        m.GM_db, ['%.6g' % f for f in m.phase_crossover_hz], m.PM_deg, ['%.6g' % f for f in m.gain_crossover_hz]))
    return 0


def cmd_criteria(args):
    """Exit 0 when every selected criterion passes, 1 otherwise."""
    a, b, force, _ = load_models(args)
    _, num_m, den_m, b1, b2 = oriented_bode(a, b, force)
    p = open_loop_rhp_poles(_census(num_m, b1), _census(den_m, b2))
    if p:
        logger.warning('Ratio has %d open-loop RHP pole(s); forbidden-region criteria are not conclusive', p)
    reports = []
    for kind in args.criteria or cfg.CRITERIA.KINDS:
        r = check_criterion(spec_from_cfg(kind), b1, b2, tol_deg=cfg.TOL.DEG)
        print('{:12s} {}'.format(kind, 'pass' if r.passed else 'fail ({} interval(s))'.format(len(r.violations))))
        reports.append(r)
    _emit(reports, args, 'criteria')
    return 0 if all(r.passed for r in reports) else 1


def cmd_identify_rhp(args):
    """Exact census for the case study, Bode-heuristic census for CSV input."""
    a, b, _, _ = load_models(args)
    censuses, undetermined = [], False
    for m in (a, b):
        if m.exact is not None:
            c = census(m.exact)
        else:
            bode = m.sampled.bode()
            breaks = identify_breakpoints(bode)
            bad = [bp for bp in breaks if bp.half_plane == UNDETERMINED]
            if bad:
                undetermined = True
                for bp in bad:
                    print('{}: undetermined {}'.format(m.id, bp))
                continue
            c = census(bode)
        print('{}: {} RHP pole(s), {} RHP zero(s) ({})'.format(m.id, c.rhp_poles, c.rhp_zeros, c.source))
        censuses.append(c)
    _emit(censuses, args, 'census')
    return EXIT_CODES[INDETERMINATE] if undetermined else 0


def cmd_case_study(args):
    if args.num is not None or args.den is not None:
        raise UsageError("case-study takes --scenario, not --num/--den")
    return cmd_analyze(args)


HANDLERS = {
    'analyze': cmd_analyze,
    'bode': cmd_bode,
    'nyquist': cmd_nyquist,
    'margins': cmd_margins,
    'criteria': cmd_criteria,
    'identify-rhp': cmd_identify_rhp,
    'case-study': cmd_case_study,
}


def run_cli(argv=None):
    """Dispatch one subcommand and map the outcome to an exit code."""
    _setup_logging()
    try:
        args = parse_args(argv)
        _apply_args(args)
        if args.command == 'analyze' and (args.num is None or args.den is None):
            raise UsageError("analyze needs --num and --den")
        return HANDLERS[args.command](args)
    except (StabilityError, ValueError, KeyError, OSError) as exc:
        print('error: {}'.format(exc), file=sys.stderr)
        logger.debug('Failure', exc_info=True)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(run_cli())
