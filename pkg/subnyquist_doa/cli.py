# -*- coding: utf-8 -*-
"""
Command-line entry point.

    subnyquist-doa validate example/sim1.json
    subnyquist-doa run example/sim1.json --mode etm --seed 7 --spectra-dir out
    subnyquist-doa sweep example/sim2.json --snr -10,0,10,20 --trials 200 \
        --out sweep.csv
    subnyquist-doa pattern 0,1,4,6

Exit codes: 0 success, 2 validation failure, 3 estimation failure, 4 IO.
"""
import argparse
import logging
import sys
from dataclasses import replace

from rest_framework.exceptions import ValidationError

from .covariance import sample_covariance, write_covariance_csv
from .exceptions import EstimationError, ScenarioError
from .harness import (
    export_csv,
    monte_carlo_rmse,
    run_scenario,
)
from .manifold import EstimationGrids
from .scenario import (
    DelayPattern,
    check_rate_condition,
    difference_coarray,
    validate_pattern,
)
from .serializers import load_scenario
from .subspace import EstimationMode
from .synth import SynthesisMode, simulate_snapshots, write_snapshots

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ESTIMATION = 3
EXIT_IO = 4


def parse_csv_floats(value):
    try:
        return [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected a comma separated list of numbers, got {!r}'.format(
                value))


def positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected an integer, got {!r}'.format(value))
    if number < 1:
        raise argparse.ArgumentTypeError(
            'expected at least 1, got {}'.format(number))
    return number


def parse_pattern(value):
    if value.startswith('mra:'):
        return DelayPattern.mra(int(value[len('mra:'):]))
    return DelayPattern(tuple(int(v) for v in value.split(',') if v.strip()))


def _add_common(parser):
    parser.add_argument('config', help='scenario JSON file')
    parser.add_argument('--mode', choices=[m.value for m in EstimationMode],
                        default=EstimationMode.ETM.value)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--synthesis',
                        choices=[m.value for m in SynthesisMode],
                        default=SynthesisMode.EXACT_DELAY.value)
    parser.add_argument('--freq-grid', type=int, default=4096,
                        help='frequency scan points over [0, 1/tau)')
    parser.add_argument('--doa-grid', type=int, default=721,
                        help='DOA scan points over [-90, 90] degrees')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='subnyquist-doa',
        description='Joint carrier-frequency and DOA estimation for a '
                    'two-element array with multi-coset sub-Nyquist '
                    'sampling.')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('-q', '--quiet', action='store_true')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    validate = commands.add_parser('validate', help='check a scenario')
    validate.add_argument('config')

    run = commands.add_parser('run', help='run one trial')
    _add_common(run)
    run.add_argument('--spectra-dir', help='write pseudo-spectrum CSVs here')
    run.add_argument('--analytic', action='store_true',
                     help='use the exact covariance instead of snapshots')
    run.add_argument('--out', help='write the trial CSV here')
    run.add_argument('--dump-snapshots', help='write the raw snapshots here')
    run.add_argument('--dump-covariance', help='write the covariance CSV here')

    sweep = commands.add_parser('sweep', help='Monte Carlo RMSE over SNR')
    _add_common(sweep)
    sweep.add_argument('--snr', type=parse_csv_floats, required=True,
                       help='comma separated SNR values in dB')
    sweep.add_argument('--trials', type=int, required=True)
    sweep.add_argument('--max-sources', type=positive_int,
                       help='keep only the first K sources of the config')
    sweep.add_argument('--out', required=True)

    pattern = commands.add_parser('pattern',
                                  help='print the difference coarray')
    pattern.add_argument('coeffs', help="comma list, e.g. 0,1,4,6, or mra:M")

    return parser


def _grids(args):
    return EstimationGrids(n_freq=args.freq_grid, n_doa=args.doa_grid)


def cmd_validate(args, out):
    scenario = load_scenario(args.config)
    try:
        Q = validate_pattern(scenario.pattern)
        out.write('pattern {} Q={}\n'.format(list(scenario.pattern.coeffs), Q))
    except ScenarioError as exc:
        out.write('pattern {} {}\n'.format(list(scenario.pattern.coeffs), exc))

    verdicts = []
    for etm in (False, True):
        check = check_rate_condition(scenario, etm=etm)
        verdicts.append(check.ok)
        out.write(
            '{:5s} rate {} (f_sub={:.6g} Hz, max B={:.6g} Hz, margin={:.6g} '
            'Hz), K={} capacity={} {}\n'.format(
                'etm' if etm else 'plain',
                'pass' if check.passed else 'FAIL',
                check.f_sub, check.max_bandwidth, check.margin, check.K,
                check.capacity,
                'identifiable' if check.identifiable else 'NOT identifiable'))
        for note in check.notes:
            out.write('      {}\n'.format(note))
    out.write('total rate {:.6g} Hz vs Nyquist total {:.6g} Hz\n'.format(
        check.total_rate, check.nyquist_total_rate))
    return EXIT_OK if any(verdicts) else EXIT_VALIDATION


def cmd_run(args, out):
    scenario = load_scenario(args.config)

    if args.dump_snapshots or args.dump_covariance:
        snapshots = simulate_snapshots(scenario, args.synthesis, args.seed)
        if args.dump_snapshots:
            write_snapshots(snapshots, args.dump_snapshots)
        if args.dump_covariance:
            write_covariance_csv(sample_covariance(snapshots),
                                 args.dump_covariance)

    result = run_scenario(
        scenario, args.mode, args.seed, args.synthesis,
        analytic=args.analytic, spectra_dir=args.spectra_dir,
        grids=_grids(args))

    out.write('k  f_true [Hz]       f_hat [Hz]        theta_true  theta_hat\n')
    for k, (source, (f_hat, theta_hat)) in enumerate(
            zip(result.matched_truth, result.estimates.pairs), 1):
        out.write('{:<2d} {:<17.10g} {:<17.10g} {:<11.4g} {:.4g}\n'.format(
            k, source.f_k, f_hat, source.theta_k, theta_hat))
    out.write('success: {}\n'.format(result.success))
    if args.out:
        export_csv(result, args.out)
    return EXIT_OK


def cmd_sweep(args, out):
    scenario = load_scenario(args.config)
    if args.max_sources is not None:
        scenario = replace(scenario, sources=scenario.sources[:args.max_sources])

    result = monte_carlo_rmse(
        scenario, args.snr, args.trials, args.mode, args.seed,
        args.synthesis, grids=_grids(args))
    export_csv(result, args.out)

    for point in result.points:
        out.write(
            'SNR {:>6.2f} dB  RMSE {:.4g} Hz  {:.4g} deg  success {:.2f}  '
            'estimated {}/{}\n'.format(
                point.snr_db, point.rmse_freq_hz, point.rmse_doa_deg,
                point.success_rate, point.n_estimated, point.n_trials))
    return EXIT_OK


def cmd_pattern(args, out):
    pattern = parse_pattern(args.coeffs)
    out.write('lag  multiplicity\n')
    for lag, count in difference_coarray(pattern).items():
        out.write('{:>3d}  {}\n'.format(lag, count))
    try:
        out.write('Q={}\n'.format(validate_pattern(pattern)))
    except ScenarioError as exc:
        out.write('{}\n'.format(exc))
        return EXIT_VALIDATION
    return EXIT_OK


COMMANDS = {
    'validate': cmd_validate,
    'run': cmd_run,
    'sweep': cmd_sweep,
    'pattern': cmd_pattern,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)

    level = logging.WARNING - 10 * args.verbose
    if args.quiet:
        level = logging.ERROR
    logging.basicConfig(level=max(level, logging.DEBUG),
                        format='%(asctime)s %(levelname)s %(name)s: '
                               '%(message)s')

    try:
        return COMMANDS[args.command](args, out)
    except ValidationError as exc:
        logger.error('Invalid scenario: %s', exc.detail)
        return EXIT_VALIDATION
    except (ScenarioError, ValueError) as exc:
        logger.error('Invalid input: %s', exc)
        return EXIT_VALIDATION
    except EstimationError as exc:
        logger.error('Estimation failed: %s', exc)
        return EXIT_ESTIMATION
    except OSError as exc:
        logger.error('%s', exc)
        return EXIT_IO


if __name__ == '__main__':
    sys.exit(main())
