"""
.. currentmodule:: survmed.cli

Command Line
============

The ``survmed`` command exposes the library as five subcommands:

``estimate``
    summarize a dataset file, with survival-incorporated quantiles and
    bootstrap intervals for the differences between arms
``scenario``
    evaluate a scenario file
``search``
    list the trade-off illusions on a two-category grid as CSV, ending with
    the quantile-convention note
``simulate``
    draw a dataset file from a scenario file
``reproduce``
    write the tables and chart of an illustrative figure

The exit status is 0 on success, 2 when the input or the flags are invalid
and 1 on an internal error. Diagnostics go to standard error, so the output
is byte-identical for identical inputs, flags and seed. The default seed is
read from the ``SURVMED_SEED`` environment variable; ``--seed`` takes
precedence.

API Documentation
-----------------
"""
import argparse
import logging
import os
import sys
from fractions import Fraction

import pandas as pd

from .composite import QUANTILE_CONVENTION, check_level, recommended_quantile
from .datafiles import read_dataset, read_scenario, write_population
from .exceptions import FormatError, ResampleBudgetError, ScenarioError
from .inference import DEFAULT_LEVEL, DEFAULT_RESAMPLES, bootstrap_diff_ci
from .paradox import (DEFAULT_PROTECTED_GOOD_FRACTION, compare_samples,
                      evaluate_scenario, search_tradeoff_illusions)
from .report import (FORMATS, Report, bootstrap_frame, comparison_frame,
                     quantile_frame, reproduce_figure)
from .strata import (ARM0_ONLY, ARM1_ONLY, STRATA, Assignment,
                     generate_population, observed_marginals)

LOGGER = logging.getLogger(__name__)

#: The environment variable holding the default seed.
SEED_VARIABLE = 'SURVMED_SEED'

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2


class UsageError(Exception):
    """
    Raised by a subcommand when its flags conflict.
    """
    pass


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, 'w', newline='\n') as handle:
            handle.write(text)
        LOGGER.info("wrote %s", path)


def _default_seed():
    value = os.environ.get(SEED_VARIABLE)
    if value is None:
        return 0
    try:
        seed = int(value)
    except ValueError:
        raise UsageError("{} must be a non-negative integer"
                         .format(SEED_VARIABLE))
    if seed < 0:
        raise UsageError("{} must be a non-negative integer"
                         .format(SEED_VARIABLE))
    return seed


def _seed(args):
    return args.seed if args.seed is not None else _default_seed()


def _level(text):
    try:
        return check_level(float(text))
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(
            "{} is not a level strictly between 0 and 1".format(text))


def _non_negative(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("{} is not an integer".format(text))
    if value < 0:
        raise argparse.ArgumentTypeError("{} is negative".format(text))
    return value


def _positive(text):
    value = _non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("{} is not positive".format(text))
    return value


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("{} is not a fraction".format(text))


def cmd_estimate(args):
    """
    Summarize a dataset: per-arm summaries, the comparison, the requested
    survival-incorporated quantiles and bootstrap intervals.
    """
    if args.bootstrap == 0 and args.level is not None:
        raise UsageError("--level has no effect with --bootstrap 0")
    level = DEFAULT_LEVEL if args.level is None else args.level
    seed = _seed(args)
    quantiles = args.quantile or [0.5]

    samples = read_dataset(args.input)
    report = Report('Survival-incorporated summary of {}'.format(
        os.path.basename(args.input)))
    report.add_table('summary', comparison_frame(
        compare_samples(samples[0], samples[1], args.threshold)))
    report.add_table('quantiles', quantile_frame(samples, quantiles))
    for arm, sample in enumerate(samples):
        q = recommended_quantile(sample)
        if q is None:
            report.add_note("arm {}: the 90th percentile is a death".format(
                arm))
        elif q > 0.5:
            report.add_note("arm {}: the median is a death; the {:g}th "
                            "percentile is the first informative quantile"
                            .format(arm, 100 * q))

    if args.bootstrap > 0:
        requests = [('sim_median', {})]
        requests.extend(('sim_quantile', {'quantile': q})
                        for q in quantiles if q != 0.5)
        if all(s.n_survivors > 0 for s in samples):
            requests.append(('survivor_median', {}))
        else:
            report.add_note("no survivor-median interval: an arm has no "
                            "survivors")
        requests.append(('survival_prob', {}))
        requests.append(('prob_alive_above', {'threshold': args.threshold}))
        results = [bootstrap_diff_ci(samples[0], samples[1], statistic,
                                     n_resamples=args.bootstrap, level=level,
                                     seed=seed, workers=args.workers,
                                     **options)
                   for statistic, options in requests]
        report.add_table('bootstrap', bootstrap_frame(results))
        report.add_note("differences are arm 1 minus arm 0; quantile "
                        "differences involving a death use the sentinel scale "
                        "and are counted in n_death_median_resamples")
    _emit(report.render(args.format), args.out)
    return EXIT_OK


def cmd_scenario(args):
    """
    Evaluate a scenario file.
    """
    spec = read_scenario(args.file)
    report = Report('Scenario {}'.format(os.path.basename(args.file)))
    proportions = spec.proportions
    report.add_table('strata', pd.DataFrame(
        [(label.value, proportions[label]) for label in STRATA],
        columns=['stratum', 'proportion']))
    rows = []
    for arm in (0, 1):
        p_death, survivors = observed_marginals(spec, arm)
        rows.append((arm, 'death', p_death))
        if survivors is not None:
            p_survival = 1.0 - p_death
            rows.extend((arm, score, p_survival * p / survivors.total)
                        for score, p in zip(survivors.support,
                                            survivors.probabilities))
    report.add_table('observed', pd.DataFrame(
        rows, columns=['arm', 'outcome', 'probability']))
    report.add_table('summary', comparison_frame(
        evaluate_scenario(spec, args.threshold)))
    _emit(report.render(args.format), args.out)
    return EXIT_OK


def cmd_search(args):
    """
    List the trade-off illusions on a two-category grid as CSV rows, followed
    by a ``# note:`` line with the quantile convention.
    """
    search = search_tradeoff_illusions(
        args.grid_step, args.threshold, min_survival=args.min_survival,
        allocation=args.allocation,
        sweep_allocations=args.sweep_allocations, workers=args.workers)
    text = search.to_frame().to_csv(index=False, lineterminator='\n')
    text += '# note: {}\n'.format(QUANTILE_CONVENTION)
    _emit(text, args.out)
    return EXIT_OK


def cmd_simulate(args):
    """
    Draw a dataset file from a scenario file.
    """
    spec = read_scenario(args.file)
    assignment = {
        'randomized': Assignment.randomized(args.p_treat),
        'arm0': ARM0_ONLY,
        'arm1': ARM1_ONLY,
    }[args.assignment]
    population = generate_population(spec, args.n, _seed(args), assignment,
                                     workers=args.workers)
    write_population(args.out, population)
    LOGGER.info("wrote %d subjects to %s", len(population), args.out)
    return EXIT_OK


def cmd_reproduce(args):
    """
    Write the tables and chart of an illustrative figure.
    """
    if not os.path.isdir(args.out):
        os.makedirs(args.out)
    for path in reproduce_figure(args.figure, args.out):
        LOGGER.info("wrote %s", path)
    return EXIT_OK


def _output_flags(parser, formats=True):
    parser.add_argument('--out', metavar='PATH',
                        help='write to PATH instead of standard output')
    if formats:
        parser.add_argument('--format', choices=FORMATS, default='md',
                            help='output format (default: md)')


def build_parser():
    """
    The argument parser of the ``survmed`` command.

    :returns: an ``argparse.ArgumentParser``
    """
    parser = argparse.ArgumentParser(
        prog='survmed',
        description='Survival-incorporated quantiles and trade-off '
                    'illusions for outcomes truncated by death.')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true',
                           help='log debugging detail')
    verbosity.add_argument('-q', '--quiet', action='store_true',
                           help='log warnings and errors only')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    estimate = commands.add_parser('estimate', help='summarize a dataset')
    estimate.add_argument('--input', required=True, metavar='PATH',
                          help='dataset CSV file')
    estimate.add_argument('--quantile', type=_level, action='append',
                          metavar='Q', help='survival-incorporated quantile '
                          'level; repeatable (default: 0.5)')
    estimate.add_argument('--threshold', type=float, default=0.5,
                          help='scores strictly above it are good '
                               '(default: 0.5)')
    estimate.add_argument('--bootstrap', type=_non_negative,
                          default=DEFAULT_RESAMPLES, metavar='B',
                          help='bootstrap resamples; 0 disables intervals '
                               '(default: {})'.format(DEFAULT_RESAMPLES))
    estimate.add_argument('--level', type=_level, metavar='L',
                          help='confidence level (default: {})'.format(
                              DEFAULT_LEVEL))
    estimate.add_argument('--seed', type=_non_negative, metavar='S',
                          help='random seed (default: ${} or 0)'.format(
                              SEED_VARIABLE))
    estimate.add_argument('--workers', type=_positive, default=1,
                          help='worker processes (default: 1)')
    _output_flags(estimate)
    estimate.set_defaults(func=cmd_estimate)

    scenario = commands.add_parser('scenario', help='evaluate a scenario')
    scenario.add_argument('--file', required=True, metavar='PATH',
                          help='scenario JSON file')
    scenario.add_argument('--threshold', type=float, default=0.5,
                          help='scores strictly above it are good '
                               '(default: 0.5)')
    _output_flags(scenario)
    scenario.set_defaults(func=cmd_scenario)

    search = commands.add_parser('search', help='search for trade-off '
                                 'illusions')
    search.add_argument('--grid-step', type=float, required=True, metavar='G',
                        help='grid spacing; must divide 1')
    search.add_argument('--threshold', type=float, default=0.5,
                        help='scores strictly above it are good '
                             '(default: 0.5)')
    search.add_argument('--min-survival', type=float, metavar='M',
                        help='minimum survival probability of both arms')
    search.add_argument('--allocation', type=_fraction,
                        default=DEFAULT_PROTECTED_GOOD_FRACTION, metavar='F',
                        help='share of good outcomes among the extra '
                             'survivors (default: 11/24)')
    search.add_argument('--sweep-allocations', action='store_true',
                        help='count opposite always-survivor directions '
                             'over a sweep of allocations')
    search.add_argument('--workers', type=_positive, default=1,
                        help='worker processes (default: 1)')
    _output_flags(search, formats=False)
    search.set_defaults(func=cmd_search)

    simulate = commands.add_parser('simulate', help='simulate a dataset')
    simulate.add_argument('--file', required=True, metavar='PATH',
                          help='scenario JSON file')
    simulate.add_argument('--n', type=_positive, required=True,
                          help='number of subjects')
    simulate.add_argument('--seed', type=_non_negative, metavar='S',
                          help='random seed (default: ${} or 0)'.format(
                              SEED_VARIABLE))
    simulate.add_argument('--assignment', default='randomized',
                          choices=('randomized', 'arm0', 'arm1'),
                          help='arm assignment (default: randomized)')
    simulate.add_argument('--p-treat', type=float, default=0.5,
                          help='probability of arm 1 under randomized '
                               'assignment (default: 0.5)')
    simulate.add_argument('--workers', type=_positive, default=1,
                          help='worker processes (default: 1)')
    simulate.add_argument('--out', required=True, metavar='PATH',
                          help='dataset CSV file to write')
    simulate.set_defaults(func=cmd_simulate)

    reproduce = commands.add_parser('reproduce', help='reproduce an '
                                    'illustrative figure')
    reproduce.add_argument('--figure', type=int, choices=(1, 2, 3),
                           required=True, help='figure number')
    reproduce.add_argument('--out', default='.', metavar='DIR',
                           help='output directory (default: .)')
    reproduce.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    """
    Run the ``survmed`` command.

    :param argv: the arguments, without the program name (default
                 ``sys.argv[1:]``)
    :returns: the exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format='%(levelname)s: %(message)s')

    try:
        return args.func(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        LOGGER.error("%s", err)
    except (FormatError, ScenarioError) as err:
        for violation in err.violations:
            LOGGER.error("%s", violation)
    except (ResampleBudgetError, ValueError, TypeError, OSError) as err:
        LOGGER.error("%s", err)
    except Exception:
        LOGGER.exception("internal error")
        return EXIT_INTERNAL
    return EXIT_INVALID
