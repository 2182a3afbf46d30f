"""
.. currentmodule:: survmed.inference

.. testsetup:: inference

    from survmed.inference import *
    from survmed.composite import ArmSample

Bootstrap Intervals
===================

The :func:`bootstrap_diff_ci` function computes seeded percentile-bootstrap
confidence intervals for the difference, arm 1 minus arm 0, in a summary
measure. Each arm is resampled with replacement on its own, so every resample
keeps the arm sizes.

Survival-incorporated quantiles are compared on a numeric scale by encoding
deaths as a *sentinel* below every observed survivor score (see
:func:`survmed.composite.sentinel_encode`). A difference between a death and
a score is then a number with no clinical meaning, so every result counts the
resamples in which either arm's quantile was a death.

.. doctest:: inference

    >>> arm0 = ArmSample.from_counts(44, {0: 26, 1: 30})
    >>> arm1 = ArmSample.from_counts(20, {0: 45, 1: 35})
    >>> result = bootstrap_diff_ci(arm0, arm1, 'survival_prob',
    ...                            n_resamples=200, seed=1)
    >>> round(result.point_estimate, 10)
    0.24
    >>> result.ci_lower <= result.ci_upper
    True

Resample ``b`` draws from its own generator seeded with ``(seed, b)``, so the
result is identical for any number of ``workers``. Percentile intervals of
step-valued statistics such as medians of discrete outcomes can be
conservative or anti-conservative; no smoothing is applied.

API Documentation
-----------------
"""
import logging
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial

import numpy as np

from .composite import (ArmSample, check_level, median_in_survivors,
                        prob_alive_above, sentinel_encode,
                        survival_probability, type1_quantile)
from .exceptions import ResampleBudgetError
from .streams import check_seed, resample_generator

LOGGER = logging.getLogger(__name__)

#: The statistics understood by :func:`bootstrap_diff_ci`.
STATISTICS = ('sim_median', 'sim_quantile', 'survivor_median',
              'survival_prob', 'prob_alive_above')

#: The default number of resamples.
DEFAULT_RESAMPLES = 2000

#: The default confidence level.
DEFAULT_LEVEL = 0.95

#: Redraws allowed per requested resample before giving up.
REDRAW_FACTOR = 10


class BootstrapResult(namedtuple('BootstrapResult', [
        'statistic', 'point_estimate', 'ci_lower', 'ci_upper', 'level',
        'n_resamples', 'n_death_median_resamples', 'seed'])):
    """
    A bootstrap confidence interval for a difference between arms.

    The percentile interval need not contain :attr:`point_estimate`.
    :attr:`n_death_median_resamples` counts the resamples in which either
    arm's survival-incorporated quantile was a death; it is zero for the
    other statistics.

    :raises ValueError: if ``ci_lower > ci_upper`` or the death count exceeds
                        the number of resamples
    """
    __slots__ = ()

    def __new__(cls, statistic, point_estimate, ci_lower, ci_upper, level,
                n_resamples, n_death_median_resamples, seed):
        if ci_lower > ci_upper:
            raise ValueError("ci_lower must not exceed ci_upper")
        if not 0 <= n_death_median_resamples <= n_resamples:
            raise ValueError("death-median count out of range")
        return super(BootstrapResult, cls).__new__(
            cls, statistic, point_estimate, ci_lower, ci_upper, level,
            n_resamples, n_death_median_resamples, seed)


class _Arm(object):
    """
    The arrays one arm's statistic is computed from, picklable for workers.
    """

    def __init__(self, sample, sentinel, threshold):
        self.alive = np.asarray(sample.alive)
        self.encoded = sentinel_encode(sample, sentinel)
        if threshold is not None:
            scores = np.where(self.alive, sample.scores, -np.inf)
            self.above = scores > threshold
        else:
            self.above = None
        self.n = self.alive.size


def _arm_value(arm, statistic, quantile, sentinel, idx):
    """
    The statistic of one resample of an arm as ``(value, death)``, or ``None``
    if a survivor median is requested of a resample without survivors.
    """
    if statistic in ('sim_median', 'sim_quantile'):
        value = type1_quantile(arm.encoded[idx], quantile)
        return value, value == sentinel
    elif statistic == 'survivor_median':
        alive = arm.alive[idx]
        if not alive.any():
            return None
        return type1_quantile(arm.encoded[idx][alive], 0.5), False
    elif statistic == 'survival_prob':
        return float(np.mean(arm.alive[idx])), False
    return float(np.mean(arm.above[idx])), False


def _resample_range(arms, statistic, quantile, sentinel, seed, budget,
                    bounds):
    start, stop = bounds
    diffs = np.empty(stop - start)
    deaths = 0
    redraws = 0
    for b in range(start, stop):
        rng = resample_generator(seed, b)
        values = []
        death = False
        for arm in arms:
            while True:
                result = _arm_value(arm, statistic, quantile, sentinel,
                                    rng.integers(0, arm.n, arm.n))
                if result is not None:
                    break
                redraws += 1
                if redraws > budget:
                    raise ResampleBudgetError(
                        "redraw budget of {} exhausted: resamples keep "
                        "drawing no survivors".format(budget))
            values.append(result[0])
            death = death or result[1]
        diffs[b - start] = values[1] - values[0]
        deaths += death
    return diffs, deaths, redraws


def _point_value(sample, arm, statistic, quantile, threshold):
    if statistic in ('sim_median', 'sim_quantile'):
        return type1_quantile(arm.encoded, quantile)
    elif statistic == 'survivor_median':
        return median_in_survivors(sample)
    elif statistic == 'survival_prob':
        return survival_probability(sample)
    return prob_alive_above(sample, threshold)


def default_sentinel(sample0, sample1):
    """
    The sentinel used when none is given: one below the lowest survivor score
    of either arm, or ``-1`` when nobody survives.

    .. doctest:: inference

        >>> default_sentinel(ArmSample.from_counts(1, {3: 1}),
        ...                  ArmSample.from_counts(0, {-2: 1}))
        -3.0

    :param sample0: the :class:`survmed.composite.ArmSample` of arm 0
    :param sample1: the :class:`survmed.composite.ArmSample` of arm 1
    :returns: a float
    """
    lowest = [s.survivor_scores[0] for s in (sample0, sample1)
              if s.n_survivors > 0]
    if not lowest:
        return -1.0
    return float(min(lowest)) - 1.0


def bootstrap_diff_ci(sample0, sample1, statistic,
                      n_resamples=DEFAULT_RESAMPLES, level=DEFAULT_LEVEL,
                      seed=0, threshold=None, quantile=None, sentinel=None,
                      workers=1, redraw_budget=None):
    """
    A percentile-bootstrap confidence interval for the difference in a
    statistic between the arms, arm 1 minus arm 0.

    The statistics are

    ``'sim_median'``
        the survival-incorporated median, sentinel-encoded
    ``'sim_quantile'``
        the survival-incorporated quantile at ``quantile``, sentinel-encoded
    ``'survivor_median'``
        the median in the survivors; a resample without survivors is redrawn
    ``'survival_prob'``
        the probability of survival
    ``'prob_alive_above'``
        the probability of being alive with a score above ``threshold``

    The interval endpoints are the type-1 quantiles of the resampled
    differences at levels ``(1 - level)/2`` and ``(1 + level)/2``.

    .. doctest:: inference

        >>> same = ArmSample.from_counts(3, {1: 5, 2: 2})
        >>> result = bootstrap_diff_ci(same, same, 'sim_median',
        ...                            n_resamples=100, seed=3)
        >>> result.point_estimate, result.ci_lower <= 0 <= result.ci_upper
        (0.0, True)

    :param sample0: the :class:`survmed.composite.ArmSample` of arm 0
    :param sample1: the :class:`survmed.composite.ArmSample` of arm 1
    :param statistic: one of :data:`STATISTICS`
    :param n_resamples: the number of resamples, at least 1
    :param level: the confidence level, ``0 < level < 1``
    :param seed: a non-negative integer seed
    :param threshold: the score threshold of ``'prob_alive_above'``
    :param quantile: the quantile level of ``'sim_quantile'``
    :param sentinel: the value deaths are encoded as; must lie below every
                     survivor score (default :func:`default_sentinel`)
    :param workers: the number of worker processes
    :param redraw_budget: the total number of redraws allowed (default
                          ``10 * n_resamples``)
    :returns: a :class:`BootstrapResult`
    :raises ValueError: on an unknown statistic, a missing ``threshold`` or
                        ``quantile``, an invalid sentinel, or
                        ``n_resamples < 1``
    :raises survmed.exceptions.ResampleBudgetError: if the redraw budget runs
                                                    out
    """
    for sample in (sample0, sample1):
        if not isinstance(sample, ArmSample):
            raise TypeError("samples must be ArmSamples")
    if statistic not in STATISTICS:
        raise ValueError("unknown statistic '{}'".format(statistic))
    if isinstance(n_resamples, bool) or \
            not isinstance(n_resamples, (int, np.integer)) or n_resamples < 1:
        raise ValueError("n_resamples must be a positive integer")
    level = check_level(level)
    seed = check_seed(seed)
    if statistic == 'prob_alive_above':
        if threshold is None:
            raise ValueError("prob_alive_above requires a threshold")
        threshold = float(threshold)
    else:
        threshold = None
    if statistic == 'sim_quantile':
        if quantile is None:
            raise ValueError("sim_quantile requires a quantile level")
        quantile = check_level(quantile)
    elif statistic == 'sim_median':
        quantile = 0.5
    if sentinel is None:
        sentinel = default_sentinel(sample0, sample1)
    sentinel = float(sentinel)
    if redraw_budget is None:
        redraw_budget = REDRAW_FACTOR * n_resamples

    arms = (_Arm(sample0, sentinel, threshold),
            _Arm(sample1, sentinel, threshold))
    point = _point_value(sample1, arms[1], statistic, quantile, threshold) - \
        _point_value(sample0, arms[0], statistic, quantile, threshold)

    task = partial(_resample_range, arms, statistic, quantile, sentinel, seed,
                   redraw_budget)
    if workers > 1 and n_resamples > 1:
        edges = np.linspace(0, n_resamples, min(workers, n_resamples) + 1)
        edges = [int(round(e)) for e in edges]
        bounds = list(zip(edges[:-1], edges[1:]))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(task, bounds))
    else:
        parts = [task((0, n_resamples))]

    diffs = np.concatenate([d for d, _, _ in parts])
    deaths = sum(n for _, n, _ in parts)
    redraws = sum(r for _, _, r in parts)
    if redraws > redraw_budget:
        raise ResampleBudgetError(
            "redraw budget of {} exhausted: resamples keep drawing no "
            "survivors".format(redraw_budget))
    if redraws:
        LOGGER.debug("%s: redrew %d resamples without survivors", statistic,
                     redraws)

    tail = (1 - Fraction(repr(level))) / 2
    lower = type1_quantile(diffs, float(tail))
    upper = type1_quantile(diffs, float(1 - tail))
    LOGGER.info("%s: %d resamples, %d with a death median", statistic,
                n_resamples, deaths)
    return BootstrapResult(statistic, float(point), lower, upper, level,
                           int(n_resamples), int(deaths), seed)
