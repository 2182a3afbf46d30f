"""
.. currentmodule:: survmed.paradox

.. testsetup:: paradox

    from survmed.paradox import *
    from survmed.strata import STRATA, StratumLabel
    from survmed.examples import figure2_arms, figure3_scenario

Trade-off Illusions
===================

Suppose treatment improves both the probability of survival and the
probability of surviving with a good outcome. A summary restricted to the
survivors (or to the always-survivors) can still favor the other arm,
because the extra survivors under treatment are frail. Reading the two
effects side by side then suggests a trade-off between survival and outcome
that does not exist. The :mod:`survmed.paradox` module classifies the
*direction of effects* of a comparison and searches two-category scenarios
for such trade-off illusions.

.. rubric:: Example

.. doctest:: paradox

    >>> report = evaluate_scenario(figure3_scenario(), 0.5)
    >>> report.direction_survivor_median, report.direction_always_survivor_median
    (<Direction.OPPOSITE: 'opposite'>, <Direction.OPPOSITE: 'opposite'>)
    >>> report.tradeoff_illusion_flag
    True
    >>> search = search_tradeoff_illusions(0.05, 0.5)
    >>> (TwoCategoryArm(0.45, 0.25, 0.30), TwoCategoryArm(0.20, 0.45, 0.35)) in search
    True

API Documentation
-----------------
"""
import logging
import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from functools import partial

import numpy as np
import pandas as pd

from .composite import (PROB_TOL, ArmSample, CompositeDistribution,
                        ScoreDistribution, compare, mean_in_survivors,
                        median_in_survivors, prob_alive_above,
                        survival_incorporated_median, survival_probability,
                        threshold_quantile_level)
from .strata import (ScenarioSpec, StratumLabel, always_survivor_median_oracle,
                     observed_distribution, require_valid)

LOGGER = logging.getLogger(__name__)

#: The score of a bad outcome in two-category scenarios.
BAD = 0.0

#: The score of a good outcome in two-category scenarios.
GOOD = 1.0

#: The share of the extra survivors given a good outcome when a
#: two-category comparison is extended to principal strata.
DEFAULT_PROTECTED_GOOD_FRACTION = Fraction(11, 24)

#: The allocations tried by :func:`allocation_sweep`.
DEFAULT_ALLOCATIONS = (0.0, 0.25, 0.5, 0.75, 1.0)

#: The number of arm-0 grid points handled per work unit of the search.
SEARCH_CHUNK = 64


class Direction(Enum):
    """
    The direction of a treatment effect on a survivor-restricted measure
    relative to its effect on survival.
    """
    SAME = 'same'
    OPPOSITE = 'opposite'
    INDETERMINATE = 'indeterminate'


DIRECTIONS = tuple(Direction)


def _sign(value, tol):
    if value > tol:
        return 1
    elif value < -tol:
        return -1
    return 0


def classify_direction(delta_survival, delta_measure, tol=0.0):
    """
    Classify the direction of effects.

    .. doctest:: paradox

        >>> classify_direction(0.24, -1)
        <Direction.OPPOSITE: 'opposite'>
        >>> classify_direction(0.1, 0.1)
        <Direction.SAME: 'same'>
        >>> classify_direction(0, 5)
        <Direction.INDETERMINATE: 'indeterminate'>

    :param delta_survival: the effect on survival, arm 1 minus arm 0
    :param delta_measure: the effect on the measure, arm 1 minus arm 0
    :param tol: deltas within ``tol`` of zero count as zero
    :returns: a :class:`Direction`
    :raises ValueError: if a delta is not finite
    """
    if not (math.isfinite(delta_survival) and math.isfinite(delta_measure)):
        raise ValueError("deltas must be finite")
    s, m = _sign(delta_survival, tol), _sign(delta_measure, tol)
    if s == 0 or m == 0:
        return Direction.INDETERMINATE
    elif s == m:
        return Direction.SAME
    return Direction.OPPOSITE


class ArmSummary(namedtuple('ArmSummary', [
        'p_survival', 'p_alive_above_threshold',
        'survival_incorporated_median', 'median_in_survivors',
        'median_in_always_survivors', 'mean_in_survivors',
        'threshold_level'])):
    """
    The summary measures of one arm.

    ``median_in_survivors`` and ``mean_in_survivors`` are ``None`` when
    nobody survives; ``median_in_always_survivors`` is only known for
    scenarios. ``threshold_level`` is the composite quantile level at which
    the good-outcome threshold splits the arm.

    :raises ValueError: unless
                        ``0 <= p_alive_above_threshold <= p_survival <= 1``
                        and the survivor median is present exactly when
                        ``p_survival > 0``
    """
    __slots__ = ()

    def __new__(cls, p_survival, p_alive_above_threshold,
                survival_incorporated_median, median_in_survivors,
                median_in_always_survivors=None, mean_in_survivors=None,
                threshold_level=None):
        if not (-PROB_TOL <= p_alive_above_threshold <=
                p_survival + PROB_TOL <= 1.0 + 2 * PROB_TOL):
            raise ValueError("summary probabilities out of order")
        if (median_in_survivors is None) != (p_survival <= PROB_TOL):
            raise ValueError("survivor median present iff p_survival > 0")
        return super(ArmSummary, cls).__new__(
            cls, p_survival, p_alive_above_threshold,
            survival_incorporated_median, median_in_survivors,
            median_in_always_survivors, mean_in_survivors, threshold_level)


ComparisonReport = namedtuple('ComparisonReport', [
    'arm0', 'arm1', 'direction_survivor_median',
    'direction_always_survivor_median', 'tradeoff_illusion_flag',
    'direction_sim'])
ComparisonReport.__doc__ = """
The two arm summaries of a comparison, with the direction of effects of the
survivor median, of the always-survivor median (``None`` outside scenarios)
and of the survival-incorporated median, and whether the comparison is a
trade-off illusion: survival and the probability of surviving above the
threshold both strictly favor one arm while the survivor median points the
opposite way.
"""


def _measure_direction(delta_survival, m0, m1, tol):
    if m0 is None or m1 is None:
        return Direction.INDETERMINATE
    return classify_direction(delta_survival, m1 - m0, tol)


def _report(arm0, arm1, tol, scenario=False):
    delta_survival = arm1.p_survival - arm0.p_survival
    delta_alive = arm1.p_alive_above_threshold - arm0.p_alive_above_threshold

    survivor = _measure_direction(delta_survival, arm0.median_in_survivors,
                                  arm1.median_in_survivors, 0.0)
    always = None
    if scenario:
        always = _measure_direction(delta_survival,
                                    arm0.median_in_always_survivors,
                                    arm1.median_in_always_survivors, 0.0)
    sim = classify_direction(
        delta_survival,
        int(compare(arm1.survival_incorporated_median,
                    arm0.survival_incorporated_median)), tol)

    dominates = _sign(delta_survival, tol) != 0 and \
        _sign(delta_survival, tol) == _sign(delta_alive, tol)
    flag = dominates and survivor is Direction.OPPOSITE
    return ComparisonReport(arm0, arm1, survivor, always, flag, sim)


def summarize_sample(sample, good_threshold):
    """
    Summarize an observed arm.

    .. doctest:: paradox

        >>> from survmed.composite import ArmSample
        >>> summary = summarize_sample(ArmSample.from_counts(44, {0: 26, 1: 30}),
        ...                            0.5)
        >>> summary.p_survival, summary.p_alive_above_threshold
        (0.56, 0.3)
        >>> summary.survival_incorporated_median, summary.median_in_survivors
        (Survived(0.0), 1.0)

    :param sample: a :class:`survmed.composite.ArmSample`
    :param good_threshold: scores strictly above it are good
    :returns: an :class:`ArmSummary`
    """
    if not isinstance(sample, ArmSample):
        raise TypeError("sample must be an ArmSample")
    alive = sample.n_survivors > 0
    return ArmSummary(
        survival_probability(sample),
        prob_alive_above(sample, good_threshold),
        survival_incorporated_median(sample),
        median_in_survivors(sample) if alive else None,
        None,
        mean_in_survivors(sample) if alive else None,
        threshold_quantile_level(sample, good_threshold))


def compare_samples(sample0, sample1, good_threshold):
    """
    Compare two observed arms.

    :param sample0: the :class:`survmed.composite.ArmSample` of arm 0
    :param sample1: the :class:`survmed.composite.ArmSample` of arm 1
    :param good_threshold: scores strictly above it are good
    :returns: a :class:`ComparisonReport` without always-survivor fields
    """
    return _report(summarize_sample(sample0, good_threshold),
                   summarize_sample(sample1, good_threshold), 0.0)


def summarize_distribution(dist, good_threshold, always_survivor_median=None):
    """
    Summarize an arm given its population distribution.

    :param dist: a :class:`survmed.composite.CompositeDistribution`
    :param good_threshold: scores strictly above it are good
    :param always_survivor_median: the always-survivor median, if known
    :returns: an :class:`ArmSummary`
    """
    alive = dist.survivors is not None
    return ArmSummary(
        dist.survival_probability(),
        dist.prob_alive_above(good_threshold),
        dist.median(),
        dist.median_in_survivors() if alive else None,
        always_survivor_median,
        dist.mean_in_survivors() if alive else None,
        dist.threshold_quantile_level(good_threshold))


def evaluate_scenario(spec, good_threshold):
    """
    Compute every comparison quantity of a scenario: the observed summaries
    of each arm, the always-survivor medians from the oracle, the direction
    classifications and the trade-off illusion flag. Probability deltas
    within :data:`survmed.composite.PROB_TOL` of zero count as ties.

    :param spec: a valid :class:`survmed.strata.ScenarioSpec`
    :param good_threshold: scores strictly above it are good
    :returns: a :class:`ComparisonReport`
    :raises survmed.exceptions.ScenarioError: if the scenario is invalid
    :raises ValueError: if an arm has no survivors
    """
    require_valid(spec)
    has_always = spec.proportion(StratumLabel.ALWAYS_SURVIVOR) > 0
    summaries = []
    for arm in (0, 1):
        dist = observed_distribution(spec, arm)
        if dist.survivors is None:
            raise ValueError("arm {} has no survivors".format(arm))
        oracle = always_survivor_median_oracle(spec, arm) if has_always \
            else None
        summaries.append(summarize_distribution(dist, good_threshold, oracle))
    return _report(summaries[0], summaries[1], PROB_TOL, scenario=True)


def _exact(x):
    return Fraction(repr(float(x)))


class TwoCategoryArm(namedtuple('TwoCategoryArm',
                                ['p_death', 'p_bad', 'p_good'])):
    """
    One arm of a two-category scenario: the probabilities of death, of
    surviving with a bad outcome (score :data:`BAD`) and of surviving with a
    good outcome (score :data:`GOOD`).

    :raises ValueError: if a probability is negative or they do not sum to 1
    """
    __slots__ = ()

    def __new__(cls, p_death, p_bad, p_good):
        values = tuple(float(p) for p in (p_death, p_bad, p_good))
        if any(p < -PROB_TOL for p in values):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(values) - 1.0) > PROB_TOL:
            raise ValueError("probabilities do not sum to 1")
        return super(TwoCategoryArm, cls).__new__(cls, *values)

    @property
    def p_survival(self):
        """
        The probability of survival.
        """
        return self.p_bad + self.p_good

    def distribution(self):
        """
        The arm as a :class:`survmed.composite.CompositeDistribution`.
        """
        if self.p_survival <= 0:
            return CompositeDistribution(1.0)
        survivors = ScoreDistribution([BAD, GOOD], [self.p_bad, self.p_good])
        return CompositeDistribution(self.p_death, survivors)


def _as_fraction(fraction):
    fraction = Fraction(fraction).limit_denominator(1000000)
    if not 0 <= fraction <= 1:
        raise ValueError("protected good fraction must lie in [0, 1]")
    return fraction


def extend_to_strata(arm0, arm1,
                     protected_good_fraction=DEFAULT_PROTECTED_GOOD_FRACTION):
    """
    Extend a two-category comparison to a principal-stratification scenario
    that reproduces both arms' observed marginals.

    The always-survivors are as many as the survivors of the arm with lower
    survival, and under that arm they carry its observed scores. The extra
    survivors of the other arm form the protected stratum when arm 1
    survives more (monotonicity asserted) and the harmed stratum otherwise.
    A share ``protected_good_fraction`` of the extra survivors has a good
    outcome, clipped to what the better arm's marginals allow; the
    always-survivors under the better arm take what remains.

    .. doctest:: paradox

        >>> arm0, arm1 = figure2_arms()
        >>> spec = extend_to_strata(arm0, arm1)
        >>> [round(spec.proportion(label), 10) for label in STRATA]
        [0.56, 0.24, 0.0, 0.2]
        >>> protected = spec.score_distribution(StratumLabel.PROTECTED, 1)
        >>> round(protected.as_dict()[GOOD], 10)
        0.4583333333

    :param arm0: the :class:`TwoCategoryArm` of arm 0
    :param arm1: the :class:`TwoCategoryArm` of arm 1
    :param protected_good_fraction: the share of good outcomes among the
                                    extra survivors
    :returns: a :class:`survmed.strata.ScenarioSpec`
    """
    phi = _as_fraction(protected_good_fraction)
    arms = [(_exact(a.p_bad), _exact(a.p_good)) for a in (arm0, arm1)]
    survival = [bad + good for bad, good in arms]
    better = 1 if survival[1] >= survival[0] else 0
    worse = 1 - better
    common = survival[worse]
    extra = survival[better] - common
    bad_b, good_b = arms[better]

    proportions = {StratumLabel.ALWAYS_SURVIVOR: common,
                   StratumLabel.NEVER_SURVIVOR: 1 - survival[better]}
    extra_good = min(max(phi * extra, extra - bad_b, 0), good_b, extra)
    scores = {}
    if common > 0:
        bad_a, good_a = arms[worse]
        scores[(StratumLabel.ALWAYS_SURVIVOR, worse)] = {
            BAD: bad_a / common, GOOD: good_a / common}
        scores[(StratumLabel.ALWAYS_SURVIVOR, better)] = {
            BAD: (bad_b - (extra - extra_good)) / common,
            GOOD: (good_b - extra_good) / common}
    if extra > 0:
        label = StratumLabel.PROTECTED if better == 1 else StratumLabel.HARMED
        proportions[label] = extra
        scores[(label, better)] = {BAD: (extra - extra_good) / extra,
                                   GOOD: extra_good / extra}

    return ScenarioSpec(
        dict((k, float(v)) for k, v in proportions.items()),
        dict((key, dict((s, float(p)) for s, p in dist.items()))
             for key, dist in scores.items()),
        monotonicity=(better == 1 or extra == 0))


def allocation_sweep(arm0, arm1, good_threshold,
                     fractions=DEFAULT_ALLOCATIONS):
    """
    The always-survivor direction of effects under each allocation of good
    outcomes to the extra survivors (see :func:`extend_to_strata`). The
    allocation is not identified from the observed data, so a direction that
    changes across the sweep is not a finding.

    .. doctest:: paradox

        >>> arm0, arm1 = figure2_arms()
        >>> [d.value for _, d in allocation_sweep(arm0, arm1, 0.5)]
        ['indeterminate', 'indeterminate', 'opposite', 'opposite', 'opposite']

    :param arm0: the :class:`TwoCategoryArm` of arm 0
    :param arm1: the :class:`TwoCategoryArm` of arm 1
    :param good_threshold: scores strictly above it are good
    :param fractions: the allocations to try
    :returns: a list of ``(fraction, Direction)`` pairs
    """
    sweep = []
    for fraction in fractions:
        spec = extend_to_strata(arm0, arm1, fraction)
        report = evaluate_scenario(spec, good_threshold)
        sweep.append((fraction, report.direction_always_survivor_median))
    return sweep


def grid_size(grid_step):
    """
    The number of grid steps per unit probability.

    :param grid_step: the grid spacing
    :returns: ``round(1 / grid_step)``
    :raises ValueError: unless ``grid_step`` lies in ``(0, 0.5]`` and divides
                        1 evenly
    """
    step = float(grid_step)
    if not 0.0 < step <= 0.5:
        raise ValueError("grid_step must lie in (0, 0.5]")
    n = int(round(1.0 / step))
    if abs(n * step - 1.0) > PROB_TOL:
        raise ValueError("grid_step must divide 1 evenly")
    return n


def grid_counts(n):
    """
    Every two-category arm on a grid of ``n`` steps as integer counts of
    deaths, bad and good outcomes, ordered lexicographically by deaths and
    then bad outcomes.

    .. doctest:: paradox

        >>> deaths, bad, good = grid_counts(2)
        >>> list(zip(deaths, bad, good))
        [(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0)]

    :param n: the number of grid steps
    :returns: three integer arrays
    """
    pairs = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]
    deaths, bad = np.array(pairs, dtype=np.int64).T
    return deaths, bad, n - deaths - bad


def _survivor_median_codes(bad, good):
    # -1 when nobody survives; type-1 medians break ties toward bad
    return np.where(bad + good == 0, -1, (good > bad).astype(np.int64))


def _sim_codes(n, deaths, bad):
    # 0 death, 1 bad, 2 good
    return np.where(2 * deaths >= n, 0, np.where(2 * (deaths + bad) >= n, 1, 2))


def _flag_chunk(survival, good, median, min_count, bounds):
    start, stop = bounds
    s0 = survival[start:stop, None]
    g0 = good[start:stop, None]
    m0 = median[start:stop, None]
    ds = np.sign(survival[None, :] - s0)
    dg = np.sign(good[None, :] - g0)
    dm = np.sign(median[None, :] - m0)
    flag = (ds != 0) & (dg == ds) & (dm == -ds)
    flag &= (m0 >= 0) & (median[None, :] >= 0)
    if min_count:
        flag &= (s0 >= min_count) & (survival[None, :] >= min_count)
    rows, cols = np.nonzero(flag)
    return rows + start, cols


def _always_survivor_directions(n, deaths, bad, good, idx0, idx1, fraction):
    num, den = fraction.numerator, fraction.denominator
    s0, s1 = n - deaths[idx0], n - deaths[idx1]
    arm1_better = s1 >= s0
    worse = np.where(arm1_better, idx0, idx1)
    better = np.where(arm1_better, idx1, idx0)
    common = n - deaths[worse]
    extra = np.abs(s1 - s0)
    bad_a, good_a = bad[worse], good[worse]
    bad_b, good_b = bad[better], good[better]

    # counts scaled by the allocation denominator
    low = den * np.maximum(extra - bad_b, 0)
    high = den * np.minimum(extra, good_b)
    extra_good = np.clip(num * extra, low, high)
    good_as_b = den * good_b - extra_good
    bad_as_b = den * bad_b - (den * extra - extra_good)

    median_a = (good_a > bad_a).astype(np.int64)
    median_b = (good_as_b > bad_as_b).astype(np.int64)
    median0 = np.where(arm1_better, median_a, median_b)
    median1 = np.where(arm1_better, median_b, median_a)

    ds = np.sign(s1 - s0)
    dm = np.sign(median1 - median0)
    codes = np.where(ds == dm, 0, 1)
    codes = np.where((ds == 0) | (dm == 0) | (common == 0), 2, codes)
    return codes.astype(np.int8)


def _decimals(n):
    for d in range(7):
        if (10 ** d) % n == 0:
            return d
    return 6


class TradeoffSearch(object):
    """
    The trade-off illusions on a two-category grid, as returned by
    :func:`search_tradeoff_illusions`.

    The result is array-backed. Iterating yields ``(ScenarioSpec,
    ComparisonReport)`` pairs in lexicographic order, materialized one at a
    time: each scenario is the comparison extended to principal strata with
    :func:`extend_to_strata`, and each report comes from
    :func:`evaluate_scenario`. :meth:`to_frame` gives the whole result as a
    table without materializing scenarios.
    """

    def __init__(self, n, good_threshold, counts, pairs, allocation,
                 always_codes, sweep_counts=None):
        self.__n = n
        self.__threshold = good_threshold
        self.__deaths, self.__bad, self.__good = counts
        self.__idx0, self.__idx1 = pairs
        self.__allocation = allocation
        self.__always = always_codes
        self.__sweep = sweep_counts

    @property
    def grid_step(self):
        """
        The grid spacing.
        """
        return 1.0 / self.__n

    @property
    def good_threshold(self):
        """
        The good-outcome threshold.
        """
        return self.__threshold

    @property
    def allocation(self):
        """
        The share of good outcomes among extra survivors used for the
        always-survivor columns.
        """
        return self.__allocation

    def __len__(self):
        return self.__idx0.size

    def arm(self, index):
        """
        The :class:`TwoCategoryArm` at a grid index.
        """
        n = float(self.__n)
        return TwoCategoryArm(self.__deaths[index] / n, self.__bad[index] / n,
                              self.__good[index] / n)

    def arms(self, k):
        """
        The pair of arms of the ``k``-th result.
        """
        return self.arm(self.__idx0[k]), self.arm(self.__idx1[k])

    def __getitem__(self, k):
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError("result index out of range")
        arm0, arm1 = self.arms(k)
        spec = extend_to_strata(arm0, arm1, self.__allocation)
        return spec, evaluate_scenario(spec, self.__threshold)

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def __contains__(self, pair):
        arm0, arm1 = pair
        n = self.__n
        index = {}
        for i, (d, b) in enumerate(zip(self.__deaths, self.__bad)):
            index[(int(d), int(b))] = i
        try:
            i0 = index[(int(round(arm0.p_death * n)),
                        int(round(arm0.p_bad * n)))]
            i1 = index[(int(round(arm1.p_death * n)),
                        int(round(arm1.p_bad * n)))]
        except KeyError:
            return False
        return bool(np.any((self.__idx0 == i0) & (self.__idx1 == i1)))

    @property
    def always_survivor_directions(self):
        """
        The always-survivor :class:`Direction` of each result.
        """
        return [DIRECTIONS[c] for c in self.__always]

    def to_frame(self):
        """
        The results as a ``pandas.DataFrame``, one row per trade-off illusion.
        Probabilities are rounded to the grid's decimal places.
        """
        n = self.__n
        d = _decimals(n)
        sim_labels = np.array(['death', 'bad', 'good'])
        median_labels = np.array(['bad', 'good'])
        columns = {}
        for arm, idx in ((0, self.__idx0), (1, self.__idx1)):
            deaths, bad = self.__deaths[idx], self.__bad[idx]
            good = self.__good[idx]
            columns['p_death{}'.format(arm)] = np.round(deaths / float(n), d)
            columns['p_bad{}'.format(arm)] = np.round(bad / float(n), d)
            columns['p_good{}'.format(arm)] = np.round(good / float(n), d)
        for arm, idx in ((0, self.__idx0), (1, self.__idx1)):
            deaths, bad = self.__deaths[idx], self.__bad[idx]
            good = self.__good[idx]
            columns['sim{}'.format(arm)] = sim_labels[_sim_codes(n, deaths,
                                                                 bad)]
            columns['survivor_median{}'.format(arm)] = \
                median_labels[_survivor_median_codes(bad, good)]
        columns['always_survivor_direction'] = \
            [DIRECTIONS[c].value for c in self.__always]
        if self.__sweep is not None:
            columns['n_opposite_allocations'] = self.__sweep
        return pd.DataFrame(columns)

    def rows(self):
        """
        The results as a list of dictionaries, one per trade-off illusion.
        """
        return self.to_frame().to_dict('records')


def search_tradeoff_illusions(grid_step, good_threshold, min_survival=None,
                              allocation=DEFAULT_PROTECTED_GOOD_FRACTION,
                              sweep_allocations=False, workers=1):
    """
    Find every trade-off illusion on a grid of two-category scenarios.

    Each arm ranges over the probabilities ``(p_death, p_bad, p_good)`` that
    are multiples of ``grid_step`` and sum to one, and every ordered pair of
    arms is checked. All comparisons are made exactly on integer counts, so
    the result does not depend on floating point. The grid is split into
    chunks of arm-0 points; with ``workers > 1`` the chunks run in worker
    processes and are merged back in lexicographic order.

    With ``good_threshold`` in ``[0, 1)`` a good outcome (score 1) lies above
    the threshold and a bad outcome (score 0) does not.

    :param grid_step: the grid spacing; must lie in ``(0, 0.5]`` and divide 1
    :param good_threshold: scores strictly above it are good
    :param min_survival: if given, both arms must survive with at least this
                         probability
    :param allocation: the share of good outcomes among extra survivors used
                       for the always-survivor columns
    :param sweep_allocations: also count, per result, how many allocations in
                              :data:`DEFAULT_ALLOCATIONS` give an opposite
                              always-survivor direction
    :param workers: the number of worker processes
    :returns: a :class:`TradeoffSearch`
    :raises ValueError: if ``grid_step``, ``good_threshold`` or
                        ``min_survival`` is out of range
    """
    n = grid_size(grid_step)
    good_threshold = float(good_threshold)
    if not BAD <= good_threshold < GOOD:
        raise ValueError("good_threshold must lie in [0, 1) for two-category "
                         "scores")
    min_count = 0
    if min_survival is not None:
        if not 0.0 <= min_survival <= 1.0:
            raise ValueError("min_survival must lie in [0, 1]")
        min_count = int(math.ceil(min_survival * n - PROB_TOL * n))
    fraction = _as_fraction(allocation)

    deaths, bad, good = grid_counts(n)
    survival = n - deaths
    median = _survivor_median_codes(bad, good)
    bounds = [(start, min(deaths.size, start + SEARCH_CHUNK))
              for start in range(0, deaths.size, SEARCH_CHUNK)]
    task = partial(_flag_chunk, survival, good, median, min_count)
    LOGGER.debug("searching %d arms per side in %d chunks", deaths.size,
                 len(bounds))
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(task, bounds))
    else:
        chunks = [task(b) for b in bounds]
    idx0 = np.concatenate([rows for rows, _ in chunks])
    idx1 = np.concatenate([cols for _, cols in chunks])

    always = _always_survivor_directions(n, deaths, bad, good, idx0, idx1,
                                         fraction)
    sweep = None
    if sweep_allocations:
        sweep = np.zeros(idx0.size, dtype=np.int64)
        for alternative in DEFAULT_ALLOCATIONS:
            codes = _always_survivor_directions(n, deaths, bad, good, idx0,
                                                idx1, _as_fraction(alternative))
            sweep += codes == 1
    LOGGER.info("grid step %s: %d of %d arm pairs are trade-off illusions",
                grid_step, idx0.size, deaths.size ** 2)
    return TradeoffSearch(n, good_threshold, (deaths, bad, good),
                          (idx0, idx1), fraction, always, sweep)
