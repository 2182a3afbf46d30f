"""
.. currentmodule:: survmed.composite

.. testsetup:: composite

    from survmed.composite import *

Composite Outcomes
==================

When a clinical outcome is truncated by death, a subject who dies has no
score at all. The :mod:`survmed.composite` module merges survival status and
the clinical score into a single ranked *composite outcome*:

1. every death ranks below every survivor, whatever the survivor's score
2. among survivors, lower scores rank below higher scores
3. deaths are mutually tied

Quantiles of the composite outcomes are the *survival-incorporated
quantiles*. The survival-incorporated median is the threshold such that half
of the population is alive with an outcome above it; when more than half of
the population dies, it is :data:`DEATH` and a higher quantile is more
informative.

.. rubric:: Example

.. doctest:: composite

    >>> sample = ArmSample.from_counts(20, {0: 45, 1: 35})
    >>> survival_incorporated_quantile(sample, 0.5)
    Survived(0.0)
    >>> median_in_survivors(sample)
    0.0
    >>> survival_probability(sample), prob_alive_above(sample, 0.5)
    (0.8, 0.35)

Sample quantiles use the type-1 (inverse empirical CDF) convention: the
quantile at level ``q`` of ``n`` outcomes is the order statistic at 1-based
index ``ceil(q*n)``. It always returns an observed composite value, never an
interpolation between a death and a score.

API Documentation
-----------------
"""
import math
from enum import IntEnum
from fractions import Fraction
from functools import total_ordering
from numbers import Integral, Real

import numpy as np

#: Tolerance used for probability sums and boundary comparisons.
PROB_TOL = 1e-9

#: The note attached to every report that shows sample quantiles.
QUANTILE_CONVENTION = ("quantiles are type-1 (inverse empirical CDF): the "
                       "order statistic at index ceil(q*n)")


class Ordering(IntEnum):
    """
    The result of :func:`compare`.
    """
    LESS = -1
    EQUAL = 0
    GREATER = 1


@total_ordering
class Outcome(object):
    """
    A composite outcome: either death, or survival with a finite score.

    Construct survivors with :func:`survived` (or ``Outcome(score)``) and use
    the module constant :data:`DEATH` for deaths.

    .. doctest:: composite

        >>> DEATH < survived(-500)
        True
        >>> survived(26) < survived(30)
        True
        >>> sorted([survived(1), DEATH, survived(0)])
        [Death, Survived(0.0), Survived(1.0)]

    :param score: the clinical score, or ``None`` for death
    :raises TypeError: if ``score`` is not a real number
    :raises ValueError: if ``score`` is NaN or infinite
    """
    __slots__ = ('_score',)

    def __init__(self, score=None):
        if score is not None:
            if isinstance(score, bool) or not isinstance(score, Real):
                raise TypeError("score must be a real number")
            score = float(score)
            if not math.isfinite(score):
                raise ValueError("score must be finite")
        self._score = score

    @property
    def is_death(self):
        """
        Whether the outcome is death.
        """
        return self._score is None

    @property
    def score(self):
        """
        The survivor's score, or ``None`` for death.
        """
        return self._score

    def _key(self):
        if self._score is None:
            return (0, 0.0)
        return (1, self._score)

    def __eq__(self, other):
        if not isinstance(other, Outcome):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        if not isinstance(other, Outcome):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self._score is None:
            return 'Death'
        return 'Survived({!r})'.format(self._score)


#: The composite outcome of a subject who died.
DEATH = Outcome()


def survived(score):
    """
    The composite outcome of a survivor with the given ``score``.

    :param score: a finite real score
    :returns: an :class:`Outcome`
    """
    return Outcome(score)


def compare(a, b):
    """
    Compare two composite outcomes under the composite ranking.

    .. doctest:: composite

        >>> compare(DEATH, survived(-500))
        <Ordering.LESS: -1>
        >>> compare(survived(26), survived(30))
        <Ordering.LESS: -1>
        >>> compare(DEATH, DEATH)
        <Ordering.EQUAL: 0>

    :param a: the first outcome
    :param b: the second outcome
    :returns: an :class:`Ordering`
    :raises TypeError: if either argument is not an :class:`Outcome`
    """
    if not isinstance(a, Outcome) or not isinstance(b, Outcome):
        raise TypeError("compare requires two Outcomes")
    ka, kb = a._key(), b._key()
    if ka < kb:
        return Ordering.LESS
    elif ka > kb:
        return Ordering.GREATER
    return Ordering.EQUAL


def check_level(q):
    """
    Validate a quantile level and return it as a float.

    :param q: the quantile level
    :returns: ``float(q)``
    :raises TypeError: if ``q`` is not a real number
    :raises ValueError: unless ``0 < q < 1``
    """
    if isinstance(q, bool) or not isinstance(q, Real):
        raise TypeError("quantile level must be a real number")
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError("quantile level must lie strictly between 0 and 1")
    return q


def order_index(q, n):
    """
    The 1-based index ``ceil(q*n)`` of the type-1 quantile.

    The level is read as the decimal it was written as, so that ``0.7`` of
    ``100`` is exactly ``70`` rather than the ``71`` that binary floating
    point would give.

    .. doctest:: composite

        >>> order_index(0.5, 100), order_index(0.7, 100), order_index(0.5, 3)
        (50, 70, 2)

    :param q: the quantile level, ``0 < q < 1``
    :param n: the number of observations, ``n >= 1``
    :returns: an integer in ``[1, n]``
    """
    k = math.ceil(Fraction(repr(float(q))) * n)
    return int(max(1, min(n, k)))


def type1_quantile(values, q):
    """
    The type-1 sample quantile of a collection of real numbers.

    .. doctest:: composite

        >>> type1_quantile([3.0, 1.0, 2.0], 0.5)
        2.0
        >>> type1_quantile([-1, -1, 0, 1], 0.5)
        -1.0

    :param values: a non-empty collection of reals
    :param q: the quantile level
    :returns: the order statistic at index ``ceil(q*n)``
    :raises ValueError: if ``values`` is empty
    """
    q = check_level(q)
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("empty sample")
    k = order_index(q, values.size) - 1
    return float(np.partition(values, k)[k])


class ArmSample(object):
    """
    The composite outcomes of the subjects in one arm.

    An :class:`ArmSample` is immutable. Internally it holds a boolean array of
    survival indicators and a float array of scores (``nan`` for deaths), in
    subject order.

    .. doctest:: composite

        >>> sample = ArmSample([DEATH, survived(0), survived(1)])
        >>> len(sample), sample.n_deaths
        (3, 1)
        >>> list(sample)
        [Death, Survived(0.0), Survived(1.0)]

    :param outcomes: a non-empty iterable of :class:`Outcome`
    :raises TypeError: if an element is not an :class:`Outcome`
    :raises ValueError: if ``outcomes`` is empty
    """

    def __init__(self, outcomes):
        outcomes = list(outcomes)
        for outcome in outcomes:
            if not isinstance(outcome, Outcome):
                raise TypeError("an ArmSample holds Outcomes")
        alive = np.array([not o.is_death for o in outcomes], dtype=bool)
        scores = np.array([np.nan if o.is_death else o.score
                           for o in outcomes], dtype=float)
        self.__setup(alive, scores)

    @classmethod
    def from_arrays(cls, alive, scores):
        """
        Build a sample from parallel arrays of survival indicators and
        scores. Scores of deaths are ignored.

        :param alive: array of booleans (or 0/1)
        :param scores: array of scores, finite wherever ``alive`` is true
        :returns: an :class:`ArmSample`
        :raises ValueError: if the arrays differ in length, are empty, or a
                            survivor's score is not finite
        """
        alive = np.asarray(alive).astype(bool)
        scores = np.asarray(scores, dtype=float)
        if alive.ndim != 1 or alive.shape != scores.shape:
            raise ValueError("alive and scores must be 1-D and equal length")
        if not np.all(np.isfinite(scores[alive])):
            raise ValueError("score must be finite")
        sample = cls.__new__(cls)
        sample.__setup(alive, np.where(alive, scores, np.nan))
        return sample

    @classmethod
    def from_counts(cls, deaths, survivors):
        """
        Build a sample from a number of deaths and a mapping from survivor
        score to count. Deaths come first, then survivors in ascending score
        order.

        .. doctest:: composite

            >>> sample = ArmSample.from_counts(60, {1: 40})
            >>> len(sample), survival_probability(sample)
            (100, 0.4)

        :param deaths: the number of deaths
        :param survivors: a mapping from score to the number of survivors
        :returns: an :class:`ArmSample`
        """
        if deaths < 0 or any(c < 0 for c in survivors.values()):
            raise ValueError("counts must be non-negative")
        scores = [np.nan] * int(deaths)
        for score in sorted(survivors):
            scores.extend([float(score)] * int(survivors[score]))
        scores = np.array(scores, dtype=float)
        return cls.from_arrays(~np.isnan(scores), scores)

    def __setup(self, alive, scores):
        if alive.size == 0:
            raise ValueError("empty sample")
        alive = alive.copy()
        scores = scores.copy()
        alive.setflags(write=False)
        scores.setflags(write=False)
        self.__alive = alive
        self.__scores = scores
        ranked = np.sort(scores[alive])
        ranked.setflags(write=False)
        self.__ranked = ranked

    @property
    def alive(self):
        """
        Read-only boolean array of survival indicators.
        """
        return self.__alive

    @property
    def scores(self):
        """
        Read-only array of scores, ``nan`` for deaths.
        """
        return self.__scores

    @property
    def survivor_scores(self):
        """
        Read-only array of the survivors' scores, sorted ascending.
        """
        return self.__ranked

    @property
    def n(self):
        """
        The number of subjects.
        """
        return self.__alive.size

    @property
    def n_deaths(self):
        """
        The number of subjects who died.
        """
        return self.n - self.__ranked.size

    @property
    def n_survivors(self):
        """
        The number of subjects who survived.
        """
        return self.__ranked.size

    def __len__(self):
        return self.n

    def __getitem__(self, index):
        if isinstance(index, slice):
            return ArmSample.from_arrays(self.__alive[index],
                                         self.__scores[index])
        if isinstance(index, bool) or not isinstance(index, Integral):
            raise TypeError("indices must be integers or slices")
        if self.__alive[index]:
            return Outcome(self.__scores[index])
        return DEATH

    def __iter__(self):
        for alive, score in zip(self.__alive, self.__scores):
            yield Outcome(score) if alive else DEATH

    def __eq__(self, other):
        if not isinstance(other, ArmSample):
            return NotImplemented
        return (np.array_equal(self.__alive, other.__alive) and
                np.array_equal(self.__scores, other.__scores, equal_nan=True))

    __hash__ = None

    def _order_statistic(self, k):
        """
        The composite order statistic at 1-based index ``k``.
        """
        deaths = self.n_deaths
        if k <= deaths:
            return DEATH
        return Outcome(self.__ranked[k - deaths - 1])

    def distribution(self):
        """
        The empirical :class:`CompositeDistribution` of the sample.

        :returns: a :class:`CompositeDistribution`
        """
        p_death = self.n_deaths / float(self.n)
        if self.n_survivors == 0:
            return CompositeDistribution(1.0)
        support, counts = np.unique(self.__ranked, return_counts=True)
        survivors = ScoreDistribution(support, counts / float(counts.sum()))
        return CompositeDistribution(p_death, survivors)


def _check_sample(sample):
    if not isinstance(sample, ArmSample):
        raise TypeError("sample must be an ArmSample")


def _check_threshold(threshold):
    if isinstance(threshold, bool) or not isinstance(threshold, Real):
        raise TypeError("threshold must be a real number")
    if not math.isfinite(threshold):
        raise ValueError("threshold must be finite")
    return float(threshold)


def survival_incorporated_quantile(sample, level):
    """
    The survival-incorporated quantile of a sample at the given level.

    The result is the type-1 order statistic of the composite outcomes. It is
    :data:`DEATH` exactly when the deaths reach index ``ceil(q*n)``, so a
    death fraction of exactly ``q`` still gives :data:`DEATH` and one death
    fewer gives the lowest survivor score.

    .. doctest:: composite

        >>> survival_incorporated_quantile(
        ...     ArmSample.from_counts(44, {0: 26, 1: 30}), 0.5)
        Survived(0.0)
        >>> high_mortality = ArmSample.from_counts(60, {1: 40})
        >>> survival_incorporated_quantile(high_mortality, 0.5)
        Death
        >>> survival_incorporated_quantile(high_mortality, 0.75)
        Survived(1.0)

    :param sample: an :class:`ArmSample`
    :param level: the quantile level, ``0 < level < 1``
    :returns: an :class:`Outcome`
    :raises ValueError: if the level is out of range
    """
    _check_sample(sample)
    q = check_level(level)
    return sample._order_statistic(order_index(q, sample.n))


def survival_incorporated_median(sample):
    """
    The survival-incorporated median of a sample.

    :param sample: an :class:`ArmSample`
    :returns: an :class:`Outcome`
    """
    return survival_incorporated_quantile(sample, 0.5)


def median_in_survivors(sample):
    """
    The type-1 median of the scores of the survivors only.

    .. doctest:: composite

        >>> median_in_survivors(ArmSample.from_counts(44, {0: 26, 1: 30}))
        1.0
        >>> median_in_survivors(ArmSample.from_counts(100, {}))
        Traceback (most recent call last):
            ...
        ValueError: no survivors in sample

    :param sample: an :class:`ArmSample`
    :returns: the median survivor score
    :raises ValueError: if no subject survived
    """
    _check_sample(sample)
    ranked = sample.survivor_scores
    if ranked.size == 0:
        raise ValueError("no survivors in sample")
    return float(ranked[order_index(0.5, ranked.size) - 1])


def mean_in_survivors(sample):
    """
    The mean score of the survivors only.

    :param sample: an :class:`ArmSample`
    :returns: the mean survivor score
    :raises ValueError: if no subject survived
    """
    _check_sample(sample)
    if sample.n_survivors == 0:
        raise ValueError("no survivors in sample")
    return float(np.mean(sample.survivor_scores))


def survival_probability(sample):
    """
    The fraction of the sample that survived.

    :param sample: an :class:`ArmSample`
    :returns: a probability
    """
    _check_sample(sample)
    return sample.n_survivors / float(sample.n)


def prob_alive_above(sample, threshold):
    """
    The fraction of the sample alive with a score strictly above
    ``threshold``.

    .. doctest:: composite

        >>> prob_alive_above(ArmSample.from_counts(44, {0: 26, 1: 30}), 0.5)
        0.3

    :param sample: an :class:`ArmSample`
    :param threshold: a finite real threshold
    :returns: a probability
    :raises ValueError: if ``threshold`` is not finite
    """
    _check_sample(sample)
    threshold = _check_threshold(threshold)
    ranked = sample.survivor_scores
    above = ranked.size - np.searchsorted(ranked, threshold, side='right')
    return int(above) / float(sample.n)


def threshold_quantile_level(sample, threshold):
    """
    The composite quantile level at which ``threshold`` splits the sample:
    the fraction of subjects who died or survived with a score at or below
    ``threshold``.

    .. doctest:: composite

        >>> threshold_quantile_level(
        ...     ArmSample.from_counts(44, {0: 26, 1: 30}), 0.5)
        0.7

    :param sample: an :class:`ArmSample`
    :param threshold: a finite real threshold
    :returns: a probability
    """
    _check_sample(sample)
    threshold = _check_threshold(threshold)
    ranked = sample.survivor_scores
    at_or_below = sample.n_deaths + np.searchsorted(ranked, threshold,
                                                    side='right')
    return int(at_or_below) / float(sample.n)


def recommended_quantile(sample, candidates=(0.5, 0.75, 0.9)):
    """
    The first of the ``candidates`` whose survival-incorporated quantile is a
    survivor's score. When more than half of the subjects die the median is
    :data:`DEATH`, and a higher quantile is the informative summary.

    .. doctest:: composite

        >>> recommended_quantile(ArmSample.from_counts(60, {1: 40}))
        0.75
        >>> recommended_quantile(ArmSample.from_counts(95, {1: 5})) is None
        True

    :param sample: an :class:`ArmSample`
    :param candidates: the quantile levels to try, in order
    :returns: a quantile level, or ``None`` if every candidate is a death
    """
    for q in candidates:
        if not survival_incorporated_quantile(sample, q).is_death:
            return q
    return None


def sentinel_encode(sample, sentinel):
    """
    Encode the composite outcomes as reals: deaths become ``sentinel`` and
    survivors keep their scores. The sentinel must lie strictly below every
    survivor score, so that sorting the encoded values reproduces the
    composite ranking.

    .. doctest:: composite

        >>> sentinel_encode(ArmSample([DEATH, survived(0), survived(1)]), -1)
        array([-1.,  0.,  1.])
        >>> sentinel_encode(ArmSample([DEATH, survived(-2)]), -1)
        Traceback (most recent call last):
            ...
        ValueError: sentinel not below all survivor scores

    :param sample: an :class:`ArmSample`
    :param sentinel: the value assigned to deaths
    :returns: a float array in subject order
    :raises ValueError: if ``sentinel`` is not below every survivor score
    """
    _check_sample(sample)
    sentinel = _check_threshold(sentinel)
    ranked = sample.survivor_scores
    if ranked.size and sentinel >= ranked[0]:
        raise ValueError("sentinel not below all survivor scores")
    return np.where(sample.alive, sample.scores, sentinel)


class ScoreDistribution(object):
    """
    A discrete distribution over finite real scores.

    The support is kept sorted and duplicate scores are merged. The
    probabilities are not forced to sum to one; population summaries divide
    by :attr:`total`, and :func:`survmed.strata.validate_scenario` reports
    distributions whose total is off by more than :data:`PROB_TOL`.

    .. doctest:: composite

        >>> dist = ScoreDistribution({1: 30/56, 0: 26/56})
        >>> dist.support
        (0.0, 1.0)
        >>> dist.quantile(0.5)
        1.0

    :param scores: a mapping from score to probability, or a sequence of
                   scores
    :param probabilities: the probabilities, if ``scores`` is a sequence
    :raises ValueError: if the distribution is empty, a score is not finite,
                        or a probability is negative
    """

    def __init__(self, scores, probabilities=None):
        if probabilities is None:
            if not hasattr(scores, 'items'):
                raise TypeError("scores must be a mapping when probabilities "
                                "are not given")
            items = list(scores.items())
            scores = [s for s, _ in items]
            probabilities = [p for _, p in items]
        scores = np.asarray(scores, dtype=float)
        probabilities = np.asarray(probabilities, dtype=float)
        if scores.ndim != 1 or scores.shape != probabilities.shape:
            raise ValueError("scores and probabilities must match")
        if scores.size == 0:
            raise ValueError("a score distribution needs at least one score")
        if not np.all(np.isfinite(scores)):
            raise ValueError("score must be finite")
        if not np.all(np.isfinite(probabilities)) or np.any(probabilities < 0):
            raise ValueError("probabilities must be finite and non-negative")

        support, inverse = np.unique(scores, return_inverse=True)
        merged = np.zeros(support.size)
        np.add.at(merged, inverse, probabilities)
        self.__support = tuple(float(s) for s in support)
        self.__probabilities = tuple(float(p) for p in merged)
        self.__cumulative = np.cumsum(merged)

    @classmethod
    def mixture(cls, components):
        """
        The mixture of weighted distributions, renormalized by the total
        weight.

        .. doctest:: composite

            >>> as_arm1 = ScoreDistribution({0: 32/56, 1: 24/56})
            >>> protected = ScoreDistribution({0: 13/24, 1: 11/24})
            >>> mix = ScoreDistribution.mixture([(0.56, as_arm1),
            ...                                  (0.24, protected)])
            >>> [round(p, 4) for p in mix.probabilities]
            [0.5625, 0.4375]

        :param components: a sequence of ``(weight, distribution)`` pairs
        :returns: a :class:`ScoreDistribution`
        :raises ValueError: if the total weight is not positive
        """
        components = [(float(w), d) for w, d in components if w > 0]
        total = sum(w for w, _ in components)
        if total <= 0:
            raise ValueError("a mixture needs positive total weight")
        scores, probabilities = [], []
        for weight, dist in components:
            scores.extend(dist.support)
            probabilities.extend(weight * p / (dist.total * total)
                                 for p in dist.probabilities)
        return cls(scores, probabilities)

    @property
    def support(self):
        """
        The scores, ascending.
        """
        return self.__support

    @property
    def probabilities(self):
        """
        The probability of each score in :attr:`support`.
        """
        return self.__probabilities

    @property
    def total(self):
        """
        The sum of the probabilities.
        """
        return float(self.__cumulative[-1])

    @property
    def is_normalized(self):
        """
        Whether the probabilities sum to one within :data:`PROB_TOL`.
        """
        return abs(self.total - 1.0) <= PROB_TOL

    def cdf(self, score):
        """
        The normalized probability of a score at or below ``score``.
        """
        i = np.searchsorted(self.__support, score, side='right')
        if i == 0:
            return 0.0
        return float(self.__cumulative[i - 1]) / self.total

    def quantile(self, q):
        """
        The population type-1 quantile: the smallest score whose normalized
        cumulative probability reaches ``q`` (within :data:`PROB_TOL`).

        :param q: the quantile level
        :returns: a score
        """
        q = check_level(q)
        cumulative = self.__cumulative / self.total
        i = int(np.searchsorted(cumulative, q - PROB_TOL, side='left'))
        return self.__support[min(i, len(self.__support) - 1)]

    def prob_above(self, threshold):
        """
        The normalized probability of a score strictly above ``threshold``.
        """
        return 1.0 - self.cdf(threshold)

    def mean(self):
        """
        The mean score.
        """
        return float(np.dot(self.__support, self.__probabilities)) / self.total

    def as_dict(self):
        """
        The distribution as a mapping from score to probability.
        """
        return dict(zip(self.__support, self.__probabilities))

    def __eq__(self, other):
        if not isinstance(other, ScoreDistribution):
            return NotImplemented
        return (self.__support == other.__support and
                self.__probabilities == other.__probabilities)

    def __hash__(self):
        return hash((self.__support, self.__probabilities))

    def __repr__(self):
        return 'ScoreDistribution({!r})'.format(self.as_dict())


class CompositeDistribution(object):
    """
    The population distribution of composite outcomes in one arm: a
    probability of death together with the score distribution of the
    survivors.

    .. doctest:: composite

        >>> arm = CompositeDistribution(0.44, ScoreDistribution({0: 26/56,
        ...                                                      1: 30/56}))
        >>> arm.quantile(0.5), arm.median_in_survivors()
        (Survived(0.0), 1.0)
        >>> round(arm.prob_alive_above(0.5), 10)
        0.3

    :param p_death: the probability of death
    :param survivors: a :class:`ScoreDistribution`, required unless
                      ``p_death`` is one
    :raises ValueError: if ``p_death`` is not a probability, or survivors
                        are missing while ``p_death < 1``
    """

    def __init__(self, p_death, survivors=None):
        p_death = float(p_death)
        if not (-PROB_TOL <= p_death <= 1.0 + PROB_TOL):
            raise ValueError("p_death must be a probability")
        p_death = min(max(p_death, 0.0), 1.0)
        if survivors is None and p_death < 1.0 - PROB_TOL:
            raise ValueError("survivor distribution required when "
                             "p_death < 1")
        if survivors is not None and not isinstance(survivors,
                                                    ScoreDistribution):
            raise TypeError("survivors must be a ScoreDistribution")
        if p_death >= 1.0 - PROB_TOL:
            survivors = None
        self.__p_death = p_death
        self.__survivors = survivors

    @property
    def p_death(self):
        """
        The probability of death.
        """
        return self.__p_death

    @property
    def survivors(self):
        """
        The survivors' :class:`ScoreDistribution`, or ``None`` if everybody
        dies.
        """
        return self.__survivors

    def survival_probability(self):
        """
        The probability of survival.
        """
        return 1.0 - self.__p_death

    def prob_alive_above(self, threshold):
        """
        The probability of being alive with a score strictly above
        ``threshold``.
        """
        threshold = _check_threshold(threshold)
        if self.__survivors is None:
            return 0.0
        return self.survival_probability() * \
            self.__survivors.prob_above(threshold)

    def threshold_quantile_level(self, threshold):
        """
        The composite quantile level at which ``threshold`` splits the
        population.
        """
        return 1.0 - self.prob_alive_above(threshold)

    def quantile(self, q):
        """
        The population survival-incorporated quantile.

        :param q: the quantile level
        :returns: an :class:`Outcome`
        """
        q = check_level(q)
        if self.__p_death >= q - PROB_TOL:
            return DEATH
        # the survivor-level quantile reaching p_death + p_survival * F = q
        inner = (q - self.__p_death) / self.survival_probability()
        inner = min(max(inner, PROB_TOL), 1.0 - PROB_TOL)
        return Outcome(self.__survivors.quantile(inner))

    def median(self):
        """
        The population survival-incorporated median.
        """
        return self.quantile(0.5)

    def median_in_survivors(self):
        """
        The population median of the survivors' scores.

        :raises ValueError: if nobody survives
        """
        if self.__survivors is None:
            raise ValueError("no survivors in population")
        return self.__survivors.quantile(0.5)

    def mean_in_survivors(self):
        """
        The population mean of the survivors' scores.

        :raises ValueError: if nobody survives
        """
        if self.__survivors is None:
            raise ValueError("no survivors in population")
        return self.__survivors.mean()

    def __repr__(self):
        return 'CompositeDistribution({!r}, {!r})'.format(self.__p_death,
                                                          self.__survivors)
