"""
.. currentmodule:: survmed.strata

.. testsetup:: strata

    from survmed.strata import *
    from survmed.examples import figure3_scenario

Principal Strata
================

Let :math:`S(0)` and :math:`S(1)` indicate whether a subject would survive
under treatment :math:`A=0` and :math:`A=1`. Principal stratification sorts
subjects by the pair :math:`(S(0), S(1))`:

=====  =====  ==================  ==========================================
S(0)   S(1)   Stratum             Description
=====  =====  ==================  ==========================================
1      1      always-survivor     survives regardless of treatment
0      1      protected           dies under control, survives under treatment
1      0      harmed              survives under control, dies under treatment
0      0      never-survivor      dies regardless of treatment
=====  =====  ==================  ==========================================

Monotonicity, :math:`S(0) \\leq S(1)` for every subject, rules out the
harmed stratum.

A :class:`ScenarioSpec` describes a whole population: the proportion of each
stratum and, for every stratum and arm in which its members survive, the
distribution of their scores. From a scenario we can compute what a trial
would observe (:func:`observed_marginals`), what only an oracle could know
(:func:`always_survivor_median_oracle`), and we can simulate subject-level
data (:func:`generate_population`).

.. rubric:: Example

.. doctest:: strata

    >>> spec = figure3_scenario()
    >>> validate_scenario(spec)
    []
    >>> p_death, survivors = observed_marginals(spec, 1)
    >>> round(p_death, 10), [round(p, 4) for p in survivors.probabilities]
    (0.2, [0.5625, 0.4375])
    >>> always_survivor_median_oracle(spec, 0)
    1.0
    >>> always_survivor_median_oracle(spec, 1)
    0.0

API Documentation
-----------------
"""
import logging
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from functools import partial

import numpy as np
import pandas as pd

from .composite import (PROB_TOL, ArmSample, CompositeDistribution, Outcome,
                        DEATH, ScoreDistribution)
from .exceptions import ScenarioError
from .streams import check_seed, chunk_ranges, subject_uniforms

LOGGER = logging.getLogger(__name__)

#: The number of subjects generated per work unit.
CHUNK_SIZE = 1 << 16


class StratumLabel(Enum):
    """
    The four principal strata defined by potential survival.

    .. doctest:: strata

        >>> StratumLabel.PROTECTED.survival
        (0, 1)
        >>> StratumLabel.from_survival(1, 0)
        <StratumLabel.HARMED: 'harmed'>
    """
    ALWAYS_SURVIVOR = 'always_survivor'
    PROTECTED = 'protected'
    HARMED = 'harmed'
    NEVER_SURVIVOR = 'never_survivor'

    @property
    def survival(self):
        """
        The potential survival indicators ``(S(0), S(1))``.
        """
        return _SURVIVAL[self]

    def survives(self, arm):
        """
        Whether members of the stratum survive under ``arm``.
        """
        return bool(self.survival[check_arm(arm)])

    @classmethod
    def from_survival(cls, s0, s1):
        """
        The stratum with potential survival ``(s0, s1)``.
        """
        return _FROM_SURVIVAL[(int(s0), int(s1))]


_SURVIVAL = {
    StratumLabel.ALWAYS_SURVIVOR: (1, 1),
    StratumLabel.PROTECTED: (0, 1),
    StratumLabel.HARMED: (1, 0),
    StratumLabel.NEVER_SURVIVOR: (0, 0),
}
_FROM_SURVIVAL = dict((v, k) for k, v in _SURVIVAL.items())

#: The strata in canonical order.
STRATA = tuple(StratumLabel)


def check_arm(arm):
    """
    Validate a treatment arm.

    :param arm: ``0`` or ``1``
    :returns: ``int(arm)``
    :raises ValueError: if ``arm`` is not 0 or 1
    """
    if isinstance(arm, bool) or arm not in (0, 1):
        raise ValueError("arm must be 0 or 1")
    return int(arm)


def _as_label(label):
    if isinstance(label, StratumLabel):
        return label
    try:
        return StratumLabel(label)
    except ValueError:
        raise ValueError("unknown stratum '{}'".format(label))


class SubjectRecord(namedtuple('SubjectRecord',
                               ['id', 'arm', 'outcome', 'stratum'])):
    """
    One subject: an identifier, the arm, the composite outcome and, for
    synthetic data only, the latent stratum.

    .. doctest:: strata

        >>> from survmed.composite import DEATH
        >>> SubjectRecord('s1', 0, DEATH, StratumLabel.PROTECTED).outcome
        Death
        >>> SubjectRecord('s1', 1, DEATH, StratumLabel.PROTECTED)
        Traceback (most recent call last):
            ...
        ValueError: outcome inconsistent with stratum

    :raises ValueError: if ``arm`` is not 0 or 1, or the outcome disagrees
                        with the stratum's potential survival under ``arm``
    """
    __slots__ = ()

    def __new__(cls, id, arm, outcome, stratum=None):
        arm = check_arm(arm)
        if not isinstance(outcome, Outcome):
            raise TypeError("outcome must be an Outcome")
        if stratum is not None:
            stratum = _as_label(stratum)
            if stratum.survives(arm) == outcome.is_death:
                raise ValueError("outcome inconsistent with stratum")
        return super(SubjectRecord, cls).__new__(cls, str(id), arm, outcome,
                                                 stratum)


class ScenarioSpec(object):
    """
    A fully specified principal-stratification population.

    Construction only checks types; :func:`validate_scenario` checks the
    invariants, and every operation that needs a valid scenario raises
    :class:`survmed.exceptions.ScenarioError` when it is not.

    .. doctest:: strata

        >>> spec = ScenarioSpec({'always_survivor': 0.5, 'never_survivor': 0.5},
        ...                     {('always_survivor', 0): {3: 1.0},
        ...                      ('always_survivor', 1): {5: 1.0}},
        ...                     monotonicity=True)
        >>> spec.proportion(StratumLabel.PROTECTED)
        0.0
        >>> spec.score_distribution(StratumLabel.ALWAYS_SURVIVOR, 1)
        ScoreDistribution({5.0: 1.0})

    :param proportions: a mapping from stratum (label or name) to proportion;
                        missing strata have proportion zero
    :param scores: a mapping from ``(stratum, arm)`` to a
                   :class:`survmed.composite.ScoreDistribution` or a mapping
                   from score to probability
    :param monotonicity: whether monotonicity is asserted
    :raises ValueError: on an unknown stratum name or arm
    """

    def __init__(self, proportions, scores=None, monotonicity=False):
        props = dict((label, 0.0) for label in STRATA)
        for label, value in proportions.items():
            props[_as_label(label)] = float(value)

        dists = {}
        for (label, arm), dist in (scores or {}).items():
            if not isinstance(dist, ScoreDistribution):
                dist = ScoreDistribution(dist)
            dists[(_as_label(label), check_arm(arm))] = dist

        self.__proportions = props
        self.__scores = dists
        self.__monotonicity = bool(monotonicity)

    @property
    def proportions(self):
        """
        A copy of the stratum proportions, keyed by every
        :class:`StratumLabel`.
        """
        return dict(self.__proportions)

    @property
    def scores(self):
        """
        A copy of the survivor score distributions, keyed by
        ``(StratumLabel, arm)``.
        """
        return dict(self.__scores)

    @property
    def monotonicity_asserted(self):
        """
        Whether the scenario asserts monotonicity.
        """
        return self.__monotonicity

    def proportion(self, label):
        """
        The proportion of a stratum.
        """
        return self.__proportions[_as_label(label)]

    def score_distribution(self, label, arm):
        """
        The score distribution of a stratum under ``arm``, or ``None``.
        """
        return self.__scores.get((_as_label(label), check_arm(arm)))

    def __eq__(self, other):
        if not isinstance(other, ScenarioSpec):
            return NotImplemented
        return (self.__proportions == other.__proportions and
                self.__scores == other.__scores and
                self.__monotonicity == other.__monotonicity)

    __hash__ = None

    def __repr__(self):
        props = dict((k.value, v) for k, v in self.__proportions.items())
        return 'ScenarioSpec({!r}, monotonicity={!r})'.format(
            props, self.__monotonicity)


def validate_scenario(spec):
    """
    Check every invariant of a scenario.

    .. doctest:: strata

        >>> spec = ScenarioSpec({'always_survivor': 0.45, 'harmed': 0.05,
        ...                      'never_survivor': 0.5},
        ...                     {('always_survivor', 0): {1: 1.0},
        ...                      ('always_survivor', 1): {1: 1.0},
        ...                      ('harmed', 0): {0: 1.0}},
        ...                     monotonicity=True)
        >>> validate_scenario(spec)
        ['monotonicity violated']

    :param spec: a :class:`ScenarioSpec`
    :returns: the list of violated invariants; empty if the scenario is valid
    """
    if not isinstance(spec, ScenarioSpec):
        raise TypeError("spec must be a ScenarioSpec")
    violations = []
    proportions = spec.proportions
    for label in STRATA:
        if not -PROB_TOL <= proportions[label] <= 1.0 + PROB_TOL:
            violations.append(
                "proportion of {} outside [0, 1]".format(label.value))
    if abs(sum(proportions[label] for label in STRATA) - 1.0) > PROB_TOL:
        violations.append("proportions do not sum to 1")

    scores = spec.scores
    for label in STRATA:
        for arm in (0, 1):
            dist = scores.get((label, arm))
            if not label.survives(arm):
                if dist is not None:
                    violations.append(
                        "scores given for {}/{}, which dies under arm {}"
                        .format(label.value, arm, arm))
            elif dist is None:
                if proportions[label] > 0:
                    violations.append("scores missing for {}/{}"
                                      .format(label.value, arm))
            elif not dist.is_normalized:
                violations.append("scores for {}/{} do not sum to 1"
                                  .format(label.value, arm))

    if spec.monotonicity_asserted and proportions[StratumLabel.HARMED] > 0:
        violations.append("monotonicity violated")
    return violations


def require_valid(spec):
    """
    Raise unless the scenario is valid.

    :param spec: a :class:`ScenarioSpec`
    :raises survmed.exceptions.ScenarioError: listing every violation
    """
    violations = validate_scenario(spec)
    if violations:
        raise ScenarioError(violations)


def observed_marginals(spec, arm):
    """
    What a trial would observe under ``arm``: the probability of death and
    the score distribution of the survivors, a proportion-weighted mixture
    over the strata that survive under ``arm``.

    :param spec: a valid :class:`ScenarioSpec`
    :param arm: ``0`` or ``1``
    :returns: a pair ``(p_death, survivors)``; ``survivors`` is ``None`` when
              nobody survives
    :raises survmed.exceptions.ScenarioError: if the scenario is invalid
    """
    require_valid(spec)
    arm = check_arm(arm)
    p_death = 0.0
    components = []
    for label in STRATA:
        proportion = spec.proportion(label)
        if not label.survives(arm):
            p_death += proportion
        elif proportion > 0:
            components.append((proportion,
                               spec.score_distribution(label, arm)))
    p_death = min(max(p_death, 0.0), 1.0)
    if not components or p_death >= 1.0 - PROB_TOL:
        return p_death, None
    return p_death, ScoreDistribution.mixture(components)


def observed_distribution(spec, arm):
    """
    The observed composite distribution under ``arm``.

    :param spec: a valid :class:`ScenarioSpec`
    :param arm: ``0`` or ``1``
    :returns: a :class:`survmed.composite.CompositeDistribution`
    """
    p_death, survivors = observed_marginals(spec, arm)
    return CompositeDistribution(p_death, survivors)


def _always_survivor_scores(spec, arm):
    require_valid(spec)
    arm = check_arm(arm)
    if spec.proportion(StratumLabel.ALWAYS_SURVIVOR) <= 0:
        raise ValueError("no always-survivors in scenario")
    return spec.score_distribution(StratumLabel.ALWAYS_SURVIVOR, arm)


def always_survivor_median_oracle(spec, arm):
    """
    The median score of the always-survivors under ``arm``, read directly
    from the latent strata. It is an oracle: nothing here identifies it from
    observed data.

    :param spec: a valid :class:`ScenarioSpec`
    :param arm: ``0`` or ``1``
    :returns: the population type-1 median
    :raises ValueError: if the scenario has no always-survivors
    """
    return _always_survivor_scores(spec, arm).quantile(0.5)


def always_survivor_mean_oracle(spec, arm):
    """
    The mean score of the always-survivors under ``arm`` (oracle).

    :param spec: a valid :class:`ScenarioSpec`
    :param arm: ``0`` or ``1``
    :returns: the population mean
    :raises ValueError: if the scenario has no always-survivors
    """
    return _always_survivor_scores(spec, arm).mean()


def always_survivor_fraction_identified(p_survive_arm0, monotonicity):
    """
    The proportion of always-survivors, identified under monotonicity as the
    probability of survival under :math:`A=0`.

    .. doctest:: strata

        >>> always_survivor_fraction_identified(0.56, True)
        0.56
        >>> always_survivor_fraction_identified(0.56, False)
        Traceback (most recent call last):
            ...
        ValueError: not identified without monotonicity

    :param p_survive_arm0: the probability of survival under arm 0
    :param monotonicity: whether monotonicity holds
    :returns: the always-survivor proportion
    :raises ValueError: without monotonicity, or if the probability is out of
                        range
    """
    if not monotonicity:
        raise ValueError("not identified without monotonicity")
    p = float(p_survive_arm0)
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability of survival must lie in [0, 1]")
    return p


class Assignment(object):
    """
    How generated subjects are assigned to arms: randomized with probability
    ``p_treat`` of treatment, or everybody to one arm. Use
    :meth:`randomized`, :data:`ARM0_ONLY` or :data:`ARM1_ONLY`.
    """

    def __init__(self, kind, p_treat=None):
        if kind not in ('randomized', 'arm0_only', 'arm1_only'):
            raise ValueError("assignment must be 'randomized', 'arm0_only' "
                             "or 'arm1_only'")
        if kind == 'randomized':
            p_treat = 0.5 if p_treat is None else float(p_treat)
            if not 0.0 <= p_treat <= 1.0:
                raise ValueError("p_treat must lie in [0, 1]")
        self.kind = kind
        self.p_treat = p_treat

    @classmethod
    def randomized(cls, p_treat=0.5):
        """
        Randomized assignment, independent of the stratum.
        """
        return cls('randomized', p_treat)

    def arms(self, uniforms):
        """
        The arm of each subject, given one uniform per subject.
        """
        if self.kind == 'arm0_only':
            return np.zeros(uniforms.size, dtype=np.int8)
        if self.kind == 'arm1_only':
            return np.ones(uniforms.size, dtype=np.int8)
        return (uniforms < self.p_treat).astype(np.int8)

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return (self.kind, self.p_treat) == (other.kind, other.p_treat)

    __hash__ = None

    def __repr__(self):
        if self.kind == 'randomized':
            return 'Assignment.randomized({!r})'.format(self.p_treat)
        return 'Assignment({!r})'.format(self.kind)


#: Everybody receives arm 0.
ARM0_ONLY = Assignment('arm0_only')

#: Everybody receives arm 1.
ARM1_ONLY = Assignment('arm1_only')


class Population(object):
    """
    Generated subject-level data: an immutable, array-backed sequence of
    :class:`SubjectRecord`. Subject ``i`` has identifier ``'s<i+1>'``.
    """

    def __init__(self, strata, arms, alive, scores):
        for array in (strata, arms, alive, scores):
            array.setflags(write=False)
        self.__strata = strata
        self.__arms = arms
        self.__alive = alive
        self.__scores = scores

    @property
    def strata(self):
        """
        The stratum of each subject, as an index into :data:`STRATA`.
        """
        return self.__strata

    @property
    def arms(self):
        """
        The arm of each subject.
        """
        return self.__arms

    @property
    def alive(self):
        """
        Whether each subject survived.
        """
        return self.__alive

    @property
    def scores(self):
        """
        The score of each subject, ``nan`` for deaths.
        """
        return self.__scores

    def __len__(self):
        return self.__arms.size

    def __getitem__(self, index):
        if index < 0:
            index += len(self)
        if not 0 <= index < len(self):
            raise IndexError("subject index out of range")
        outcome = Outcome(self.__scores[index]) if self.__alive[index] \
            else DEATH
        return SubjectRecord('s{}'.format(index + 1), int(self.__arms[index]),
                             outcome, STRATA[self.__strata[index]])

    def __iter__(self):
        for index in range(len(self)):
            yield self[index]

    def __eq__(self, other):
        if not isinstance(other, Population):
            return NotImplemented
        return (np.array_equal(self.__strata, other.__strata) and
                np.array_equal(self.__arms, other.__arms) and
                np.array_equal(self.__alive, other.__alive) and
                np.array_equal(self.__scores, other.__scores, equal_nan=True))

    __hash__ = None

    def arm_sample(self, arm):
        """
        The composite outcomes of the subjects assigned to ``arm``.

        :param arm: ``0`` or ``1``
        :returns: a :class:`survmed.composite.ArmSample`
        :raises ValueError: if no subject was assigned to ``arm``
        """
        mask = self.__arms == check_arm(arm)
        if not mask.any():
            raise ValueError("no subjects in arm {}".format(arm))
        return ArmSample.from_arrays(self.__alive[mask], self.__scores[mask])

    def to_frame(self):
        """
        The subjects as a ``pandas.DataFrame`` with columns ``subject_id``,
        ``arm``, ``survived``, ``outcome`` and ``stratum``.
        """
        return pd.DataFrame({
            'subject_id': ['s{}'.format(i + 1) for i in range(len(self))],
            'arm': self.__arms.astype(int),
            'survived': self.__alive.astype(int),
            'outcome': self.__scores,
            'stratum': [STRATA[code].value for code in self.__strata],
        })


def _sampling_tables(spec):
    proportions = np.array([spec.proportion(label) for label in STRATA])
    stratum_cdf = np.cumsum(proportions) / proportions.sum()
    last_positive = int(np.flatnonzero(proportions > 0)[-1])
    score_tables = {}
    for code, label in enumerate(STRATA):
        for arm in (0, 1):
            dist = spec.score_distribution(label, arm)
            if label.survives(arm) and dist is not None:
                probabilities = np.array(dist.probabilities)
                score_tables[(code, arm)] = (
                    np.array(dist.support),
                    np.cumsum(probabilities) / probabilities.sum())
    return stratum_cdf, last_positive, score_tables


def _generate_chunk(tables, seed, assignment, bounds):
    stratum_cdf, last_positive, score_tables = tables
    start, stop = bounds
    uniforms = subject_uniforms(seed, start, stop)

    strata = np.searchsorted(stratum_cdf, uniforms[:, 0], side='right')
    strata = np.minimum(strata, last_positive).astype(np.int8)
    arms = assignment.arms(uniforms[:, 1])

    survival = np.array([label.survival for label in STRATA], dtype=bool)
    alive = survival[strata, arms]
    scores = np.full(stop - start, np.nan)
    for (code, arm), (support, cdf) in score_tables.items():
        mask = alive & (strata == code) & (arms == arm)
        if mask.any():
            index = np.searchsorted(cdf, uniforms[mask, 2], side='right')
            scores[mask] = support[np.minimum(index, support.size - 1)]
    return strata, arms, alive, scores


def generate_population(spec, n, seed, assignment=None, workers=1):
    """
    Simulate ``n`` subjects from a scenario.

    Each subject draws a stratum from the proportions, an arm from the
    assignment rule, and, if the stratum survives under that arm, a score
    from the matching distribution. Subject ``i`` uses only its own counter
    block of the seeded stream (see :mod:`survmed.streams`), so identical
    inputs reproduce identical output for any number of ``workers``.

    .. doctest:: strata

        >>> population = generate_population(figure3_scenario(), 1000, seed=7,
        ...                                   assignment=ARM1_ONLY)
        >>> len(population), population[0].arm
        (1000, 1)

    :param spec: a valid :class:`ScenarioSpec`
    :param n: the number of subjects, ``n >= 1``
    :param seed: a non-negative integer seed
    :param assignment: an :class:`Assignment` (default randomized, 0.5)
    :param workers: the number of worker processes
    :returns: a :class:`Population`
    :raises survmed.exceptions.ScenarioError: if the scenario is invalid
    :raises ValueError: if ``n < 1``
    """
    require_valid(spec)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("n must be a positive integer")
    seed = check_seed(seed)
    if assignment is None:
        assignment = Assignment.randomized()
    elif not isinstance(assignment, Assignment):
        raise TypeError("assignment must be an Assignment")

    tables = _sampling_tables(spec)
    bounds = list(chunk_ranges(int(n), CHUNK_SIZE))
    task = partial(_generate_chunk, tables, seed, assignment)
    LOGGER.debug("generating %d subjects in %d chunks", n, len(bounds))
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(task, bounds))
    else:
        chunks = [task(b) for b in bounds]

    strata, arms, alive, scores = (np.concatenate(parts)
                                   for parts in zip(*chunks))
    return Population(strata, arms, alive, scores)
