"""
.. currentmodule:: survmed.examples

Example Data
============

The examples module provides the illustrative populations used throughout
the documentation and tests: a single arm with 20% death (Figure 1), two
arms whose survivor medians point against survival (Figure 2), and the
principal-stratification scenario that reproduces those arms (Figure 3).
Good outcomes are scored 1, bad outcomes 0.
"""
from os.path import abspath, dirname, join, realpath

from .composite import ArmSample
from .datafiles import read_dataset, read_scenario
from .paradox import TwoCategoryArm

DATA_PATH = join(dirname(abspath(realpath(__file__))), "data")

#: The Figure 2 trial, 100 subjects per arm.
FIGURE2_DATASET = join(DATA_PATH, "figure2-dataset.csv")

#: The Figure 3 principal-stratification scenario.
FIGURE3_SCENARIO = join(DATA_PATH, "figure3-scenario.json")


def figure1_sample():
    """
    One arm of 100 subjects: 20 deaths, 45 bad and 35 good outcomes. Its
    survival-incorporated median is a bad outcome.
    """
    return ArmSample.from_counts(20, {0: 45, 1: 35})


def high_mortality_sample():
    """
    One arm of 100 subjects in which 60 die and the rest have a good outcome.
    The median is a death; the 75th percentile is a good outcome.
    """
    return ArmSample.from_counts(60, {1: 40})


def figure2_arms():
    """
    The Figure 2 arms as probabilities: death 44%, bad 26%, good 30% under
    control and death 20%, bad 45%, good 35% under treatment.

    :returns: a pair of :class:`survmed.paradox.TwoCategoryArm`
    """
    return (TwoCategoryArm(0.44, 0.26, 0.30),
            TwoCategoryArm(0.20, 0.45, 0.35))


def figure2_samples():
    """
    The Figure 2 trial read from :data:`FIGURE2_DATASET`.

    :returns: a pair of :class:`survmed.composite.ArmSample`
    """
    return read_dataset(FIGURE2_DATASET)


def figure3_scenario():
    """
    The Figure 3 scenario read from :data:`FIGURE3_SCENARIO`: 56%
    always-survivors, 24% protected and 20% never-survivors under
    monotonicity. The always-survivors have a good median under control and
    a bad median under treatment.

    :returns: a :class:`survmed.strata.ScenarioSpec`
    """
    return read_scenario(FIGURE3_SCENARIO)
