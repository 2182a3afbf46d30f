"""
.. currentmodule:: survmed.datafiles

.. testsetup:: datafiles

    from survmed.datafiles import *
    from survmed.examples import FIGURE2_DATASET, FIGURE3_SCENARIO

Data Files
==========

Observed data and scenarios are read from and written to two file formats.

**Dataset files** are CSV files with the header
``subject_id,arm,survived,outcome``, one row per subject. ``arm`` and
``survived`` are ``0`` or ``1``. ``outcome`` is a decimal number for
survivors and must be empty for subjects who died, whose outcome is
undefined:

::

    subject_id,arm,survived,outcome
    s1,0,0,
    s2,0,1,26
    s3,1,1,30.5
    s4,1,0,

Outcomes are numeric codes. Every summary in :mod:`survmed` depends only on
the order of the scores, so any strictly increasing recoding of a
categorical outcome gives the same conclusions.

**Scenario files** are JSON objects with three keys. ``strata`` maps stratum
names (``always_survivor``, ``protected``, ``harmed``, ``never_survivor``)
to proportions. ``scores`` maps ``"<stratum>/<arm>"`` to a list of
``{"score": ..., "prob": ...}`` entries. ``monotonicity`` is a boolean.

.. code-block:: json

    {
      "strata": {"always_survivor": 0.5, "never_survivor": 0.5},
      "scores": {
        "always_survivor/0": [{"score": 0, "prob": 1.0}],
        "always_survivor/1": [{"score": 1, "prob": 1.0}]
      },
      "monotonicity": true
    }

.. doctest:: datafiles

    >>> sample0, sample1 = read_dataset(FIGURE2_DATASET)
    >>> sample0.n, sample0.n_deaths, sample1.n_deaths
    (100, 44, 20)
    >>> read_scenario(FIGURE3_SCENARIO).monotonicity_asserted
    True

API Documentation
-----------------
"""
import json
import math
from collections import OrderedDict

import numpy as np
import pandas as pd

from .composite import ArmSample
from .exceptions import FormatError
from .strata import STRATA, ScenarioSpec, StratumLabel, require_valid

#: The header of a dataset file.
DATASET_HEADER = ['subject_id', 'arm', 'survived', 'outcome']

#: The keys of a scenario file.
SCENARIO_KEYS = ('strata', 'scores', 'monotonicity')


def _parse_outcome(text):
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def read_dataset(path):
    """
    Read a dataset file.

    Every violation in the file is collected before anything is raised, so a
    single error lists all bad lines. Line numbers are physical lines with
    the header as line 1, and blank lines are violations. A UTF-8 byte order
    mark is ignored.

    :param path: the path to a CSV dataset file
    :returns: the pair of :class:`survmed.composite.ArmSample` of arm 0 and
              arm 1, with subjects in file order
    :raises survmed.exceptions.FormatError: if the file is malformed, a row
                                            violates the format, or an arm has
                                            no subjects
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                            na_filter=False, skipinitialspace=True,
                            skip_blank_lines=False, encoding='utf-8-sig')
    except pd.errors.EmptyDataError:
        raise FormatError("empty dataset file")
    except pd.errors.ParserError as err:
        raise FormatError("malformed CSV: {}".format(err))

    header = [str(c).strip() for c in frame.columns]
    if header != DATASET_HEADER:
        raise FormatError("header must be '{}', got '{}'".format(
            ','.join(DATASET_HEADER), ','.join(header)))
    frame = frame.fillna('')

    violations = []
    seen = {}
    arms, alive, scores = [], [], []
    for index, row in enumerate(frame.itertuples(index=False, name=None)):
        line = index + 2
        subject, arm, survived, outcome = (str(v).strip() for v in row)
        if not any((subject, arm, survived, outcome)):
            violations.append("blank line at line {}".format(line))
            continue
        if not subject:
            violations.append("missing subject_id at line {}".format(line))
        elif subject in seen:
            violations.append("duplicate subject_id '{}' at line {} "
                              "(first at line {})".format(subject, line,
                                                          seen[subject]))
        else:
            seen[subject] = line
        if arm not in ('0', '1'):
            violations.append("arm must be 0 or 1 at line {}".format(line))
        if survived not in ('0', '1'):
            violations.append("survived must be 0 or 1 at line {}"
                              .format(line))
            continue
        if survived == '0':
            if outcome:
                violations.append("outcome present for non-survivor at line "
                                  "{}".format(line))
            score = np.nan
        elif not outcome:
            violations.append("outcome missing for survivor at line {}"
                              .format(line))
            continue
        else:
            score = _parse_outcome(outcome)
            if score is None:
                violations.append("outcome is not a finite number at line {}"
                                  .format(line))
                continue
        arms.append(arm)
        alive.append(survived == '1')
        scores.append(score)

    if violations:
        raise FormatError(violations)

    arms = np.array(arms, dtype='<U1')
    alive = np.array(alive, dtype=bool)
    scores = np.array(scores, dtype=float)
    samples = []
    for arm in ('0', '1'):
        mask = arms == arm
        if not mask.any():
            raise FormatError("no subjects in arm {}".format(arm))
        samples.append(ArmSample.from_arrays(alive[mask], scores[mask]))
    return tuple(samples)


def _format_score(score):
    score = float(score)
    if score.is_integer():
        return str(int(score))
    return repr(score)


def write_dataset(path, sample0, sample1):
    """
    Write two arms to a dataset file. Subjects are numbered ``s1``, ``s2``,
    ... through arm 0 and then arm 1. Integral scores are written without a
    decimal point.

    :param path: the path of the CSV file to write
    :param sample0: the :class:`survmed.composite.ArmSample` of arm 0
    :param sample1: the :class:`survmed.composite.ArmSample` of arm 1
    """
    rows = []
    for arm, sample in ((0, sample0), (1, sample1)):
        for alive, score in zip(sample.alive, sample.scores):
            outcome = _format_score(score) if alive else ''
            rows.append((arm, int(alive), outcome))
    frame = pd.DataFrame(rows, columns=DATASET_HEADER[1:])
    frame.insert(0, 'subject_id',
                 ['s{}'.format(i + 1) for i in range(len(rows))])
    frame.to_csv(path, index=False, lineterminator='\n')


def write_population(path, population):
    """
    Write a simulated :class:`survmed.strata.Population` to a dataset file,
    subjects in generation order. The latent strata are not written.

    :param path: the path of the CSV file to write
    :param population: a :class:`survmed.strata.Population`
    """
    frame = population.to_frame()[DATASET_HEADER].copy()
    frame['outcome'] = [_format_score(score) if alive else ''
                        for alive, score in zip(frame['survived'],
                                                frame['outcome'])]
    frame.to_csv(path, index=False, lineterminator='\n')


def _scenario_from_json(document):
    violations = []
    if not isinstance(document, dict):
        raise FormatError("a scenario file must hold a JSON object")
    for key in document:
        if key not in SCENARIO_KEYS:
            violations.append("unknown key '{}'".format(key))
    if 'strata' not in document:
        violations.append("missing key 'strata'")

    proportions = {}
    strata = document.get('strata', {})
    if not isinstance(strata, dict):
        violations.append("'strata' must be an object")
        strata = {}
    for name, value in strata.items():
        try:
            label = StratumLabel(name)
        except ValueError:
            violations.append("unknown stratum '{}'".format(name))
            continue
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            violations.append("proportion of {} must be a number"
                              .format(name))
            continue
        proportions[label] = float(value)

    scores = {}
    entries = document.get('scores', {})
    if not isinstance(entries, dict):
        violations.append("'scores' must be an object")
        entries = {}
    for key, dist in entries.items():
        name, _, arm = key.partition('/')
        try:
            label = StratumLabel(name)
        except ValueError:
            violations.append("unknown stratum in scores key '{}'"
                              .format(key))
            continue
        if arm not in ('0', '1'):
            violations.append("scores key '{}' must end in /0 or /1"
                              .format(key))
            continue
        if not isinstance(dist, list) or not dist:
            violations.append("scores for '{}' must be a non-empty list"
                              .format(key))
            continue
        table = {}
        for entry in dist:
            if not isinstance(entry, dict) or \
                    set(entry) != set(('score', 'prob')):
                violations.append("scores for '{}' must hold objects with "
                                  "keys 'score' and 'prob'".format(key))
                break
            score, prob = entry['score'], entry['prob']
            if any(isinstance(v, bool) or not isinstance(v, (int, float))
                   for v in (score, prob)):
                violations.append("score and prob in '{}' must be numbers"
                                  .format(key))
                break
            table[float(score)] = table.get(float(score), 0.0) + float(prob)
        else:
            scores[(label, int(arm))] = table

    monotonicity = document.get('monotonicity', False)
    if not isinstance(monotonicity, bool):
        violations.append("'monotonicity' must be true or false")

    if violations:
        raise FormatError(violations)
    try:
        return ScenarioSpec(proportions, scores, monotonicity)
    except ValueError as err:
        raise FormatError(str(err))


def read_scenario(path, validate=True):
    """
    Read a scenario file.

    :param path: the path to a JSON scenario file
    :param validate: whether to check the scenario's invariants
    :returns: a :class:`survmed.strata.ScenarioSpec`
    :raises survmed.exceptions.FormatError: if the file does not follow the
                                            schema
    :raises survmed.exceptions.ScenarioError: if ``validate`` is true and the
                                              scenario is invalid
    """
    with open(path, 'r') as handle:
        try:
            document = json.load(handle)
        except ValueError as err:
            raise FormatError("invalid JSON: {}".format(err))
    spec = _scenario_from_json(document)
    if validate:
        require_valid(spec)
    return spec


def scenario_document(spec):
    """
    The JSON-ready form of a scenario, with strata and scores in canonical
    order.

    :param spec: a :class:`survmed.strata.ScenarioSpec`
    :returns: an ordered dictionary
    """
    proportions = spec.proportions
    scores = spec.scores
    document = OrderedDict()
    document['strata'] = OrderedDict(
        (label.value, proportions[label]) for label in STRATA)
    document['scores'] = OrderedDict()
    for label in STRATA:
        for arm in (0, 1):
            dist = scores.get((label, arm))
            if dist is not None:
                document['scores']['{}/{}'.format(label.value, arm)] = [
                    OrderedDict((('score', s), ('prob', p)))
                    for s, p in zip(dist.support, dist.probabilities)]
    document['monotonicity'] = spec.monotonicity_asserted
    return document


def write_scenario(spec, path):
    """
    Write a scenario file. Reading it back yields an equal scenario.

    :param spec: a :class:`survmed.strata.ScenarioSpec`
    :param path: the path of the JSON file to write
    """
    with open(path, 'w') as handle:
        json.dump(scenario_document(spec), handle, indent=2)
        handle.write('\n')
