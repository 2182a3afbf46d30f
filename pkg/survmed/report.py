"""
.. currentmodule:: survmed.report

.. testsetup:: report

    from survmed.report import *
    from survmed.paradox import compare_samples
    from survmed.examples import figure2_samples

Reports
=======

A :class:`Report` is a titled sequence of tables plus notes, rendered as
CSV, Markdown or JSON. Every report carries the note on the quantile
convention, and bootstrap tables carry the number of resamples with a death
median, so that readers see when the numeric scale mixes deaths with
scores. Rendering is deterministic: the same report always gives the same
bytes.

.. doctest:: report

    >>> report = Report('Figure 2')
    >>> report.add_table('summary', comparison_frame(
    ...     compare_samples(*figure2_samples(), good_threshold=0.5)))
    >>> print(report.render('csv').splitlines()[2])
    p_survival,0,0.56

:func:`stacked_bar_svg` draws the composite outcome distributions as stacked
bars (death at the bottom, then bad and good outcomes) with the 50% line
marked, so the survival-incorporated median is the segment the line crosses.

API Documentation
-----------------
"""
import io
import json
import logging
import os
from collections import OrderedDict
from numbers import Integral, Real

import matplotlib
from matplotlib.figure import Figure
import pandas as pd

from .composite import (QUANTILE_CONVENTION, Outcome, median_in_survivors,
                        prob_alive_above, survival_incorporated_median,
                        survival_incorporated_quantile, survival_probability,
                        survived)
from .examples import figure1_sample, figure2_samples, figure3_scenario
from .inference import BootstrapResult
from .paradox import Direction, compare_samples, evaluate_scenario
from .strata import (STRATA, StratumLabel, always_survivor_fraction_identified,
                     observed_distribution)

LOGGER = logging.getLogger(__name__)

#: The output formats of :meth:`Report.render`.
FORMATS = ('csv', 'md', 'json')

#: The labels of two-category scores.
TWO_CATEGORY_LABELS = {0.0: 'bad', 1.0: 'good'}

SEGMENT_COLORS = ('#4d4d4d', '#d6604d', '#4393c3')

_SVG_RC = {'svg.hashsalt': 'survmed', 'svg.fonttype': 'none'}


def format_value(value, score_labels=None):
    """
    Format a table cell as text.

    .. doctest:: report

        >>> from survmed.composite import DEATH, survived
        >>> format_value(DEATH), format_value(survived(26.5))
        ('death', '26.5')
        >>> format_value(survived(1), TWO_CATEGORY_LABELS)
        'good'
        >>> format_value(0.24000000000000005)
        '0.24'

    :param value: a number, :class:`survmed.composite.Outcome`,
                  :class:`survmed.paradox.Direction`, boolean, string or
                  ``None``
    :param score_labels: an optional mapping from score to label
    :returns: a string
    """
    if value is None:
        return ''
    elif isinstance(value, Outcome):
        if value.is_death:
            return 'death'
        if score_labels and value.score in score_labels:
            return score_labels[value.score]
        return format_value(value.score)
    elif isinstance(value, Direction):
        return value.value
    elif isinstance(value, bool):
        return 'true' if value else 'false'
    elif isinstance(value, Integral):
        return str(int(value))
    elif isinstance(value, Real):
        return '{:.10g}'.format(float(value))
    return str(value)


def _json_value(value, score_labels=None):
    if value is None or isinstance(value, bool):
        return value
    elif isinstance(value, Integral):
        return int(value)
    elif isinstance(value, Real):
        return round(float(value), 10)
    return format_value(value, score_labels)


class Report(object):
    """
    A titled sequence of named tables with notes.

    :param title: the report title
    :param score_labels: an optional mapping from score to label used when
                         rendering scores
    """

    def __init__(self, title, score_labels=None):
        self.title = title
        self.score_labels = score_labels
        self.__tables = []
        self.__notes = [QUANTILE_CONVENTION]

    @property
    def tables(self):
        """
        The ``(name, DataFrame)`` pairs of the report.
        """
        return list(self.__tables)

    @property
    def notes(self):
        """
        The notes of the report, the quantile convention first.
        """
        return list(self.__notes)

    def add_table(self, name, frame):
        """
        Append a table.
        """
        if not isinstance(frame, pd.DataFrame):
            raise TypeError("a table must be a pandas DataFrame")
        self.__tables.append((name, frame))

    def add_note(self, note):
        """
        Append a note.
        """
        if note not in self.__notes:
            self.__notes.append(note)

    def _cells(self, frame):
        return [[format_value(v, self.score_labels) for v in row]
                for row in frame.itertuples(index=False, name=None)]

    def _render_csv(self):
        out = io.StringIO()
        for name, frame in self.__tables:
            out.write('# {}\n'.format(name))
            text = pd.DataFrame(self._cells(frame), columns=frame.columns)
            text.to_csv(out, index=False, lineterminator='\n')
            out.write('\n')
        for note in self.__notes:
            out.write('# note: {}\n'.format(note))
        return out.getvalue()

    def _render_md(self):
        lines = ['# {}'.format(self.title), '']
        for name, frame in self.__tables:
            lines.extend(['## {}'.format(name), ''])
            lines.append('| ' + ' | '.join(map(str, frame.columns)) + ' |')
            lines.append('|' + ' --- |' * len(frame.columns))
            for row in self._cells(frame):
                lines.append('| ' + ' | '.join(row) + ' |')
            lines.append('')
        for note in self.__notes:
            lines.append('> {}'.format(note))
        return '\n'.join(lines) + '\n'

    def _render_json(self):
        document = OrderedDict()
        document['title'] = self.title
        for name, frame in self.__tables:
            document[name] = [
                OrderedDict((str(c), _json_value(v, self.score_labels))
                            for c, v in zip(frame.columns, row))
                for row in frame.itertuples(index=False, name=None)]
        document['notes'] = list(self.__notes)
        return json.dumps(document, indent=2) + '\n'

    def render(self, fmt='md'):
        """
        Render the report.

        :param fmt: one of :data:`FORMATS`
        :returns: the rendered text
        :raises ValueError: on an unknown format
        """
        renderers = {
            'csv': self._render_csv,
            'md': self._render_md,
            'json': self._render_json,
        }
        if fmt not in renderers:
            raise ValueError("format must be one of {}".format(
                ', '.join(FORMATS)))
        return renderers[fmt]()

    def write(self, path, fmt='md'):
        """
        Render the report to a file.
        """
        with open(path, 'w', newline='\n') as handle:
            handle.write(self.render(fmt))
        LOGGER.debug("wrote %s report to %s", fmt, path)


_SUMMARY_FIELDS = (
    'p_survival', 'p_alive_above_threshold', 'threshold_level',
    'survival_incorporated_median', 'median_in_survivors',
    'mean_in_survivors', 'median_in_always_survivors')
_SCORE_FIELDS = ('median_in_survivors', 'median_in_always_survivors')


def comparison_frame(report):
    """
    A :class:`survmed.paradox.ComparisonReport` as a table with columns
    ``quantity``, ``arm`` and ``value``. Comparison-level quantities have an
    empty arm.

    :param report: a :class:`survmed.paradox.ComparisonReport`
    :returns: a ``pandas.DataFrame``
    """
    rows = []
    scenario = report.direction_always_survivor_median is not None
    for field in _SUMMARY_FIELDS:
        if field == 'median_in_always_survivors' and not scenario:
            continue
        for arm, summary in ((0, report.arm0), (1, report.arm1)):
            value = getattr(summary, field)
            if field in _SCORE_FIELDS and value is not None:
                value = survived(value)
            rows.append((field, arm, value))
    rows.append(('direction_sim', '', report.direction_sim))
    rows.append(('direction_survivor_median', '',
                 report.direction_survivor_median))
    if scenario:
        rows.append(('direction_always_survivor_median', '',
                     report.direction_always_survivor_median))
    rows.append(('tradeoff_illusion_flag', '', report.tradeoff_illusion_flag))
    return pd.DataFrame(rows, columns=['quantity', 'arm', 'value'])


def quantile_frame(samples, levels):
    """
    The survival-incorporated quantiles of each arm at each level.

    :param samples: the :class:`survmed.composite.ArmSample` of each arm, in
                    arm order
    :param levels: the quantile levels
    :returns: a ``pandas.DataFrame`` with columns ``level``, ``arm`` and
              ``quantile``
    """
    rows = [(float(q), arm, survival_incorporated_quantile(sample, q))
            for q in levels for arm, sample in enumerate(samples)]
    return pd.DataFrame(rows, columns=['level', 'arm', 'quantile'])


def bootstrap_frame(results):
    """
    Bootstrap results as a table, one row per statistic.

    :param results: a sequence of :class:`survmed.inference.BootstrapResult`
    :returns: a ``pandas.DataFrame``
    """
    return pd.DataFrame([tuple(r) for r in results],
                        columns=list(BootstrapResult._fields))


def stacked_bar_svg(path, bars, labels, title=None):
    """
    Draw composite outcome distributions as stacked bars and save them as
    SVG. Each bar stacks death, bad and good outcomes from the bottom, and a
    dashed line marks 50%. The file is byte-stable: ids are salted with a
    fixed string and no date is recorded.

    :param path: the path of the SVG file to write
    :param bars: a sequence of ``(p_death, p_bad, p_good)`` triples
    :param labels: one label per bar
    :param title: an optional title
    """
    if len(bars) != len(labels):
        raise ValueError("one label per bar is required")
    figure = Figure(figsize=(2.0 + 1.5 * len(bars), 4.5))
    axes = figure.subplots()
    positions = list(range(len(bars)))
    bottoms = [0.0] * len(bars)
    for segment, (name, color) in enumerate(zip(('death', 'bad', 'good'),
                                                SEGMENT_COLORS)):
        heights = [float(bar[segment]) for bar in bars]
        axes.bar(positions, heights, bottom=bottoms, width=0.6, color=color,
                 edgecolor='white', label=name)
        for x, bottom, height in zip(positions, bottoms, heights):
            if height > 0.04:
                axes.text(x, bottom + height / 2, '{:.0%}'.format(height),
                          ha='center', va='center', color='white',
                          fontsize=9)
        bottoms = [b + h for b, h in zip(bottoms, heights)]
    axes.axhline(0.5, color='black', linestyle='--', linewidth=1)
    axes.text(len(bars) - 0.55, 0.51, '50%', ha='right', va='bottom',
              fontsize=8)
    axes.set_xticks(positions)
    axes.set_xticklabels(labels)
    axes.set_ylim(0, 1)
    axes.set_ylabel('proportion')
    if title:
        axes.set_title(title)
    handles, names = axes.get_legend_handles_labels()
    axes.legend(handles[::-1], names[::-1], loc='upper left',
                bbox_to_anchor=(1.0, 1.0), frameon=False)
    figure.tight_layout()
    with matplotlib.rc_context(_SVG_RC):
        figure.savefig(path, format='svg', metadata={'Date': None})
    LOGGER.debug("wrote chart to %s", path)


def _composition(sample, good_threshold):
    p_death = sample.n_deaths / float(sample.n)
    p_good = prob_alive_above(sample, good_threshold)
    return p_death, max(0.0, 1.0 - p_death - p_good), p_good


def _composition_frame(compositions):
    rows = [(arm, d, b, g) for arm, (d, b, g) in enumerate(compositions)]
    return pd.DataFrame(rows, columns=['arm', 'p_death', 'p_bad', 'p_good'])


def _figure1():
    sample = figure1_sample()
    composition = _composition(sample, 0.5)
    rows = [('p_death', composition[0]), ('p_bad', composition[1]),
            ('p_good', composition[2]),
            ('p_survival', survival_probability(sample)),
            ('survival_incorporated_median',
             survival_incorporated_median(sample)),
            ('median_in_survivors', survived(median_in_survivors(sample)))]
    rows.extend(('quantile_{:g}'.format(q),
                 survival_incorporated_quantile(sample, q))
                for q in (0.75, 0.9))
    report = Report('Figure 1: survival-incorporated median',
                    TWO_CATEGORY_LABELS)
    report.add_table('summary', pd.DataFrame(rows,
                                             columns=['quantity', 'value']))
    return report, [composition], ['population']


def _figure2():
    samples = figure2_samples()
    comparison = compare_samples(samples[0], samples[1], 0.5)
    compositions = [_composition(s, 0.5) for s in samples]
    report = Report('Figure 2: survival-incorporated median versus the '
                    'median in the survivors', TWO_CATEGORY_LABELS)
    report.add_table('composition', _composition_frame(compositions))
    report.add_table('summary', comparison_frame(comparison))
    return report, compositions, ['A=0', 'A=1']


def _figure3():
    spec = figure3_scenario()
    comparison = evaluate_scenario(spec, 0.5)
    proportions = spec.proportions
    compositions = []
    for arm in (0, 1):
        dist = observed_distribution(spec, arm)
        p_good = dist.prob_alive_above(0.5)
        compositions.append((dist.p_death,
                             dist.survival_probability() - p_good, p_good))
    always = []
    for arm in (0, 1):
        scores = spec.score_distribution(StratumLabel.ALWAYS_SURVIVOR, arm)
        p_good = scores.prob_above(0.5)
        always.append((0.0, 1.0 - p_good, p_good))

    report = Report('Figure 3: medians in the always-survivors',
                    TWO_CATEGORY_LABELS)
    report.add_table('strata', pd.DataFrame(
        [(label.value, proportions[label]) for label in STRATA],
        columns=['stratum', 'proportion']))
    report.add_table('observed', _composition_frame(compositions))
    report.add_table('always_survivors', _composition_frame(always))
    report.add_table('summary', comparison_frame(comparison))
    fraction = always_survivor_fraction_identified(
        1.0 - compositions[0][0], spec.monotonicity_asserted)
    report.add_table('identified', pd.DataFrame(
        [('always_survivor_fraction', fraction)],
        columns=['quantity', 'value']))
    bars = compositions + always
    labels = ['A=0', 'A=1', 'always-survivors\nA=0', 'always-survivors\nA=1']
    return report, bars, labels


_FIGURES = {1: _figure1, 2: _figure2, 3: _figure3}


def figure_report(number):
    """
    The report and chart data of an illustrative figure.

    .. doctest:: report

        >>> report, bars, labels = figure_report(2)
        >>> labels
        ['A=0', 'A=1']

    :param number: ``1``, ``2`` or ``3``
    :returns: a triple of the :class:`Report`, the bars and their labels for
              :func:`stacked_bar_svg`
    :raises ValueError: on an unknown figure
    """
    if number not in _FIGURES:
        raise ValueError("unknown figure {}; choose 1, 2 or 3".format(number))
    return _FIGURES[number]()


def reproduce_figure(number, directory):
    """
    Write ``figure<N>.csv``, ``figure<N>.md`` and ``figure<N>.svg`` for an
    illustrative figure into ``directory``.

    :param number: ``1``, ``2`` or ``3``
    :param directory: an existing directory
    :returns: the paths written
    """
    report, bars, labels = figure_report(number)
    stem = os.path.join(directory, 'figure{}'.format(number))
    paths = [stem + '.csv', stem + '.md', stem + '.svg']
    report.write(paths[0], 'csv')
    report.write(paths[1], 'md')
    stacked_bar_svg(paths[2], bars, labels, title=report.title.split(':')[0])
    return paths
