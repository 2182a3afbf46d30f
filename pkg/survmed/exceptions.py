"""
.. currentmodule:: survmed.exceptions

Exceptions
==========

Exceptions are the key mechanism for handling undesirable program
state. Whenever :mod:`survmed` encounters a problem, it raises an exception of
some variety. Whenever possible, we have preferred to use builtin exception
classes, e.g. `ValueError`, `TypeError`, etc... For causes that aren't really
covered by a builtin exception class, we've created subclasses of the standard
library's exceptions to report those errors.

Those classes are :class:`FormatError`, :class:`ScenarioError` and
:class:`ResampleBudgetError`.

API Documentation
-----------------
"""


class FormatError(Exception):
    """
    An error class to report when a dataset or scenario file is improperly
    formatted.

    Every problem found in the file is kept in :attr:`violations`, so a single
    pass over a file reports all of its bad lines.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super(FormatError, self).__init__('; '.join(self.violations))


class ScenarioError(ValueError):
    """
    Raised when an operation requires a valid
    :class:`survmed.strata.ScenarioSpec` and is handed one that violates its
    invariants. :attr:`violations` lists every violated invariant, as returned
    by :func:`survmed.strata.validate_scenario`.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super(ScenarioError, self).__init__('; '.join(self.violations))


class ResampleBudgetError(RuntimeError):
    """
    Raised when the bootstrap keeps drawing resamples without survivors and
    runs out of redraws.
    """
    pass
