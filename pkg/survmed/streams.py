"""
.. currentmodule:: survmed.streams

.. testsetup:: streams

    from survmed.streams import *

Random Streams
==============

Simulation and resampling in :mod:`survmed` are reproducible bit-for-bit and
do not depend on how work is split across processes. Two rules make that
true.

**Subject streams.** A seed is hashed into a two-word key with
``numpy.random.SeedSequence(seed).generate_state(2, numpy.uint64)``. Subject
``i`` consumes the four 64-bit outputs of counter block ``i`` of the
``Philox4x64`` bit generator under that key, converted to uniforms on
``[0, 1)`` as ``(raw >> 11) * 2**-53``. Any range of subjects can therefore
be generated on its own, and the concatenation of ranges equals a single
pass.

.. doctest:: streams

    >>> whole = subject_uniforms(7, 0, 10)
    >>> parts = [subject_uniforms(7, 0, 4), subject_uniforms(7, 4, 10)]
    >>> bool((whole == numpy.concatenate(parts)).all())
    True

**Resample streams.** Resample ``b`` under ``seed`` draws from a
``numpy.random.Generator`` seeded with ``SeedSequence([seed, b])``.

API Documentation
-----------------
"""
import numpy

#: The number of uniforms each subject consumes.
UNIFORMS_PER_SUBJECT = 4

_MANTISSA = numpy.uint64(11)
_SCALE = 1.0 / 9007199254740992.0


def check_seed(seed):
    """
    Validate a seed.

    :param seed: the seed
    :returns: ``int(seed)``
    :raises TypeError: if ``seed`` is not an integer
    :raises ValueError: if ``seed`` is negative
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, numpy.integer)):
        raise TypeError("seed must be an integer")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return int(seed)


def stream_key(seed):
    """
    The ``Philox`` key derived from a seed.

    :param seed: a non-negative integer
    :returns: a ``uint64`` array of length two
    """
    seed = check_seed(seed)
    return numpy.random.SeedSequence(seed).generate_state(2, numpy.uint64)


def subject_uniforms(seed, start, stop):
    """
    The uniforms of subjects ``start`` to ``stop - 1``.

    :param seed: a non-negative integer
    :param start: the first subject index
    :param stop: one past the last subject index
    :returns: an array of shape ``(stop - start, UNIFORMS_PER_SUBJECT)``
    :raises ValueError: if ``0 <= start <= stop`` does not hold
    """
    if not 0 <= start <= stop:
        raise ValueError("subject range must satisfy 0 <= start <= stop")
    bit_generator = numpy.random.Philox(key=stream_key(seed), counter=start)
    raw = bit_generator.random_raw(UNIFORMS_PER_SUBJECT * (stop - start))
    uniforms = (raw >> _MANTISSA) * _SCALE
    return uniforms.reshape(stop - start, UNIFORMS_PER_SUBJECT)


def resample_generator(seed, index):
    """
    The random generator of resample ``index``.

    :param seed: a non-negative integer
    :param index: the resample index
    :returns: a ``numpy.random.Generator``
    """
    seed = check_seed(seed)
    return numpy.random.default_rng(numpy.random.SeedSequence([seed, index]))


def chunk_ranges(n, chunk_size):
    """
    Split ``range(n)`` into consecutive ``(start, stop)`` ranges of at most
    ``chunk_size`` indices.

    .. doctest:: streams

        >>> list(chunk_ranges(10, 4))
        [(0, 4), (4, 8), (8, 10)]

    :param n: the number of indices
    :param chunk_size: the largest chunk
    :returns: a generator of ``(start, stop)`` pairs
    """
    if chunk_size < 1:
        raise ValueError("chunk size must be positive")
    for start in range(0, n, chunk_size):
        yield start, min(n, start + chunk_size)
