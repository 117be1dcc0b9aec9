# -*- coding: utf-8 -*-
"""Linear combination of stream values, one combiner per kind.

Scalars, vectors and matrices are combined on the level of values.  Sample
streams are combined on the level of streams: a linear combination of sample
streams is a stochastic remix that picks one source per tick with
probability proportional to ``|coefficient| * weight``.
"""

import math
import typing

import numpy as np

from . import exceptions, model

#: A linear combination is a list of ``(coefficient, value)`` pairs.
Terms = typing.Sequence[typing.Tuple[float, model.StreamValue]]


def neutral(kind: model.StreamKind) -> model.StreamValue:
    """Return the additive identity of ``kind``."""
    if kind.tag == model.KIND_SCALAR:
        return model.ScalarValue(0.0)
    elif kind.tag == model.KIND_VECTOR:
        return model.VectorValue((0.0,) * kind.dimension)
    elif kind.tag == model.KIND_SAMPLE:
        return model.SampleValue(model.EMPTY_TOKEN, 0.0, 1, kind.space)
    elif kind.tag == model.KIND_MATRIX:
        return model.NetworkMatrix()
    else:
        raise exceptions.MalformedNetworkException(
            'Unknown stream kind: {}'.format(kind))


def combine_scalar(terms: Terms) -> model.ScalarValue:
    """Return ``sum(c * v)``, summed left to right from 0.0."""
    total = 0.0
    for coef, value in terms:
        total += coef * value.value
    return model.ScalarValue(total)


def combine_vector(
        terms: Terms,
        dimension: typing.Optional[int] = None) -> model.VectorValue:
    """Component-wise ``sum(c * v)``.

    ``dimension`` is needed only to build the zero vector of an empty list.
    """
    if not terms and dimension is None:
        raise exceptions.MalformedNetworkException(
            'Cannot combine an empty vector list of unknown dimension')
    dimension = dimension or len(terms[0][1].components)
    total = np.zeros(dimension, dtype=np.float64)
    for coef, value in terms:
        if len(value.components) != dimension:
            raise exceptions.MalformedNetworkException(
                'Vector dimension mismatch: {} vs. {}'.format(
                    len(value.components), dimension))
        total += coef * value.as_array()
    return model.VectorValue.from_array(total)


def combine_samples(
        terms: Terms, rng: np.random.Generator,
        space: typing.Optional[str] = None) -> model.SampleValue:
    """Stochastic remix of sample streams.

    Term ``i`` is selected with probability ``w_i / W`` where
    ``w_i = |c_i| * weight_i`` and ``W = sum(w_i)``.  The selected payload is
    emitted with weight ``W`` and sign ``sign(c_i) * sign_i``.  Exactly one
    draw is taken from ``rng`` when ``W > 0``, none otherwise.
    """
    spaces = {value.space for _, value in terms}
    if space is not None:
        spaces.add(space)
    if len(spaces) > 1:
        raise exceptions.MalformedNetworkException(
            'Cannot remix samples from different spaces: {}'.format(
                ', '.join(sorted(spaces))))
    if not spaces:
        raise exceptions.MalformedNetworkException(
            'Cannot remix an empty sample list of unknown space')
    space = spaces.pop()
    weights = np.array([abs(coef) * value.weight for coef, value in terms],
                       dtype=np.float64)
    cumulative = np.cumsum(weights)
    total = float(cumulative[-1]) if len(terms) else 0.0
    if not math.isfinite(total):
        raise exceptions.MalformedNetworkException(
            'Sample remix weight overflows in space {}'.format(space))
    if total == 0.0:
        return neutral(model.sample(space))
    threshold = rng.random() * total
    chosen = int(np.searchsorted(cumulative, threshold, side='right'))
    if chosen == len(terms):
        chosen = int(np.flatnonzero(weights)[-1])
    coef, value = terms[chosen]
    sign = (1 if coef > 0 else -1) * value.sign

    return model.SampleValue(value.payload, total, sign, space)


def combine_matrices(terms: Terms) -> model.NetworkMatrix:
    """Entry-wise ``sum(c * M)``; entries summing to exactly 0 are dropped."""
    acc = {}
    for coef, value in terms:
        for key, entry in value.items():
            acc[key] = acc.get(key, 0.0) + coef * entry
    return model.NetworkMatrix(acc)


def combine(
        kind: model.StreamKind, terms: Terms,
        rng: typing.Optional[np.random.Generator] = None
) -> model.StreamValue:
    """Dispatch to the combiner of ``kind``; only samples consume ``rng``."""
    for _, value in terms:
        if value.kind != kind:
            raise exceptions.MalformedNetworkException(
                'Cannot combine {} value into {} combination'.format(
                    value.kind, kind))
    if not terms:
        return neutral(kind)
    if kind.tag == model.KIND_SCALAR:
        return combine_scalar(terms)
    elif kind.tag == model.KIND_VECTOR:
        return combine_vector(terms, kind.dimension)
    elif kind.tag == model.KIND_SAMPLE:
        if rng is None:
            raise exceptions.MalformedNetworkException(
                'Combining samples needs a random source')
        return combine_samples(terms, rng, kind.space)
    elif kind.tag == model.KIND_MATRIX:
        return combine_matrices(terms)
    else:
        raise exceptions.MalformedNetworkException(
            'Unknown stream kind: {}'.format(kind))
