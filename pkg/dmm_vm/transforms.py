# -*- coding: utf-8 -*-
"""Built-in neuron transforms and the transform registry.

The registry maps a transform name to a factory.  A factory receives the
parameters and the kinds declared by a neuron type and returns a bound
``Transform``, or raises ``TransformException`` when they do not fit.
"""

import math
import typing

import numpy as np

from . import exceptions, model, stream_algebra


class Transform(typing.NamedTuple):
    """A transform bound to its parameters and kinds."""

    #: Registry name
    name: str
    #: One kind per input slot
    input_kinds: typing.Tuple[model.StreamKind, ...]
    #: Kind of the produced value
    output_kind: model.StreamKind
    #: ``apply(inputs, rng) -> value``
    apply: typing.Callable
    #: Whether ``apply`` draws from the random source
    is_stochastic: bool = False
    #: The parameters the transform was built from
    parameters: typing.Tuple = ()


#: ``factory(parameters, input_kinds, output_kind) -> Transform``
TransformFactory = typing.Callable[
    [tuple, typing.Tuple[model.StreamKind, ...], model.StreamKind], Transform]


def _fail(name, msg, *args):
    raise exceptions.TransformException(
        '{}: {}'.format(name, msg.format(*args)))


def _render_kinds(input_kinds, output_kind):
    return '({}) -> {}'.format(
        ', '.join(map(str, input_kinds)), output_kind)


def _expect_kinds(name, input_kinds, output_kind, want_inputs, want_output):
    if tuple(input_kinds) != tuple(want_inputs) or output_kind != want_output:
        _fail(name, 'expects {}, declared {}',
              _render_kinds(want_inputs, want_output),
              _render_kinds(input_kinds, output_kind))


def _expect_no_parameters(name, parameters):
    if parameters:
        _fail(name, 'takes no parameters, got {}', len(parameters))


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _number_parameter(name, parameters, optional=False):
    if optional and not parameters:
        return None
    if len(parameters) != 1 or not _is_number(parameters[0]):
        _fail(name, 'expects exactly one number parameter')
    return float(parameters[0])


def _scalar_function(name, func, arity=1):
    """Factory for a deterministic transform on scalars."""

    def factory(parameters, input_kinds, output_kind):
        _expect_no_parameters(name, parameters)
        _expect_kinds(name, input_kinds, output_kind,
                      (model.SCALAR,) * arity, model.SCALAR)

        def apply(inputs, rng):
            return model.ScalarValue(func(*(v.value for v in inputs)))

        return Transform(name, tuple(input_kinds), output_kind, apply)

    return factory


def _sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _const_scalar(parameters, input_kinds, output_kind):
    c = _number_parameter('const_scalar', parameters)
    _expect_kinds('const_scalar', input_kinds, output_kind, (), model.SCALAR)
    value = model.ScalarValue(c)
    return Transform(
        'const_scalar', (), output_kind, lambda inputs, rng: value,
        parameters=tuple(parameters))


def _vector_function(name, func):
    """Factory for a deterministic component-wise transform on vectors."""

    def factory(parameters, input_kinds, output_kind):
        dimension = _number_parameter(name, parameters, optional=True)
        if output_kind.tag != model.KIND_VECTOR:
            _fail(name, 'expects a vector output, declared {}', output_kind)
        if dimension is not None and dimension != output_kind.dimension:
            _fail(name, 'dimension parameter {} does not match {}',
                  dimension, output_kind)
        _expect_kinds(name, input_kinds, output_kind,
                      (output_kind,), output_kind)

        def apply(inputs, rng):
            return model.VectorValue.from_array(func(inputs[0].as_array()))

        return Transform(name, tuple(input_kinds), output_kind, apply,
                         parameters=tuple(parameters))

    return factory


def _sample_source(parameters, input_kinds, output_kind):
    name = 'sample_source'
    if output_kind.tag != model.KIND_SAMPLE:
        _fail(name, 'expects a sample output, declared {}', output_kind)
    _expect_kinds(name, input_kinds, output_kind, (), output_kind)
    if not parameters:
        _fail(name, 'expects a token distribution')
    tokens, weights = [], []
    for param in parameters:
        if (not isinstance(param, tuple) or len(param) != 2 or
                not _is_number(param[1])):
            _fail(name, 'expects token:weight parameters, got {!r}', param)
        token, weight = param
        if token in tokens:
            _fail(name, 'duplicate token {}', token)
        if weight < 0:
            _fail(name, 'negative weight {} for token {}', weight, token)
        tokens.append(token)
        weights.append(weight)
    total = sum(weights)
    if not 0 < total < math.inf:
        _fail(name, 'weights must sum to a positive finite number')
    # Draw only among tokens of positive weight.
    support = [(t, w / total) for t, w in zip(tokens, weights) if w > 0]
    cumulative = np.cumsum([p for _, p in support])
    space = output_kind.space

    def apply(inputs, rng):
        idx = int(np.searchsorted(cumulative, rng.random(), side='right'))
        token = support[min(idx, len(support) - 1)][0]
        return model.SampleValue(token, 1.0, 1, space)

    return Transform(name, (), output_kind, apply, is_stochastic=True,
                     parameters=tuple(parameters))


def _sample_identity(parameters, input_kinds, output_kind):
    name = 'sample_identity'
    _expect_no_parameters(name, parameters)
    if output_kind.tag != model.KIND_SAMPLE:
        _fail(name, 'expects a sample output, declared {}', output_kind)
    _expect_kinds(name, input_kinds, output_kind, (output_kind,), output_kind)
    return Transform(name, tuple(input_kinds), output_kind,
                     lambda inputs, rng: inputs[0])


def _sample_map(parameters, input_kinds, output_kind):
    name = 'sample_map'
    if (len(input_kinds) != 1 or
            input_kinds[0].tag != model.KIND_SAMPLE or
            output_kind.tag != model.KIND_SAMPLE):
        _fail(name, 'expects {}, declared {}',
              '(sample<s>) -> sample<t>',
              _render_kinds(input_kinds, output_kind))
    relabel = {}
    for param in parameters:
        if (not isinstance(param, tuple) or len(param) != 2 or
                not isinstance(param[1], str)):
            _fail(name, 'expects token:token parameters, got {!r}', param)
        if param[0] in relabel:
            _fail(name, 'duplicate token {}', param[0])
        relabel[param[0]] = param[1]
    space = output_kind.space

    def apply(inputs, rng):
        value = inputs[0]
        if value.weight == 0.0:
            return stream_algebra.neutral(output_kind)
        return model.SampleValue(
            relabel.get(value.payload, value.payload), value.weight,
            value.sign, space)

    return Transform(name, tuple(input_kinds), output_kind, apply,
                     parameters=tuple(parameters))


def _sample_indicator(parameters, input_kinds, output_kind):
    name = 'sample_indicator'
    if len(parameters) != 1 or not isinstance(parameters[0], str):
        _fail(name, 'expects exactly one token parameter')
    token = parameters[0]
    if len(input_kinds) != 1 or input_kinds[0].tag != model.KIND_SAMPLE:
        _fail(name, 'expects {}, declared {}', '(sample<s>) -> scalar',
              _render_kinds(input_kinds, output_kind))
    _expect_kinds(name, input_kinds, output_kind, input_kinds, model.SCALAR)

    def apply(inputs, rng):
        value = inputs[0]
        if value.payload != token:
            return model.ScalarValue(0.0)
        return model.ScalarValue(value.sign * value.weight)

    return Transform(name, tuple(input_kinds), output_kind, apply,
                     parameters=tuple(parameters))


def _identity_matrix_stream(parameters, input_kinds, output_kind):
    name = 'identity_matrix_stream'
    _expect_no_parameters(name, parameters)
    _expect_kinds(name, input_kinds, output_kind, (model.MATRIX,),
                  model.MATRIX)
    return Transform(name, tuple(input_kinds), output_kind,
                     lambda inputs, rng: inputs[0])


def _add_matrices(parameters, input_kinds, output_kind):
    name = 'add_matrices'
    _expect_no_parameters(name, parameters)
    _expect_kinds(name, input_kinds, output_kind,
                  (model.MATRIX, model.MATRIX), model.MATRIX)

    def apply(inputs, rng):
        return stream_algebra.combine_matrices(
            [(1.0, inputs[0]), (1.0, inputs[1])])

    return Transform(name, tuple(input_kinds), output_kind, apply)


def _const_matrix(parameters, input_kinds, output_kind):
    name = 'const_matrix'
    if (len(parameters) != 1 or
            not isinstance(parameters[0], model.NetworkMatrix)):
        _fail(name, 'expects exactly one matrix parameter')
    _expect_kinds(name, input_kinds, output_kind, (), model.MATRIX)
    value = parameters[0]
    return Transform(name, (), output_kind, lambda inputs, rng: value,
                     parameters=tuple(parameters))


def builtin_registry() -> typing.Dict[str, TransformFactory]:
    """Return a fresh registry with the built-in transforms."""
    return {
        'const_scalar': _const_scalar,
        'identity_scalar': _scalar_function('identity_scalar', lambda x: x),
        'tanh_scalar': _scalar_function('tanh_scalar', math.tanh),
        'sigmoid_scalar': _scalar_function('sigmoid_scalar', _sigmoid),
        'relu_scalar': _scalar_function(
            'relu_scalar', lambda x: x if x > 0 else 0.0),
        'multiply_scalars': _scalar_function(
            'multiply_scalars', lambda x, y: x * y, arity=2),
        'identity_vector': _vector_function('identity_vector', lambda a: a),
        'tanh_vector': _vector_function('tanh_vector', np.tanh),
        'sample_source': _sample_source,
        'sample_identity': _sample_identity,
        'sample_map': _sample_map,
        'sample_indicator': _sample_indicator,
        'identity_matrix_stream': _identity_matrix_stream,
        'add_matrices': _add_matrices,
        'const_matrix': _const_matrix,
    }


def register_transform(
        registry: typing.Dict[str, TransformFactory], name: str,
        factory: TransformFactory, replace: bool = False):
    """Add a custom transform factory to ``registry``."""
    if not callable(factory):
        raise exceptions.TransformException(
            'Transform factory for {} is not callable'.format(name))
    if name in registry and not replace:
        raise exceptions.TransformException(
            'Transform {} is already registered'.format(name))
    registry[name] = factory


def make_transform(
        registry: typing.Dict[str, TransformFactory],
        neuron_type: model.NeuronType) -> Transform:
    """Resolve and bind the transform of ``neuron_type``."""
    if neuron_type.transform_name not in registry:
        raise exceptions.TransformException(
            'Unknown transform {}'.format(neuron_type.transform_name))
    factory = registry[neuron_type.transform_name]
    try:
        transform = factory(
            tuple(neuron_type.parameters), tuple(neuron_type.input_kinds),
            neuron_type.output_kind)
    except exceptions.DmmVmException:
        raise
    except Exception as e:
        raise exceptions.TransformException('{}: {}'.format(
            neuron_type.transform_name, e)) from e
    if (tuple(transform.input_kinds) != tuple(neuron_type.input_kinds) or
            transform.output_kind != neuron_type.output_kind):
        raise exceptions.TransformException(
            '{}: built transform has kinds {}, type {} declares {}'.format(
                transform.name,
                _render_kinds(transform.input_kinds, transform.output_kind),
                neuron_type.name,
                _render_kinds(neuron_type.input_kinds,
                              neuron_type.output_kind)))
    return transform


def apply_transform(
        transform: Transform, inputs: typing.Sequence[model.StreamValue],
        rng: typing.Optional[np.random.Generator] = None
) -> model.StreamValue:
    """Apply ``transform``; deterministic transforms never see ``rng``."""
    if len(inputs) != len(transform.input_kinds):
        raise exceptions.MalformedNetworkException(
            '{} expects {} inputs, got {}'.format(
                transform.name, len(transform.input_kinds), len(inputs)))
    for slot, (value, kind) in enumerate(zip(inputs, transform.input_kinds)):
        if value.kind != kind:
            raise exceptions.MalformedNetworkException(
                '{} slot {} expects {}, got {}'.format(
                    transform.name, slot, kind, value.kind))
    result = transform.apply(
        tuple(inputs), rng if transform.is_stochastic else None)
    if result.kind != transform.output_kind:
        raise exceptions.MalformedNetworkException(
            '{} produced {}, declared {}'.format(
                transform.name, result.kind, transform.output_kind))
    return result
