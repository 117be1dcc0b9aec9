# -*- coding: utf-8 -*-
"""Signatures, port addressing and validation of network matrices."""

import logging
import typing

from . import exceptions, model, transforms


def make_signature(
        types: typing.Iterable[model.NeuronType],
        registry: typing.Optional[typing.Dict] = None) -> model.Signature:
    """Build a ``Signature``, resolving every transform in ``registry``.

    Raises ``ValidationException`` listing all problems found.
    """
    if registry is None:
        registry = transforms.builtin_registry()
    types = list(types)
    violations = []
    seen = set()
    bound = {}
    for neuron_type in types:
        if neuron_type.name in seen:
            violations.append(model.Violation(
                'duplicate-type',
                'Duplicate neuron type {}'.format(neuron_type.name)))
            continue
        seen.add(neuron_type.name)
        if neuron_type.arity != len(neuron_type.input_kinds):
            violations.append(model.Violation(
                'arity-mismatch',
                'Type {} has arity {} but {} input kinds'.format(
                    neuron_type.name, neuron_type.arity,
                    len(neuron_type.input_kinds))))
            continue
        try:
            bound[neuron_type.name] = transforms.make_transform(
                registry, neuron_type)
        except exceptions.TransformException as e:
            violations.append(model.Violation(
                'bad-transform', 'Type {}: {}'.format(neuron_type.name, e)))
    if violations:
        raise exceptions.ValidationException(violations)
    signature = model.Signature(types, bound)
    # Constant matrices carried as parameters must fit the signature too.
    for neuron_type in types:
        for param in neuron_type.parameters:
            if isinstance(param, model.NetworkMatrix):
                violations += [
                    model.Violation(v.code, 'Type {}: {}'.format(
                        neuron_type.name, v.message))
                    for v in validate(signature, param)]
    if violations:
        raise exceptions.ValidationException(violations)
    logging.debug('Built signature with %d types', len(signature))
    return signature


def check_output_port(
        signature: model.Signature,
        port: model.OutputPortId) -> typing.List[model.Violation]:
    """Return the problems of addressing ``port``."""
    if port.type_name not in signature:
        return [model.Violation(
            'unknown-type', 'Unknown neuron type {} in {}'.format(
                port.type_name, port))]
    if port.copy < 0:
        return [model.Violation(
            'negative-copy', 'Negative copy ordinal in {}'.format(port))]
    return []


def check_input_port(
        signature: model.Signature,
        port: model.InputPortId) -> typing.List[model.Violation]:
    """Return the problems of addressing ``port``."""
    problems = check_output_port(signature, port.neuron)
    if problems:
        return problems
    arity = signature[port.type_name].arity
    if not 0 <= port.slot < arity:
        return [model.Violation(
            'slot-out-of-range',
            'Slot {} of {} out of range, type {} has arity {}'.format(
                port.slot, port, port.type_name, arity))]
    return []


def check_entry(
        signature: model.Signature, inp: model.InputPortId,
        out: model.OutputPortId) -> typing.List[model.Violation]:
    """Return the problems of one matrix entry ``inp <- out``."""
    problems = (check_input_port(signature, inp) +
                check_output_port(signature, out))
    if problems:
        return problems
    if signature.output_kind(out) != signature.input_kind(inp):
        return [model.Violation(
            'kind-mismatch',
            'Kind mismatch: output {} ({}) cannot feed input {} ({})'.format(
                out, signature.output_kind(out), inp,
                signature.input_kind(inp)))]
    return []


def validate(
        signature: model.Signature,
        matrix: model.NetworkMatrix) -> typing.List[model.Violation]:
    """Return all typing violations of ``matrix``, empty iff valid."""
    violations = []
    for inp, out in matrix:
        violations += check_entry(signature, inp, out)
    return violations


def set_weight(
        signature: model.Signature, matrix: model.NetworkMatrix,
        inp: model.InputPortId, out: model.OutputPortId,
        coefficient: float) -> model.NetworkMatrix:
    """Return ``matrix`` with ``a[inp, out] = coefficient``; 0 deletes."""
    problems = check_entry(signature, inp, out)
    if problems:
        raise exceptions.ValidationException(problems)
    return matrix.with_entry(inp, out, coefficient)


def active_neurons(
        matrix: model.NetworkMatrix) -> typing.FrozenSet[model.OutputPortId]:
    """Return all neuron copies appearing at either end of an entry."""
    result = set()
    for inp, out in matrix:
        result.add(inp.neuron)
        result.add(out)
    return frozenset(result)


def live_neurons(
        matrix: model.NetworkMatrix,
        pinned: typing.Iterable[model.OutputPortId] = ()
) -> typing.List[model.OutputPortId]:
    """Neurons a machine computes: the active ones plus ``pinned``, sorted."""
    return sorted(active_neurons(matrix) | frozenset(pinned))
