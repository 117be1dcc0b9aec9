# -*- coding: utf-8 -*-
"""Tick-by-tick execution of a dataflow matrix machine.

Each tick has a linear phase, computing every input ``Y_i`` as the linear
combination of the outputs ``X_j`` given by row ``i`` of the matrix, and a
transform phase, applying every live neuron's transform to its inputs.  All
outputs of a tick are computed from the outputs of the previous tick.  When
an updater port is set, its new value replaces the matrix at tick end.
"""

import logging
import math
import typing

import numpy as np

from . import exceptions, model, network, stream_algebra, transforms


def _check_initial_outputs(signature, initial_outputs):
    violations = []
    for port, value in sorted(initial_outputs.items()):
        problems = network.check_output_port(signature, port)
        if problems:
            violations += problems
        elif value.kind != signature.output_kind(port):
            violations.append(model.Violation(
                'kind-mismatch',
                'Initial value of {} has kind {}, port has kind {}'.format(
                    port, value.kind, signature.output_kind(port))))
    return violations


def _fill_neutral(signature, outputs, live):
    for port in live:
        if port not in outputs:
            outputs[port] = stream_algebra.neutral(
                signature.output_kind(port))
    return outputs


def init_state(
        signature: model.Signature,
        matrix: model.NetworkMatrix,
        initial_outputs: typing.Optional[
            typing.Dict[model.OutputPortId, model.StreamValue]] = None,
        updater: typing.Optional[model.OutputPortId] = None,
        seed: int = 0,
        pinned: typing.Iterable[model.OutputPortId] = ()
) -> model.MachineState:
    """Build the tick-0 state.

    Live outputs without an initial value start at the neutral value of
    their kind.  The updater's neuron is pinned live.
    """
    initial_outputs = dict(initial_outputs or {})
    violations = network.validate(signature, matrix)
    violations += _check_initial_outputs(signature, initial_outputs)
    pinned = set(pinned)
    for port in sorted(pinned):
        violations += network.check_output_port(signature, port)
    if updater is not None:
        problems = network.check_output_port(signature, updater)
        if not problems and signature.output_kind(updater) != model.MATRIX:
            problems = [model.Violation(
                'kind-mismatch', 'Updater {} has kind {}, needs {}'.format(
                    updater, signature.output_kind(updater), model.MATRIX))]
        violations += problems
        pinned.add(updater)
    if violations:
        raise exceptions.ValidationException(violations)
    outputs = _fill_neutral(
        signature, initial_outputs, network.live_neurons(matrix, pinned))
    return model.MachineState(
        signature=signature, matrix=matrix, outputs=outputs, tick=0,
        rng=np.random.default_rng(seed), updater=updater,
        pinned=frozenset(pinned))


def _live(state):
    return network.live_neurons(state.matrix, state.pinned)


def linear_phase(
        state: model.MachineState
) -> typing.Dict[model.InputPortId, model.StreamValue]:
    """Compute every input slot of every live neuron.

    Slots are visited in canonical port order and each slot's terms in
    canonical output order, so sample remixes are reproducible.
    """
    signature = state.signature
    rows = state.matrix.rows()
    result = {}
    for neuron in _live(state):
        neuron_type = signature[neuron.type_name]
        for slot in range(neuron_type.arity):
            inp = model.InputPortId(neuron.type_name, neuron.copy, slot)
            kind = neuron_type.input_kinds[slot]
            terms = [
                (coef, state.outputs[out] if out in state.outputs
                 else stream_algebra.neutral(signature.output_kind(out)))
                for out, coef in rows.get(inp, ())]
            result[inp] = stream_algebra.combine(kind, terms, state.rng)
    return result


def transform_phase(
        state: model.MachineState,
        inputs: typing.Dict[model.InputPortId, model.StreamValue]
) -> typing.Dict[model.OutputPortId, model.StreamValue]:
    """Apply the transform of every live neuron, in canonical order."""
    signature = state.signature
    result = {}
    for neuron in _live(state):
        neuron_type = signature[neuron.type_name]
        values = [
            inputs[model.InputPortId(neuron.type_name, neuron.copy, slot)]
            for slot in range(neuron_type.arity)]
        result[neuron] = transforms.apply_transform(
            signature.transforms[neuron.type_name], values, state.rng)
    return result


def _non_finite(value):
    if isinstance(value, model.ScalarValue):
        return not math.isfinite(value.value)
    elif isinstance(value, model.VectorValue):
        return not all(math.isfinite(x) for x in value.components)
    elif isinstance(value, model.SampleValue):
        return not math.isfinite(value.weight)
    return False


def step(state: model.MachineState) -> model.MachineState:
    """Execute one tick and return the next state."""
    tick = state.tick + 1
    try:
        inputs = linear_phase(state)
        outputs = transform_phase(state, inputs)
    except exceptions.MalformedNetworkException as e:
        raise exceptions.RunTimeHalt(str(e), tick) from e
    for port, value in sorted(outputs.items()):
        if _non_finite(value):
            raise exceptions.RunTimeHalt(
                'Non-finite output {} at {}'.format(value, port), tick)
    matrix = state.matrix
    if state.updater is not None and state.updater in outputs:
        candidate = outputs[state.updater]
        violations = network.validate(state.signature, candidate)
        if violations:
            raise exceptions.RunTimeHalt(
                'Self-update produced an invalid matrix: {}'.format(
                    '; '.join(v.message for v in violations)), tick)
        if candidate != matrix:
            logging.debug(
                'Tick %d: self-update installs matrix with support %d',
                tick, len(candidate))
        matrix = candidate
    new_state = state._replace(matrix=matrix, tick=tick)
    outputs = _fill_neutral(state.signature, outputs, _live(new_state))
    logging.debug('Tick %d: support size %d, %d live neurons',
                  tick, len(matrix), len(outputs))
    return new_state._replace(outputs=outputs)


def _watched_value(state, port):
    if port in state.outputs:
        return state.outputs[port]
    return stream_algebra.neutral(state.signature.output_kind(port))


def iter_run(
        state: model.MachineState, n_ticks: int,
        watch: typing.Sequence[model.OutputPortId] = ()
) -> typing.Iterator[typing.Tuple[model.MachineState, model.TickRecord]]:
    """Step ``n_ticks`` times, yielding the new state and its record."""
    if n_ticks < 0:
        raise exceptions.DmmVmException(
            'Number of ticks must not be negative, got {}'.format(n_ticks))
    problems = []
    for port in watch:
        problems += network.check_output_port(state.signature, port)
    if problems:
        raise exceptions.ValidationException(problems)
    for _ in range(n_ticks):
        try:
            state = step(state)
        except exceptions.RunTimeHalt:
            raise
        except exceptions.DmmVmException as e:
            raise exceptions.RunTimeHalt(str(e), state.tick + 1) from e
        yield state, model.TickRecord(
            tick=state.tick, support_size=len(state.matrix),
            values=tuple(
                model.TraceRecord(
                    state.tick, port, _watched_value(state, port))
                for port in watch))


def run(
        state: model.MachineState, n_ticks: int,
        watch: typing.Sequence[model.OutputPortId] = ()
) -> typing.Tuple[model.MachineState, model.Trace]:
    """Apply ``step`` ``n_ticks`` times, recording ``watch`` every tick."""
    trace = []
    for state, record in iter_run(state, n_ticks, watch):
        trace.append(record)
    logging.debug('Ran %d ticks, final support size %d',
                  n_ticks, len(state.matrix))
    return state, trace
