#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for ``dmm_vm.network`` and ``dmm_vm.model.NetworkMatrix``."""

import random

from hypothesis import given, seed, settings
from hypothesis import strategies as st
import pytest

from dmm_vm import exceptions, model, network

In = model.InputPortId
Out = model.OutputPortId


def _signature():
    return network.make_signature([
        model.NeuronType(
            'id', 1, (model.SCALAR,), model.SCALAR, 'identity_scalar'),
        model.NeuronType(
            'f', 1, (model.SCALAR,), model.SCALAR, 'tanh_scalar'),
        model.NeuronType(
            'two', 2, (model.SCALAR, model.SCALAR), model.SCALAR,
            'multiply_scalars'),
        model.NeuronType(
            'smp', 1, (model.sample('tok'),), model.sample('tok'),
            'sample_identity'),
    ])


@pytest.fixture
def signature():
    return _signature()


def test_set_weight_store_and_load(signature):
    m = network.set_weight(
        signature, model.NetworkMatrix(), In('id', 0, 0), Out('f', 1), 0.5)
    assert m.get(In('id', 0, 0), Out('f', 1)) == 0.5
    assert len(m) == 1


def test_set_weight_zero_deletes(signature):
    m = network.set_weight(
        signature, model.NetworkMatrix(), In('id', 0, 0), Out('f', 1), 0.5)
    m = network.set_weight(signature, m, In('id', 0, 0), Out('f', 1), 0.0)
    assert (In('id', 0, 0), Out('f', 1)) not in m
    assert len(m) == 0


def test_set_weight_kind_mismatch(signature):
    with pytest.raises(exceptions.ValidationException) as excinfo:
        network.set_weight(
            signature, model.NetworkMatrix(), In('smp', 0, 0), Out('id', 0),
            1.0)
    assert excinfo.value.violations[0].code == 'kind-mismatch'


def test_set_weight_returns_new_matrix(signature):
    empty = model.NetworkMatrix()
    network.set_weight(signature, empty, In('id', 0, 0), Out('f', 1), 0.5)
    assert len(empty) == 0


def test_active_neurons():
    assert network.active_neurons(model.NetworkMatrix()) == frozenset()
    m = model.NetworkMatrix({(In('id', 0, 0), Out('id', 1)): 1.0})
    assert network.active_neurons(m) == {('id', 0), ('id', 1)}
    m = model.NetworkMatrix({(In('id', 2, 0), Out('f', 7)): 1.0})
    assert network.active_neurons(m) == {('f', 7), ('id', 2)}


def test_live_neurons_adds_pinned_and_sorts():
    m = model.NetworkMatrix({(In('id', 2, 0), Out('f', 7)): 1.0})
    assert network.live_neurons(m, [Out('a', 0)]) == [
        Out('a', 0), Out('f', 7), Out('id', 2)]


def test_validate_valid(signature):
    m = model.NetworkMatrix({
        (In('id', 0, 0), Out('f', 0)): 1.0,
        (In('two', 0, 1), Out('id', 0)): -2.0,
    })
    assert network.validate(signature, m) == []


def test_validate_slot_out_of_range(signature):
    m = model.NetworkMatrix({(In('two', 0, 2), Out('f', 0)): 1.0})
    violations = network.validate(signature, m)
    assert [v.code for v in violations] == ['slot-out-of-range']


def test_validate_unknown_type(signature):
    m = model.NetworkMatrix({(In('id', 0, 0), Out('nope', 0)): 1.0})
    violations = network.validate(signature, m)
    assert [v.code for v in violations] == ['unknown-type']


def test_validate_negative_copy(signature):
    m = model.NetworkMatrix({(In('id', -1, 0), Out('f', 0)): 1.0})
    assert [v.code for v in network.validate(signature, m)] == [
        'negative-copy']


def test_make_signature_unknown_transform():
    with pytest.raises(exceptions.ValidationException) as excinfo:
        network.make_signature([model.NeuronType(
            'x', 1, (model.SCALAR,), model.SCALAR, 'no_such_transform')])
    assert excinfo.value.violations[0].code == 'bad-transform'


def test_make_signature_kinds_must_match_transform():
    with pytest.raises(exceptions.ValidationException):
        network.make_signature([model.NeuronType(
            'x', 1, (model.sample('tok'),), model.SCALAR, 'tanh_scalar')])


def test_make_signature_arity_mismatch():
    with pytest.raises(exceptions.ValidationException) as excinfo:
        network.make_signature([model.NeuronType(
            'x', 2, (model.SCALAR,), model.SCALAR, 'tanh_scalar')])
    assert excinfo.value.violations[0].code == 'arity-mismatch'


def test_make_signature_duplicate_names():
    t = model.NeuronType(
        'x', 1, (model.SCALAR,), model.SCALAR, 'identity_scalar')
    with pytest.raises(exceptions.ValidationException):
        network.make_signature([t, t])


def test_make_signature_checks_constant_matrices():
    bad = model.NetworkMatrix({(In('x', 0, 0), Out('k', 0)): 1.0})
    with pytest.raises(exceptions.ValidationException) as excinfo:
        network.make_signature([
            model.NeuronType(
                'x', 1, (model.SCALAR,), model.SCALAR, 'identity_scalar'),
            model.NeuronType(
                'k', 0, (), model.MATRIX, 'const_matrix', (bad,)),
        ])
    assert excinfo.value.violations[0].code == 'kind-mismatch'


def test_matrix_drops_zero_and_rejects_non_finite():
    m = model.NetworkMatrix({(In('id', 0, 0), Out('f', 0)): 0.0})
    assert len(m) == 0
    with pytest.raises(exceptions.MalformedNetworkException):
        model.NetworkMatrix({(In('id', 0, 0), Out('f', 0)): float('nan')})


def test_matrix_order_independent_of_insertion():
    keys = [(In('id', c, 0), Out('f', c + 1)) for c in range(20)]
    shuffled = list(keys)
    random.Random(5).shuffle(shuffled)
    a = model.NetworkMatrix({k: 1.0 + i for i, k in enumerate(keys)})
    b = model.NetworkMatrix(
        {k: 1.0 + keys.index(k) for k in shuffled})
    assert a == b
    assert a.items() == b.items()
    assert hash(a) == hash(b)
    assert list(a) == sorted(keys)


def test_matrix_rows():
    m = model.NetworkMatrix({
        (In('id', 0, 0), Out('f', 1)): 2.0,
        (In('id', 0, 0), Out('f', 0)): 1.0,
        (In('f', 0, 0), Out('id', 0)): 3.0,
    })
    assert m.rows() == {
        In('f', 0, 0): ((Out('id', 0), 3.0),),
        In('id', 0, 0): ((Out('f', 0), 1.0), (Out('f', 1), 2.0)),
    }


entries = st.lists(st.tuples(
    st.integers(min_value=0, max_value=5),
    st.integers(min_value=0, max_value=5),
    st.sampled_from([0.0, 1.0, -0.5, 2.0])), max_size=30)


@seed(1)
@settings(max_examples=100)
@given(ops=entries)
def test_set_weight_sequence_keeps_support_clean(ops):
    signature = _signature()
    m = model.NetworkMatrix()
    for copy_in, copy_out, coef in ops:
        before = network.active_neurons(m)
        m = network.set_weight(
            signature, m, In('id', copy_in, 0), Out('f', copy_out), coef)
        if coef != 0.0:
            assert before <= network.active_neurons(m)
        assert all(c != 0.0 for _, c in m.items())
    assert len(m) <= 36
