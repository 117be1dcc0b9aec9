#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the ``dmm-vm`` command line interface."""

import simplejson
import pytest

from dmm_vm import app

from .conftest import NETWORKS_DIR

OVERFLOW = (
    'type m arity 2 in scalar scalar out scalar transform multiply_scalars\n'
    'weight m.0.0 <- m.0 1.0\n'
    'weight m.0.1 <- m.0 1.0\n'
    'init m.0 1e200\n'
    'watch m.0\n')


def _main(*argv, config_file=''):
    return app.main(['--config-file', str(config_file)] + list(argv))


def _net(name):
    return str(NETWORKS_DIR / name)


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_run_fib(capsys):
    assert _main('run', '--net', _net('fib.dmm'), '--ticks', '6') == 0
    lines = _lines(capsys)
    assert len(lines) == 6
    assert lines[0] == '1\tx.0\t1.0'
    assert lines[-1] == '6\tx.0\t13.0'


def test_run_zero_ticks(capsys):
    assert _main('run', '--net', _net('fib.dmm'), '--ticks', '0') == 0
    assert _lines(capsys) == []


def test_run_watch_overrides_file(capsys):
    assert _main('run', '--net', _net('fib.dmm'), '--ticks', '2',
                 '--watch', 'y.0', '--watch', 'x.0') == 0
    assert _lines(capsys) == [
        '1\ty.0\t1.0', '1\tx.0\t1.0', '2\ty.0\t1.0', '2\tx.0\t2.0']


def test_run_is_deterministic(capsys):
    argv = ('run', '--net', _net('remix.dmm'), '--ticks', '100')
    assert _main(*argv, '--seed', '3') == 0
    first = _lines(capsys)
    assert _main(*argv, '--seed', '3') == 0
    assert _lines(capsys) == first
    assert _main(*argv, '--seed', '4') == 0
    assert _lines(capsys) != first


def test_run_seed_from_config(capsys, tmp_path):
    config = tmp_path / 'dmmvmrc'
    config.write_text('[dmm_vm]\nseed = 4\n')
    argv = ('run', '--net', _net('remix.dmm'), '--ticks', '50')
    assert _main(*argv, '--seed', '4') == 0
    expected = _lines(capsys)
    assert _main(*argv, config_file=config) == 0
    assert _lines(capsys) == expected


def test_run_bad_seed_in_config(capsys, tmp_path):
    config = tmp_path / 'dmmvmrc'
    config.write_text('[dmm_vm]\nseed = many\n')
    assert _main('run', '--net', _net('fib.dmm'), '--ticks', '1',
                 config_file=config) == app.EXIT_USAGE


def test_run_output_json(capsys, tmp_path):
    path = tmp_path / 'trace.json'
    assert _main('run', '--net', _net('self_update.dmm'), '--ticks', '3',
                 '--output-json', str(path)) == 0
    with open(path, 'rt') as inputf:
        data = simplejson.load(inputf)
    assert [record['tick'] for record in data] == [1, 2, 3]
    assert data[-1]['values'][0]['value'] == {'value': 2.0}
    assert data[-1]['values'][1]['value']['support_size'] == 3


def test_dump_canonical(capsys):
    assert _main('run', '--net', _net('fib.dmm'), '--dump-canonical') == 0
    assert capsys.readouterr().out == (
        'type x arity 1 in scalar out scalar transform identity_scalar\n'
        'type y arity 1 in scalar out scalar transform identity_scalar\n'
        'weight x.0.0 <- x.0 1.0\n'
        'weight x.0.0 <- y.0 1.0\n'
        'weight y.0.0 <- x.0 1.0\n'
        'init x.0 1.0\n'
        'init y.0 0.0\n'
        'watch x.0\n')


def test_check(capsys):
    assert _main('check', '--net', _net('fib.dmm')) == 0
    assert _lines(capsys) == ['2 types, 2 neurons, 3 entries']


def test_missing_file(capsys, tmp_path):
    assert _main('run', '--net', str(tmp_path / 'none.dmm'),
                 '--ticks', '1') == app.EXIT_USAGE
    assert 'not found' in capsys.readouterr().err


def test_parse_error(capsys, tmp_path):
    path = tmp_path / 'bad.dmm'
    path.write_text(
        'type x arity 1 in scalar out scalar transform identity_scalar\n'
        'weight x.0.0 <- x.0 abc\n')
    assert _main('run', '--net', str(path), '--ticks', '1') == \
        app.EXIT_INVALID
    assert '{}:2:21:'.format(path) in capsys.readouterr().err


def test_invalid_utf8(capsys, tmp_path):
    path = tmp_path / 'latin1.dmm'
    path.write_bytes(
        b'type x arity 1 in scalar out scalar transform identity_scalar\n'
        b'init x.0 \xe9\n')
    assert _main('run', '--net', str(path), '--ticks', '1') == \
        app.EXIT_INVALID
    assert '{}:2:10:'.format(path) in capsys.readouterr().err


def test_unknown_watch_port(capsys):
    assert _main('run', '--net', _net('fib.dmm'), '--ticks', '1',
                 '--watch', 'nope.0') == app.EXIT_INVALID


def test_halt(capsys, tmp_path):
    path = tmp_path / 'overflow.dmm'
    path.write_text(OVERFLOW)
    assert _main('run', '--net', str(path), '--ticks', '5') == app.EXIT_HALT
    assert 'halted: tick 1' in capsys.readouterr().err


@pytest.mark.parametrize('extra', [
    (),
    ('--ticks', '-1'),
    ('--ticks', '1', '--watch', 'x'),
])
def test_usage_errors(capsys, extra):
    assert _main('run', '--net', _net('fib.dmm'), *extra) == app.EXIT_USAGE


@pytest.mark.parametrize('argv', [
    (),
    ('run',),
    ('run', '--net', 'x.dmm', '--ticks', 'many'),
    ('frobnicate',),
])
def test_argparse_errors(capsys, argv):
    with pytest.raises(SystemExit) as excinfo:
        _main(*argv)
    assert excinfo.value.code == app.EXIT_USAGE


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        app.main(['--version'])
    assert excinfo.value.code == 0
    assert 'dmm-vm' in capsys.readouterr().out


PLUGIN = '''
from dmm_vm import model, transforms


def _square(parameters, input_kinds, output_kind):
    return transforms.Transform(
        'square', tuple(input_kinds), output_kind,
        lambda inputs, rng: model.ScalarValue(inputs[0].value ** 2))


def register(registry):
    transforms.register_transform(registry, 'square', _square)
'''


def test_plugin(capsys, tmp_path, monkeypatch):
    (tmp_path / 'dmm_square_plugin.py').write_text(PLUGIN)
    monkeypatch.syspath_prepend(str(tmp_path))
    path = tmp_path / 'square.dmm'
    path.write_text(
        'type q arity 1 in scalar out scalar transform square\n'
        'weight q.0.0 <- q.0 1.0\n'
        'init q.0 2.0\n'
        'watch q.0\n')
    assert _main('--plugin', 'dmm_square_plugin', 'run', '--net', str(path),
                 '--ticks', '3') == 0
    assert _lines(capsys) == ['1\tq.0\t4.0', '2\tq.0\t16.0', '3\tq.0\t256.0']
    assert _main('run', '--net', str(path), '--ticks', '1') == \
        app.EXIT_INVALID


def test_plugin_not_found(capsys):
    assert _main('--plugin', 'no_such_dmm_plugin', 'run', '--net',
                 _net('fib.dmm'), '--ticks', '1') == app.EXIT_USAGE


BROKEN_PLUGIN = '''
from dmm_vm import transforms


def _broken(parameters, input_kinds, output_kind):
    raise RuntimeError('cannot build')


def register(registry):
    transforms.register_transform(registry, 'broken', _broken)
'''


def test_plugin_factory_error(capsys, tmp_path, monkeypatch):
    (tmp_path / 'dmm_broken_plugin.py').write_text(BROKEN_PLUGIN)
    monkeypatch.syspath_prepend(str(tmp_path))
    path = tmp_path / 'broken.dmm'
    path.write_text(
        'type b arity 1 in scalar out scalar transform broken\n')
    assert _main('--plugin', 'dmm_broken_plugin', 'check', '--net',
                 str(path)) == app.EXIT_INVALID
    assert 'broken: cannot build' in capsys.readouterr().err


def test_seed_leaves_deterministic_trace_unchanged(capsys):
    argv = ('run', '--net', _net('fib.dmm'), '--ticks', '20')
    assert _main(*argv, '--seed', '1') == 0
    first = capsys.readouterr().out
    assert _main(*argv, '--seed', '2') == 0
    assert capsys.readouterr().out == first
