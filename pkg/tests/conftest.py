# -*- coding: utf-8 -*-
"""Shared fixtures"""

from pathlib import Path

import pytest

from dmm_vm import engine, io

#: Directory with the shipped example networks
NETWORKS_DIR = Path(__file__).parent.parent / 'networks'


def machine_from_text(text, seed=0):
    """Parse ``text`` and return ``(program, initial state)``."""
    program = io.parse_program(text)
    state = engine.init_state(
        program.signature, program.matrix, program.initial_outputs,
        updater=program.updater, seed=seed, pinned=program.neurons)
    return program, state


def machine_from_file(name, seed=0):
    with open(NETWORKS_DIR / name, 'rt') as inputf:
        return machine_from_text(inputf.read(), seed)


@pytest.fixture
def networks_dir():
    return NETWORKS_DIR
