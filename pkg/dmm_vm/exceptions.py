# -*- coding: utf-8 -*-
"""Exceptions"""


class DmmVmException(Exception):
    """Base exception class"""


class MalformedNetworkException(DmmVmException):
    """Raised when values of different kinds, dimensions or sample spaces
    meet in one combination or transform application."""


class TransformException(DmmVmException):
    """Raised on unknown transforms or bad transform parameters."""


class ValidationException(DmmVmException):
    """Raised when a network violates the typing constraints."""

    def __init__(self, violations):
        #: The list of ``model.Violation`` records
        self.violations = list(violations)
        super().__init__('; '.join(v.message for v in self.violations))


class ParseException(DmmVmException):
    """Raised on problems with network text, carries a 1-based location."""

    def __init__(self, message, line, column, source='<string>'):
        #: Human-readable message without location
        self.message = message
        #: 1-based line number
        self.line = line
        #: 1-based column number
        self.column = column
        #: Name of the parsed source
        self.source = source
        super().__init__('{}:{}:{}: {}'.format(source, line, column, message))


class RunTimeHalt(DmmVmException):
    """Raised when execution cannot continue."""

    def __init__(self, message, tick):
        #: The tick that failed
        self.tick = tick
        super().__init__('tick {}: {}'.format(tick, message))


class InvalidCommandLineArguments(DmmVmException):
    """Raised on problems with command line arguments."""
