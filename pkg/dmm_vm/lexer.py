# -*- coding: utf-8 -*-
"""Tokenizer for the network description language."""

import typing

import ply.lex as lex

from . import exceptions

tokens = (
    'KIND', 'PORT', 'ARROW', 'NUMBER', 'ID', 'LPAREN', 'RPAREN', 'LBRACKET',
    'RBRACKET', 'LBRACE', 'RBRACE', 'COMMA', 'COLON', 'SLASH', 'PLUS',
    'MINUS', 'NEWLINE',
)

# Function rules are tried in definition order, before the string rules.


def t_KIND(t):
    r'vector<\d+>|sample<[A-Za-z_][A-Za-z0-9_]*>'
    return t


def t_PORT(t):
    r'[A-Za-z_][A-Za-z0-9_]*\.\d+(\.\d+)?'
    return t


def t_ARROW(t):
    r'<-'
    return t


def t_NUMBER(t):
    r'[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?'
    return t


def t_ID(t):
    r'[A-Za-z_][A-Za-z0-9_]*'
    return t


def t_NEWLINE(t):
    r'\n+'
    t.lexer.lineno += len(t.value)
    return t


t_LPAREN = r'\('
t_RPAREN = r'\)'
t_LBRACKET = r'\['
t_RBRACKET = r'\]'
t_LBRACE = r'\{'
t_RBRACE = r'\}'
t_COMMA = r','
t_COLON = r':'
t_SLASH = r'/'
t_PLUS = r'\+'
t_MINUS = r'-'
t_ignore_COMMENT = r'\#[^\n]*'

t_ignore = ' \t\r'


def column_of(data: str, lexpos: int) -> int:
    """Return the 1-based column of ``lexpos`` in ``data``."""
    return lexpos - data.rfind('\n', 0, lexpos)


def t_error(t):
    raise exceptions.ParseException(
        'Illegal character {!r}'.format(t.value[0]), t.lexer.lineno,
        column_of(t.lexer.lexdata, t.lexpos))

###############################################################################


class Token(typing.NamedTuple):
    """A token with its 1-based location."""

    #: Token type, one of ``tokens``
    type: str
    #: Matched text
    value: str
    #: 1-based line
    line: int
    #: 1-based column
    column: int


_lexer = None


def build():
    return lex.lex()


def tokenize(text: str, source: str = '<string>') -> typing.List[Token]:
    """Return all tokens of ``text``, newlines included."""
    global _lexer
    if _lexer is None:
        _lexer = build()
    lexer = _lexer.clone()
    lexer.lineno = 1
    lexer.input(text)
    result = []
    try:
        for tok in lexer:
            result.append(Token(
                tok.type, tok.value, tok.lineno,
                column_of(text, tok.lexpos)))
    except exceptions.ParseException as e:
        raise exceptions.ParseException(e.message, e.line, e.column, source)
    return result
