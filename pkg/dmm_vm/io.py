# -*- coding: utf-8 -*-
"""Reading and writing network files, rendering traces.

The network language is line oriented, ``#`` starts a comment::

    type <name> arity <k> in <kind>*k out <kind> transform <tname>[(<params>)]
    neuron <type>.<copy>
    weight <type>.<copy>.<slot> <- <type>.<copy> <coefficient>
    init <type>.<copy> <value>
    updater <type>.<copy>
    watch <type>.<copy>

Kinds are ``scalar``, ``vector<d>``, ``sample<space>`` and ``matrix``.
Statements may come in any order.
"""

import logging
from pathlib import Path
import math
import re
import typing

import simplejson

from . import exceptions, lexer, model, network, transforms

#: Statement keywords
KEYWORDS = ('type', 'neuron', 'weight', 'init', 'updater', 'watch')

#: Rendering of sample signs
SIGNS = {1: '+', -1: '-'}


class _Stmt(typing.NamedTuple):
    """A syntactically parsed statement with the location of its parts."""

    #: The keyword
    keyword: str
    #: 1-based line of the keyword
    line: int
    #: 1-based column of the keyword
    column: int
    #: Parsed arguments, keyword specific
    args: typing.Dict


class _Cursor:
    """Walks over the tokens of one line."""

    def __init__(self, tokens, source):
        #: The line's tokens
        self.tokens = tokens
        #: Source name for diagnostics
        self.source = source
        #: Index of the next token
        self.pos = 0

    def error(self, message, token=None):
        if token is None:
            if self.pos < len(self.tokens):
                token = self.tokens[self.pos]
            else:
                last = self.tokens[-1]
                raise exceptions.ParseException(
                    message, last.line, last.column + len(last.value),
                    self.source)
        raise exceptions.ParseException(
            message, token.line, token.column, self.source)

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def take(self, type_, what):
        token = self.peek()
        if token is None:
            self.error('Expected {}, found end of line'.format(what))
        if token.type != type_:
            self.error('Expected {}, found {!r}'.format(what, token.value))
        self.pos += 1
        return token

    def accept(self, type_):
        token = self.peek()
        if token is not None and token.type == type_:
            self.pos += 1
            return token
        return None

    def keyword(self, word):
        token = self.take('ID', repr(word))
        if token.value != word:
            self.error('Expected {!r}, found {!r}'.format(word, token.value),
                       token)
        return token

    def end(self):
        if self.peek() is not None:
            self.error('Unexpected {!r}'.format(self.peek().value))

    # Terminals with conversion

    def number(self, what='a number'):
        token = self.take('NUMBER', what)
        value = float(token.value)
        if not math.isfinite(value):
            self.error('Number {} is out of range'.format(token.value), token)
        return value, token

    def natural(self, what):
        token = self.take('NUMBER', what)
        if not re.fullmatch(r'\d+', token.value):
            self.error('Expected {}, found {!r}'.format(what, token.value),
                       token)
        return int(token.value), token

    def output_port(self):
        token = self.take('PORT', 'an output port <type>.<copy>')
        parts = token.value.split('.')
        if len(parts) != 2:
            self.error('Expected an output port <type>.<copy>, found '
                       '{!r}'.format(token.value), token)
        return model.OutputPortId(parts[0], int(parts[1])), token

    def input_port(self):
        token = self.take('PORT', 'an input port <type>.<copy>.<slot>')
        parts = token.value.split('.')
        if len(parts) != 3:
            self.error('Expected an input port <type>.<copy>.<slot>, found '
                       '{!r}'.format(token.value), token)
        return (model.InputPortId(parts[0], int(parts[1]), int(parts[2])),
                token)

    def kind(self):
        token = self.peek()
        if token is not None and token.type == 'KIND':
            self.pos += 1
            tag, arg = token.value[:-1].split('<')
            if tag == model.KIND_VECTOR:
                if int(arg) < 1:
                    self.error('Vector dimension must be positive', token)
                if int(arg) > model.MAX_VECTOR_DIMENSION:
                    self.error('Vector dimension exceeds the limit of {}'
                               .format(model.MAX_VECTOR_DIMENSION), token)
                return model.vector(int(arg))
            return model.sample(arg)
        elif token is not None and token.type == 'ID' and token.value in (
                model.KIND_SCALAR, model.KIND_MATRIX):
            self.pos += 1
            return model.StreamKind(token.value)
        self.error('Expected a kind (scalar, vector<d>, sample<space>, '
                   'matrix)')

    def matrix_literal(self):
        """Parse ``{in <- out coef, ...}``; returns matrix and located
        entries."""
        self.take('LBRACE', "'{'")
        entries = {}
        located = []
        if not self.accept('RBRACE'):
            while True:
                inp, token = self.input_port()
                self.take('ARROW', "'<-'")
                out, _ = self.output_port()
                coef, _ = self.number('a coefficient')
                if (inp, out) in entries:
                    self.error('Duplicate matrix entry {} <- {}'.format(
                        inp, out), token)
                entries[(inp, out)] = coef
                located.append((inp, out, token))
                if self.accept('RBRACE'):
                    break
                self.take('COMMA', "',' or '}'")
        return model.NetworkMatrix(entries), located

    def parameter(self, located_entries):
        token = self.peek()
        if token is not None and token.type == 'LBRACE':
            matrix, located = self.matrix_literal()
            located_entries.extend(located)
            return matrix
        elif token is not None and token.type == 'NUMBER':
            return self.number()[0]
        name = self.take('ID', 'a parameter')
        if not self.accept('COLON'):
            return name.value
        if self.peek() is not None and self.peek().type == 'NUMBER':
            return (name.value, self.number()[0])
        return (name.value, self.take('ID', 'a token or number').value)

    def value_literal(self):
        """Parse a raw init value; conversion to a kind happens later."""
        token = self.peek()
        located = []
        if token is None:
            self.error('Expected a value, found end of line')
        elif token.type == 'NUMBER':
            return ('scalar', self.number()[0]), located
        elif token.type == 'LBRACKET':
            self.pos += 1
            components = [self.number()[0]]
            while not self.accept('RBRACKET'):
                self.take('COMMA', "',' or ']'")
                components.append(self.number()[0])
            return ('vector', tuple(components)), located
        elif token.type == 'LBRACE':
            matrix, located = self.matrix_literal()
            return ('matrix', matrix), located
        elif token.type == 'ID':
            self.pos += 1
            self.take('SLASH', "'/'")
            weight, weight_token = self.number('a weight')
            if weight < 0:
                self.error('Sample weight must not be negative', weight_token)
            self.take('SLASH', "'/'")
            sign_token = self.peek()
            if sign_token is None or sign_token.type not in ('PLUS', 'MINUS'):
                self.error("Expected sign '+' or '-'")
            self.pos += 1
            sign = 1 if sign_token.type == 'PLUS' else -1
            return ('sample', (token.value, weight, sign)), located
        self.error('Expected a value, found {!r}'.format(token.value))


def _parse_type(cur):
    name = cur.take('ID', 'a type name')
    cur.keyword('arity')
    arity, arity_token = cur.natural('an arity')
    cur.keyword('in')
    kinds = []
    while not (cur.peek() is not None and cur.peek().type == 'ID' and
               cur.peek().value == 'out'):
        if cur.peek() is None:
            cur.keyword('out')
        kinds.append(cur.kind())
    cur.keyword('out')
    output_kind = cur.kind()
    cur.keyword('transform')
    tname = cur.take('ID', 'a transform name')
    params = []
    located = []
    if cur.accept('LPAREN'):
        if not cur.accept('RPAREN'):
            while True:
                params.append(cur.parameter(located))
                if cur.accept('RPAREN'):
                    break
                cur.take('COMMA', "',' or ')'")
    cur.end()
    if arity != len(kinds):
        cur.error('Type {} has arity {} but {} input kinds'.format(
            name.value, arity, len(kinds)), arity_token)
    return {
        'type': model.NeuronType(
            name.value, arity, tuple(kinds), output_kind, tname.value,
            tuple(params)),
        'name_token': name,
        'transform_token': tname,
        'located': located,
    }


def _parse_port_stmt(cur):
    port, token = cur.output_port()
    cur.end()
    return {'port': port, 'token': token}


def _parse_weight(cur):
    inp, token = cur.input_port()
    cur.take('ARROW', "'<-'")
    out, _ = cur.output_port()
    coef, _ = cur.number('a coefficient')
    cur.end()
    return {'input': inp, 'output': out, 'coefficient': coef,
            'token': token}


def _parse_init(cur):
    port, token = cur.output_port()
    literal, located = cur.value_literal()
    cur.end()
    return {'port': port, 'token': token, 'literal': literal,
            'located': located}


#: Statement parsers by keyword
_PARSERS = {
    'type': _parse_type,
    'neuron': _parse_port_stmt,
    'weight': _parse_weight,
    'init': _parse_init,
    'updater': _parse_port_stmt,
    'watch': _parse_port_stmt,
}


def _split_lines(tokens):
    line = []
    for token in tokens:
        if token.type == 'NEWLINE':
            if line:
                yield line
            line = []
        else:
            line.append(token)
    if line:
        yield line


def _parse_statements(text, source):
    statements = []
    for line in _split_lines(lexer.tokenize(text, source)):
        cur = _Cursor(line, source)
        head = cur.take('ID', 'a statement keyword')
        if head.value not in _PARSERS:
            cur.error('Unknown statement {!r}, expected one of {}'.format(
                head.value, ', '.join(KEYWORDS)), head)
        statements.append(_Stmt(
            head.value, head.line, head.column, _PARSERS[head.value](cur)))
    return statements


class _Builder:
    """Turns parsed statements into a validated ``model.Program``."""

    def __init__(self, source, registry):
        #: Source name for diagnostics
        self.source = source
        #: Transform registry
        self.registry = registry

    def fail(self, message, token):
        raise exceptions.ParseException(
            message, token.line, token.column, self.source)

    def check(self, violations, token):
        if violations:
            self.fail(violations[0].message, token)

    def check_located(self, signature, located):
        for inp, out, token in located:
            self.check(network.check_entry(signature, inp, out), token)

    def signature(self, stmts):
        types = []
        bound = {}
        for stmt in stmts:
            neuron_type = stmt.args['type']
            if neuron_type.name in bound:
                self.fail('Duplicate neuron type {}'.format(
                    neuron_type.name), stmt.args['name_token'])
            try:
                bound[neuron_type.name] = transforms.make_transform(
                    self.registry, neuron_type)
            except exceptions.TransformException as e:
                self.fail(str(e), stmt.args['transform_token'])
            types.append(neuron_type)
        if not types:
            raise exceptions.ParseException(
                'Empty signature: no type declarations', 1, 1, self.source)
        signature = model.Signature(types, bound)
        for stmt in stmts:
            self.check_located(signature, stmt.args['located'])
        return signature

    def value(self, signature, port, literal, located, token):
        kind = signature.output_kind(port)
        tag, raw = literal
        if tag != kind.tag:
            self.fail('Initial value of {} is a {}, port has kind {}'.format(
                port, tag, kind), token)
        if tag == model.KIND_SCALAR:
            return model.ScalarValue(raw)
        elif tag == model.KIND_VECTOR:
            if len(raw) != kind.dimension:
                self.fail('Initial value of {} has dimension {}, port has '
                          'kind {}'.format(port, len(raw), kind), token)
            return model.VectorValue(raw)
        elif tag == model.KIND_SAMPLE:
            return model.SampleValue(raw[0], raw[1], raw[2], kind.space)
        self.check_located(signature, located)
        return raw

    def build(self, statements):
        by_keyword = {k: [] for k in KEYWORDS}
        for stmt in statements:
            by_keyword[stmt.keyword].append(stmt)
        signature = self.signature(by_keyword['type'])

        neurons = set()
        for stmt in by_keyword['neuron']:
            port, token = stmt.args['port'], stmt.args['token']
            self.check(network.check_output_port(signature, port), token)
            if port in neurons:
                self.fail('Duplicate neuron declaration {}'.format(port),
                          token)
            neurons.add(port)

        matrix = {}
        for stmt in by_keyword['weight']:
            args = stmt.args
            key = (args['input'], args['output'])
            self.check(network.check_entry(signature, *key), args['token'])
            if key in matrix:
                self.fail('Duplicate weight {} <- {}'.format(*key),
                          args['token'])
            matrix[key] = args['coefficient']

        initial_outputs = {}
        for stmt in by_keyword['init']:
            args = stmt.args
            port, token = args['port'], args['token']
            self.check(network.check_output_port(signature, port), token)
            if port in initial_outputs:
                self.fail('Duplicate init for {}'.format(port), token)
            initial_outputs[port] = self.value(
                signature, port, args['literal'], args['located'], token)

        updater = None
        for stmt in by_keyword['updater']:
            port, token = stmt.args['port'], stmt.args['token']
            if updater is not None:
                self.fail('Only one updater is supported', token)
            self.check(network.check_output_port(signature, port), token)
            if signature.output_kind(port) != model.MATRIX:
                self.fail('Updater {} has kind {}, needs {}'.format(
                    port, signature.output_kind(port), model.MATRIX), token)
            updater = port

        watch = []
        for stmt in by_keyword['watch']:
            port, token = stmt.args['port'], stmt.args['token']
            self.check(network.check_output_port(signature, port), token)
            if port in watch:
                self.fail('Duplicate watch for {}'.format(port), token)
            watch.append(port)

        return model.Program(
            signature=signature, matrix=model.NetworkMatrix(matrix),
            initial_outputs=initial_outputs, updater=updater,
            watch=tuple(watch), neurons=tuple(sorted(neurons)))


def parse_program(
        text: str, registry: typing.Optional[typing.Dict] = None,
        source: str = '<string>') -> model.Program:
    """Parse and validate a network description.

    Raises ``ParseException`` with a 1-based line and column on any
    lexical, syntactic, kind, arity or transform problem.
    """
    if registry is None:
        registry = transforms.builtin_registry()
    return _Builder(source, registry).build(_parse_statements(text, source))


#: ``deserialize`` is parsing of canonical text
deserialize = parse_program


def parse_output_port(text: str) -> model.OutputPortId:
    """Parse a single ``<type>.<copy>`` reference."""
    tokens = [t for t in lexer.tokenize(text) if t.type != 'NEWLINE']
    if not tokens:
        raise exceptions.ParseException(
            'Expected an output port <type>.<copy>', 1, 1)
    cur = _Cursor(tokens, '<string>')
    port, _ = cur.output_port()
    cur.end()
    return port


def _decode(raw: bytes, source: str) -> str:
    """Decode UTF-8 network text, locating the first invalid byte."""
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError as e:
        prefix = raw[:e.start].decode('utf-8')
        line = prefix.count('\n') + 1
        column = len(prefix) - (prefix.rfind('\n') + 1) + 1
        raise exceptions.ParseException(
            'Invalid UTF-8 byte 0x{:02x}'.format(raw[e.start]), line, column,
            source) from e


def read_program(
        path: Path,
        registry: typing.Optional[typing.Dict] = None) -> model.Program:
    """Read and parse the UTF-8 network file at ``path``."""
    logging.info('Reading network from %s', path)
    with open(path, 'rb') as inputf:
        text = _decode(inputf.read(), str(path))
    program = parse_program(text, registry, source=str(path))
    logging.info('=> %d types, %d matrix entries', len(program.signature),
                 len(program.matrix))
    return program


def render_number(value: float) -> str:
    """Shortest text that reads back as exactly ``value``."""
    return repr(float(value))


def render_matrix_literal(matrix: model.NetworkMatrix) -> str:
    return '{' + ', '.join(
        '{} <- {} {}'.format(inp, out, render_number(coef))
        for (inp, out), coef in matrix.items()) + '}'


def _render_parameter(param) -> str:
    if isinstance(param, model.NetworkMatrix):
        return render_matrix_literal(param)
    elif isinstance(param, tuple):
        token, value = param
        if isinstance(value, str):
            return '{}:{}'.format(token, value)
        return '{}:{}'.format(token, render_number(value))
    elif isinstance(param, str):
        return param
    return render_number(param)


def _render_type(neuron_type: model.NeuronType) -> str:
    words = ['type', neuron_type.name, 'arity', str(neuron_type.arity), 'in']
    words += [str(kind) for kind in neuron_type.input_kinds]
    words += ['out', str(neuron_type.output_kind), 'transform']
    tname = neuron_type.transform_name
    if neuron_type.parameters:
        tname += '({})'.format(', '.join(
            _render_parameter(p) for p in neuron_type.parameters))
    return ' '.join(words + [tname])


def render_literal(value: model.StreamValue) -> str:
    """Render ``value`` in the network file syntax."""
    if isinstance(value, model.ScalarValue):
        return render_number(value.value)
    elif isinstance(value, model.VectorValue):
        return '[{}]'.format(', '.join(map(render_number, value.components)))
    elif isinstance(value, model.SampleValue):
        return '{}/{}/{}'.format(
            value.payload, render_number(value.weight), SIGNS[value.sign])
    return render_matrix_literal(value)


def serialize(program: model.Program) -> str:
    """Render ``program`` in canonical form."""
    lines = [_render_type(t) for t in program.signature]
    lines += ['neuron {}'.format(port) for port in sorted(program.neurons)]
    lines += ['weight {} <- {} {}'.format(inp, out, render_number(coef))
              for (inp, out), coef in program.matrix.items()]
    lines += ['init {} {}'.format(port, render_literal(value))
              for port, value in sorted(program.initial_outputs.items())]
    if program.updater is not None:
        lines.append('updater {}'.format(program.updater))
    lines += ['watch {}'.format(port) for port in program.watch]
    return '\n'.join(lines) + '\n'


def render_value(value: model.StreamValue) -> str:
    """Render ``value`` for trace output."""
    if isinstance(value, model.ScalarValue):
        return render_number(value.value)
    elif isinstance(value, model.VectorValue):
        return ','.join(map(render_number, value.components))
    elif isinstance(value, model.SampleValue):
        return '{}/{}/{}'.format(
            value.payload, render_number(value.weight), SIGNS[value.sign])
    return str(len(value))


def format_trace(trace: model.Trace) -> typing.Iterator[str]:
    """Yield one ``tick<TAB>port<TAB>value`` line per watched value."""
    for tick_record in trace:
        for record in tick_record.values:
            yield '{}\t{}\t{}'.format(
                record.tick, record.port, render_value(record.value))


class JsonEncoder(simplejson.JSONEncoder):
    """Helper class that knows how to encode ``NetworkMatrix`` and
    ``pathlib.Path``"""

    def default(self, obj):
        if isinstance(obj, model.NetworkMatrix):
            return {
                'support_size': len(obj),
                'entries': [[str(inp), str(out), coef]
                            for (inp, out), coef in obj.items()],
            }
        elif isinstance(obj, Path):
            return str(obj)
        else:
            return super().default(obj)
