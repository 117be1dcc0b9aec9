# -*- coding: utf-8 -*-
"""Representation of kinds, values, ports, networks and machine state."""

import math
import typing

import numpy as np

from . import exceptions

#: Tag of real-valued streams
KIND_SCALAR = 'scalar'

#: Tag of fixed-dimension vector streams
KIND_VECTOR = 'vector'

#: Tag of weighted signed sample streams
KIND_SAMPLE = 'sample'

#: Tag of network matrix streams
KIND_MATRIX = 'matrix'

#: Known kind tags.
KIND_TAGS = (KIND_SCALAR, KIND_VECTOR, KIND_SAMPLE, KIND_MATRIX)

#: Largest supported vector dimension
MAX_VECTOR_DIMENSION = 2 ** 20

#: Payload of the neutral sample of every sample space
EMPTY_TOKEN = '_'


class StreamKind(typing.NamedTuple):
    """The kind of values flowing over one link."""

    #: One of ``KIND_TAGS``
    tag: str
    #: Dimension, for vector kinds only
    dimension: typing.Optional[int] = None
    #: Sample space name, for sample kinds only
    space: typing.Optional[str] = None

    def __str__(self):
        if self.tag == KIND_VECTOR:
            return 'vector<{}>'.format(self.dimension)
        elif self.tag == KIND_SAMPLE:
            return 'sample<{}>'.format(self.space)
        else:
            return self.tag


#: The scalar kind
SCALAR = StreamKind(KIND_SCALAR)

#: The matrix kind
MATRIX = StreamKind(KIND_MATRIX)


def vector(dimension: int) -> StreamKind:
    """Return the vector kind of the given dimension."""
    if dimension < 1:
        raise exceptions.MalformedNetworkException(
            'Vector dimension must be positive, got {}'.format(dimension))
    if dimension > MAX_VECTOR_DIMENSION:
        raise exceptions.MalformedNetworkException(
            'Vector dimension {} exceeds the limit of {}'.format(
                dimension, MAX_VECTOR_DIMENSION))
    return StreamKind(KIND_VECTOR, dimension=int(dimension))


def sample(space: str) -> StreamKind:
    """Return the sample kind over the named space."""
    return StreamKind(KIND_SAMPLE, space=space)


class ScalarValue(typing.NamedTuple):
    """A real number."""

    #: The number
    value: float

    @property
    def kind(self) -> StreamKind:
        return SCALAR


class VectorValue(typing.NamedTuple):
    """A fixed-length vector of real numbers."""

    #: The components, as Python floats
    components: typing.Tuple[float, ...]

    @property
    def kind(self) -> StreamKind:
        return vector(len(self.components))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.components, dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> 'VectorValue':
        return cls(tuple(float(x) for x in arr))


class SampleValue(typing.NamedTuple):
    """One weighted, signed sample from a named token space."""

    #: The sampled token
    payload: str
    #: Non-negative weight; weight 0 is the neutral sample
    weight: float
    #: +1 or -1
    sign: int
    #: Name of the sample space
    space: str

    @property
    def kind(self) -> StreamKind:
        return sample(self.space)


class OutputPortId(typing.NamedTuple):
    """Output ``X_j`` of one neuron copy; doubles as the neuron address."""

    #: Name of the neuron type
    type_name: str
    #: Copy ordinal
    copy: int

    def __str__(self):
        return '{}.{}'.format(self.type_name, self.copy)


class InputPortId(typing.NamedTuple):
    """Input ``Y_i``: one slot of one neuron copy."""

    #: Name of the neuron type
    type_name: str
    #: Copy ordinal
    copy: int
    #: Slot index, in ``[0, arity)``
    slot: int

    @property
    def neuron(self) -> OutputPortId:
        return OutputPortId(self.type_name, self.copy)

    def __str__(self):
        return '{}.{}.{}'.format(self.type_name, self.copy, self.slot)


class NetworkMatrix:
    """Finite-support map from ``(InputPortId, OutputPortId)`` to a nonzero
    coefficient.

    Rows are inputs, columns are outputs.  Instances are immutable; zero
    coefficients are never stored and all views are in canonical (sorted)
    port order, independent of insertion order.  A ``NetworkMatrix`` is also
    the value type of matrix-kinded streams.
    """

    __slots__ = ('_entries', '_items', '_rows')

    def __init__(self, entries=None):
        if isinstance(entries, NetworkMatrix):
            entries = entries._entries
        clean = {}
        for key, coef in dict(entries or {}).items():
            inp, out = key
            coef = float(coef)
            if not math.isfinite(coef):
                raise exceptions.MalformedNetworkException(
                    'Non-finite coefficient {} for {} <- {}'.format(
                        coef, InputPortId(*inp), OutputPortId(*out)))
            if coef != 0.0:
                clean[(InputPortId(*inp), OutputPortId(*out))] = coef
        self._set(clean)

    def _set(self, clean):
        self._entries = clean
        self._items = None
        self._rows = None

    @classmethod
    def _from_clean(cls, clean) -> 'NetworkMatrix':
        result = cls.__new__(cls)
        result._set(clean)
        return result

    @property
    def kind(self) -> StreamKind:
        return MATRIX

    def get(self, inp: InputPortId, out: OutputPortId) -> float:
        """Return the coefficient, 0.0 if not stored."""
        return self._entries.get((inp, out), 0.0)

    def with_entry(
            self, inp: InputPortId, out: OutputPortId,
            coef: float) -> 'NetworkMatrix':
        """Return a copy with the entry set; coefficient 0 removes it."""
        coef = float(coef)
        if not math.isfinite(coef):
            raise exceptions.MalformedNetworkException(
                'Non-finite coefficient {} for {} <- {}'.format(
                    coef, inp, out))
        clean = dict(self._entries)
        key = (InputPortId(*inp), OutputPortId(*out))
        if coef == 0.0:
            clean.pop(key, None)
        else:
            clean[key] = coef
        return NetworkMatrix._from_clean(clean)

    def items(self) -> typing.Tuple[
            typing.Tuple[typing.Tuple[InputPortId, OutputPortId], float], ...]:
        """Entries in canonical order."""
        if self._items is None:
            self._items = tuple(sorted(self._entries.items()))
        return self._items

    def rows(self) -> typing.Dict[
            InputPortId, typing.Tuple[typing.Tuple[OutputPortId, float], ...]]:
        """Entries grouped by input port, both levels in canonical order."""
        if self._rows is None:
            rows = {}
            for (inp, out), coef in self.items():
                rows.setdefault(inp, []).append((out, coef))
            self._rows = {inp: tuple(terms) for inp, terms in rows.items()}
        return self._rows

    def as_dict(self) -> typing.Dict:
        return dict(self._entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(key for key, _ in self.items())

    def __contains__(self, key):
        return key in self._entries

    def __eq__(self, other):
        if not isinstance(other, NetworkMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(self.items())

    def __repr__(self):
        return 'NetworkMatrix({!r})'.format(dict(self.items()))


#: Any value that can flow over a link
StreamValue = typing.Union[
    ScalarValue, VectorValue, SampleValue, NetworkMatrix]


class NeuronType(typing.NamedTuple):
    """One neuron species of a signature."""

    #: Type name
    name: str
    #: Number of input slots; 0 for sources
    arity: int
    #: One kind per input slot
    input_kinds: typing.Tuple[StreamKind, ...]
    #: Kind of the single output
    output_kind: StreamKind
    #: Name of the transform in the registry
    transform_name: str
    #: Transform parameters: numbers, ``(token, number)`` or
    #: ``(token, token)`` pairs, or a ``NetworkMatrix``
    parameters: typing.Tuple = ()


class Signature:
    """Finite set of neuron types together with their resolved transforms.

    Built by ``network.make_signature()``; equality looks at the types only.
    """

    def __init__(self, types, transforms):
        #: Mapping from type name to ``NeuronType``
        self.types = {t.name: t for t in sorted(types, key=lambda t: t.name)}
        #: Mapping from type name to ``transforms.Transform``
        self.transforms = dict(transforms)

    def __contains__(self, name):
        return name in self.types

    def __getitem__(self, name) -> NeuronType:
        return self.types[name]

    def __iter__(self):
        return iter(self.types.values())

    def __len__(self):
        return len(self.types)

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self.types == other.types

    def __repr__(self):
        return 'Signature({!r})'.format(list(self.types.values()))

    def output_kind(self, port: OutputPortId) -> StreamKind:
        return self.types[port.type_name].output_kind

    def input_kind(self, port: InputPortId) -> StreamKind:
        return self.types[port.type_name].input_kinds[port.slot]


class Violation(typing.NamedTuple):
    """One typing problem of a network."""

    #: Short machine-readable code, e.g. ``kind-mismatch``
    code: str
    #: Human-readable description
    message: str


class Program(typing.NamedTuple):
    """Everything a network file describes."""

    #: The signature
    signature: Signature
    #: The initial network matrix
    matrix: NetworkMatrix
    #: Initial output values, by port
    initial_outputs: typing.Dict[OutputPortId, StreamValue]
    #: The matrix-kinded output that replaces the matrix, if any
    updater: typing.Optional[OutputPortId]
    #: Ports to report in traces, in order
    watch: typing.Tuple[OutputPortId, ...]
    #: Explicitly declared neuron copies, sorted
    neurons: typing.Tuple[OutputPortId, ...] = ()


class MachineState(typing.NamedTuple):
    """State of a running machine between ticks."""

    #: The signature
    signature: Signature
    #: The matrix in force for the next tick
    matrix: NetworkMatrix
    #: Current output values ``X_j``
    outputs: typing.Dict[OutputPortId, StreamValue]
    #: Number of executed ticks
    tick: int
    #: The machine's single random source
    rng: np.random.Generator
    #: Matrix-kinded output replacing the matrix at tick end, if any
    updater: typing.Optional[OutputPortId] = None
    #: Neurons computed every tick even without matrix entries
    pinned: typing.FrozenSet[OutputPortId] = frozenset()


class TraceRecord(typing.NamedTuple):
    """Value of one watched port after one tick."""

    #: The tick, 1-based
    tick: int
    #: The watched port
    port: OutputPortId
    #: The port's value after the tick
    value: StreamValue


class TickRecord(typing.NamedTuple):
    """Everything recorded for one executed tick."""

    #: The tick, 1-based
    tick: int
    #: Support size of the matrix in force after the tick
    support_size: int
    #: One record per watched port, in watch list order
    values: typing.Tuple[TraceRecord, ...]


#: A trace is one ``TickRecord`` per executed tick
Trace = typing.List[TickRecord]
