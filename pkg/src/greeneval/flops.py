"""Parameter and floating-point-operation counts for declared layer stacks.

Counting conventions, stated once and used everywhere:

* A multiply-accumulate is 2 FPO by default (one multiply plus one add).
  With ``mac_factor=1`` only multiplications are counted and additions are
  free, which matches multiplier-only "MAC count" conventions.
* Only the forward pass is counted; there is no backward-pass multiplier.
* Activation functions are excluded. For recurrent layers this means the
  count covers the gate linear maps (input-to-hidden and hidden-to-hidden
  matrix products plus their bias adds); elementwise state combinations
  are excluded along with the nonlinearities.
* Dilation, grouping and transposed convolutions are rejected rather than
  silently mis-counted.

Shapes never include a batch dimension. Convolution inputs are
``(channels, spatial...)``; recurrent inputs are ``(timesteps, features)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .core import (
    DomainError,
    ParseError,
    ShapeError,
    UnsupportedLayerError,
)

LINEAR_KINDS = ("linear",)
CONV_KINDS = ("conv1d", "conv2d")
RECURRENT_KINDS = ("rnn_tanh", "gru", "lstm")
SUPPORTED_KINDS = LINEAR_KINDS + CONV_KINDS + RECURRENT_KINDS

#: Number of gate linear maps per recurrent kind.
GATES = {"rnn_tanh": 1, "gru": 3, "lstm": 4}

_UNSUPPORTED_FEATURES = ("dilation", "groups", "transposed", "output_padding")


@dataclass(frozen=True)
class TensorShape:
    """A tensor shape without the batch dimension; every dim >= 1."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise DomainError("a shape needs at least one dimension")
        for i, d in enumerate(dims):
            if d < 1:
                raise DomainError(f"shape dimension {i} must be >= 1, got {d}")

    @property
    def rank(self) -> int:
        return len(self.dims)

    def numel(self) -> int:
        return math.prod(self.dims)


@dataclass(frozen=True)
class LayerSpec:
    """A declared neural layer: a kind plus its hyperparameters.

    Only the fields relevant to ``kind`` are set; the rest stay None.
    Use the :func:`linear`, :func:`conv1d`, :func:`conv2d`,
    :func:`rnn_tanh`, :func:`gru` and :func:`lstm` helpers.
    """

    kind: str
    bias: bool = True
    # linear
    in_features: int | None = None
    out_features: int | None = None
    # conv
    c_in: int | None = None
    c_out: int | None = None
    kernel: tuple[int, ...] | None = None
    stride: tuple[int, ...] | None = None
    padding: tuple[int, ...] | None = None
    # recurrent
    input_size: int | None = None
    hidden_size: int | None = None

    def __post_init__(self):
        if self.kind not in SUPPORTED_KINDS:
            raise UnsupportedLayerError(
                f"unsupported layer kind {self.kind!r}; supported kinds are "
                f"{', '.join(SUPPORTED_KINDS)}")
        if self.kind in LINEAR_KINDS:
            _require_size("in", self.in_features)
            _require_size("out", self.out_features)
        elif self.kind in CONV_KINDS:
            rank = 1 if self.kind == "conv1d" else 2
            _require_size("c_in", self.c_in)
            _require_size("c_out", self.c_out)
            object.__setattr__(self, "kernel",
                               _per_dim("kernel", self.kernel, rank, minimum=1))
            object.__setattr__(self, "stride",
                               _per_dim("stride", self.stride, rank, minimum=1,
                                        default=1))
            object.__setattr__(self, "padding",
                               _per_dim("padding", self.padding, rank, minimum=0,
                                        default=0))
        else:
            _require_size("input_size", self.input_size)
            _require_size("hidden_size", self.hidden_size)

    @property
    def spatial_rank(self) -> int:
        if self.kind not in CONV_KINDS:
            raise DomainError(f"{self.kind} has no spatial rank")
        return 1 if self.kind == "conv1d" else 2


def _require_size(name: str, value) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise DomainError(f"{name} must be an integer >= 1, got {value!r}")


def _per_dim(name: str, value, rank: int, *, minimum: int,
             default: int | None = None) -> tuple[int, ...]:
    if value is None:
        if default is None:
            raise DomainError(f"{name} is required")
        value = default
    if isinstance(value, bool):
        raise DomainError(f"{name} must be an integer or list of integers")
    if isinstance(value, int):
        value = (value,) * rank
    value = tuple(value)
    if len(value) != rank:
        raise DomainError(f"{name} must have {rank} value(s), got {len(value)}")
    for v in value:
        if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
            raise DomainError(f"{name} values must be integers >= {minimum}, "
                              f"got {v!r}")
    return value


def linear(in_features: int, out_features: int, bias: bool = True) -> LayerSpec:
    return LayerSpec(kind="linear", in_features=in_features,
                     out_features=out_features, bias=bias)


def conv1d(c_in: int, c_out: int, kernel, stride=1, padding=0,
           bias: bool = True) -> LayerSpec:
    return LayerSpec(kind="conv1d", c_in=c_in, c_out=c_out, kernel=kernel,
                     stride=stride, padding=padding, bias=bias)


def conv2d(c_in: int, c_out: int, kernel, stride=1, padding=0,
           bias: bool = True) -> LayerSpec:
    return LayerSpec(kind="conv2d", c_in=c_in, c_out=c_out, kernel=kernel,
                     stride=stride, padding=padding, bias=bias)


def rnn_tanh(input_size: int, hidden_size: int, bias: bool = True) -> LayerSpec:
    return LayerSpec(kind="rnn_tanh", input_size=input_size,
                     hidden_size=hidden_size, bias=bias)


def gru(input_size: int, hidden_size: int, bias: bool = True) -> LayerSpec:
    return LayerSpec(kind="gru", input_size=input_size,
                     hidden_size=hidden_size, bias=bias)


def lstm(input_size: int, hidden_size: int, bias: bool = True) -> LayerSpec:
    return LayerSpec(kind="lstm", input_size=input_size,
                     hidden_size=hidden_size, bias=bias)


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def layer_params(layer: LayerSpec) -> int:
    """Number of learnable parameters of one layer.

    Recurrent kinds follow the dual-bias parameterization (one bias vector
    on the input map and one on the hidden map per gate).
    """
    if layer.kind in LINEAR_KINDS:
        return layer.out_features * layer.in_features + \
            (layer.out_features if layer.bias else 0)
    if layer.kind in CONV_KINDS:
        weights = layer.c_out * layer.c_in * math.prod(layer.kernel)
        return weights + (layer.c_out if layer.bias else 0)
    gates = GATES[layer.kind]
    hid, inp = layer.hidden_size, layer.input_size
    per_gate = hid * (inp + hid) + (2 * hid if layer.bias else 0)
    return gates * per_gate


def output_shape(layer: LayerSpec, in_shape: TensorShape) -> TensorShape:
    """Shape produced by applying ``layer`` to ``in_shape``.

    Convolution output dims follow floor((in + 2*padding - kernel)/stride) + 1;
    a computed dim below 1 is a ShapeError naming the dimension.
    """
    dims = in_shape.dims
    if layer.kind in LINEAR_KINDS:
        if dims[-1] != layer.in_features:
            raise ShapeError(
                f"linear expects last dim {layer.in_features}, got {dims[-1]}")
        return TensorShape(dims[:-1] + (layer.out_features,))
    if layer.kind in CONV_KINDS:
        rank = layer.spatial_rank
        if in_shape.rank != rank + 1:
            raise ShapeError(
                f"{layer.kind} expects a (channels, {'x'.join(['spatial'] * rank)}) "
                f"shape of rank {rank + 1}, got rank {in_shape.rank}")
        if dims[0] != layer.c_in:
            raise ShapeError(f"{layer.kind} expects {layer.c_in} input channels, "
                             f"got {dims[0]}")
        out_spatial = []
        for d, (size, k, s, p) in enumerate(
                zip(dims[1:], layer.kernel, layer.stride, layer.padding)):
            out = (size + 2 * p - k) // s + 1
            if out < 1:
                raise ShapeError(
                    f"{layer.kind} spatial dim {d}: kernel {k} with padding {p} "
                    f"does not fit input size {size} (output would be {out})")
            out_spatial.append(out)
        return TensorShape((layer.c_out, *out_spatial))
    # recurrent: (timesteps, features)
    if in_shape.rank != 2:
        raise ShapeError(f"{layer.kind} expects a (timesteps, features) shape "
                         f"of rank 2, got rank {in_shape.rank}")
    if dims[1] != layer.input_size:
        raise ShapeError(f"{layer.kind} expects feature size {layer.input_size}, "
                         f"got {dims[1]}")
    return TensorShape((dims[0], layer.hidden_size))


def _check_mac_factor(mac_factor: int) -> int:
    if mac_factor not in (1, 2):
        raise DomainError(f"mac_factor must be 1 or 2, got {mac_factor!r}")
    return mac_factor


def _ops(mults: int, adds: int, mac_factor: int) -> int:
    # mac_factor 2 counts every scalar op; mac_factor 1 counts only multiplies.
    return mults + (mac_factor - 1) * adds


def layer_fpo(layer: LayerSpec, in_shape: TensorShape, *,
              mac_factor: int = 2) -> int:
    """Forward-pass floating-point operations of one layer on ``in_shape``."""
    mac_factor = _check_mac_factor(mac_factor)
    out = output_shape(layer, in_shape)
    if layer.kind in LINEAR_KINDS:
        applications = math.prod(in_shape.dims[:-1])
        n = layer.in_features
        mults = n
        adds = (n - 1) + (1 if layer.bias else 0)
        return applications * layer.out_features * _ops(mults, adds, mac_factor)
    if layer.kind in CONV_KINDS:
        n = layer.c_in * math.prod(layer.kernel)
        mults = n
        adds = (n - 1) + (1 if layer.bias else 0)
        out_elems = out.numel()
        return out_elems * _ops(mults, adds, mac_factor)
    # Recurrent: per timestep, each gate maps [x_t; h] through a linear map.
    # Per gate output unit: (input + hidden) multiplies; (input - 1) plus
    # (hidden - 1) adds inside the two dot products, one add combining them,
    # and two bias adds when biased.
    timesteps = in_shape.dims[0]
    inp, hid = layer.input_size, layer.hidden_size
    mults = inp + hid
    adds = (inp - 1) + (hid - 1) + 1 + (2 if layer.bias else 0)
    per_gate_unit = _ops(mults, adds, mac_factor)
    return timesteps * GATES[layer.kind] * hid * per_gate_unit


@dataclass(frozen=True)
class StackTotals:
    """Aggregate counts for a layer stack plus the chained shape trace."""

    params: int
    fpo: int
    shape_trace: tuple[TensorShape, ...]


def stack_totals(layers: list[LayerSpec], in_shape: TensorShape, *,
                 mac_factor: int = 2) -> StackTotals:
    """Sum params and FPO through a stack, chaining shapes layer to layer.

    The shape trace starts with the input shape and records the shape after
    every layer. Shape errors are re-raised with the failing layer index.
    """
    mac_factor = _check_mac_factor(mac_factor)
    params = 0
    fpo = 0
    trace = [in_shape]
    shape = in_shape
    for index, layer in enumerate(layers):
        try:
            fpo += layer_fpo(layer, shape, mac_factor=mac_factor)
            shape = output_shape(layer, shape)
        except ShapeError as exc:
            raise ShapeError(f"layer {index} ({layer.kind}): {exc}") from exc
        params += layer_params(layer)
        trace.append(shape)
    return StackTotals(params=params, fpo=fpo, shape_trace=tuple(trace))


# ---------------------------------------------------------------------------
# Layer-stack file format
# ---------------------------------------------------------------------------

_FIELDS_BY_KIND = {
    "linear": {"kind", "in", "out", "bias"},
    "conv1d": {"kind", "c_in", "c_out", "kernel", "stride", "padding", "bias"},
    "conv2d": {"kind", "c_in", "c_out", "kernel", "stride", "padding", "bias"},
    "rnn_tanh": {"kind", "input_size", "hidden_size", "bias"},
    "gru": {"kind", "input_size", "hidden_size", "bias"},
    "lstm": {"kind", "input_size", "hidden_size", "bias"},
}


def parse_stack(text: str, *, source: str = "<stack>") -> list[LayerSpec]:
    """Parse a layer-stack document.

    The format is a JSON object ``{"layers": [...]}`` where each element
    has a ``kind`` plus that kind's hyperparameters (see README). Unknown
    kinds and unknown fields are rejected; declaring dilation, grouping or
    transposition is an explicit unsupported-layer error.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source=source,
                         line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict) or set(doc) != {"layers"} \
            or not isinstance(doc["layers"], list):
        raise ParseError('document must be an object {"layers": [...]}',
                         source=source)
    layers: list[LayerSpec] = []
    for i, obj in enumerate(doc["layers"]):
        if not isinstance(obj, dict):
            raise ParseError(f"layer {i}: each layer must be a JSON object",
                             source=source)
        kind = obj.get("kind")
        if kind not in SUPPORTED_KINDS:
            raise UnsupportedLayerError(
                f"layer {i}: unsupported layer kind {kind!r}; supported kinds "
                f"are {', '.join(SUPPORTED_KINDS)}")
        present_unsupported = [f for f in _UNSUPPORTED_FEATURES if f in obj]
        if present_unsupported:
            raise UnsupportedLayerError(
                f"layer {i} ({kind}): {', '.join(present_unsupported)} "
                f"not supported; counts for such layers must be supplied "
                f"externally")
        unknown = set(obj) - _FIELDS_BY_KIND[kind]
        if unknown:
            raise ParseError(
                f"layer {i} ({kind}): unknown field(s) {sorted(unknown)}; "
                f"allowed fields are {sorted(_FIELDS_BY_KIND[kind])}",
                source=source)
        bias = obj.get("bias", True)
        if not isinstance(bias, bool):
            raise ParseError(f"layer {i} ({kind}): bias must be true or false",
                             source=source)
        try:
            if kind == "linear":
                layers.append(linear(obj["in"], obj["out"], bias))
            elif kind in CONV_KINDS:
                maker = conv1d if kind == "conv1d" else conv2d
                kernel = _json_dims(obj, "kernel", i, kind, source)
                stride = _json_dims(obj, "stride", i, kind, source, default=1)
                padding = _json_dims(obj, "padding", i, kind, source, default=0)
                layers.append(maker(obj["c_in"], obj["c_out"], kernel,
                                    stride, padding, bias))
            else:
                layers.append(LayerSpec(kind=kind, input_size=obj["input_size"],
                                        hidden_size=obj["hidden_size"], bias=bias))
        except KeyError as exc:
            raise ParseError(f"layer {i} ({kind}): missing field {exc.args[0]!r}",
                             source=source) from None
        except DomainError as exc:
            raise ParseError(f"layer {i} ({kind}): {exc}", source=source) from exc
    return layers


def _json_dims(obj: dict, name: str, index: int, kind: str, source: str,
               default=None):
    value = obj.get(name, default)
    if value is None:
        raise ParseError(f"layer {index} ({kind}): missing field {name!r}",
                         source=source)
    if isinstance(value, list):
        return tuple(value)
    return value


def parse_stack_file(path: str | Path) -> list[LayerSpec]:
    path = Path(path)
    return parse_stack(path.read_text(encoding="utf-8"), source=str(path))
