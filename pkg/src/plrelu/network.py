"""ReLU network synthesis for simplex functions and full mesh functions.

Each max-min form compiles to a small subnetwork: one layer computes
the affine pieces, a balanced tree of pairwise-min gadgets reduces
them, and a final ReLU applies the outer max(0, ·).  A mesh compiles to
parallel copies of that subnetwork (one per signed decomposition term)
plus a summing output row.  Weights are emitted in double precision;
exactness lives one representation earlier, in the decomposition.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decomposition import SignedDecomposition, decompose
from .mesh import PLMesh
from .simplex import MaxMinForm, max_functionals, maxmin_form

RELU = "relu"
IDENTITY = "identity"


@dataclass(frozen=True)
class Layer:
    weights: np.ndarray  # out x in
    bias: np.ndarray
    activation: str

    def __post_init__(self):
        if self.activation not in (RELU, IDENTITY):
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.shape[0] != self.bias.shape[0]:
            raise ValueError("bias length must match output dimension")

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class ReluNetwork:
    input_dim: int
    layers: tuple

    def __post_init__(self):
        prev = self.input_dim
        for layer in self.layers:
            if layer.in_dim != prev:
                raise ValueError(
                    f"layer expects {layer.in_dim} inputs, gets {prev}"
                )
            prev = layer.out_dim
        if self.layers:
            last = self.layers[-1]
            if last.activation != IDENTITY or last.out_dim != 1:
                raise ValueError("final layer must be identity with one output")

    def shape_signature(self) -> tuple:
        return tuple(
            (layer.in_dim, layer.out_dim, layer.activation)
            for layer in self.layers
        )


@dataclass(frozen=True)
class NetworkStats:
    depth: int
    width: int
    size: int
    c0: Fraction
    c1: Fraction
    c2: Fraction

    def __str__(self) -> str:
        return (
            f"depth={self.depth} width={self.width} size={self.size} "
            f"C0={self.c0} C1={self.c1} C2={self.c2}"
        )


def forward_batch(net: ReluNetwork, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2 or xs.shape[1] != net.input_dim:
        raise ValueError(f"expected batch of shape (n, {net.input_dim})")
    h = xs.T
    for layer in net.layers:
        h = layer.weights @ h + layer.bias[:, None]
        if layer.activation == RELU:
            np.maximum(h, 0.0, out=h)
    return h[0]


def forward(net: ReluNetwork, x) -> float:
    if len(x) != net.input_dim:
        raise ValueError(f"expected {net.input_dim} inputs, got {len(x)}")
    return float(forward_batch(net, np.asarray([x], dtype=float))[0])


def pairwise_min_gadget() -> ReluNetwork:
    """min(a, b) = (a+b)/2 - |a-b|/2 with four ReLU units."""
    w1 = np.array([[1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [-1.0, -1.0]])
    w2 = np.array([[-0.5, -0.5, 0.5, -0.5]])
    return ReluNetwork(2, (
        Layer(w1, np.zeros(4), RELU),
        Layer(w2, np.zeros(1), IDENTITY),
    ))


def _min_tree_layers(functionals):
    """ReLU layers computing max(0, min_i g_i) from the raw input.

    Values at each tree level are affine in the previous layer's ReLU
    outputs; that affine map is folded into the next layer's weights.
    An odd value is carried through a level as relu(t) - relu(-t), since
    intermediate minima may be negative.  Returns the relu layers; the
    last one has a single unit holding tau >= 0.
    """
    k = len(functionals)
    # value_map: current level's values as an affine map of the previous
    # layer's outputs (initially of the input itself).
    weights = np.array([[float(c) for c in g.normal] for g in functionals])
    bias = np.array([float(g.offset) for g in functionals])
    layers = []
    while k > 1:
        pre_rows, combine_rows = [], []
        units = 0
        for j in range(0, k - 1, 2):
            a = np.zeros(k); a[j] = 1.0
            b = np.zeros(k); b[j + 1] = 1.0
            pre_rows += [a - b, b - a, a + b, -a - b]
            combine_rows.append((units, np.array([-0.5, -0.5, 0.5, -0.5])))
            units += 4
        if k % 2:
            c = np.zeros(k); c[k - 1] = 1.0
            pre_rows += [c, -c]
            combine_rows.append((units, np.array([1.0, -1.0])))
            units += 2
        pre = np.array(pre_rows)
        layers.append(Layer(pre @ weights, pre @ bias, RELU))
        k = len(combine_rows)
        weights = np.zeros((k, units))
        for i, (start, row) in enumerate(combine_rows):
            weights[i, start:start + len(row)] = row
        bias = np.zeros(k)
    layers.append(Layer(weights, bias, RELU))  # the outer max(0, ·)
    return layers


def compile_simplex(form: MaxMinForm, pad_to: int | None = None) -> ReluNetwork:
    """Network computing one simplex function from its max-min form.

    With pad_to set, the functional list is padded by repeating its
    first entry (min is unchanged) so that all simplex networks of a
    given dimension share one architecture.
    """
    functionals = list(form.functionals)
    if not functionals:
        raise ValueError("max-min form has no functionals")
    if pad_to is not None:
        if pad_to < len(functionals):
            raise ValueError("pad_to below the actual functional count")
        functionals += [functionals[0]] * (pad_to - len(functionals))
    input_dim = len(functionals[0].normal)
    layers = _min_tree_layers(functionals)
    readout = Layer(np.ones((1, 1)), np.zeros(1), IDENTITY)
    return ReluNetwork(input_dim, tuple(layers) + (readout,))


def _block_diagonal(blocks):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def compile_decomposition(dec: SignedDecomposition, n_slots: int | None = None) -> ReluNetwork:
    """Parallel simplex subnetworks plus a signed summing output row.

    Every subnetwork is padded to the dimension's maximum functional
    count, so all share one depth and shape.  If n_slots exceeds the
    term count, zero-weight subnetworks (contributing relu-chains of 0)
    fill the remaining slots: the architecture for (d, n) serves every
    mesh with at most n simplices.
    """
    d = dec.dim
    pad = max_functionals(d)
    subnets = [
        _min_tree_layers(_padded(maxmin_form(delta).functionals, pad))
        for _, delta in dec.terms
    ]
    total = len(dec.terms) if n_slots is None else 2 * n_slots
    if total < len(dec.terms):
        raise ValueError("n_slots too small for the decomposition")
    signs = [float(sign) for sign, _ in dec.terms] + [0.0] * (total - len(dec.terms))
    if subnets:
        template = subnets[0]
    else:
        raise ValueError("empty decomposition cannot be compiled")
    for _ in range(total - len(dec.terms)):
        subnets.append([
            Layer(np.zeros_like(l.weights), np.zeros_like(l.bias), RELU)
            for l in template
        ])
    depth = len(template)
    if any(len(s) != depth for s in subnets):
        raise AssertionError("padded subnetworks must share one depth")

    layers = []
    # First layer reads the shared input: stack rather than block-diagonal.
    layers.append(Layer(
        np.vstack([s[0].weights for s in subnets]),
        np.concatenate([s[0].bias for s in subnets]),
        RELU,
    ))
    for level in range(1, depth):
        layers.append(Layer(
            _block_diagonal([s[level].weights for s in subnets]),
            np.concatenate([s[level].bias for s in subnets]),
            RELU,
        ))
    layers.append(Layer(np.array([signs]), np.zeros(1), IDENTITY))
    return ReluNetwork(d, tuple(layers))


def _padded(functionals, pad):
    functionals = list(functionals)
    return functionals + [functionals[0]] * (pad - len(functionals))


def compile_mesh(mesh: PLMesh, seed: int = 0, n_slots: int | None = None) -> ReluNetwork:
    """Compile a mesh PL function end to end: decompose, then emit the
    parallel simplex networks with the signed summing row."""
    return compile_decomposition(decompose(mesh, seed=seed), n_slots=n_slots)


def stats(net: ReluNetwork, d: int, n: int) -> NetworkStats:
    """Depth, width, size, and the measured bound constants.

    C0 is depth minus 2*ceil(log2 d); C1 and C2 are width and size
    divided by d^2 * n.
    """
    relu_dims = [l.out_dim for l in net.layers if l.activation == RELU]
    depth = len(relu_dims)
    width = max((l.out_dim for l in net.layers), default=0)
    size = sum(relu_dims)
    if d < 1 or n < 1:
        raise ValueError("d and n must be >= 1")
    log_term = 2 * math.ceil(math.log2(d)) if d > 1 else 0
    return NetworkStats(
        depth=depth,
        width=width,
        size=size,
        c0=Fraction(depth - log_term),
        c1=Fraction(width, d * d * n),
        c2=Fraction(size, d * d * n),
    )


def network_to_dict(net: ReluNetwork) -> dict:
    return {
        "input_dim": net.input_dim,
        "layers": [
            {
                "weights": layer.weights.tolist(),
                "bias": layer.bias.tolist(),
                "activation": layer.activation,
            }
            for layer in net.layers
        ],
    }


def network_from_dict(data: dict) -> ReluNetwork:
    try:
        layers = tuple(
            Layer(
                np.array(l["weights"], dtype=float).reshape(
                    len(l["weights"]), -1
                ),
                np.array(l["bias"], dtype=float),
                l["activation"],
            )
            for l in data["layers"]
        )
        return ReluNetwork(int(data["input_dim"]), layers)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed network data: {exc}") from exc


def save_network(net: ReluNetwork, path):
    with open(path, "w") as fh:
        json.dump(network_to_dict(net), fh)
        fh.write("\n")


def load_network(path) -> ReluNetwork:
    with open(path) as fh:
        return network_from_dict(json.load(fh))
