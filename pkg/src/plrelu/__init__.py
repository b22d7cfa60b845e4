"""Exact PL-function compiler: simplicial meshes to signed simplex
decompositions to explicit ReLU networks, with cross-checking."""

from .decomposition import (
    GenericityError,
    SignedDecomposition,
    decompose,
    eval_decomposition,
    load_decomposition,
    prune,
    save_decomposition,
)
from .geometry import (
    AffineFunctional,
    GeneralPositionError,
    hull_facets,
    orientation,
    radon_point,
    solve_affine,
)
from .mesh import (
    PLMesh,
    eval_mesh,
    generate_random,
    load_mesh,
    save_mesh,
    stratified_samples,
    validate,
)
from .network import (
    NetworkStats,
    ReluNetwork,
    compile_decomposition,
    compile_mesh,
    compile_simplex,
    forward,
    forward_batch,
    load_network,
    pairwise_min_gadget,
    save_network,
    stats,
)
from .simplex import LiftedSimplex, MaxMinForm, max_functionals, maxmin_form, tau_eval

__version__ = "0.1.0"

__all__ = [
    "AffineFunctional",
    "GeneralPositionError",
    "GenericityError",
    "LiftedSimplex",
    "MaxMinForm",
    "NetworkStats",
    "PLMesh",
    "ReluNetwork",
    "SignedDecomposition",
    "compile_decomposition",
    "compile_mesh",
    "compile_simplex",
    "decompose",
    "eval_decomposition",
    "eval_mesh",
    "forward",
    "forward_batch",
    "generate_random",
    "hull_facets",
    "load_decomposition",
    "load_mesh",
    "load_network",
    "max_functionals",
    "maxmin_form",
    "orientation",
    "pairwise_min_gadget",
    "prune",
    "radon_point",
    "save_decomposition",
    "save_mesh",
    "save_network",
    "solve_affine",
    "stats",
    "stratified_samples",
    "tau_eval",
    "validate",
]
