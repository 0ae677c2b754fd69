"""
Surface Tensors

Moment tensors, surface tensors Phi^s, trace reduction and the linear bijection
between moment vectors and harmonic intrinsic volumes.
"""

from core.tensors.bijection import (
    HarmonicMap,
    harmonic_map,
    harmonic_to_moment,
    harmonic_vector,
    moment_objective,
    moment_to_harmonic,
)
from core.tensors.moments import (
    moment_tensor,
    moment_vector,
    printed_trace_constant,
    reduce_to_rank,
    scaled_surface_tensor,
    surface_tensor,
    surface_tensor_factor,
    tensor_chain,
    tensor_set,
    trace_constant,
    trace_reduce,
)

__all__ = [
    'HarmonicMap',
    'harmonic_map',
    'harmonic_to_moment',
    'harmonic_vector',
    'moment_objective',
    'moment_tensor',
    'moment_to_harmonic',
    'moment_vector',
    'printed_trace_constant',
    'reduce_to_rank',
    'scaled_surface_tensor',
    'surface_tensor',
    'surface_tensor_factor',
    'tensor_chain',
    'tensor_set',
    'trace_constant',
    'trace_reduce',
]
