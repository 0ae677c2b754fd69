"""
Moment tensors, surface tensors and the trace chain.

A surface tensor of rank s is the rank-s moment tensor of the surface area
measure divided by s! * omega_{s+1}. Scaled tensors skip that factor and are
plain moment tensors.
"""

from math import factorial
from typing import Dict, Optional

import numpy as np

from core.harmonics.special import sphere_area
from core.models import DiscreteMeasure, SymTensor, TensorSet, multi_indices


def surface_tensor_factor(rank: int) -> float:
    """s! * omega_{s+1}, the factor between moment tensor and surface tensor"""
    return factorial(rank) * sphere_area(rank + 1)


def moment_tensor(measure: DiscreteMeasure, rank: int) -> SymTensor:
    """
    Rank-s moment tensor: components sum_atoms w * u_{i_1} ... u_{i_s}.

    Args:
        measure: Discrete (or quadrature-discretized) measure
        rank: Tensor rank s >= 0

    Returns:
        SymTensor flagged as scaled (it is a raw moment tensor)
    """
    if rank < 0:
        raise ValueError(f"Rank must be >= 0, got {rank}")
    keys = multi_indices(measure.dim, rank)
    values = np.array([
        float(measure.weights @ np.prod(measure.atoms[:, list(key)], axis=1))
        for key in keys
    ])
    return SymTensor(measure.dim, rank, dict(zip(keys, values.tolist())), scaled=True)


def surface_tensor(measure: DiscreteMeasure, rank: int) -> SymTensor:
    """Surface tensor Phi^s = moment tensor / (s! omega_{s+1})"""
    moments = moment_tensor(measure, rank)
    return SymTensor.from_values(
        measure.dim, rank, moments.values() / surface_tensor_factor(rank), scaled=False
    )


def scaled_surface_tensor(measure: DiscreteMeasure, rank: int) -> SymTensor:
    """Surface tensor without the 1/(s! omega_{s+1}) factor"""
    return moment_tensor(measure, rank)


def trace_reduce(tensor: SymTensor) -> SymTensor:
    """
    Contract the last two indices: (tr T)_{i_1..i_{s-2}} = sum_j T_{i_1..i_{s-2} j j}.

    For a moment tensor of a measure on the sphere this is the moment tensor of
    rank s - 2, since sum_j u_j^2 = 1. No constant is applied.

    Raises:
        ValueError: If the rank is below 2
    """
    if tensor.rank < 2:
        raise ValueError(f"Trace needs rank >= 2, got {tensor.rank}")
    components: Dict = {}
    for key in multi_indices(tensor.dim, tensor.rank - 2):
        components[key] = sum(
            tensor.components[tuple(sorted(key + (j, j)))] for j in range(tensor.dim)
        )
    return SymTensor(tensor.dim, tensor.rank - 2, components, tensor.scaled)


def trace_constant(rank: int, top_rank: int) -> float:
    """
    Factor turning the repeated trace of Phi^{s_o} into Phi^s.

    c = s_o! omega_{s_o+1} / (s! omega_{s+1}); ranks must share parity.
    """
    if rank > top_rank or (top_rank - rank) % 2:
        raise ValueError(f"Ranks {rank} and {top_rank} must have equal parity, rank <= top")
    return surface_tensor_factor(top_rank) / surface_tensor_factor(rank)


def printed_trace_constant(rank: int, top_rank: int) -> float:
    """
    The constant s_o! omega_{s_o} / (s! omega_{s+1}) as commonly printed.

    Kept for comparison only: it is off by the index of omega_{s_o} and does not
    reproduce direct moments (trace_constant does).
    """
    return factorial(top_rank) * sphere_area(top_rank) / (
        factorial(rank) * sphere_area(rank + 1)
    )


def reduce_to_rank(tensor: SymTensor, rank: int) -> SymTensor:
    """Trace a surface (or scaled) tensor down to a lower rank of equal parity"""
    if rank > tensor.rank or (tensor.rank - rank) % 2:
        raise ValueError(f"Cannot reduce rank {tensor.rank} to rank {rank}")
    reduced = tensor
    while reduced.rank > rank:
        reduced = trace_reduce(reduced)
    if tensor.scaled:
        return reduced
    factor = trace_constant(rank, tensor.rank)
    return SymTensor.from_values(tensor.dim, rank, reduced.values() * factor, scaled=False)


def tensor_chain(top: SymTensor, below: SymTensor) -> TensorSet:
    """
    Recover every tensor of rank 0..s_o from Phi^{s_o} and Phi^{s_o - 1}.

    Args:
        top: Rank s_o tensor
        below: Rank s_o - 1 tensor (same dim and scaling)

    Returns:
        TensorSet holding all ranks 0..s_o
    """
    if below.rank != top.rank - 1 or below.dim != top.dim:
        raise ValueError("tensor_chain needs tensors of ranks s_o and s_o - 1")
    if below.scaled != top.scaled:
        raise ValueError("tensor_chain needs tensors with the same scaling")
    tensors = {}
    for rank in range(top.rank + 1):
        source = top if (top.rank - rank) % 2 == 0 else below
        tensors[rank] = reduce_to_rank(source, rank)
    return TensorSet(top.dim, top.rank, tensors, scaled=top.scaled)


def tensor_set(measure: DiscreteMeasure, max_rank: int, scaled: bool = False,
               min_rank: Optional[int] = 0) -> TensorSet:
    """
    Surface tensors of a measure for ranks min_rank..max_rank, computed directly.

    Args:
        measure: Surface area measure (discrete)
        max_rank: s_o
        scaled: Return scaled tensors (moment tensors)
        min_rank: Lowest rank to include; None keeps only s_o - 1 and s_o
    """
    low = max(max_rank - 1, 0) if min_rank is None else min(min_rank, max(max_rank - 1, 0))
    build = scaled_surface_tensor if scaled else surface_tensor
    tensors = {rank: build(measure, rank) for rank in range(low, max_rank + 1)}
    return TensorSet(measure.dim, max_rank, tensors, scaled=scaled)


def moment_vector(measure: DiscreteMeasure, max_rank: int) -> np.ndarray:
    """Moments of ranks s_o - 1 and s_o, lexicographic, concatenated"""
    return tensor_set(measure, max_rank, scaled=True, min_rank=None).vector()


def moment_scales(dim: int, max_rank: int) -> np.ndarray:
    """Per-component factor s! omega_{s+1} along the phi vector"""
    scales = []
    for rank in (max_rank - 1, max_rank):
        if rank >= 0:
            scales.extend([surface_tensor_factor(rank)] * len(multi_indices(dim, rank)))
    return np.array(scales)
