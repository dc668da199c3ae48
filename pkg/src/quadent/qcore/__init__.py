"""Dense state-vector and density-matrix kernel."""

from .linalg import hermitian_eigenvalues, jacobi_eigh, trace_norm
from .state import (
    DensityMatrix,
    PureState,
    apply_unitary,
    check_subset,
    check_unitary,
    equal_up_to_global_phase,
    fidelity,
    inner,
    partial_trace,
    partial_transpose,
    permute_qubits,
    tensor,
    tensor_all,
)

__all__ = [
    "DensityMatrix",
    "PureState",
    "apply_unitary",
    "check_subset",
    "check_unitary",
    "equal_up_to_global_phase",
    "fidelity",
    "hermitian_eigenvalues",
    "inner",
    "jacobi_eigh",
    "partial_trace",
    "partial_transpose",
    "permute_qubits",
    "tensor",
    "tensor_all",
    "trace_norm",
]
