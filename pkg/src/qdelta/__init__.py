"""Measure-and-prepare coding of quantum states and its deviation bounds.

Encode a quantum state into a classical outcome (a POVM measurement),
then rebuild a state from that outcome.  This package computes how far
the rebuilt state must deviate from the input in the worst case and
numerically audits two analytic floors on that deviation:
``(3 - sqrt(5))/4`` from an operator Cauchy-Schwarz inequality, and
``(d-1)/(d+1)`` from a cloning argument.
"""

from .cauchy_schwarz import (
    CS_DELTA_BOUND,
    BoundChain,
    CSCheck,
    InducedForm,
    bound_chain,
    cauchy_schwarz_check,
    commutator_decomposition_residual,
    half_commutator_pair,
)
from .channels import CPMap, choi_of_schrodinger, commutator, random_unital_cpmap
from .cloning import ClonerSpec, cloning_bound, cloning_limit, diagonal_restriction
from .coding import CodingScheme, load_scheme
from .delta import (
    DeltaReport,
    SearchConfig,
    delta_effect_form,
    delta_forms_agree,
    delta_state_form,
    spectrum_containment,
)
from .operators import (
    antihermitian_split,
    bloch_to_state,
    hermitize,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    random_density,
    random_projection,
    state_to_bloch,
    trace_distance,
)
from .optimizer import OptimizationResult, OptimizerConfig, optimize, scheme_from_params
from .schemes import SCHEME_NAMES, build_scheme, library_for_dimension, qubit_library

__version__ = "0.1.0"

__all__ = [
    "CS_DELTA_BOUND",
    "BoundChain",
    "CSCheck",
    "InducedForm",
    "bound_chain",
    "cauchy_schwarz_check",
    "commutator_decomposition_residual",
    "half_commutator_pair",
    "CPMap",
    "choi_of_schrodinger",
    "commutator",
    "random_unital_cpmap",
    "ClonerSpec",
    "cloning_bound",
    "cloning_limit",
    "diagonal_restriction",
    "CodingScheme",
    "load_scheme",
    "DeltaReport",
    "SearchConfig",
    "delta_effect_form",
    "delta_forms_agree",
    "delta_state_form",
    "spectrum_containment",
    "antihermitian_split",
    "bloch_to_state",
    "hermitize",
    "matrix_from_json",
    "matrix_to_json",
    "op_norm",
    "random_density",
    "random_projection",
    "state_to_bloch",
    "trace_distance",
    "OptimizationResult",
    "OptimizerConfig",
    "optimize",
    "scheme_from_params",
    "SCHEME_NAMES",
    "build_scheme",
    "library_for_dimension",
    "qubit_library",
    "__version__",
]
