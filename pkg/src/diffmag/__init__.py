"""Precision bounds and measurement schemes for two-ensemble gradient magnetometry."""

__version__ = "0.1.0"

from .spin_core import Spin, TwoWellSpace, collective_operator, rotation_operator, spin_matrices
from .states import (
    DickeCoefficients,
    EvolutionParams,
    StateVector,
    dicke_coefficients,
    dicke_state,
    evolve,
    flipped_dicke_state,
    flipped_ghz_state,
    ghz_state,
    product_dicke_state,
)
from .qfi import (
    MixedState,
    PrecisionBounds,
    QfiMatrix2,
    closed_form_bound_b1,
    precision_bounds,
    qfi_extended,
    qfi_matrix,
    qfi_mixed,
    qfi_pure,
    reference_qfi_table,
)
from .polytope import (
    PolytopeModel,
    QfiSixVector,
    SignVector,
    build_polytope,
    classify_saturation,
    figure_of_merit_sum,
    qfi_six_vector,
)
from .optimal_measurement import (
    CommutantBasis,
    JyBlockBasis,
    OperatorCounts,
    block_structure_report,
    commutant_basis,
    count_operators,
    jy_block_basis,
    optimal_precision,
)
from .moment_measurement import (
    PartitionNoiseModel,
    dicke_moments,
    error_propagation,
    moment_observable,
    moment_precision_closed_form,
    precision_ratio,
)
from .baselines import (
    BecModel,
    WitnessReport,
    bec_gradient_bound,
    flipped_dicke_to_bec_ratio,
    three_variance_witness,
)
from .estimator_sim import EstimationRun, MeasurementModel, run_estimation, sample_outcomes

__all__ = [name for name in dir() if not name.startswith("_")]
