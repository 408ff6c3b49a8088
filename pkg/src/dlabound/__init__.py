"""dlabound: Lie-closure dimensions, covering-number generalization bounds,
and training experiments for shared-Hamiltonian parameterized circuits."""

__version__ = "0.1.0"

from .bounds import (
    BoundInputs,
    BoundReport,
    ParameterDomainError,
    ball_covering_bound,
    dudley_closed_form,
    epsilon_max,
    generalization_bound,
    hypothesis_covering_bound,
    max_params_from_epsilon,
    max_trainable_params,
    nt_curve,
    optimal_p,
    theta_max,
)
from .dla import (
    DlaBasis,
    GeneratorSet,
    closure_oracle_dense,
    dla_dimension,
    lie_closure,
    tfim_generators,
    tfim_hamiltonian,
    tfim_reference_dimension,
)
from .experiments import (
    Dataset,
    ExperimentRecord,
    SweepConfig,
    compute_cr,
    compute_pmax_nmax,
    generate_dataset,
    linear_fit,
    run_single,
    run_sweep,
    summarize_records,
    t_test_two_sample,
)
from .pauli import (
    PauliString,
    PauliSum,
    commutator,
    hs_inner,
    operator_norm,
    pauli_mul,
    random_density_matrix,
    to_dense,
)
from .simulator import (
    CircuitBundle,
    ParamCircuit,
    ansatz,
    encoding_circuit,
    expectation_z0,
    make_model,
    model_output,
    run_circuit,
    target_label,
    target_unitary,
)
from .training import (
    TrainConfig,
    TrainResult,
    TrainingDiverged,
    ran_minimize,
    rmse,
    sps_minimize,
    train_ran,
    train_sps,
)
