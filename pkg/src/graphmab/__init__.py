"""Bandit-learned sampling of clustered graph signals with TV recovery."""

from .bandit import (
    Episode,
    Policy,
    TrainerConfig,
    TrainerState,
    accumulate_gradient,
    apply_batch_update,
    episode_reward,
    mean_policy,
    read_policy,
    run_episode,
    sample_rws,
    sample_urs,
    train_on_graph,
    write_policy,
)
from .chain import ChainSummary, TwoClusterModel, empirical_occupancy, equilibrium, transition_matrix
from .graph import (
    GenerationError,
    Graph,
    Partition,
    SbmConfig,
    incidence_rows,
    read_graph,
    sbm_generate,
    write_graph,
)
from .kernels import available_backends, solver_backend
from .recovery import RecoveryResult, SampleSet, SolverConfig, recover, tv_objective_certificate
from .signals import (
    ClusteredSignalSpec,
    GraphSignal,
    mse,
    nmse,
    read_signal,
    realize,
    to_db,
    total_variation,
    write_signal,
)

__version__ = "0.1.0"
