"""Hyperdimensional Q-learning: phase hypervectors, kernel encodings,
one-shot value regression, and classic-control experiments.

The public surface re-exported here covers the whole pipeline:

- hypervec: the unit-phase vector algebra (bind, power, bundle, similarity)
- encoding: fractional-power position bases mapping states to hypervectors
- qmodel: per-action linear value models over that encoding
- replay: a flat ring-buffer experience memory
- agent: delayed-model Q-learning tying the above together
- envs: native cartpole / acrobot / chain tasks
- mdp: a tabular value-iteration oracle for sanity checks
- runner: seeded multi-trial experiments with CSV/JSON outputs

The `hdql` console script (see hdql.cli) drives runner from shipped
per-environment configs.
"""

__version__ = "0.1.0"

from .errors import (
    ActionError,
    ConfigError,
    DimensionMismatchError,
    DivergenceError,
    EncodingError,
    EnvError,
    SimilarityUndefinedError,
    SolverError,
)
from .hypervec import (
    ComplexAccumulator,
    UnitHypervector,
    bind,
    bundle,
    identity,
    power,
    random_unit,
    raw_dot,
    similarity,
)
from .encoding import (
    EncodedState,
    PositionBasis,
    decode_feature,
    encode,
    encode_batch,
    expected_kernel,
    new_basis,
    shift,
)
from .qmodel import QModel, load_model, save_model
from .replay import UNLIMITED_CAPACITY, ReplayBuffer, Transition
from .mdp import TabularMdp, greedy_policy, value_iteration
from .envs import (
    ENV_NAMES,
    AcrobotEnv,
    CartPoleEnv,
    ChainMdpEnv,
    make_env,
    rollout_random,
)
from .agent import DEFAULT_BANDWIDTH, AgentConfig, EpisodeResult, HDQAgent
from .runner import (
    CSV_HEADER,
    EpisodeRecord,
    ExperimentSpec,
    GoalSpec,
    emit_outputs,
    run_experiment,
    run_sweep,
    run_trial,
)

__all__ = [
    "__version__",
    # errors
    "ActionError", "ConfigError", "DimensionMismatchError", "DivergenceError",
    "EncodingError", "EnvError", "SimilarityUndefinedError", "SolverError",
    # hypervector algebra
    "UnitHypervector", "ComplexAccumulator", "random_unit", "identity",
    "bind", "power", "bundle", "similarity", "raw_dot",
    # encoding
    "PositionBasis", "EncodedState", "new_basis", "encode", "encode_batch",
    "shift", "decode_feature", "expected_kernel",
    # value model
    "QModel", "save_model", "load_model",
    # replay
    "Transition", "ReplayBuffer", "UNLIMITED_CAPACITY",
    # oracle
    "TabularMdp", "value_iteration", "greedy_policy",
    # environments
    "CartPoleEnv", "AcrobotEnv", "ChainMdpEnv", "make_env", "rollout_random",
    "ENV_NAMES",
    # agent
    "AgentConfig", "HDQAgent", "EpisodeResult", "DEFAULT_BANDWIDTH",
    # experiments
    "GoalSpec", "ExperimentSpec", "EpisodeRecord", "run_trial",
    "run_experiment", "run_sweep", "emit_outputs", "CSV_HEADER",
]
