"""The learning loop: epsilon-greedy control with hypervector regression.

One online model Q picks actions and absorbs updates; a delayed copy Q'
supplies bootstrap targets and is refreshed from Q every sync_period
episodes, which keeps the regression from chasing its own latest errors.
Each time step stores the transition and immediately trains on a uniform
replay batch:

    q_pred = Q(S, A)                            on the online model
    q_true = R                                  if the transition ended the episode
           = R + gamma * max_a Q'(S', a)        otherwise
    M_A   += beta * (q_true - q_pred) * S

Updates run sequentially per sample; the targets may be computed for the
whole batch up front because Q' never changes inside a step.

Randomness is split once per agent seed: the basis derives from the seed
itself, while action selection and replay sampling get independent child
streams, so changing (say) the batch size never perturbs the exploration
sequence.
"""

import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .encoding import PositionBasis, encode, encode_batch
from .errors import ConfigError, DivergenceError, EnvError
from .qmodel import QModel
from .replay import ReplayBuffer, Transition

__all__ = ["AgentConfig", "HDQAgent", "EpisodeResult", "DEFAULT_BANDWIDTH"]

# kernel length-scale ~0.3 of the [-1, 1] normalized range
DEFAULT_BANDWIDTH = 1.0 / 0.6


@dataclass
class AgentConfig:
    """Hyperparameters and switches; validate() reports every problem at once."""

    dim: int = 6000
    beta: float = 0.05
    gamma: float = 0.99
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.99
    epsilon_min: float = 0.01
    sync_period: int = 2
    batch_size: int = 4
    memory_capacity: int = None  # None means unlimited
    seed: int = 0
    normalized_dot: bool = True
    conjugate_update: bool = False
    decay_per_step: bool = False
    require_full_batch: bool = False

    def validate(self):
        problems = []
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            problems.append(f"dim must be a positive integer, got {self.dim!r}")
        if not np.isfinite(self.beta) or self.beta <= 0:
            problems.append(f"beta must be finite and > 0, got {self.beta!r}")
        if not 0.0 <= self.gamma <= 1.0:
            problems.append(f"gamma must be in [0, 1], got {self.gamma!r}")
        if not 0.0 < self.epsilon_decay < 1.0:
            problems.append(
                f"epsilon_decay must be strictly inside (0, 1), got {self.epsilon_decay!r}")
        if not 0.0 <= self.epsilon_start <= 1.0:
            problems.append(f"epsilon_start must be in [0, 1], got {self.epsilon_start!r}")
        if not 0.0 <= self.epsilon_min <= self.epsilon_start:
            problems.append(
                f"epsilon_min must be in [0, epsilon_start], got {self.epsilon_min!r}")
        if not isinstance(self.sync_period, (int, np.integer)) or self.sync_period < 1:
            problems.append(f"sync_period must be a positive integer, got {self.sync_period!r}")
        if not isinstance(self.batch_size, (int, np.integer)) or self.batch_size < 1:
            problems.append(f"batch_size must be a positive integer, got {self.batch_size!r}")
        if self.memory_capacity is not None and (
                not isinstance(self.memory_capacity, (int, np.integer))
                or self.memory_capacity < 1):
            problems.append(
                f"memory_capacity must be a positive integer or None, got {self.memory_capacity!r}")
        if not isinstance(self.seed, (int, np.integer)):
            problems.append(f"seed must be an integer, got {self.seed!r}")
        if problems:
            raise ConfigError("invalid agent config: " + "; ".join(problems))
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, doc):
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown agent config keys: {sorted(unknown)}")
        return cls(**doc).validate()


@dataclass(frozen=True)
class EpisodeResult:
    """Per-episode record handed to the runner."""

    total_reward: float
    steps: int
    epsilon: float          # exploration rate the episode actually ran with
    agent_seconds: float    # select + train time only; 0.0 when not measured
    mean_abs_td: float


class HDQAgent:
    """Online/delayed model pair plus replay memory and exploration state."""

    def __init__(self, config, basis, n_actions):
        config.validate()
        if basis.dim != config.dim:
            raise ConfigError(f"basis dim {basis.dim} != config dim {config.dim}")
        self.config = config
        self.basis = basis
        self.n_actions = int(n_actions)
        self.q = QModel(config.dim, n_actions, normalize=config.normalized_dot,
                        conjugate_update=config.conjugate_update)
        self.q_delayed = self.q.clone()
        self.epsilon = float(config.epsilon_start)
        self.episodes_done = 0
        streams = np.random.SeedSequence(config.seed).spawn(3)
        self._action_rng = np.random.default_rng(streams[0])
        self.buffer = ReplayBuffer(config.memory_capacity, basis.n_features,
                                   np.random.default_rng(streams[1]))
        self._env_seed_stream = streams[2]
        self._synced_last_episode = False

    @classmethod
    def for_env(cls, env, config=None, bandwidths=None, distribution="gaussian"):
        """Build an agent whose encoder is scaled to an environment's features."""
        config = (config or AgentConfig()).validate()
        if bandwidths is None:
            bandwidths = DEFAULT_BANDWIDTH
        basis = PositionBasis(config.seed, env.state_dim, config.dim, bandwidths,
                              feature_scale=env.feature_scale_pairs(),
                              distribution=distribution)
        return cls(config, basis, env.n_actions)

    def env_seed(self):
        """The child seed reserved for the environment paired with this agent."""
        return self._env_seed_stream

    # ------------------------------------------------------------ decisions

    def select_action(self, state):
        """Explore uniformly with probability epsilon, else greedy argmax."""
        if self._action_rng.random() < self.epsilon:
            return int(self._action_rng.integers(self.n_actions))
        q = self.q.predict_all(encode(self.basis, state))
        return int(np.argmax(q))

    def bellman_target(self, t):
        """R, plus the discounted delayed-model maximum unless terminal."""
        if t.terminal:
            return float(t.reward)
        nxt = self.q_delayed.predict_all(encode(self.basis, t.next_state))
        return float(t.reward) + self.config.gamma * float(np.max(nxt))

    # ------------------------------------------------------------ learning

    def train_step(self):
        """Sample a batch and apply the regression update per transition."""
        cfg = self.config
        if cfg.require_full_batch and len(self.buffer) < cfg.batch_size:
            return {"batch_size": 0, "mean_abs_td": 0.0}
        drawn = self.buffer.sample_arrays(cfg.batch_size)
        if drawn is None:
            return {"batch_size": 0, "mean_abs_td": 0.0}
        states, actions, rewards, next_states, terminals = drawn
        b = states.shape[0]

        # one trig pass for the whole batch: rows 0..b-1 are S, b.. are S'
        enc = encode_batch(self.basis, np.concatenate([states, next_states]))
        enc_s, enc_next = enc[:b], enc[b:]

        # targets on the frozen delayed model, batchable without changing
        # the sequential semantics
        q_next = self.q_delayed.predict_all_batch(enc_next)
        q_true = rewards + cfg.gamma * q_next.max(axis=1)
        q_true[terminals] = rewards[terminals]

        abs_td = 0.0
        for i in range(b):
            a = int(actions[i])
            q_pred = self.q.predict(enc_s[i], a)
            err = q_true[i] - q_pred
            if not np.isfinite(err):
                raise DivergenceError(
                    "non-finite TD error: training diverged",
                    context={"action": a, "q_true": float(q_true[i]),
                             "q_pred": float(q_pred),
                             "episodes_done": self.episodes_done,
                             "epsilon": self.epsilon})
            abs_td += abs(err)
            self.q.update(enc_s[i], a, q_true[i], q_pred, cfg.beta)
        return {"batch_size": b, "mean_abs_td": abs_td / b}

    def _decay_epsilon(self):
        self.epsilon = max(self.config.epsilon_min,
                           self.epsilon * self.config.epsilon_decay)

    def end_episode(self):
        """Per-episode decay (unless per-step) and the periodic Q' sync."""
        if not self.config.decay_per_step:
            self._decay_epsilon()
        self.episodes_done += 1
        self._synced_last_episode = self.episodes_done % self.config.sync_period == 0
        if self._synced_last_episode:
            self.q_delayed = self.q.clone()

    # ------------------------------------------------------------ episodes

    def run_episode(self, env, train=True, measure_time=True, on_event=None):
        """One full episode in the fixed step order:
        observe -> act -> reward -> record -> train, then decay (+sync).

        Wall time accumulates around agent compute only (action selection
        and training); environment stepping is excluded.  on_event, when
        given, receives the event names as they happen.
        """
        emit = on_event or (lambda name: None)
        clock = time.perf_counter if measure_time else None
        epsilon_used = self.epsilon

        try:
            state = env.reset()
        except Exception as exc:
            raise EnvError(f"{env.name}: reset failed: {exc}") from exc

        total, steps, agent_seconds = 0.0, 0, 0.0
        td_sum, td_steps = 0.0, 0
        done = False
        while not done:
            emit("observe")
            t0 = clock() if clock else 0.0
            action = self.select_action(state)
            if clock:
                agent_seconds += clock() - t0
            emit("act")

            try:
                next_state, reward, done = env.step(action)
            except Exception as exc:
                raise EnvError(
                    f"{env.name}: step {steps + 1} of episode "
                    f"{self.episodes_done + 1} failed: {exc}") from exc
            emit("reward")

            if train:
                self.buffer.push(Transition(state, action, reward, next_state, done))
                emit("record")
                t0 = clock() if clock else 0.0
                try:
                    stats = self.train_step()
                except DivergenceError as exc:
                    exc.context.setdefault("episode", self.episodes_done + 1)
                    exc.context.setdefault("step", steps + 1)
                    raise
                if clock:
                    agent_seconds += clock() - t0
                emit("train")
                if stats["batch_size"] > 0:
                    td_sum += stats["mean_abs_td"]
                    td_steps += 1
                if self.config.decay_per_step:
                    self._decay_epsilon()

            total += reward
            steps += 1
            state = next_state

        if train:
            self.end_episode()
            emit("decay")
            if self._synced_last_episode:
                emit("sync")

        return EpisodeResult(
            total_reward=total, steps=steps, epsilon=epsilon_used,
            agent_seconds=agent_seconds,
            mean_abs_td=td_sum / td_steps if td_steps else 0.0)
