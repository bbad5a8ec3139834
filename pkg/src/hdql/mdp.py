"""Exact tabular MDP solving: the ground truth the learner is judged against.

Value iteration runs the Bellman backup

    Q_{k+1}(s, a) = R(s, a) + gamma * sum_s' P(s' | s, a) * max_a' Q_k(s', a')

to a sup-norm residual below tolerance.  Terminal states contribute no
future value: their Q rows are pinned to zero, matching a learner whose
bootstrap target truncates at episode ends.
"""

import json

import numpy as np

from .errors import ConfigError, SolverError

__all__ = ["TabularMdp", "value_iteration", "greedy_policy"]


class TabularMdp:
    """Finite MDP given by dense transition and reward tables.

    transitions: (n_states, n_actions, n_states) row-stochastic in the
    last axis.  rewards: (n_states, n_actions), received on taking a from
    s.  terminals: boolean per state; rows of terminal states are ignored
    by the solver so any valid distribution may fill them.
    """

    def __init__(self, transitions, rewards, gamma, terminals=None):
        transitions = np.asarray(transitions, dtype=np.float64)
        rewards = np.asarray(rewards, dtype=np.float64)
        if transitions.ndim != 3 or transitions.shape[0] != transitions.shape[2]:
            raise ConfigError(
                f"transitions must be (S, A, S), got shape {transitions.shape}")
        n_states, n_actions = transitions.shape[:2]
        if rewards.shape != (n_states, n_actions):
            raise ConfigError(
                f"rewards must be {(n_states, n_actions)}, got {rewards.shape}")
        if not np.all(np.isfinite(rewards)):
            raise ConfigError("rewards must be finite")
        if not (0.0 <= gamma <= 1.0):
            raise ConfigError(f"gamma must be in [0, 1], got {gamma}")

        if terminals is None:
            terminals = np.zeros(n_states, dtype=bool)
        else:
            terminals = np.asarray(terminals, dtype=bool)
            if terminals.shape != (n_states,):
                raise ConfigError(f"terminals must have shape ({n_states},)")

        live = ~terminals
        if np.any(transitions < -1e-12):
            raise ConfigError("transition probabilities must be non-negative")
        row_sums = transitions.sum(axis=2)
        if not np.allclose(row_sums[live], 1.0, atol=1e-9):
            raise ConfigError("non-terminal transition rows must sum to 1")

        self.transitions = transitions
        self.rewards = rewards
        self.gamma = float(gamma)
        self.terminals = terminals
        self.n_states = n_states
        self.n_actions = n_actions

    def to_json(self):
        return json.dumps({
            "format": "hdql-mdp-v1",
            "transitions": self.transitions.tolist(),
            "rewards": self.rewards.tolist(),
            "gamma": self.gamma,
            "terminals": self.terminals.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"MDP document is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("format") != "hdql-mdp-v1":
            raise ConfigError("not an MDP document (missing format: hdql-mdp-v1)")
        try:
            return cls(doc["transitions"], doc["rewards"], doc["gamma"],
                       doc.get("terminals"))
        except KeyError as exc:
            raise ConfigError(f"MDP document missing field {exc}") from exc

    def __repr__(self):
        return (f"TabularMdp(n_states={self.n_states}, n_actions={self.n_actions}, "
                f"gamma={self.gamma})")


def value_iteration(mdp, tolerance=1e-10, max_iterations=1_000_000):
    """Optimal Q table with sup-norm Bellman residual below tolerance.

    The backup is a gamma-contraction, so successive-iterate change below
    tolerance*(1-gamma)/gamma would bound the true residual; we simply
    iterate until the change itself is small and then verify the residual
    directly, raising if the cap was too small for the requested tolerance.
    """
    if tolerance <= 0:
        raise ConfigError(f"tolerance must be > 0, got {tolerance}")
    live = ~mdp.terminals
    q = np.zeros((mdp.n_states, mdp.n_actions))

    def backup(q):
        v = np.where(live, q.max(axis=1), 0.0)
        out = mdp.rewards + mdp.gamma * (mdp.transitions @ v)
        out[mdp.terminals] = 0.0
        return out

    for _ in range(max_iterations):
        nxt = backup(q)
        delta = np.max(np.abs(nxt - q))
        q = nxt
        if delta <= tolerance * max(1.0 - mdp.gamma, 1e-3):
            break
    else:
        raise SolverError(
            f"value iteration did not converge in {max_iterations} iterations")

    residual = np.max(np.abs(backup(q) - q))
    if residual > tolerance:
        raise SolverError(
            f"Bellman residual {residual} above tolerance {tolerance}")
    return q


def greedy_policy(q):
    """argmax per state; ties resolve to the lowest action index."""
    q = np.asarray(q)
    if q.ndim != 2:
        raise ConfigError(f"Q table must be 2-D, got shape {q.shape}")
    return np.argmax(q, axis=1)
