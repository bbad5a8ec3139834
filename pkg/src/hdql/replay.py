"""Bounded FIFO experience memory with uniform batch sampling.

Transitions are stored in parallel numpy arrays behind a ring pointer:
pushes are O(1), eviction is implicit (the ring overwrites the oldest
entry), and `sample_arrays` hands the trainer contiguous batches without
touching Python objects per element.  Unlimited capacity is represented
by a hard cap of one million entries; nothing in this library's
experiments fills it.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = ["Transition", "ReplayBuffer", "UNLIMITED_CAPACITY"]

UNLIMITED_CAPACITY = 1_000_000


@dataclass(frozen=True)
class Transition:
    """One step: (state, action, reward, next_state) plus a terminal flag.

    The flag marks next_state as the end of an episode so the learner can
    truncate its bootstrap target there.
    """

    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    terminal: bool


class ReplayBuffer:
    """Ring buffer of transitions with seeded uniform sampling.

    capacity=None means unlimited (capped at UNLIMITED_CAPACITY).  Storage
    grows geometrically up to the cap, so small experiments never pay for
    the worst case.  Sampling is uniform without replacement; when fewer
    than `batch` entries exist, every current entry is returned once (the
    short-batch rule, which lets training start on the first step).
    """

    def __init__(self, capacity, state_dim, rng):
        if capacity is None:
            capacity = UNLIMITED_CAPACITY
        if not isinstance(capacity, (int, np.integer)) or capacity < 1:
            raise ConfigError(f"capacity must be a positive integer or None, got {capacity!r}")
        if capacity > UNLIMITED_CAPACITY:
            raise ConfigError(
                f"capacity {capacity} exceeds the hard cap {UNLIMITED_CAPACITY}")
        if not isinstance(state_dim, (int, np.integer)) or state_dim < 1:
            raise ConfigError(f"state_dim must be a positive integer, got {state_dim!r}")
        self.capacity = int(capacity)
        self.state_dim = int(state_dim)
        self.rng = rng
        self._size = 0
        self._ptr = 0
        alloc = min(256, self.capacity)
        self._states = np.empty((alloc, state_dim))
        self._actions = np.empty(alloc, dtype=np.int64)
        self._rewards = np.empty(alloc)
        self._next_states = np.empty((alloc, state_dim))
        self._terminals = np.empty(alloc, dtype=bool)

    def __len__(self):
        return self._size

    @property
    def allocated(self):
        return self._states.shape[0]

    def _grow(self):
        alloc = min(self.allocated * 2, self.capacity)
        self._states = np.resize(self._states, (alloc, self.state_dim))
        self._next_states = np.resize(self._next_states, (alloc, self.state_dim))
        self._actions = np.resize(self._actions, alloc)
        self._rewards = np.resize(self._rewards, alloc)
        self._terminals = np.resize(self._terminals, alloc)

    def push(self, t):
        """Append; once full, overwrite the oldest entry."""
        if self._size == self.allocated and self.allocated < self.capacity:
            self._grow()
        i = self._ptr
        self._states[i] = t.state
        self._actions[i] = t.action
        self._rewards[i] = t.reward
        self._next_states[i] = t.next_state
        self._terminals[i] = t.terminal
        self._ptr = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _draw(self, batch):
        if not isinstance(batch, (int, np.integer)) or batch < 1:
            raise ConfigError(f"batch must be a positive integer, got {batch!r}")
        if self._size >= batch:
            return self.rng.choice(self._size, size=batch, replace=False)
        return np.arange(self._size)

    def _take(self, idx):
        return [Transition(self._states[i].copy(), int(self._actions[i]),
                           float(self._rewards[i]), self._next_states[i].copy(),
                           bool(self._terminals[i]))
                for i in idx]

    def contents(self):
        """All stored transitions, oldest first."""
        if self._size < self.capacity:
            idx = np.arange(self._size)
        else:
            idx = (np.arange(self.capacity) + self._ptr) % self.capacity
        return self._take(idx)

    def sample(self, batch):
        """Uniform batch as a list of Transitions; [] when empty."""
        if self._size == 0:
            # empty memory is a no-op signal, not an error: skip training
            self._draw(batch)  # still validates the batch argument
            return []
        return self._take(self._draw(batch))

    def sample_arrays(self, batch):
        """Uniform batch as (states, actions, rewards, next_states, terminals).

        Array views are copies, safe to hold across later pushes.  Returns
        None when the buffer is empty (same no-op signal as sample's []).
        """
        if self._size == 0:
            self._draw(batch)
            return None
        idx = self._draw(batch)
        return (self._states[idx], self._actions[idx], self._rewards[idx],
                self._next_states[idx], self._terminals[idx])

    def __repr__(self):
        cap = "unlimited" if self.capacity == UNLIMITED_CAPACITY else self.capacity
        return f"ReplayBuffer(size={self._size}, capacity={cap})"
