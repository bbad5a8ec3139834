"""Native benchmark environments behind one small interface.

Each environment owns a seeded generator, exposes reset()/step(), and
declares the descriptors the rest of the stack needs: state_dim,
n_actions, a step cap, and per-feature (offset, scale) pairs for the
encoder's affine normalization.  Episodes end either by the task's
terminal condition or by hitting the step cap; both are reported through
the single terminal flag, and stepping a finished episode is a contract
violation.

The physics follows the standard classic-control formulations so results
are comparable with the usual benchmark numbers, but everything is
implemented here: no external toolkit is imported.
"""

import numpy as np

from .errors import ActionError, ConfigError, EnvError
from .mdp import TabularMdp

__all__ = [
    "CartPoleEnv",
    "AcrobotEnv",
    "ChainMdpEnv",
    "make_env",
    "rollout_random",
    "ENV_NAMES",
]


class ControlEnv:
    """Shared plumbing: rng ownership, episode-over guard, action checks."""

    name = "?"
    n_actions = 0
    state_dim = 0
    step_cap = 0
    # (offset, scale) per feature, consumed by the encoder's normalizer
    feature_offsets = ()
    feature_scales = ()

    def __init__(self, seed=None):
        self._rng = np.random.default_rng(seed)
        self._steps = 0
        self._done = True  # must reset before stepping

    @property
    def steps_taken(self):
        return self._steps

    @property
    def episode_over(self):
        return self._done

    def feature_scale_pairs(self):
        return [(float(o), float(s))
                for o, s in zip(self.feature_offsets, self.feature_scales)]

    def reseed(self, seed):
        """Replace the env's random stream without consuming a draw."""
        self._rng = np.random.default_rng(seed)

    def reset(self, seed=None):
        """Start a new episode; a given seed makes the draw reproducible."""
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        self._steps = 0
        self._done = False
        return self._reset_state()

    def step(self, action):
        """Advance one step -> (state, reward, terminal)."""
        if self._done:
            raise EnvError(f"{self.name}: step() after the episode ended")
        if not isinstance(action, (int, np.integer)) or not 0 <= action < self.n_actions:
            raise ActionError(f"{self.name}: action {action!r} out of range "
                              f"[0, {self.n_actions})")
        state, reward, done = self._step_impl(int(action))
        self._steps += 1
        if self._steps >= self.step_cap:
            done = True
        self._done = done
        return state, float(reward), bool(done)

    def _reset_state(self):
        raise NotImplementedError

    def _step_impl(self, action):
        raise NotImplementedError


class CartPoleEnv(ControlEnv):
    """Pole balancing on a pushed cart, Euler-integrated at 20 ms.

    Reward is +1 for every step the pole stays up and 0 on the step that
    fails (|x| > 2.4 or |angle| > 12 degrees); episodes cap at 1000 steps.
    State: [cart position, cart velocity, pole angle, pole angular velocity].
    """

    name = "cartpole"
    n_actions = 2
    state_dim = 4
    step_cap = 1000
    # velocities are unbounded; +-3 is the declared encoding cap
    feature_offsets = (0.0, 0.0, 0.0, 0.0)
    feature_scales = (2.4, 3.0, 12 * np.pi / 180, 3.0)

    GRAVITY = 9.8
    CART_MASS = 1.0
    POLE_MASS = 0.1
    HALF_POLE = 0.5
    FORCE = 10.0
    DT = 0.02
    X_LIMIT = 2.4
    ANGLE_LIMIT = 12 * np.pi / 180

    def _reset_state(self):
        self._state = self._rng.uniform(-0.05, 0.05, 4)
        return self._state.copy()

    def _step_impl(self, action):
        x, xdot, theta, thetadot = self._state
        force = self.FORCE if action == 1 else -self.FORCE
        total_mass = self.CART_MASS + self.POLE_MASS
        pml = self.POLE_MASS * self.HALF_POLE
        cos_t, sin_t = np.cos(theta), np.sin(theta)

        temp = (force + pml * thetadot ** 2 * sin_t) / total_mass
        theta_acc = (self.GRAVITY * sin_t - cos_t * temp) / (
            self.HALF_POLE * (4.0 / 3.0 - self.POLE_MASS * cos_t ** 2 / total_mass))
        x_acc = temp - pml * theta_acc * cos_t / total_mass

        # semi-explicit Euler on the OLD derivatives (the benchmark standard)
        x = x + self.DT * xdot
        xdot = xdot + self.DT * x_acc
        theta = theta + self.DT * thetadot
        thetadot = thetadot + self.DT * theta_acc
        self._state = np.array([x, xdot, theta, thetadot])

        failed = abs(x) > self.X_LIMIT or abs(theta) > self.ANGLE_LIMIT
        reward = 0.0 if failed else 1.0
        return self._state.copy(), reward, failed


class AcrobotEnv(ControlEnv):
    """Two-link underactuated swing-up, RK4-integrated at 0.2 s.

    Torque in {-1, 0, +1} acts on the joint between the links.  Every step
    costs -1 (the terminal step included), so an episode's return is minus
    its length, bounded below by -500 at the cap.  Terminal once the tip
    clears the target height: -cos(t1) - cos(t1 + t2) > 1.
    State: [cos t1, sin t1, cos t2, sin t2, w1, w2].
    """

    name = "acrobot"
    n_actions = 3
    state_dim = 6
    step_cap = 500
    feature_offsets = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    feature_scales = (1.0, 1.0, 1.0, 1.0, 4 * np.pi, 9 * np.pi)

    M1 = M2 = 1.0
    L1 = 1.0
    LC1 = LC2 = 0.5
    I1 = I2 = 1.0
    GRAVITY = 9.8
    DT = 0.2
    W1_MAX = 4 * np.pi
    W2_MAX = 9 * np.pi
    TORQUES = (-1.0, 0.0, 1.0)

    def _reset_state(self):
        self._internal = self._rng.uniform(-0.1, 0.1, 4)  # t1, t2, w1, w2
        return self._observe()

    def _observe(self):
        t1, t2, w1, w2 = self._internal
        return np.array([np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2), w1, w2])

    def _derivatives(self, y, torque):
        t1, t2, w1, w2 = y
        m1, m2, l1, lc1, lc2 = self.M1, self.M2, self.L1, self.LC1, self.LC2
        i1, i2, g = self.I1, self.I2, self.GRAVITY

        d1 = m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2 + 2 * l1 * lc2 * np.cos(t2)) + i1 + i2
        d2 = m2 * (lc2 ** 2 + l1 * lc2 * np.cos(t2)) + i2
        phi2 = m2 * lc2 * g * np.cos(t1 + t2 - np.pi / 2)
        phi1 = (-m2 * l1 * lc2 * w2 ** 2 * np.sin(t2)
                - 2 * m2 * l1 * lc2 * w2 * w1 * np.sin(t2)
                + (m1 * lc1 + m2 * l1) * g * np.cos(t1 - np.pi / 2)
                + phi2)
        w2_acc = ((torque + d2 / d1 * phi1
                   - m2 * l1 * lc2 * w1 ** 2 * np.sin(t2) - phi2)
                  / (m2 * lc2 ** 2 + i2 - d2 ** 2 / d1))
        w1_acc = -(d2 * w2_acc + phi1) / d1
        return np.array([w1, w2, w1_acc, w2_acc])

    def _rk4_step(self, y, torque):
        dt = self.DT
        k1 = self._derivatives(y, torque)
        k2 = self._derivatives(y + 0.5 * dt * k1, torque)
        k3 = self._derivatives(y + 0.5 * dt * k2, torque)
        k4 = self._derivatives(y + dt * k3, torque)
        return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    @staticmethod
    def _wrap_angle(x):
        return (x + np.pi) % (2 * np.pi) - np.pi

    def _step_impl(self, action):
        y = self._rk4_step(self._internal, self.TORQUES[action])
        # wrap and clip are part of the documented dynamics
        y[0] = self._wrap_angle(y[0])
        y[1] = self._wrap_angle(y[1])
        y[2] = np.clip(y[2], -self.W1_MAX, self.W1_MAX)
        y[3] = np.clip(y[3], -self.W2_MAX, self.W2_MAX)
        self._internal = y
        reached = (-np.cos(y[0]) - np.cos(y[0] + y[1])) > 1.0
        return self._observe(), -1.0, bool(reached)

    def mechanical_energy(self):
        """Kinetic plus potential energy of the current configuration."""
        t1, t2, w1, w2 = self._internal
        m1, m2, l1, lc1, lc2 = self.M1, self.M2, self.L1, self.LC1, self.LC2
        d1 = m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2 + 2 * l1 * lc2 * np.cos(t2)) \
            + self.I1 + self.I2
        d2 = m2 * (lc2 ** 2 + l1 * lc2 * np.cos(t2)) + self.I2
        kinetic = 0.5 * d1 * w1 ** 2 + d2 * w1 * w2 \
            + 0.5 * (m2 * lc2 ** 2 + self.I2) * w2 ** 2
        potential = -self.GRAVITY * ((m1 * lc1 + m2 * l1) * np.cos(t1)
                                     + m2 * lc2 * np.cos(t1 + t2))
        return kinetic + potential


class ChainMdpEnv(ControlEnv):
    """Deterministic corridor of N states with a rewarded right end.

    Start at 0; action 0 walks left (clamped), action 1 walks right.
    Entering state N-1 pays +1 and terminates.  The exact optimum is
    computable, which is the whole point: this is the verification
    environment for the learning loop.
    """

    name = "chain"
    n_actions = 2
    step_cap = 50
    state_dim = 1

    def __init__(self, seed=None, n_states=5):
        if not isinstance(n_states, (int, np.integer)) or n_states < 2:
            raise ConfigError(f"n_states must be an integer >= 2, got {n_states!r}")
        super().__init__(seed)
        self.n_states = int(n_states)
        half = (self.n_states - 1) / 2.0
        self.feature_offsets = (half,)
        self.feature_scales = (half,)

    def _reset_state(self):
        self._pos = 0
        return np.array([0.0])

    def _step_impl(self, action):
        if action == 0:
            self._pos = max(self._pos - 1, 0)
        else:
            self._pos = min(self._pos + 1, self.n_states - 1)
        reached = self._pos == self.n_states - 1
        return np.array([float(self._pos)]), 1.0 if reached else 0.0, reached

    def to_tabular(self, gamma):
        """The same MDP as dense tables, for the exact solver."""
        n = self.n_states
        P = np.zeros((n, 2, n))
        R = np.zeros((n, 2))
        for s in range(n):
            P[s, 0, max(s - 1, 0)] = 1.0
            P[s, 1, min(s + 1, n - 1)] = 1.0
            if min(s + 1, n - 1) == n - 1:
                R[s, 1] = 1.0
        terminals = np.zeros(n, dtype=bool)
        terminals[n - 1] = True
        return TabularMdp(P, R, gamma, terminals)


ENV_NAMES = ("cartpole", "acrobot", "chain")


def make_env(name, seed=None, **kwargs):
    """Factory over the registered environment names."""
    if name == "cartpole":
        return CartPoleEnv(seed, **kwargs)
    if name == "acrobot":
        return AcrobotEnv(seed, **kwargs)
    if name == "chain":
        return ChainMdpEnv(seed, **kwargs)
    raise ConfigError(f"unknown environment {name!r}; known: {', '.join(ENV_NAMES)}")


def rollout_random(env, episodes, seed):
    """Uniform-random policy baseline -> mean/std/episodic rewards."""
    if not isinstance(episodes, (int, np.integer)) or episodes < 1:
        raise ConfigError(f"episodes must be a positive integer, got {episodes!r}")
    rng = np.random.default_rng(seed)
    totals = np.empty(episodes)
    env.reset(seed=int(rng.integers(2 ** 31)))
    for ep in range(episodes):
        if ep > 0:
            env.reset()
        total, done = 0.0, False
        while not done:
            _, reward, done = env.step(int(rng.integers(env.n_actions)))
            total += reward
        totals[ep] = total
    return {"mean": float(totals.mean()), "std": float(totals.std()),
            "rewards": totals.tolist()}
