"""Per-action value regression in hypervector space.

One complex accumulator M_a per action.  Prediction is the D-normalized
real inner product of M_a with the encoded state; learning adds the state
vector scaled by the prediction error:

    q_pred = raw_dot(M_a, S)
    M_a   += beta * (q_true - q_pred) * S

Because raw_dot conjugates its second argument and |S_j| = 1, adding S
itself (not its conjugate) raises the prediction on S by exactly
beta * (q_true - q_pred): a single update with beta = 1 from the zero
model reproduces q_true exactly.  Updates touch only the chosen action's
accumulator, so the actions learn independently.
"""

import json

import numpy as np

from .errors import ActionError, ConfigError, DimensionMismatchError, DivergenceError
from .encoding import EncodedState
from .hypervec import ComplexAccumulator, UnitHypervector

__all__ = ["QModel", "save_model", "load_model"]


def _state_values(s):
    """Complex element array of an encoded state (several accepted forms)."""
    if isinstance(s, EncodedState):
        return s.hypervector.as_complex()
    if isinstance(s, UnitHypervector):
        return s.as_complex()
    if isinstance(s, ComplexAccumulator):
        return s.values
    return np.asarray(s, dtype=np.complex128)


class QModel:
    """n_actions complex accumulators over a shared dimension D.

    Zero-initialized, so a fresh model predicts 0 for every state and
    action.  `normalize` selects the D-normalized dot product (the
    default); `conjugate_update` flips which of S / conj(S) the update
    adds, kept for comparison runs.
    """

    __slots__ = ("dim", "n_actions", "normalize", "conjugate_update", "values")

    def __init__(self, dim, n_actions, normalize=True, conjugate_update=False):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {dim!r}")
        if not isinstance(n_actions, (int, np.integer)) or n_actions < 1:
            raise ConfigError(f"n_actions must be a positive integer, got {n_actions!r}")
        self.dim = int(dim)
        self.n_actions = int(n_actions)
        self.normalize = bool(normalize)
        self.conjugate_update = bool(conjugate_update)
        self.values = np.zeros((self.n_actions, self.dim), dtype=np.complex128)

    @property
    def models(self):
        """The per-action accumulators as views over shared storage."""
        return [ComplexAccumulator.wrap(self.values[a]) for a in range(self.n_actions)]

    def _check_action(self, a):
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.n_actions:
            raise ActionError(f"action {a!r} out of range [0, {self.n_actions})")

    def _check_dim(self, v):
        if v.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"state dim {v.shape[-1]} != model dim {self.dim}")

    def predict(self, s, a):
        """Q(s, a) = raw_dot(M_a, S); pure."""
        self._check_action(a)
        v = _state_values(s)
        self._check_dim(v)
        q = float(np.real(self.values[a] @ np.conj(v)))
        if self.normalize:
            q /= self.dim
        return q

    def predict_all(self, s):
        """Q(s, a) for every action, one complex mat-vec."""
        v = _state_values(s)
        self._check_dim(v)
        q = np.real(self.values @ np.conj(v))
        if self.normalize:
            q /= self.dim
        return q

    def predict_all_batch(self, batch):
        """Q for a (B, D) complex batch of encoded states, shape (B, n_actions)."""
        batch = np.asarray(batch, dtype=np.complex128)
        self._check_dim(batch)
        q = np.real(np.conj(batch) @ self.values.T)
        if self.normalize:
            q /= self.dim
        return q

    def update(self, s, a, q_true, q_pred, beta):
        """M_a += beta * (q_true - q_pred) * S; only action a changes."""
        self._check_action(a)
        beta = float(beta)
        if not np.isfinite(beta) or beta <= 0:
            raise ConfigError(f"beta must be finite and > 0, got {beta!r}")
        err = float(q_true) - float(q_pred)
        if not np.isfinite(err):
            raise DivergenceError(
                "non-finite regression error: training diverged",
                context={"action": int(a), "q_true": float(q_true),
                         "q_pred": float(q_pred), "beta": beta})
        if err == 0.0:
            return
        v = _state_values(s)
        self._check_dim(v)
        if self.conjugate_update:
            self.values[a] += (beta * err) * np.conj(v)
        else:
            self.values[a] += (beta * err) * v

    def clone(self):
        """Deep, independent copy (the delayed-model snapshot)."""
        dup = QModel(self.dim, self.n_actions, self.normalize, self.conjugate_update)
        dup.values[:] = self.values
        return dup

    def __repr__(self):
        return (f"QModel(dim={self.dim}, n_actions={self.n_actions}, "
                f"normalize={self.normalize})")


def save_model(model, path, encoder_seed=None):
    """Checkpoint: one JSON header line, then the raw complex128 bytes.

    The payload is exactly 2 * D * n_actions little-endian float64 values
    (real/imaginary interleaved); loading restores them bit for bit.
    """
    header = {
        "format": "hdql-qmodel-v1",
        "dim": model.dim,
        "n_actions": model.n_actions,
        "normalize": model.normalize,
        "conjugate_update": model.conjugate_update,
        "encoder_seed": encoder_seed,
        "dtype": "<c16",
    }
    with open(path, "wb") as f:
        f.write(json.dumps(header).encode("ascii") + b"\n")
        f.write(np.ascontiguousarray(model.values, dtype="<c16").tobytes())


def load_model(path):
    """Inverse of save_model: returns (QModel, encoder_seed)."""
    with open(path, "rb") as f:
        header_line = f.readline()
        payload = f.read()
    try:
        header = json.loads(header_line)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"model file has no valid JSON header: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != "hdql-qmodel-v1":
        raise ConfigError("not a model checkpoint (missing format: hdql-qmodel-v1)")
    try:
        model = QModel(header["dim"], header["n_actions"],
                       normalize=header["normalize"],
                       conjugate_update=header["conjugate_update"])
    except KeyError as exc:
        raise ConfigError(f"model header missing field {exc}") from exc
    expect = model.n_actions * model.dim * 16
    if len(payload) != expect:
        raise ConfigError(
            f"model payload is {len(payload)} bytes, header implies {expect}")
    model.values[:] = np.frombuffer(payload, dtype="<c16").reshape(
        model.n_actions, model.dim)
    return model, header.get("encoder_seed")
