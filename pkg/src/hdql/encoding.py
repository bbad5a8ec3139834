"""Kernel encoding of continuous states into unit hypervectors.

Each feature k gets one random position hypervector P_k.  A state
s = (s_1..s_n) is first normalized feature-wise by an affine map and a
clip to [-1, 1], then encoded as the bound composition of fractional
powers

    H(s) = P_1^{s_1} * P_2^{s_2} * ... * P_n^{s_n}

which in phase space is just the matrix product of the normalized state
with the basis phase rows.  Because the phases of P_k are drawn from a
distribution, the expected similarity of two encodings is a
shift-invariant kernel in the feature difference: gaussian phases with
scale sigma give exp(-sigma^2 * d^2 / 2), uniform phases on [-sigma, sigma]
give sin(sigma*d)/(sigma*d).  Larger sigma means a narrower kernel.

Decoding inverts the map approximately: shifting feature k by a trial
delta and comparing against the all-ones identity vector yields a
similarity profile that peaks (in expectation) at the true feature value.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatchError, EncodingError
from .hypervec import UnitHypervector

__all__ = [
    "PositionBasis",
    "EncodedState",
    "new_basis",
    "encode",
    "encode_batch",
    "shift",
    "decode_feature",
    "expected_kernel",
]


def expected_kernel(delta, sigma, distribution="gaussian"):
    """Analytic similarity kernel k(delta) induced by a phase distribution.

    This is the expectation the encoder is tested against; actual
    similarities fluctuate around it with spread O(1/sqrt(D)).
    """
    delta = np.asarray(delta, dtype=np.float64)
    if distribution == "gaussian":
        return np.exp(-0.5 * (sigma * delta) ** 2)
    if distribution == "uniform":
        return np.sinc(sigma * delta / np.pi)
    raise ConfigError(f"unknown phase distribution {distribution!r}")


class PositionBasis:
    """Per-feature random phase rows plus the normalization that feeds them.

    Fully determined by (seed, n_features, dim, bandwidths, feature_scale,
    distribution): the phase rows are drawn feature by feature from a single
    default_rng(seed), so a basis can be shipped as a small JSON document and
    re-derived exactly.  Immutable after construction.
    """

    __slots__ = (
        "seed",
        "n_features",
        "dim",
        "bandwidths",
        "offsets",
        "scales",
        "distribution",
        "phase_rows",
    )

    def __init__(self, seed, n_features, dim, bandwidths, feature_scale=None,
                 distribution="gaussian"):
        if not isinstance(n_features, (int, np.integer)) or n_features < 1:
            raise ConfigError(f"n_features must be a positive integer, got {n_features!r}")
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {dim!r}")
        if distribution not in ("gaussian", "uniform"):
            raise ConfigError(f"unknown phase distribution {distribution!r}")

        bw = np.atleast_1d(np.asarray(bandwidths, dtype=np.float64))
        if bw.size == 1:
            bw = np.full(n_features, bw[0])
        if bw.shape != (n_features,):
            raise ConfigError(
                f"bandwidths must be a scalar or length-{n_features} list, got shape {bw.shape}")
        if not np.all(np.isfinite(bw)) or np.any(bw <= 0):
            raise ConfigError(f"bandwidths must be finite and > 0, got {bw.tolist()}")

        if feature_scale is None:
            offsets = np.zeros(n_features)
            scales = np.ones(n_features)
        else:
            fs = np.asarray(feature_scale, dtype=np.float64)
            if fs.shape != (n_features, 2):
                raise ConfigError(
                    f"feature_scale must be {n_features} (offset, scale) pairs, got shape {fs.shape}")
            offsets, scales = fs[:, 0].copy(), fs[:, 1].copy()
            if not np.all(np.isfinite(fs)) or np.any(scales <= 0):
                raise ConfigError("feature scales must be finite with scale > 0")

        self.seed = int(seed)
        self.n_features = int(n_features)
        self.dim = int(dim)
        self.bandwidths = bw
        self.offsets = offsets
        self.scales = scales
        self.distribution = distribution

        # one generator, rows drawn in feature order: the layout the seed pins
        rng = np.random.default_rng(self.seed)
        rows = np.empty((self.n_features, self.dim))
        for k in range(self.n_features):
            if distribution == "gaussian":
                rows[k] = rng.normal(0.0, bw[k], self.dim)
            else:
                rows[k] = rng.uniform(-bw[k], bw[k], self.dim)
        self.phase_rows = rows

    def position_vector(self, k):
        """P_k as a UnitHypervector."""
        if not 0 <= k < self.n_features:
            raise DimensionMismatchError(
                f"feature index {k} out of range for n_features={self.n_features}")
        return UnitHypervector(self.phase_rows[k])

    def normalize(self, state):
        """Affine-map raw features and clip into [-1, 1].

        Clipping is the documented treatment of unbounded features
        (velocities past their cap all encode to the same endpoint).
        """
        state = np.asarray(state, dtype=np.float64)
        if state.shape[-1] != self.n_features:
            raise EncodingError(
                f"state has {state.shape[-1]} features, basis expects {self.n_features}")
        if not np.all(np.isfinite(state)):
            raise EncodingError(f"state contains non-finite entries: {state!r}")
        return np.clip((state - self.offsets) / self.scales, -1.0, 1.0)

    def to_json(self):
        """Compact reproducibility document; phases re-derive from the seed."""
        return json.dumps({
            "format": "hdql-basis-v1",
            "seed": self.seed,
            "n_features": self.n_features,
            "dim": self.dim,
            "bandwidths": self.bandwidths.tolist(),
            "feature_scale": np.column_stack([self.offsets, self.scales]).tolist(),
            "distribution": self.distribution,
        })

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"basis document is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("format") != "hdql-basis-v1":
            raise ConfigError("not a basis document (missing format: hdql-basis-v1)")
        try:
            return cls(
                seed=doc["seed"],
                n_features=doc["n_features"],
                dim=doc["dim"],
                bandwidths=doc["bandwidths"],
                feature_scale=doc["feature_scale"],
                distribution=doc.get("distribution", "gaussian"),
            )
        except KeyError as exc:
            raise ConfigError(f"basis document missing field {exc}") from exc

    def __repr__(self):
        return (f"PositionBasis(seed={self.seed}, n_features={self.n_features}, "
                f"dim={self.dim}, distribution={self.distribution!r})")


@dataclass(frozen=True)
class EncodedState:
    """A state's hypervector together with the feature count it came from."""

    hypervector: UnitHypervector
    source_dim: int

    @property
    def dim(self):
        return self.hypervector.dim


def new_basis(n, dim, bandwidths, feature_scale=None, seed=0, distribution="gaussian"):
    """Construct a PositionBasis (thin alias over the constructor)."""
    return PositionBasis(seed, n, dim, bandwidths, feature_scale, distribution)


def encode(basis, state):
    """Encode one raw state: H(s) = prod_k P_k^{s_hat_k}.

    In phase space the composition collapses to s_hat @ phase_rows, a single
    (n,) x (n, D) product.
    """
    shat = basis.normalize(state)
    if shat.ndim != 1:
        raise EncodingError(f"encode takes a single state vector, got shape {shat.shape}")
    phases = shat @ basis.phase_rows
    return EncodedState(UnitHypervector(phases), basis.n_features)


def encode_batch(basis, states):
    """Encode a (B, n) batch straight to complex element values, shape (B, D).

    Returns the element values rather than EncodedStates: this is the
    training hot path and callers consume the complex array directly.
    """
    states = np.asarray(states, dtype=np.float64)
    if states.ndim != 2:
        raise EncodingError(f"encode_batch takes a (B, n) array, got shape {states.shape}")
    shat = basis.normalize(states)
    phases = shat @ basis.phase_rows
    out = np.empty(phases.shape, dtype=np.complex128)
    np.cos(phases, out=out.real)
    np.sin(phases, out=out.imag)
    return out


def shift(e, feature_index, delta, basis):
    """Slide feature k of an encoding by -delta in normalized units.

    Exact algebraic identity: shift(encode(s), k, d) has the phases of
    encode with s_hat_k replaced by s_hat_k - d.  No similarity cost.
    """
    if not 0 <= feature_index < basis.n_features:
        raise DimensionMismatchError(
            f"feature index {feature_index} out of range for n_features={basis.n_features}")
    if e.hypervector.dim != basis.dim:
        raise DimensionMismatchError(f"encoding dim {e.hypervector.dim} != basis dim {basis.dim}")
    phases = e.hypervector.phases - float(delta) * basis.phase_rows[feature_index]
    return EncodedState(UnitHypervector(phases), e.source_dim)


def _identity_similarity_profile(e, feature_index, deltas, basis):
    """similarity(shift(e, k, delta), all-ones identity) for many deltas.

    Equals mean_j cos(theta_j - delta * p_kj); vectorized over the grid.
    """
    grid_phases = e.hypervector.phases[None, :] - np.outer(deltas, basis.phase_rows[feature_index])
    return np.cos(grid_phases).mean(axis=1)


def decode_feature(e, feature_index, basis, search_interval=(-1.0, 1.0), grid_points=41):
    """Recover feature k's normalized value from an encoding.

    Scans delta over the interval, scoring similarity of the shifted
    encoding against the identity vector; the expected profile is
    k_k(s_hat_k - delta) * prod_{m != k} k_m(s_hat_m), peaked at the true
    value.  The best grid point is refined by one golden-section pass over
    its bracketing cell.  Resolution needs D large enough for the kernel
    peak to clear the O(1/sqrt(D)) similarity noise.
    """
    lo, hi = float(search_interval[0]), float(search_interval[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ConfigError(f"degenerate search interval ({lo}, {hi})")
    if not isinstance(grid_points, (int, np.integer)) or grid_points < 2:
        raise ConfigError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    if not 0 <= feature_index < basis.n_features:
        raise DimensionMismatchError(
            f"feature index {feature_index} out of range for n_features={basis.n_features}")

    grid = np.linspace(lo, hi, grid_points)
    scores = _identity_similarity_profile(e, feature_index, grid, basis)
    best = int(np.argmax(scores))

    # golden-section pass over the cell around the best grid point
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid_points - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = _identity_similarity_profile(e, feature_index, np.array([c]), basis)[0]
    fd = _identity_similarity_profile(e, feature_index, np.array([d]), basis)[0]
    for _ in range(30):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _identity_similarity_profile(e, feature_index, np.array([c]), basis)[0]
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _identity_similarity_profile(e, feature_index, np.array([d]), basis)[0]
    return float(0.5 * (a + b))
