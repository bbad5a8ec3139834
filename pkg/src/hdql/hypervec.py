"""Phase-angle arithmetic for unit-modulus complex hypervectors.

A hypervector here is a D-dimensional complex vector whose every element is
e^{i*theta_j}; only the angles theta_j are stored.  The phase representation
turns the two structural operations into exact arithmetic instead of
floating-point approximations of complex products:

    bind(a, b)     element-wise product          phases add
    power(a, s)    element-wise s-th power       phases scale by s

for any real exponent s.  Superpositions (bundles, regression memories) have
elements of arbitrary modulus and therefore live in ComplexAccumulator, a
plain complex vector supporting in-place accumulation.

Similarity is the real part of the conjugate inner product, normalized
either by the vector norms (`similarity`, the cosine form) or by the
dimension D (`raw_dot`, the form value regression uses, which makes a
unit vector's self-dot exactly 1).
"""

import numpy as np

from .errors import ConfigError, DimensionMismatchError, SimilarityUndefinedError

__all__ = [
    "UnitHypervector",
    "ComplexAccumulator",
    "random_unit",
    "identity",
    "bind",
    "power",
    "bundle",
    "similarity",
    "raw_dot",
]


class UnitHypervector:
    """D complex elements of modulus one, stored as their phases.

    Treated as immutable after construction; the complex element values are
    materialized lazily and cached, since most vectors are only ever used
    for dot products.
    """

    __slots__ = ("phases", "_elements")

    def __init__(self, phases):
        phases = np.array(phases, dtype=np.float64)
        if phases.ndim != 1 or phases.size < 1:
            raise ConfigError("phases must be a non-empty 1-D array")
        if not np.all(np.isfinite(phases)):
            raise ConfigError("phases must be finite")
        self.phases = phases
        self._elements = None

    @property
    def dim(self):
        return self.phases.shape[0]

    def as_complex(self):
        """The element values e^{i*theta_j} as a complex128 array (cached)."""
        if self._elements is None:
            z = np.empty(self.phases.shape[0], dtype=np.complex128)
            np.cos(self.phases, out=z.real)
            np.sin(self.phases, out=z.imag)
            self._elements = z
        return self._elements

    def __repr__(self):
        return f"UnitHypervector(dim={self.dim})"


class ComplexAccumulator:
    """General complex vector: the mutable target of bundling.

    Backed by one complex128 array; `re` and `im` expose the two planes as
    views.  `accumulate` is the documented in-place path; the module-level
    `bundle` is pure and returns a fresh accumulator.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        values = np.array(values, dtype=np.complex128)
        if values.ndim != 1 or values.size < 1:
            raise ConfigError("values must be a non-empty 1-D array")
        self.values = values

    @classmethod
    def zeros(cls, dim):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {dim!r}")
        return cls(np.zeros(dim, dtype=np.complex128))

    @classmethod
    def wrap(cls, values):
        """Wrap an existing complex128 array without copying (shared storage)."""
        acc = cls.__new__(cls)
        acc.values = values
        return acc

    @property
    def dim(self):
        return self.values.shape[0]

    @property
    def re(self):
        return self.values.real

    @property
    def im(self):
        return self.values.imag

    def copy(self):
        return ComplexAccumulator(self.values)

    def norm(self):
        return float(np.linalg.norm(self.values))

    def accumulate(self, h, weight=1.0):
        """In-place ``self += weight * h`` for a hypervector or accumulator."""
        v = _elements_of(h)
        if v.shape[0] != self.dim:
            raise DimensionMismatchError(f"dim {v.shape[0]} != dim {self.dim}")
        if weight == 1.0:
            self.values += v
        else:
            self.values += weight * v
        return self

    def __repr__(self):
        return f"ComplexAccumulator(dim={self.dim})"


def _elements_of(x):
    """Complex element array of a hypervector, accumulator, or raw array."""
    if isinstance(x, UnitHypervector):
        return x.as_complex()
    if isinstance(x, ComplexAccumulator):
        return x.values
    # encoded states carry their hypervector; accept them without importing
    # the encoding layer
    inner = getattr(x, "hypervector", None)
    if isinstance(inner, UnitHypervector):
        return inner.as_complex()
    return np.asarray(x, dtype=np.complex128)


def _check_dims(a, b):
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(f"dim {a.shape[0]} != dim {b.shape[0]}")


def random_unit(dim, rng, distribution="uniform", sigma=None):
    """Draw a hypervector with i.i.d. random phases.

    Args:
        dim: number of elements, >= 1.
        rng: a seeded numpy Generator; consumed deterministically.
        distribution: "uniform" draws angles from [-pi, pi); "gaussian"
            draws from N(0, sigma^2), leaving the induced similarity kernel
            gaussian with length-scale 1/sigma.
        sigma: phase scale, required (and > 0) for "gaussian".
    """
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ConfigError(f"dim must be a positive integer, got {dim!r}")
    if distribution == "uniform":
        phases = rng.uniform(-np.pi, np.pi, dim)
    elif distribution == "gaussian":
        if sigma is None or not np.isfinite(sigma) or sigma <= 0:
            raise ConfigError(f"gaussian phases need sigma > 0, got {sigma!r}")
        phases = rng.normal(0.0, sigma, dim)
    else:
        raise ConfigError(f"unknown phase distribution {distribution!r}")
    return UnitHypervector(phases)


def identity(dim):
    """The binding identity: all phases zero, all elements 1."""
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ConfigError(f"dim must be a positive integer, got {dim!r}")
    return UnitHypervector(np.zeros(dim))


def bind(a, b):
    """Element-wise product of two unit hypervectors (phases add)."""
    _check_dims(a.phases, b.phases)
    return UnitHypervector(a.phases + b.phases)


def power(a, s):
    """Element-wise s-th power for real s (phases scale by s)."""
    s = float(s)
    if not np.isfinite(s):
        raise ConfigError(f"exponent must be finite, got {s!r}")
    return UnitHypervector(s * a.phases)


def bundle(acc, h):
    """Superpose: a new accumulator equal to acc + h, inputs untouched."""
    va, vh = _elements_of(acc), _elements_of(h)
    _check_dims(va, vh)
    return ComplexAccumulator(va + vh)


def similarity(a, b):
    """Cosine similarity Re<a, conj(b)> / (|a||b|), in [-1, 1].

    Accepts unit hypervectors and accumulators interchangeably.  Raises
    SimilarityUndefinedError when either side has zero norm (an empty
    accumulator says nothing about direction).
    """
    va, vb = _elements_of(a), _elements_of(b)
    _check_dims(va, vb)
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise SimilarityUndefinedError("similarity with a zero-norm vector")
    d = float(np.real(va @ np.conj(vb))) / float(na * nb)
    # Cauchy-Schwarz bounds |d| by 1; rounding can spill over by ~1e-16.
    return float(min(1.0, max(-1.0, d)))


def raw_dot(a, b, normalize=True):
    """Re<a, conj(b)>, divided by the dimension D unless normalize=False.

    The D-normalization makes raw_dot(h, h) exactly 1 for a unit
    hypervector h, which keeps learning rates and value magnitudes
    independent of D.
    """
    va, vb = _elements_of(a), _elements_of(b)
    _check_dims(va, vb)
    d = float(np.real(va @ np.conj(vb)))
    if normalize:
        return d / va.shape[0]
    return d
