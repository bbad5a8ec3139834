"""Encoder tests: brute-force composition oracle at tiny D, kernel and
factorization bands at large D, shift algebra, decode round-trips."""

import numpy as np
import pytest

from hdql.encoding import (
    PositionBasis,
    decode_feature,
    encode,
    encode_batch,
    expected_kernel,
    new_basis,
    shift,
)
from hdql.errors import ConfigError, DimensionMismatchError, EncodingError
from hdql.hypervec import UnitHypervector, bind, identity, power, similarity


def feature_difference_similarity(basis, delta):
    """similarity(encode at x, encode at x+delta) via exact phase shift."""
    e0 = encode(basis, np.zeros(basis.n_features))
    es = shift(e0, 0, -delta, basis)
    return similarity(es.hypervector, e0.hypervector)


# ---------------------------------------------------------------- composition


def test_encode_matches_bind_power_composition_at_tiny_dim():
    rng = np.random.default_rng(21)
    basis = PositionBasis(seed=5, n_features=3, dim=8, bandwidths=1.7)
    for _ in range(100):
        s = rng.uniform(-1, 1, 3)
        direct = identity(8)
        for k in range(3):
            direct = bind(direct, power(basis.position_vector(k), s[k]))
        enc = encode(basis, s)
        assert np.allclose(enc.hypervector.as_complex(), direct.as_complex(), atol=1e-12)


def test_zero_state_encodes_to_identity():
    basis = PositionBasis(seed=1, n_features=4, dim=32, bandwidths=2.0)
    e = encode(basis, np.zeros(4))
    assert np.array_equal(e.hypervector.phases, np.zeros(32))
    assert e.source_dim == 4


def test_basis_is_deterministic_per_seed():
    a = PositionBasis(seed=42, n_features=4, dim=6000, bandwidths=2.0)
    b = PositionBasis(seed=42, n_features=4, dim=6000, bandwidths=2.0)
    c = PositionBasis(seed=43, n_features=4, dim=6000, bandwidths=2.0)
    assert np.array_equal(a.phase_rows, b.phase_rows)
    assert not np.array_equal(a.phase_rows, c.phase_rows)


def test_encode_batch_matches_single_encodes():
    basis = PositionBasis(seed=2, n_features=4, dim=64, bandwidths=1.5)
    states = np.random.default_rng(3).uniform(-1, 1, (5, 4))
    batch = encode_batch(basis, states)
    assert batch.shape == (5, 64)
    for i in range(5):
        assert np.allclose(batch[i], encode(basis, states[i]).hypervector.as_complex(),
                           atol=1e-12)


# ---------------------------------------------------------------- kernel bands


def test_gaussian_kernel_fidelity():
    """Empirical similarity tracks exp(-sigma^2 d^2 / 2) within 5/sqrt(D)."""
    dim = 2000
    bound = 5 / np.sqrt(dim)
    for seed, sigma in [(0, 1.0), (1, 2.0), (2, 3.33)]:
        basis = PositionBasis(seed, 1, dim, sigma)
        for d in np.linspace(-2, 2, 41):
            dev = abs(feature_difference_similarity(basis, d) - expected_kernel(d, sigma))
            assert dev <= bound, f"sigma={sigma} d={d}: dev {dev} > {bound}"


def test_uniform_kernel_is_sinc():
    dim = 2000
    bound = 5 / np.sqrt(dim)
    basis = PositionBasis(3, 1, dim, np.pi, distribution="uniform")
    for d in np.linspace(-2, 2, 41):
        dev = abs(feature_difference_similarity(basis, d)
                  - expected_kernel(d, np.pi, "uniform"))
        assert dev <= bound


def test_kernel_at_zero_is_one():
    basis = PositionBasis(0, 2, 256, 2.0)
    e = encode(basis, [0.3, -0.7])
    assert similarity(e.hypervector, e.hypervector) == pytest.approx(1.0, abs=1e-12)


def test_similarity_factorizes_across_independent_bindings():
    """sim(Px*R1, Py*R2) ~ sim(Px,Py)*sim(R1,R2) within 5/sqrt(D)."""
    dim = 2000
    bound = 5 / np.sqrt(dim)
    pos = PositionBasis(11, 1, dim, 2.0)
    other = PositionBasis(12, 1, dim, 2.0)
    rng = np.random.default_rng(0)
    for _ in range(100):
        x, y, u, v = rng.uniform(-1, 1, 4)
        px, py = encode(pos, [x]).hypervector, encode(pos, [y]).hypervector
        r1, r2 = encode(other, [u]).hypervector, encode(other, [v]).hypervector
        lhs = similarity(bind(px, r1), bind(py, r2))
        rhs = similarity(px, py) * similarity(r1, r2)
        assert abs(lhs - rhs) <= bound


def test_single_element_flip_barely_moves_similarity():
    # information spread means one flipped element shifts similarity <= 2/D
    dim = 2000
    basis = PositionBasis(9, 4, dim, 2.0)
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = encode(basis, rng.uniform(-1, 1, 4)).hypervector
        b = encode(basis, rng.uniform(-1, 1, 4)).hypervector
        flipped = a.phases.copy()
        flipped[rng.integers(dim)] += np.pi
        change = abs(similarity(UnitHypervector(flipped), b) - similarity(a, b))
        assert change <= 2 / dim + 1e-12


# ---------------------------------------------------------------- shift algebra


def test_zero_shift_is_noop():
    basis = PositionBasis(4, 3, 128, 2.0)
    e = encode(basis, [0.2, -0.4, 0.9])
    assert np.array_equal(shift(e, 1, 0.0, basis).hypervector.phases, e.hypervector.phases)


def test_shift_by_feature_value_zeroes_that_feature():
    scale = [(1.0, 2.0), (0.0, 1.0), (-0.5, 3.0)]
    basis = PositionBasis(4, 3, 128, 2.0, feature_scale=scale)
    raw = np.array([1.8, 0.6, -2.0])
    shat = basis.normalize(raw)
    e = encode(basis, raw)
    moved = shift(e, 0, shat[0], basis)
    zeroed = raw.copy()
    zeroed[0] = 1.0  # raw value equal to the offset normalizes to 0
    expect = encode(basis, zeroed)
    assert np.allclose(moved.hypervector.phases, expect.hypervector.phases, atol=1e-12)


def test_shifts_compose_additively():
    basis = PositionBasis(5, 2, 256, 1.5)
    e = encode(basis, [0.1, 0.7])
    twice = shift(shift(e, 1, 0.3, basis), 1, -0.8, basis)
    once = shift(e, 1, -0.5, basis)
    assert np.allclose(twice.hypervector.phases, once.hypervector.phases, atol=1e-9)


def test_shift_commutes_with_encode():
    basis = PositionBasis(6, 3, 512, 2.0)
    s = np.array([0.3, -0.2, 0.6])
    lhs = shift(encode(basis, s), 2, 0.25, basis)
    moved = s.copy()
    moved[2] -= 0.25  # identity feature_scale: raw units are normalized units
    rhs = encode(basis, moved)
    assert np.allclose(lhs.hypervector.phases, rhs.hypervector.phases, atol=1e-9)


# ---------------------------------------------------------------- decoding


def test_decode_round_trip_single_feature():
    dim = 6000
    errs = []
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        basis = PositionBasis(seed, 1, dim, 3.33)
        s = rng.uniform(-1, 1, 1)
        est = decode_feature(encode(basis, s), 0, basis, (-1, 1), 41)
        errs.append(abs(est - s[0]))
    assert max(errs) <= 0.02


def test_decode_round_trip_multi_feature():
    # off-feature kernel mass attenuates the peak, so the companion
    # features must sit near the kernel center for a clean read-out
    dim = 6000
    errs = []
    for seed in range(100):
        rng = np.random.default_rng(9000 + seed)
        basis = PositionBasis(seed, 4, dim, 3.33)
        s = rng.uniform(-0.15, 0.15, 4)
        s[0] = rng.uniform(-1, 1)
        est = decode_feature(encode(basis, s), 0, basis, (-1, 1), 41)
        errs.append(abs(est - s[0]))
    assert max(errs) <= 0.02


def test_decode_at_interval_boundary():
    basis = PositionBasis(7, 1, 2048, 3.33)
    est = decode_feature(encode(basis, [-1.0]), 0, basis, (-1, 1), 41)
    assert abs(est - (-1.0)) <= 2 / 40  # grid resolution


def test_decode_degrades_at_tiny_dim():
    """Negative control: with interference present, D=8 decoding fails
    where D=6000 succeeds, pinning the dimension dependence."""
    def run(dim):
        errs = []
        for seed in range(100):
            rng = np.random.default_rng(9000 + seed)
            basis = PositionBasis(seed, 4, dim, 3.33)
            s = rng.uniform(-0.15, 0.15, 4)
            s[0] = rng.uniform(-1, 1)
            est = decode_feature(encode(basis, s), 0, basis, (-1, 1), 41)
            errs.append(abs(est - s[0]))
        return np.array(errs)

    tiny, big = run(8), run(6000)
    assert tiny.max() > 0.2        # at least one badly wrong read-out
    assert tiny.mean() > 10 * big.mean()


# ---------------------------------------------------------------- normalization


def test_affine_normalization_and_clip():
    basis = PositionBasis(0, 2, 16, 1.0, feature_scale=[(0.0, 2.4), (1.0, 0.5)])
    shat = basis.normalize([1.2, 1.25])
    assert shat == pytest.approx([0.5, 0.5], abs=1e-12)
    clipped = basis.normalize([100.0, -100.0])
    assert clipped == pytest.approx([1.0, -1.0], abs=1e-12)


def test_non_finite_state_raises_encoding_error():
    basis = PositionBasis(0, 2, 16, 1.0)
    with pytest.raises(EncodingError):
        encode(basis, [0.1, np.nan])
    with pytest.raises(EncodingError):
        encode(basis, [np.inf, 0.0])


def test_wrong_state_length_raises_encoding_error():
    basis = PositionBasis(0, 3, 16, 1.0)
    with pytest.raises(EncodingError):
        encode(basis, [0.1, 0.2])


# ---------------------------------------------------------------- serialization


def test_basis_json_round_trip():
    basis = PositionBasis(77, 4, 512, [1.0, 2.0, 3.0, 4.0],
                          feature_scale=[(0.0, 2.4), (0.0, 3.0), (0.1, 0.2), (0.0, 3.0)],
                          distribution="gaussian")
    again = PositionBasis.from_json(basis.to_json())
    assert np.array_equal(again.phase_rows, basis.phase_rows)
    assert np.array_equal(again.bandwidths, basis.bandwidths)
    assert np.array_equal(again.offsets, basis.offsets)
    assert np.array_equal(again.scales, basis.scales)
    assert again.distribution == basis.distribution


def test_from_json_rejects_garbage():
    with pytest.raises(ConfigError):
        PositionBasis.from_json("not json at all {")
    with pytest.raises(ConfigError):
        PositionBasis.from_json('{"format": "something-else"}')
    with pytest.raises(ConfigError):
        PositionBasis.from_json('{"format": "hdql-basis-v1", "seed": 1}')


# ---------------------------------------------------------------- validation


def test_invalid_construction():
    with pytest.raises(ConfigError):
        PositionBasis(0, 0, 16, 1.0)
    with pytest.raises(ConfigError):
        PositionBasis(0, 2, 0, 1.0)
    with pytest.raises(ConfigError):
        PositionBasis(0, 2, 16, -1.0)
    with pytest.raises(ConfigError):
        PositionBasis(0, 2, 16, [1.0, 2.0, 3.0])
    with pytest.raises(ConfigError):
        PositionBasis(0, 2, 16, 1.0, feature_scale=[(0.0, 0.0), (0.0, 1.0)])
    with pytest.raises(ConfigError):
        PositionBasis(0, 2, 16, 1.0, distribution="cauchy")


def test_decode_validation():
    basis = PositionBasis(0, 2, 16, 1.0)
    e = encode(basis, [0.0, 0.0])
    with pytest.raises(ConfigError):
        decode_feature(e, 0, basis, (1.0, -1.0), 41)
    with pytest.raises(ConfigError):
        decode_feature(e, 0, basis, (-1.0, 1.0), 1)
    with pytest.raises(DimensionMismatchError):
        decode_feature(e, 5, basis, (-1.0, 1.0), 41)
    with pytest.raises(DimensionMismatchError):
        shift(e, -1, 0.1, basis)


def test_new_basis_alias():
    a = new_basis(2, 64, 1.5, seed=9)
    b = PositionBasis(9, 2, 64, 1.5)
    assert np.array_equal(a.phase_rows, b.phase_rows)


def test_encoded_states_feed_the_algebra_directly():
    """similarity() and raw_dot() accept EncodedState without unwrapping."""
    basis = PositionBasis(3, 2, 256, 2.0)
    a = encode(basis, np.array([0.3, -0.4]))
    b = encode(basis, np.array([0.1, 0.2]))
    assert similarity(a, a) == pytest.approx(1.0, abs=1e-12)
    assert similarity(a, b) == pytest.approx(
        similarity(a.hypervector, b.hypervector), abs=1e-15)
