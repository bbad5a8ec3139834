"""How fractional-power encoding turns similarity into a tunable kernel.

A PositionBasis maps an n-feature state in [-1, 1]^n to one hypervector.
The similarity of two encodings depends only on the feature difference,
and the bandwidth parameter sets how fast it falls off.  The encoding is
also decodable: sweeping a probe shift recovers the stored feature value.

Run:  python3 demos/02_kernel_encoding.py
"""
import numpy as np

from hdql import PositionBasis, decode_feature, encode, expected_kernel, similarity

D = 6000

print("similarity vs feature distance, against the analytic kernel")
print(f"{'delta':>6} | {'sigma=1.67':>21} | {'sigma=3.33':>21}")
for delta in (0.0, 0.1, 0.2, 0.4, 0.8):
    row = [f"{delta:>6}"]
    for sigma in (1.6667, 3.33):
        basis = PositionBasis(seed=3, n_features=1, dim=D, bandwidths=sigma)
        e0 = encode(basis, np.array([0.0]))
        e1 = encode(basis, np.array([delta]))
        measured = similarity(e0, e1)
        exact = expected_kernel(np.array([delta]), sigma, "gaussian")[0]
        row.append(f"{measured:+.4f} (exact {exact:+.4f})")
    print(" | ".join(row))

print("\nnarrow kernels separate nearby states; wide ones generalize further.")

print("\ndecoding a 4-feature state back out of one hypervector:")
basis = PositionBasis(seed=5, n_features=4, dim=D, bandwidths=2.0)
state = np.array([0.62, -0.31, 0.08, -0.77])
enc = encode(basis, state)
for k in range(4):
    est = decode_feature(enc, k, basis)
    print(f"  feature {k}: stored {state[k]:+.3f}  decoded {est:+.3f}  "
          f"error {abs(est - state[k]):.4f}")

print("\nthe same vector holds all four values; interference shrinks as D grows.")
