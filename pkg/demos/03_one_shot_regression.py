"""The value model is linear in hypervector space, which buys two things:
a single full-rate update stores one sample exactly, and repeated small
updates fit a whole function by stochastic projection.

Run:  python3 demos/03_one_shot_regression.py
"""
import numpy as np

from hdql import PositionBasis, QModel, encode

D = 4096
basis = PositionBasis(seed=11, n_features=1, dim=D, bandwidths=2.0)
rng = np.random.default_rng(11)

print("one-shot storage: zero model, single update with beta=1")
model = QModel(dim=D, n_actions=3)
s = encode(basis, np.array([0.4]))
target = 7.25
model.update(s, 1, q_true=target, q_pred=model.predict(s, 1), beta=1.0)
print(f"  target {target}, predicted {model.predict(s, 1):.12f}")
print(f"  untouched actions stay at zero: {model.predict(s, 0):.1f}, "
      f"{model.predict(s, 2):.1f}\n")

print("curve fitting: 400 noisy samples of sin(pi x), beta=0.1, 40 epochs")
model = QModel(dim=D, n_actions=1)
xs = rng.uniform(-1.0, 1.0, size=400)
ys = np.sin(np.pi * xs) + rng.normal(0.0, 0.05, size=400)
encoded = [encode(basis, np.array([x])) for x in xs]
for _ in range(40):
    for e, y in zip(encoded, ys):
        model.update(e, 0, q_true=y, q_pred=model.predict(e, 0), beta=0.1)

print(f"{'x':>6} | {'sin(pi x)':>9} | {'model':>8}")
for x in np.linspace(-1.0, 1.0, 9):
    pred = model.predict(encode(basis, np.array([x])), 0)
    print(f"{x:>+6.2f} | {np.sin(np.pi * x):>+9.4f} | {pred:>+8.4f}")

errs = [abs(model.predict(encode(basis, np.array([x])), 0) - np.sin(np.pi * x))
        for x in np.linspace(-0.95, 0.95, 39)]
print(f"\nmean abs error on a dense grid: {np.mean(errs):.4f}")
