"""The singlet correlation two ways: the exact limit-of-product estimator
and the stochastic pre-selected-ensemble estimator, side by side against
-cos(eta)."""
import numpy as np

from s3sim import correlation, estimate_pair
from s3sim.rng import substream

a = np.array([1.0, 0.0, 0.0])

print("eta(deg)   exact estimator   ensemble estimate   -cos(eta)    z")
print("-" * 68)
for i, deg in enumerate(range(0, 181, 15)):
    rad = np.radians(deg)
    b = np.array([np.cos(rad), np.sin(rad), 0.0])
    exact = correlation(a, b, n=10_000, seed=100 + i)
    bridge = estimate_pair(a, b, 50_000, substream(200, i), mode="s3")
    z = (bridge.e_hat - bridge.e_analytic) / bridge.stderr if bridge.stderr else 0.0
    print(f"  {deg:5d}     {exact.e_hat:+.9f}      {bridge.e_hat:+.6f}       "
          f"{-np.cos(rad):+.6f}  {z:+5.2f}")

print()
print("The exact estimator agrees with -cos(eta) to machine precision because")
print("every conserved run contributes the same limiting scalar -a.b; the")
print("ensemble estimator fluctuates within its standard error.")
