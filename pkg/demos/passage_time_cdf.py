"""
Brownian first-passage times as a continuous causal kernel
==========================================================

Let X and Y be the first times standard Brownian motion reaches levels
6 and 11.  Given X = x, the law of Y has the closed-form conditional
CDF 1 - erf(5 / sqrt(2 (y - x))) for y > x.  The kernel depends on x
only through y - x, which is exactly why the pair is causal: knowing
the later passage time adds nothing about the earlier one.
"""
import numpy as np

from causalot import LevyFirstPassage, brownian_passage_conditional_cdf, sample

ys = np.array([13.0, 25.0, 50.0, 200.0, 1000.0])
print("      " + "".join(f"y={y:<7.0f}" for y in ys))
for x in (0.0, 5.0, 12.0):
    vals = brownian_passage_conditional_cdf(6.0, 11.0, x, ys)
    print(f"x={x:4.0f}  " + "".join(f"{v:<9.4f}" for v in vals))

# The gap y - x needs to be enormous before the CDF gets close to 1:
for gap in (1e2, 1e4, 1e6, 1e8):
    v = brownian_passage_conditional_cdf(6.0, 11.0, 0.0, gap)
    print(f"gap {gap:>12.0f}: F = {v:.6f}")

# The marginal law of X itself is heavy-tailed; its mean diverges.
law = LevyFirstPassage(6.0)
draws = sample(law, 100_000, seed=0)
print(f"\nfirst-passage draws to level 6: median {np.median(draws):.1f} "
      f"(theory {law.quantile(0.5):.1f}), mean {law.mean}")
