"""
Transport between consecutive jump times of a Poisson process
=============================================================

The second and third jump times of a rate-0.01 Poisson process have
gamma laws with shapes 2 and 3.  Moving the second onto the third can
be done causally by just waiting for one more arrival, so the optimal
causal cost should land near the mean inter-arrival time 1/0.01 = 100.
"""
import time

from causalot import (Gamma, check_plan_causal, classic_ot_1d, discretize,
                      independent_sum_plan, solve_causal_transport)

eta = discretize(Gamma(2, 0.01), 40)
nu = discretize(Gamma(3, 0.01), 40)

start = time.perf_counter()
result = solve_causal_transport(eta, nu, "abs")
elapsed = time.perf_counter() - start

print(f"causal optimum        {result.value:10.4f}  "
      f"({result.iterations} pivots, {elapsed:.2f}s)")

classic_value, _ = classic_ot_1d(eta, nu)
print(f"unconstrained optimum {classic_value:10.4f}")
print(f"analytic waiting cost {100.0:10.4f}")

# The "wait one more arrival" recipe is itself a transport plan: add an
# independent exponential delay to the source.  It is causal and its
# cost is the mean delay, which the optimum cannot beat by much.
recipe = independent_sum_plan(Gamma(2, 0.01), Gamma(1, 0.01), 40, 40)
print(f"one-more-arrival plan {recipe.cost('abs'):10.4f}  "
      f"causal={check_plan_causal(recipe, tol=1e-9).causal}")
