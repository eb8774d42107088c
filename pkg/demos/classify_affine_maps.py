"""
Which affine maps give causal deterministic plans?
==================================================

A map T sends each source atom somewhere; the plan it induces is causal
only if T never reveals the future.  Two shapes survive: maps that stay
on or above the diagonal, and maps truncated at a fixed late value.
For T(x) = a x + b this leaves very few (a, b) combinations.
"""
import numpy as np

from causalot import Exponential, Gaussian, check_map_causal, discretize

for name, spec in [("standard normal", Gaussian(0.0, 1.0)),
                   ("exponential(1)", Exponential(1.0))]:
    measure = discretize(spec, 300)
    print(f"\n{name}, 300 atoms")
    print("      " + "".join(f"{lab:>16}" for lab in ("b=-1", "b=0", "b=+1")))
    for a in (-1.0, 0.0, 0.5, 1.0, 2.0):
        row = []
        for b in (-1.0, 0.0, 1.0):
            report = check_map_causal(measure, a * measure.support + b)
            tag = report.branch if report.causal else "no"
            row.append(f"{tag:>16}")
        print(f"a={a:+.1f}" + "".join(row))

# The constant map is the extreme truncation: everything is sent to one
# late point, which never leaks information about the source.
measure = discretize(Exponential(0.005), 100)
report = check_map_causal(measure, np.full(measure.n, 700.0))
print(f"\nconstant map to 700: causal={report.causal}, "
      f"branch={report.branch}, cut at {report.t0}")
