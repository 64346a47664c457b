"""Run the identity residual suite and summarise it per identity.

This is the same matrix the ``isobessel residuals`` command gates on.
"""

from collections import defaultdict

from isobessel.verify import run_suite

suite = run_suite()
worst = defaultdict(float)
counts = defaultdict(int)
tolerance = {}
for case in suite.cases:
    key = case.identity.value
    worst[key] = max(worst[key], case.report.max_abs)
    counts[key] += 1
    tolerance[key] = case.tolerance

print(f"{'identity':<14}{'cases':>7}{'worst':>12}{'tol':>10}")
for key in worst:
    print(f"{key:<14}{counts[key]:>7}{worst[key]:>12.2e}{tolerance[key]:>10.0e}")
print(f"\nall passed: {suite.passed}")

# flipping the sign of the damping term must be caught
broken = run_suite(orders=(2,), gammas=("1",), wavenumbers=(1.0,), damping_scale=-1.0)
print("with -g instead of g, failing identities:",
      sorted({c.identity.value for c in broken.failures}))
