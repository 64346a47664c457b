"""Bessel functions and the ladder operators.

Evaluates J_n on a few radii, then applies the raising and lowering
operators and compares the result with the neighbouring order.
"""

import numpy as np

from isobessel import bessel_j, ladder_lower, ladder_raise

r = np.array([0.5, 1.0, 2.5, 8.0, 20.0, 45.0])

print("J_n(r) for n = 0..3")
print("      r " + "".join(f"{f'J_{n}':>14}" for n in range(4)))
for x in r:
    print(f"{x:8.2f}" + "".join(f"{bessel_j(n, x):14.10f}" for n in range(4)))

# (d/dr - n/r) J_n should land on -J_{n+1}, (d/dr + n/r) J_n on J_{n-1}
n = 3
up = ladder_raise(n, r) + bessel_j(n + 1, r)
down = ladder_lower(n, r) - bessel_j(n - 1, r)
print(f"\nraising J_{n}:  max |A+ J_{n} + J_{n + 1}| = {np.max(np.abs(up)):.1e}")
print(f"lowering J_{n}: max |A- J_{n} - J_{n - 1}| = {np.max(np.abs(down)):.1e}")
