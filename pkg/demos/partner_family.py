"""The one-parameter partner family Jt_{n+1}(r; gamma).

For n = 1 the family slides from J_0 (gamma = 0) to -J_2 (gamma = inf).
The damping coefficient g_{n+1} that enters the partner equation is
printed alongside, together with the first few zeros of each curve.
"""

import numpy as np

from isobessel import PartnerSpec, damping_g, find_zeros, partner_j

n = 1
gammas = ["0", "0.2", "1", "5", "inf"]
r = np.array([0.0, 0.5, 1.0, 2.0, 3.0, 5.0])

print(f"Jt_{n + 1}(r; gamma)")
print("     r " + "".join(f"{'g=' + g:>12}" for g in gammas))
for x in r:
    row = [partner_j(PartnerSpec(n, g), x) for g in gammas]
    print(f"{x:6.2f} " + "".join(f"{v:12.6f}" for v in row))

print("\nfirst three zeros below r = 15")
for g in gammas:
    zeros = find_zeros(PartnerSpec(n, g), 15.0, max_count=3)
    print(f"  gamma={g:>4}: " + ", ".join(f"{z:.10f}" for z in zeros))

# g vanishes at both ends of the family and is negative in between
u = np.array([0.1, 0.5, 1.0, 2.0, 4.0])
print("\ng_2(u; gamma=1):", np.array2string(damping_g(n, 1.0, u), precision=4))
print("g_2(u; gamma=0):", np.array2string(damping_g(n, 0.0, u), precision=4))
