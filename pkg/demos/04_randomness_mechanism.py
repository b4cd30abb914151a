"""
Where Rule 30's randomness comes from
=====================================

Left-permutivity makes eta_t(0) an XOR with a fresh left input, which
balances it exactly; the sensitivity profile shows how lopsided the
information flow is.
"""

import warnings

from ecasym.evolution import center_column
from ecasym.statistics import (
    block_entropy,
    equidistribution_test,
    mutual_information,
    sensitivity_profile,
)

SEED = 2026

p = sensitivity_profile(30, 20, trials=5000, seed=SEED)
print(f"rule 30, t=20: sigma_L = {p.sigma_left:.2f}, sigma_R = {p.sigma_right:.2f}, ratio = {p.ratio:.2f}")
print("left edge (exact 1 by permutivity):", p.estimate(-20))
print("right tail:", [round(p.estimate(j), 3) for j in range(10, 21)])

# exact versions by enumerating every window
for code in (30, 22):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ex = [equidistribution_test(code, t, exhaustive=True).p_hat for t in (1, 2, 3)]
    print(f"rule {code}: exact P(eta_t(0)=1), t=1..3: {ex}")

prof22 = sensitivity_profile(22, 8, exhaustive=True)
print("rule 22 exact profile, t=8:", [round(x, 3) for x in prof22.estimates])

print(f"I(eta_20(-1); eta_20(0), eta_20(1)) = {mutual_information(30, 20, 100_000, SEED):.2e} bits")

rep = block_entropy(center_column(30, 4095), 10)
for e in rep.entries:
    print(f"n={e.n:2d}  H_n/n={e.H_n / e.n:.4f}  p(n)/2^n={e.p_n / 2 ** e.n:.3f}")
