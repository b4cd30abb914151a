"""
Rule 22 closed forms
====================

The popcount formula for the number of active cells, the odd/even support
recursion and the Mersenne product form, each checked against simulation.
"""

import time

from ecasym.evolution import RIGHT_HALF, evolve_single_seed, support
from ecasym.rule22 import cardinality22, mersenne_poly, poly22, support22, verify_closed_forms

rows = evolve_single_seed(22, 16)
print(" m  total  formula  right-half support")
for m in range(1, 17):
    print(f"{m:2d}  {rows[m].count():5d}  {cardinality22(m):7d}  {support(rows[m], RIGHT_HALF).positions}")

# The formula counts the full row; the right half is the other natural count.
# Both agree through total = 2 |S| - [0 in S].
print("\nverify 1..256:", verify_closed_forms(256).as_dict())

# The recursion never builds a row, so huge m are cheap.
m = 2 ** 50 + 2 ** 20 + 3
t0 = time.perf_counter()
s = support22(m)
print(f"\n|S_m| for m = 2^50 + 2^20 + 3: {len(s)} cells, max = m: {max(s) == m}, "
      f"{1e3 * (time.perf_counter() - t0):.2f} ms")
print("cardinality at m = 2^60 - 2:", cardinality22(2 ** 60 - 2))

for n in range(2, 6):
    print(f"P_{2 ** n - 1} = {mersenne_poly(n)}   (matches recursion: {mersenne_poly(n) == poly22(2 ** n - 1)})")
