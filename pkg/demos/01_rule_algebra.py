"""
Rule algebra: truth tables, ANF and symmetry
=============================================

Every elementary rule is a Boolean function of (left, center, right).
Möbius inversion turns the truth table into its algebraic normal form,
and the symmetry/permutivity flags fall out of the truth table.
"""

from ecasym.rule_algebra import census, classify

# Rules 22 and 30 share the linear part a + b + c; they differ in the
# nonlinear correction.
for code in (22, 30, 135, 150):
    r = classify(code)
    print(f"rule {code:3d}: {r.anf_string:<20} S3={r.s3_symmetric!s:<5} "
          f"L={r.left_permutive!s:<5} C={r.center_permutive!s:<5} R={r.right_permutive!s:<5} linear={r.linear}")

# Rule 22 outputs 1 only when exactly one input is 1, so a -> g(a,1,1) is
# constant 0 and the rule is not permutive in any input.
r22 = classify(22)
print("\nrule 22 truth table (abc -> out):",
      " ".join(f"{k:03b}->{r22.truth_table[k]}" for k in range(8)))

c = census()
s = c.summary()
print(f"\n{s['s3_symmetric']} symmetric rules, {s['s3_symmetric_nonlinear']} of them nonlinear:")
print(" ", c.symmetric_nonlinear)
