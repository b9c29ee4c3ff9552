#!/usr/bin/env python3
"""Tour of the field tower GF(p) < GF(q) < GF(q^2).

Builds the tower for a few q, shows the chosen moduli and generator, the
unit circle (the norm-1 elements), the partition of the nonzero subfield
into {+-1}, A and A^-1, and the norm classes that drive everything else:
the I classes pick out which Baer components carry the pencils.
"""

from spreadsmith import lambda_for_q

for q in (3, 4, 5, 7):
    lam = lambda_for_q(q)
    s = lam.spec
    print(f"=== q = {q} = {s.p}^{s.m}")
    print(f"  modulus over GF({s.p}):  {list(s.modulus_q)}  (constant term first)")
    print(f"  modulus over GF({s.q}):  {[list(s.gfq_vec(c)) for c in s.modulus_q2]}")
    print(f"  generator g (code {s.generator}), order {s.order - 1}")

    circle = s.unit_circle()
    print(f"  unit circle: {len(circle)} elements, powers of g^(q-1)")
    assert all(s.norm(u) == 1 for u in circle)

    part = lam.partition
    print(f"  subfield partition: units {list(part.units_part)}, "
          f"A = {list(part.A)}, A^-1 = {list(part.A_inv)}  (t = {part.t})")

    norms = [s.gfq_vec(lam.norm_of(k)) for k in range(q - 1)]
    print(f"  norm-distinct representatives: {q - 1}, norms {norms}")
    print(f"  I = {list(lam.I)}  "
          f"(split I1 = {list(lam.I1)}, I2 = {list(lam.I2)} for odd q)")
    print()

print("The distinguished representative (index 0) always has norm 1: its")
print("fixed subgeometry is the copy of PG(3,q) that the parallelisms live in.")
