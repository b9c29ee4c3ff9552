#!/usr/bin/env python3
"""Census of good sets: exhaustive counts next to the closed-form
reference values.

The enumeration is the authority here.  For even q the leading closed
form matches (and its printed simplification is flagged as conflicting);
for odd q the closed forms undercount: the enumerated families are larger
by the pattern-multiplicity factor the reference derivation drops.
"""

import time

from spreadsmith.field_tower import lambda_for_q
from spreadsmith.goodsets import census, count_good_sets, enumerate_good_sets

for q in (3, 4, 5, 7):
    lam = lambda_for_q(q)
    t0 = time.time()
    cen = census(lam)
    elapsed = time.time() - t0
    print(f"=== q = {q}: {cen.oracle} good sets  ({elapsed:.2f}s)")
    for name, value in sorted(cen.formulas.items()):
        mark = "matches" if cen.oracle_matches.get(name) else "DIFFERS"
        print(f"    closed form {name:>22} = {value}  [{mark}]")
    if cen.formula_conflict:
        print("    (the two even-q printed forms conflict with each other)")
    if q <= 5:
        n = sum(1 for _ in enumerate_good_sets(lam))
        assert n == cen.oracle
        print(f"    backtracking stream re-counts {n} (identical)")

print()
print("Odd-q note: the closed forms fix which unit-parity classes use which")
print("square class 'without loss of generality' and so miss the choice of")
print("slots; at q=5 the true count is 20x the reference value (46080 vs 2304).")

lam5 = lambda_for_q(5)
print("norm-minus-one-free families (used by the inequivalence bounds):",
      count_good_sets(lam5, exclude_norm_minus_one=True), "at q=5")
