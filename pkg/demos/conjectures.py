"""
Probing the open variants
=========================

Random search for pairs that would break the bound with the roles of the
systems swapped, or with a fully quantum conditioning system.
"""

from cqbound.explorer import SearchConfig, flipped_saturating_pair, qc_gap, search

# the classical saturating pair sits exactly on the qc boundary
print(qc_gap(*flipped_saturating_pair(3, 2, 0.4)))

for conjecture in ("qc", "fq"):
    rec = search(SearchConfig(conjecture, (2, 2), (0.05, 0.2, 0.45), 200, seed=0))
    print(rec.to_csv(), end="")
    for cell in rec.cells:
        print(f"  eps={cell.epsilon}: {cell.status}")
