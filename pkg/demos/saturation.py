"""
Saturating the cq continuity bound
==================================

A pure qubit against a slightly mixed one already attains the bound, so
nothing tighter depending only on the distance and the dimension exists.
"""

import numpy as np

from cqbound import as_bound, certify_prop1, saturating_pair

# the gap equals the bound for every admissible distance
for d in (2, 3, 5):
    for eps in np.linspace(0.05, 1 - 1 / d, 4):
        rep = certify_prop1(*saturating_pair(d, eps))
        print(f"d={d} eps={eps:.3f}  lhs={rep.lhs:.6f}  rhs={rep.rhs:.6f}  margin={rep.margin:+.1e}")

# at the right endpoint the bound is log2 d, the largest possible entropy gap
print(as_bound(0.75, 4), np.log2(4))
