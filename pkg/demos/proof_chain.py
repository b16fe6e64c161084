"""
Walking through the dephasing argument
======================================

Dephase both states in the eigenbases of ``rho``'s conditionals, read off
two classical joint tables and compare the entropies at each step.
"""

import numpy as np

from cqbound import (
    build_conditional_dephasing,
    certify_prop1,
    conditional_entropy_cq,
    extract_joint,
    shannon_conditional,
    trace_distance,
)
from cqbound.states import cq_pair_at_distance, embed_cq, sample_cq

rng = np.random.default_rng(1)
rho = sample_cq(3, 2, rng)
sigma = cq_pair_at_distance(rho, 0.2, rng)
ch = build_conditional_dephasing(rho)

# rho is a fixed point, so its table has the same conditional entropy
r = extract_joint(ch, rho)
print("H(B|X)_rho =", conditional_entropy_cq(rho), " H(Y|X)_r =", shannon_conditional(r))

# dephasing sigma can only raise its conditional entropy
s = extract_joint(ch, sigma)
print("H(B|X)_sig =", conditional_entropy_cq(sigma), " H(Y|X)_s =", shannon_conditional(s))

# and can only bring the two states closer
eps = trace_distance(embed_cq(rho), embed_cq(sigma))
eps_c = trace_distance(ch(embed_cq(rho)), ch(embed_cq(sigma)))
print(f"eps={eps:.6f}  after dephasing={eps_c:.6f}")

print(certify_prop1(rho, sigma))
