"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-9
    psd: float = 1e-9
    trace: float = 1e-9
    ortho: float = 1e-10
    recon: float = 1e-9
    offdiag: float = 1e-9
    prob: float = 1e-10
    bound: float = 1e-8
    decomp: float = 1e-8
    overlap: float = 1e-12
    # letters lighter than this are treated as absent
    zero_weight: float = 1e-12


TOL = Tolerances()

MAX_DIM = 4096
MAX_SWEEPS = 100
