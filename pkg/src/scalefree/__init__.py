"""Scale-free nonarchimedean toolkit and prime-counting error lab.

Submodules
----------
padic
    Bounded-precision p-adic numbers, Monna map, ultrametric ball trees.
valuation
    Relative infinitesimals, their absolute values and the extended norm.
nonsmooth
    Iterated nonsmooth solutions near ``t = 1``, parity and discontinuity probes.
dynamics
    Golden-ratio continued fraction, prime ladder, asymptotic correction.
sieve, pnt
    Exact prime counting and relative-error scans / power-law fits.
"""

from .dynamics import (NU, asymptotic_correction, golden_cf, prime_ladder_walk,
                       solve_rescaled)
from .nonsmooth import (NonsmoothSolution, RescalingSchedule, discontinuity_probe,
                        evaluate_solution, extended_unity, iterate_schedule, parity_transform)
from .padic import (PAdicNumber, build_ball_tree, monna_map, padic_abs, padic_add,
                    padic_from_digits, padic_mul)
from .pnt import fit_exponent, pnt_scan, rh_bound_check
from .sieve import PiTable, sieve_pi
from .valuation import (ValuedInfinitesimal, adelic_compose, constant_to_log_variable_check,
                        invert_to_infinitesimal, rel_abs, sym_product, ultra_norm)

__version__ = "0.1.0"
