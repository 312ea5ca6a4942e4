"""Exact rational arithmetic kernel.

Sparse bivariate polynomials over Fraction, dense univariate polynomials,
real-root isolation, interval arithmetic with rational endpoints, and
fraction-free determinants.  No floating point anywhere in this subpackage.
"""

from pdisc.exactalg.interval import Interval, eval_box
from pdisc.exactalg.matrix import ffdet, nullspace, resultant_wrt, solve_linear, sylvester_resultant
from pdisc.exactalg.mpoly import NEG_INF, MPoly, Rat
from pdisc.exactalg.roots import RootInterval, isolate_real_roots, refine_root, simplest_between
from pdisc.exactalg.upoly import UPoly

__all__ = [
    "Interval",
    "MPoly",
    "NEG_INF",
    "Rat",
    "RootInterval",
    "UPoly",
    "eval_box",
    "ffdet",
    "isolate_real_roots",
    "nullspace",
    "refine_root",
    "resultant_wrt",
    "simplest_between",
    "solve_linear",
    "sylvester_resultant",
]
