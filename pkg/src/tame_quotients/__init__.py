"""
Tame Quotient Calculator Package

Exact computations for quotients of smooth formal models by tame cyclic
group actions: invariant rings, fixed loci, weak Neron special fibers
and the motivic invariants that compare them.
"""

__version__ = "1.0.0"
__author__ = "Tame Quotients Team"

from .config import config
from .models import StratifiedModel, ToricPresentation, WeightSystem
from .algebra import PrimeField, RingEndomorphism, TruncatedLocalRing
from .tame_action import TameEndomorphism, diagonalize
from .invariant_ring import quotient_presentation
from .fiber_geometry import fixed_locus, special_fiber_presentation
from .motivic import check_serre_theorem, check_volume_congruence
from .utils import TameQuotientError

__all__ = [
    "config",
    "WeightSystem",
    "StratifiedModel",
    "ToricPresentation",
    "PrimeField",
    "TruncatedLocalRing",
    "RingEndomorphism",
    "TameEndomorphism",
    "diagonalize",
    "quotient_presentation",
    "fixed_locus",
    "special_fiber_presentation",
    "check_serre_theorem",
    "check_volume_congruence",
    "TameQuotientError",
]
