"""autoscope: a finite-group computation engine.

The package reconstructs the groups of order 32 and 32p (p an odd prime)
from presentations alone: coset enumeration turns a presentation into a
permutation group, Schreier-Sims machinery answers order/membership
questions, and a backtracking search computes automorphism groups.  On
top of that sits a catalog of the 51 groups of order 32 together with
their index-2 kernel data, and a verification lab that recomputes the
published invariants (automorphism orders, multiplicities, subgroup
censuses) from scratch.
"""

from .words import Word, Presentation, parse_presentation, render, PresentationError
from .coset import CosetTable, enumerate_cosets, perm_rep, EnumerationOverflow
from .group import PermGroup, SubgroupHandle

__all__ = [
    "Word",
    "Presentation",
    "parse_presentation",
    "render",
    "PresentationError",
    "CosetTable",
    "enumerate_cosets",
    "perm_rep",
    "EnumerationOverflow",
    "PermGroup",
    "SubgroupHandle",
]

__version__ = "0.1.0"
