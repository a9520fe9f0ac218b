"""Exact computation on the group of integer sequences.

Points are eventually periodic (or lazily computed) elements of Z^omega,
sets are finitely presented compact subsets, and every nontrivial claim the
library makes is backed by a re-checkable certificate.
"""

from zomega.seqcore import LazyPoint, RegularPoint, Word

__all__ = ["LazyPoint", "RegularPoint", "Word"]
