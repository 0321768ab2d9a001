"""Jordan strata modulo extended affine Weyl groups.

Combinatorial classification of the strata X(H,K,L) of a simple group's
quotient G//G: Coxeter classes of alcove faces, normality in codimension 1,
unibranch behaviour at minimal strata, normality and smoothness, together
with brute-force geometric and invariant-theoretic oracles.
"""

__version__ = "0.1.0"
