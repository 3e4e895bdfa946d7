"""Exact-arithmetic toolkit for diagonalizable Thue inequalities.

Builds forms (alpha*x+beta*y)^r - (gamma*x+delta*y)^r over Q(sqrt(D)),
enumerates primitive solutions of 0 < |F(x,y)| <= h, and verifies gap
principles, hypergeometric approximation properties, and count-bound
theorems as machine-checkable predicates.
"""

__version__ = "0.1.0"
