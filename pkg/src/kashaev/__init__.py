"""Kashaev invariants of twice-cabled torus knots: exact evaluation by
contour integration with an independent braid state-sum oracle, closed-form
asymptotic expansions, and SL(2,C) holonomy verification."""

__version__ = "0.1.0"
