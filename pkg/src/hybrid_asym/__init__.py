"""Asymptotic expansions of coefficients of infinite-product generating functions."""
