"""Synthetic states and seeded quadrature sampling."""
