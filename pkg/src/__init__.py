"""Quadrature tomography toolkit."""
