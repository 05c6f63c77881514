"""Wigner / Husimi phase-space representations used as a cross-check path."""
