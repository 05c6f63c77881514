"""Numerical verification suites for the identities the reconstruction relies on."""
