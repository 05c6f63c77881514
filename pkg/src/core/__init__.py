"""Core numerics: errors, configuration, Fock-space linear algebra, Dawson-integral pattern functions."""
