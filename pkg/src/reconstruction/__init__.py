"""Pattern-function state reconstruction from rotated-quadrature statistics."""
