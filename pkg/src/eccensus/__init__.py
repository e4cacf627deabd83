"""Exact censuses of cyclic reductions of elliptic curves over F_q(t),
theoretical densities, ramification calculus and SL2 subgroup checks."""

__version__ = "0.1.0"

from . import arith, census, density, ec, funcfield, gf, kernels, ramify, sl2  # noqa: F401
