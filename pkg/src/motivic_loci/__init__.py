"""Exact motivic Hirzebruch classes of vexillary degeneracy loci, Schubert
varieties and one-pointed Brill-Noether loci."""
from __future__ import annotations

from .exactalg import YPolynomial, format_rational, parse_rational
from .rings import GradedClass, schur_ring, theta_ring, free_ring
from .loci import (
    FreeGeometry,
    GrassmannianGeometry,
    InfeasibleError,
    MotivicSolver,
    ThetaGeometry,
    Triple,
    chi_y,
    determinant_class,
    inflate_triple,
    lambda_of,
    motivic_class,
    reduce_triple,
    resolution_class,
    csm_resolution_class,
    schubert_locus,
)
from .omega import d_kappa, gaussian_binomial, kappa_red, omega_pushforward, p_shapes
from .brillnoether import bn_problem, chi_y_G, chi_y_W, ty_class_G, ty_class_W

__version__ = "0.1.0"

__all__ = [
    "YPolynomial", "format_rational", "parse_rational",
    "GradedClass", "schur_ring", "theta_ring", "free_ring",
    "FreeGeometry", "GrassmannianGeometry", "InfeasibleError", "MotivicSolver",
    "ThetaGeometry", "Triple", "chi_y", "determinant_class", "inflate_triple",
    "lambda_of", "motivic_class", "reduce_triple", "resolution_class",
    "csm_resolution_class", "schubert_locus",
    "d_kappa", "gaussian_binomial", "kappa_red", "omega_pushforward", "p_shapes",
    "bn_problem", "chi_y_G", "chi_y_W", "ty_class_G", "ty_class_W",
]
