"""Exact-arithmetic engine for commutative differential graded algebras over Q.

Submodules:

* ``algebra_core``  — free graded-commutative polynomials, exact sparse linear algebra
* ``cdga``          — differentials, cohomology, model constructions, morphisms
* ``resolution``    — truncated simplicial realizations of free algebra resolutions
* ``obstruction``   — Massey triple products, augmentation strands, obstruction classes
* ``folding_polytope`` — the cubical folding complexes indexing the operations
* ``cli``           — text file formats and the command line interface
"""

from .algebra_core import (
    Generator,
    GradedAlgebra,
    GradedPolynomial,
    Monomial,
    RationalMatrix,
    basis,
    format_polynomial,
    kernel_basis,
    multiply,
    normalize_monomial,
    solve_in_image,
)
from .cdga import (
    CdgaMorphism,
    CohomologyGroup,
    FreeCdga,
    apply_morphism,
    check_d_squared,
    class_of,
    cohomology,
    cone_model,
    coproduct,
    differentiate,
    gem_model,
    suspension_model,
)

__version__ = "0.1.0"
