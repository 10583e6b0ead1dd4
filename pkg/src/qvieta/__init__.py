"""Exact quasideterminants, noncommutative Vieta formulas and ribbon Schur functions."""

from .ncring import (DimensionMismatch, GenericityError, GenericTuple, Matrix,
                     NotInvertible, det, mat_inv, random_tuple, trace)
from .quasidet import BlockMatrix, QuasidetResult, all_quasidets, quasidet, submatrix
from .vieta import (CoefficientVector, certify_generic, coeffs_linear_oracle,
                    coeffs_theorem2, coeffs_theorem3, conjugated_roots,
                    residual_left, residual_right, vandermonde_quasidet)

__version__ = "0.1.0"
