"""Higher Bott-Chern forms of metrized exact cubes of hermitian vector spaces.

The main entry points are :func:`bottchern.bott_chern.bott_chern` (the value
of one cube over a point), :func:`ch_of_chain` (linear extension to chains)
and the cube constructors in :mod:`bottchern.cubes`.
"""

from .bott_chern import (BottChernResult, TWValue, ch_of_chain, ch_of_s_chain, line_cube,
                         verify_cocycle, verify_eq2, verify_log_additivity, verify_multiplicativity)
from .chains import ChainElement, boundary, lambda_total
from .cubes import MetrizedCube, complete_emi, degeneracy, face, is_emi, random_exact_cube, tensor_cube
from .errors import (BottChernError, DegreeError, ExactnessError, ExprParseError, PreconditionError, RankError,
                     ScopeError, ShapeError, SingularityError)
from .fiber_forms import SymbolicFiberForm, TWTriple, i_prime, lambda_form, w_form
from .transgression import BundleFamily, transgression_gram
from .waldhausen import SSimplex, cub, random_s_simplex

__all__ = [
    "BottChernResult", "TWValue", "ch_of_chain", "ch_of_s_chain", "line_cube", "verify_cocycle",
    "verify_eq2", "verify_log_additivity", "verify_multiplicativity", "ChainElement", "boundary", "lambda_total",
    "MetrizedCube", "complete_emi", "degeneracy", "face", "is_emi", "random_exact_cube", "tensor_cube",
    "BottChernError", "DegreeError", "ExactnessError", "ExprParseError", "PreconditionError", "RankError",
    "ScopeError", "ShapeError", "SingularityError", "SymbolicFiberForm", "TWTriple", "i_prime", "lambda_form",
    "w_form", "BundleFamily", "transgression_gram", "SSimplex", "cub", "random_s_simplex",
]
