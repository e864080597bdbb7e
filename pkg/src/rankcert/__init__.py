"""Explicit n^k x n^k x n tensors of rank at least 2n^k - n^(k-1), with checkable certificates."""

from .bounds import (Certificate, LowerBound, block_bound, certificate, check_certificate,
                     flattening_bound, partition_bound)
from .charmat import CharMatrix, NondegeneracyReport, col_rank, generic_rank, is_nondegenerate, row_rank
from .construction import ConstructionParams, level_step, level_zero, levels, construction_tensor
from .errors import (BudgetExceeded, DimensionError, FieldMismatchError, HypothesisError,
                     InfeasibleError, InvalidParamsError, RankCertError, TensorFormatError)
from .galois import GF2, FieldSpec, MatF, Scalar, mat_rank, mat_solve
from .hypercube import (HypercubeDecomposition, TensorR, phi, phi_inverse, pullback_witness,
                        transport_witness)
from .oracle import OracleResult, exact_rank, refute_rank
from .tensor3 import Decomposition, Tensor3, block2x2, concat, materialize

__version__ = "0.1.0"
