"""Hilbert-space models for CHSH correlation data.

Decides whether a measured 2x2 correlation block extends to a positive
semidefinite full correlation matrix, computes CHSH / Tsirelson quantities
and certificates, and generates correlations from classical, quantum,
vector and PR-box models.
"""

from .completion import (
    CompletionResult,
    Status,
    decide_hilbert_model,
    exercise_search,
    feasibility_oracle_grid,
    max_min_eigenvalue,
    realize_gram,
)
from .corrmodel import (
    ChshReport,
    CorrelationBlock,
    FullCorrelationMatrix,
    assemble_full,
    chsh_all_variants,
    chsh_report,
    chsh_value,
    chsh_via_hadamard,
    is_local,
    local_decomposition,
    r_certificate,
    r_matrices,
    tsirelson_check,
)
from .errors import ChshError, ConvergenceError, NotPsd, NotSymmetric, OutOfRange
from .generators import (
    LhvModel,
    QubitModel,
    VectorModel,
    correlations_from_lhv,
    correlations_from_qubit,
    correlations_from_vectors,
    pr_box,
    random_block,
)
from .matcore import SymMatrix, gram_vectors, is_psd, min_eigenvalue, psd_project, sym_eigen

__version__ = "0.1.0"
