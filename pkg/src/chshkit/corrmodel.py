"""CHSH correlation data and the quantities computed from it.

Layout convention: the full correlation matrix is indexed by the
observables ``(A1, A2, B1, B2)``; ``block.c[i, j]`` is ``<A_{i+1} B_{j+1}>``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .matcore import SymMatrix
from .simplex import find_feasible_point

SQRT2 = math.sqrt(2.0)
TSIRELSON = 2.0 * SQRT2
LOCAL_BOUND = 2.0
BOUNDARY_TOL = 1e-9
_RANGE_TOL = 1e-12

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2
HADAMARD.setflags(write=False)

#: The 16 deterministic strategies ``(a1, a2, b1, b2)``; index 0 is all +1.
STRATEGIES = tuple(itertools.product((1, -1), repeat=4))

# sign patterns with exactly one minus sign, applied to (c11, c12, c21, c22);
# the first one is the canonical CHSH combination
_ONE_MINUS = (
    (1, 1, 1, -1),
    (1, 1, -1, 1),
    (1, -1, 1, 1),
    (-1, 1, 1, 1),
)


@dataclass(frozen=True, eq=False)
class CorrelationBlock:
    """Measured 2x2 correlations ``<A_i B_j>``; entries must lie in [-1, 1].

    The block is not required to be symmetric.
    """

    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.shape != (2, 2):
            raise OutOfRange(f"correlation block must be 2x2, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise OutOfRange("correlation block has non-finite entries")
        if np.max(np.abs(c)) > 1.0 + _RANGE_TOL:
            raise OutOfRange(f"correlation entries must lie in [-1, 1], got {c.tolist()}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_entries(cls, c11, c12, c21, c22) -> "CorrelationBlock":
        return cls(np.array([[c11, c12], [c21, c22]]))

    def flat(self) -> np.ndarray:
        return self.c.reshape(4)

    def to_list(self) -> list[list[float]]:
        return self.c.tolist()

    def __eq__(self, other):
        return isinstance(other, CorrelationBlock) and np.array_equal(self.c, other.c)

    def __hash__(self):
        return hash(self.c.tobytes())

    def __repr__(self):
        return f"CorrelationBlock({self.c.tolist()})"


@dataclass(frozen=True, eq=False)
class FullCorrelationMatrix:
    """4x4 correlation matrix with unit diagonal and free entries x = <A1 A2>, y = <B1 B2>."""

    block: CorrelationBlock
    x: complex | float
    y: complex | float
    assembled: SymMatrix

    @property
    def hermitian(self) -> bool:
        return self.assembled.hermitian


@dataclass(frozen=True)
class ChshReport:
    s_canonical: float
    b_canonical: float
    variants: tuple[float, ...]
    b_max: float
    is_local: bool
    within_tsirelson: bool

    def to_dict(self) -> dict:
        return {
            "s_canonical": self.s_canonical,
            "b_canonical": self.b_canonical,
            "variants": list(self.variants),
            "b_max": self.b_max,
            "is_local": self.is_local,
            "within_tsirelson": self.within_tsirelson,
        }


def as_block(block) -> CorrelationBlock:
    return block if isinstance(block, CorrelationBlock) else CorrelationBlock(block)


def chsh_value(block) -> float:
    """Signed CHSH combination ``c11 + c12 + c21 - c22``."""
    c = as_block(block).c
    return float(c[0, 0] + c[0, 1] + c[1, 0] - c[1, 1])


def chsh_via_hadamard(block) -> float:
    """``sqrt(2) |Tr(C H)|``; equals ``|chsh_value(block)|``."""
    c = as_block(block).c
    return SQRT2 * abs(float(np.trace(c @ HADAMARD)))


def chsh_all_variants(block) -> tuple[tuple[float, ...], float]:
    """All eight odd-sign CHSH combinations and their maximum.

    The first four carry exactly one minus sign, the last four are their
    negatives.
    """
    c11, c12, c21, c22 = (float(v) for v in as_block(block).flat())
    # same left-to-right summation as chsh_value, so variant 0 equals it bitwise
    sums = [s11 * c11 + s12 * c12 + s21 * c21 + s22 * c22 for s11, s12, s21, s22 in _ONE_MINUS]
    values = tuple(sums) + tuple(-v for v in sums)
    return values, max(values)


def chsh_report(block) -> ChshReport:
    s = chsh_value(block)
    variants, b_max = chsh_all_variants(block)
    return ChshReport(
        s_canonical=s,
        b_canonical=abs(s),
        variants=variants,
        b_max=b_max,
        is_local=b_max <= LOCAL_BOUND + BOUNDARY_TOL,
        within_tsirelson=b_max <= TSIRELSON + BOUNDARY_TOL,
    )


def full_matrix_array(c: np.ndarray, x, y) -> np.ndarray:
    """Raw 4x4 array in the ``(A1, A2, B1, B2)`` layout, without validation."""
    dtype = np.complex128 if isinstance(x, complex) or isinstance(y, complex) else np.float64
    m = np.eye(4, dtype=dtype)
    m[0, 1] = x
    m[1, 0] = np.conj(x)
    m[2, 3] = y
    m[3, 2] = np.conj(y)
    m[:2, 2:] = c
    m[2:, :2] = c.T
    return m


def assemble_full(block, x=0.0, y=0.0) -> FullCorrelationMatrix:
    """Full correlation matrix for given unmeasured correlations x, y.

    Complex x or y yields a hermitian matrix.
    """
    block = as_block(block)
    for name, val in (("x", x), ("y", y)):
        if abs(val) > 1.0 + _RANGE_TOL:
            raise OutOfRange(f"|{name}| must not exceed 1, got {val!r}")
    if isinstance(x, (complex, np.complexfloating)) or isinstance(y, (complex, np.complexfloating)):
        x, y = complex(x), complex(y)
    else:
        x, y = float(x), float(y)
    return FullCorrelationMatrix(block, x, y, SymMatrix(full_matrix_array(block.c, x, y)))


def r_matrices() -> tuple[SymMatrix, SymMatrix]:
    """``R+`` and ``R-``: identity diagonal blocks, ``+H`` / ``-H`` off-diagonal blocks."""
    eye = np.eye(2)
    plus = np.block([[eye, HADAMARD], [HADAMARD, eye]])
    minus = np.block([[eye, -HADAMARD], [-HADAMARD, eye]])
    return SymMatrix(plus), SymMatrix(minus)


def r_certificate(block) -> tuple[float, float]:
    """``(Tr(C R+), Tr(C R-)) = (4 + sqrt(2) S, 4 - sqrt(2) S)``.

    x and y only meet zero entries of R, so the traces depend on the block
    alone.  A negative value proves that no Hilbert model exists.
    """
    s = chsh_value(block)
    return 4.0 + SQRT2 * s, 4.0 - SQRT2 * s


def tsirelson_check(block) -> bool:
    return chsh_all_variants(block)[1] <= TSIRELSON + BOUNDARY_TOL


def is_local(block) -> bool:
    """True iff every CHSH variant is at most 2 (Fine's criterion)."""
    return chsh_all_variants(block)[1] <= LOCAL_BOUND + BOUNDARY_TOL


def strategy_block(strategy) -> np.ndarray:
    a1, a2, b1, b2 = strategy
    return np.array([[a1 * b1, a1 * b2], [a2 * b1, a2 * b2]], dtype=float)


def _vertex_matrix() -> np.ndarray:
    # rows: normalization, then c11, c12, c21, c22
    cols = [np.concatenate([[1.0], strategy_block(s).reshape(4)]) for s in STRATEGIES]
    return np.array(cols).T


def local_decomposition(block) -> np.ndarray | None:
    """Weights over ``STRATEGIES`` reproducing the block, or None if infeasible."""
    block = as_block(block)
    rhs = np.concatenate([[1.0], block.flat()])
    w = find_feasible_point(_vertex_matrix(), rhs)
    if w is None:
        return None
    return w / w.sum()
