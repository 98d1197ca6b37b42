"""Correlation data from classical, quantum, vector and PR-box models."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corrmodel import (
    SQRT2,
    STRATEGIES,
    CorrelationBlock,
    FullCorrelationMatrix,
    assemble_full,
)
from .errors import NotPsd, OutOfRange
from .matcore import min_eigenvalue
from .rng import SplitMix64

_NORM_TOL = 1e-12

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class DeterministicStrategy:
    a1: int
    a2: int
    b1: int
    b2: int

    def __post_init__(self):
        if any(v not in (1, -1) for v in (self.a1, self.a2, self.b1, self.b2)):
            raise OutOfRange("deterministic outcomes must be +1 or -1")

    def vector(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.b1, self.b2], dtype=float)


@dataclass(frozen=True, eq=False)
class LhvModel:
    """Probability weights over ``corrmodel.STRATEGIES`` (16 entries)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (16,):
            raise OutOfRange(f"LHV model needs 16 weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise OutOfRange("LHV weights must be non-negative")
        if abs(w.sum() - 1.0) > _NORM_TOL:
            raise OutOfRange(f"LHV weights must sum to 1, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def _unit(v, dim: int | None, what: str) -> np.ndarray:
    v = np.array(v, dtype=float)
    if v.ndim != 1 or (dim is not None and v.shape != (dim,)):
        raise OutOfRange(f"{what} has wrong shape {v.shape}")
    if abs(float(np.linalg.norm(v)) - 1.0) > _NORM_TOL:
        raise OutOfRange(f"{what} must be a unit vector")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class QubitModel:
    """Two-qubit pure state and Bloch directions for the four observables.

    Amplitudes are in the basis ``|00>, |01>, |10>, |11>`` with Alice's
    qubit first.
    """

    amplitudes: np.ndarray
    a_dirs: tuple[np.ndarray, np.ndarray]
    b_dirs: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        psi = np.array(self.amplitudes, dtype=complex)
        if psi.shape != (4,):
            raise OutOfRange(f"two-qubit state needs 4 amplitudes, got shape {psi.shape}")
        if abs(float(np.linalg.norm(psi)) - 1.0) > _NORM_TOL:
            raise OutOfRange("state must be normalized")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)
        if len(self.a_dirs) != 2 or len(self.b_dirs) != 2:
            raise OutOfRange("need exactly two directions per party")
        object.__setattr__(self, "a_dirs", tuple(_unit(d, 3, "A direction") for d in self.a_dirs))
        object.__setattr__(self, "b_dirs", tuple(_unit(d, 3, "B direction") for d in self.b_dirs))


@dataclass(frozen=True, eq=False)
class VectorModel:
    """Real unit vectors whose inner products are the correlations."""

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        dim = len(np.atleast_1d(self.u1))
        if not 1 <= dim <= 4:
            raise OutOfRange("vector dimension must be between 1 and 4")
        for name in ("u1", "u2", "v1", "v2"):
            object.__setattr__(self, name, _unit(getattr(self, name), dim, name))

    def vectors(self) -> np.ndarray:
        return np.array([self.u1, self.u2, self.v1, self.v2])


def _split_full(m: np.ndarray) -> FullCorrelationMatrix:
    block = CorrelationBlock(np.clip(m[:2, 2:].real, -1.0, 1.0))
    return assemble_full(block, m[0, 1], m[2, 3])


def correlations_from_lhv(m: LhvModel) -> tuple[CorrelationBlock, FullCorrelationMatrix]:
    """Averages of products of +/-1 outcomes over the strategy distribution."""
    f = np.array(STRATEGIES, dtype=float)
    gram = (f * m.weights[:, None]).T @ f
    full = _split_full(gram)
    return full.block, full


def bloch_observable(direction) -> np.ndarray:
    """``n . sigma`` for a unit 3-vector ``n``."""
    return sum(n * s for n, s in zip(direction, PAULI))


def correlations_from_qubit(m: QubitModel) -> tuple[CorrelationBlock, FullCorrelationMatrix]:
    """``<psi| F_a F_b |psi>`` with ``A_i = a_i.sigma (x) 1`` and ``B_j = 1 (x) b_j.sigma``.

    The result is hermitian; ``x = <A1 A2>`` and ``y = <B1 B2>`` are complex
    in general while the measured block is real because A_i and B_j commute.
    """
    ops = [np.kron(bloch_observable(d), _I2) for d in m.a_dirs]
    ops += [np.kron(_I2, bloch_observable(d)) for d in m.b_dirs]
    states = np.array([op @ m.amplitudes for op in ops])
    gram = states.conj() @ states.T
    full = _split_full(gram)
    return full.block, full


def correlations_from_vectors(m: VectorModel) -> tuple[CorrelationBlock, FullCorrelationMatrix]:
    vecs = m.vectors()
    gram = vecs @ vecs.T
    np.fill_diagonal(gram, 1.0)
    full = _split_full(np.clip(gram, -1.0, 1.0))
    if min_eigenvalue(full.assembled) < -1e-10:
        raise NotPsd("Gram matrix of unit vectors is not PSD")
    return full.block, full


def pr_box(sign="+") -> CorrelationBlock:
    """The PR-box block ``sign * sqrt(2) * H`` with CHSH value 4."""
    if sign in ("+", 1, "+1"):
        s = 1.0
    elif sign in ("-", -1, "-1"):
        s = -1.0
    else:
        raise OutOfRange(f"sign must be '+' or '-', got {sign!r}")
    return CorrelationBlock(s * np.array([[1.0, 1.0], [1.0, -1.0]]))


def singlet_state() -> np.ndarray:
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / SQRT2


def tsirelson_qubit_model() -> QubitModel:
    """Singlet with the standard directions reaching CHSH value 2 sqrt(2)."""
    z = np.array([0.0, 0.0, 1.0])
    x = np.array([1.0, 0.0, 0.0])
    return QubitModel(
        singlet_state(),
        (z, x),
        (-(z + x) / SQRT2, (x - z) / SQRT2),
    )


def tsirelson_vector_model() -> VectorModel:
    """``u1, u2`` orthonormal, ``v1 = (u1 + u2)/sqrt 2``, ``v2 = (u1 - u2)/sqrt 2``."""
    u1 = np.array([1.0, 0.0])
    u2 = np.array([0.0, 1.0])
    return VectorModel(u1, u2, (u1 + u2) / SQRT2, (u1 - u2) / SQRT2)


def random_lhv_model(rng: SplitMix64) -> LhvModel:
    # flat Dirichlet via normalized exponentials
    e = np.array([-math.log1p(-rng.uniform()) for _ in range(16)])
    return LhvModel(e / e.sum())


def random_qubit_model(rng: SplitMix64) -> QubitModel:
    re = rng.normals(4)
    im = rng.normals(4)
    psi = re + 1j * im
    psi /= np.linalg.norm(psi)
    return QubitModel(
        psi,
        (rng.unit_vector(3), rng.unit_vector(3)),
        (rng.unit_vector(3), rng.unit_vector(3)),
    )


def random_vector_model(rng: SplitMix64, dim: int = 4) -> VectorModel:
    return VectorModel(*(rng.unit_vector(dim) for _ in range(4)))


def random_block(seed: int, mode: str = "cube") -> CorrelationBlock:
    """Random block; ``cube``: uniform entries, ``feasible``: Gram of unit
    vectors in R^4, ``lhv``: flat Dirichlet mixture of strategies."""
    rng = SplitMix64(seed)
    if mode == "cube":
        return CorrelationBlock(rng.uniforms(4, -1.0, 1.0).reshape(2, 2))
    if mode == "feasible":
        return correlations_from_vectors(random_vector_model(rng))[0]
    if mode == "lhv":
        return correlations_from_lhv(random_lhv_model(rng))[0]
    raise ValueError(f"unknown random block mode {mode!r}")
