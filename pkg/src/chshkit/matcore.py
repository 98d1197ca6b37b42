"""Small dense symmetric / hermitian linear algebra.

Everything here works on matrices of dimension 2 or 4.  Eigenvalues come
from a cyclic Jacobi sweep compiled with numba; hermitian matrices are
handled through the real embedding ``[[Re, -Im], [Im, Re]]`` whose spectrum
is the hermitian spectrum with every value repeated twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import ConvergenceError, NotPsd, NotSymmetric

MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-14
DEFAULT_PSD_TOL = 1e-9
_SYMMETRY_TOL = 1e-12
ALLOWED_DIMS = (2, 4)


@njit(cache=True)
def _jacobi(a_in, max_sweeps):
    """Cyclic Jacobi on a real symmetric matrix.

    Returns ascending eigenvalues, eigenvectors as columns and a convergence
    flag.  Convergence means the off-diagonal Frobenius norm fell below
    ``OFF_DIAGONAL_TOL``.
    """
    a = a_in.copy()
    n = a.shape[0]
    v = np.eye(n)
    converged = False
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if math.sqrt(off) < OFF_DIAGONAL_TOL:
            converged = True
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    order = np.argsort(w, kind="mergesort")
    return w[order], v[:, order], converged


def _embed(m: np.ndarray) -> np.ndarray:
    re, im = m.real, m.imag
    return np.block([[re, -im], [im, re]])


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Immutable real symmetric or complex hermitian matrix of dim 2 or 4.

    The upper triangle is authoritative: the lower triangle is rewritten as
    its exact (conjugate) mirror after a tolerance check, so the stored
    entries are symmetric bit for bit.  Complex input dtype selects
    hermitian mode.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries)
        hermitian = np.iscomplexobj(m)
        m = m.astype(np.complex128 if hermitian else np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in ALLOWED_DIMS:
            raise NotSymmetric(f"expected a square matrix of dim 2 or 4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NotSymmetric("matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.conj().T)) > _SYMMETRY_TOL * scale:
            raise NotSymmetric("matrix is not (conjugate-)symmetric")
        upper = np.triu(m, 1)
        m = upper + upper.conj().T + np.diag(np.diag(m).real).astype(m.dtype)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def hermitian(self) -> bool:
        return np.iscomplexobj(self.entries)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __repr__(self):
        kind = "hermitian" if self.hermitian else "symmetric"
        return f"SymMatrix({kind}, dim={self.dim})"


def as_sym(m) -> SymMatrix:
    return m if isinstance(m, SymMatrix) else SymMatrix(np.asarray(m))


class Eigen(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray  # columns, orthonormal


def _run_jacobi(a: np.ndarray, max_sweeps: int):
    w, v, ok = _jacobi(np.ascontiguousarray(a, dtype=np.float64), max_sweeps)
    if not ok:
        raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")
    return w, v


def _complex_eigenvectors(w8: np.ndarray, v8: np.ndarray, n: int) -> np.ndarray:
    # each complex eigenvector appears as a real 2-plane; recover an
    # orthonormal complex basis per cluster of equal eigenvalues
    w = w8[0::2]
    cvecs = v8[:n, :] + 1j * v8[n:, :]
    scale = max(1.0, float(np.max(np.abs(w8))))
    out = np.empty((n, n), dtype=np.complex128)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= 1e-12 * scale:
            stop += 1
        block = cvecs[:, 2 * start:2 * stop]
        u, _, _ = np.linalg.svd(block)
        out[:, start:stop] = u[:, : stop - start]
        start = stop
    return out


def sym_eigen(m, max_sweeps: int = MAX_SWEEPS) -> Eigen:
    """Eigendecomposition with ascending eigenvalues.

    Raises ConvergenceError if the Jacobi sweep cap is exhausted.
    """
    sm = as_sym(m)
    a = sm.entries
    if not sm.hermitian:
        w, v = _run_jacobi(a, max_sweeps)
        return Eigen(w, v)
    w8, v8 = _run_jacobi(_embed(a), max_sweeps)
    return Eigen(w8[0::2].copy(), _complex_eigenvectors(w8, v8, sm.dim))


def min_eigenpair(a: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector of a raw array.

    Skips SymMatrix validation; the caller guarantees (conjugate-)symmetry.
    Used on hot optimization paths.
    """
    if np.iscomplexobj(a):
        n = a.shape[0]
        w, v = _run_jacobi(_embed(a), MAX_SWEEPS)
        return float(w[0]), v[:n, 0] + 1j * v[n:, 0]
    w, v = _run_jacobi(a, MAX_SWEEPS)
    return float(w[0]), v[:, 0]


def min_eigenvalue(m) -> float:
    return float(sym_eigen(m).values[0])


def is_psd(m, tol: float = DEFAULT_PSD_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return min_eigenvalue(m) >= -tol


def gram_vectors(m, tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Rows ``v_i`` with ``v_i . v_j == m[i, j]`` for a real PSD matrix.

    Eigenvalues are clamped at zero and null directions dropped, so a
    rank-r input gives vectors of length r.  Coordinates are ordered by
    decreasing eigenvalue.
    """
    sm = as_sym(m)
    if sm.hermitian:
        raise NotSymmetric("gram_vectors expects a real symmetric matrix")
    w, v = sym_eigen(sm)
    if w[0] < -tol:
        raise NotPsd(f"minimum eigenvalue {w[0]:.3e} below -{tol:g}")
    w = np.maximum(w, 0.0)[::-1]
    v = v[:, ::-1]
    keep = w > 1e-15 * max(1.0, float(w[0]))
    if not keep.any():
        return np.zeros((sm.dim, 1))
    return v[:, keep] * np.sqrt(w[keep])


def psd_project(m) -> SymMatrix:
    """Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped)."""
    sm = as_sym(m)
    w, v = sym_eigen(sm)
    w = np.maximum(w, 0.0)
    out = (v * w) @ v.conj().T
    if not sm.hermitian:
        out = out.real
    return SymMatrix(out)
