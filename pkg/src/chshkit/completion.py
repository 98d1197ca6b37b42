"""Positive semidefinite completion of the full correlation matrix.

A block admits a Hilbert model iff some ``(x, y)`` makes the full
correlation matrix PSD.  Its minimum eigenvalue is concave in ``(x, y)``
(minimum of affine functions of the free entries), so the decision reduces
to maximizing a concave function over a compact set.

Real mode uses nested golden-section search: the inner maximum over ``y``
is itself concave in ``x``, so the nesting is exact even where the
minimum eigenvalue is degenerate and plain coordinate ascent can stall.
Hermitian mode has four real parameters and uses a central-cut ellipsoid
method driven by eigenvector supergradients, which also certifies its own
optimality gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .corrmodel import (
    TSIRELSON,
    CorrelationBlock,
    FullCorrelationMatrix,
    as_block,
    assemble_full,
    chsh_all_variants,
    chsh_value,
    r_certificate,
)
from .errors import ConvergenceError, NotSymmetric
from .generators import (
    VectorModel,
    correlations_from_vectors,
    random_vector_model,
    tsirelson_vector_model,
)
from .matcore import DEFAULT_PSD_TOL, MAX_SWEEPS, _jacobi, gram_vectors, is_psd
from .rng import SplitMix64

GOLDEN_TOL = 1e-10
ELLIPSOID_GAP = 1e-11
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_ZERO_PREFERENCE = 1e-12


class Status(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class AnalyticCertificate:
    """A PSD matrix ``R`` with ``Tr(C R) < 0`` for every completion ``C``."""

    matrix: str  # "R+" or "R-"
    value: float

    def to_dict(self) -> dict:
        return {"matrix": self.matrix, "value": self.value}


@dataclass(frozen=True, eq=False)
class CompletionResult:
    status: Status
    x_star: float | complex
    y_star: float | complex
    lambda_star: float
    mode: str
    gram_vectors: np.ndarray | None = None
    analytic_certificate: AnalyticCertificate | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "mode": self.mode,
            "x_star": _scalar_json(self.x_star),
            "y_star": _scalar_json(self.y_star),
            "lambda_star": self.lambda_star,
        }
        if self.gram_vectors is not None:
            out["gram_vectors"] = _vectors_json(self.gram_vectors)
        if self.analytic_certificate is not None:
            out["analytic_certificate"] = self.analytic_certificate.to_dict()
        return out


def _scalar_json(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _vectors_json(vecs: np.ndarray) -> dict:
    return {name: vecs[i].tolist() for i, name in enumerate(("u1", "u2", "v1", "v2"))}


# -- objective kernels -------------------------------------------------------

@njit(cache=True)
def _real_objective(c, x, y):
    m = np.eye(4)
    m[0, 1] = x
    m[1, 0] = x
    m[2, 3] = y
    m[3, 2] = y
    for i in range(2):
        for j in range(2):
            m[i, 2 + j] = c[i, j]
            m[2 + j, i] = c[i, j]
    w, v, ok = _jacobi(m, MAX_SWEEPS)
    return w[0], v[:, 0], ok


@njit(cache=True)
def _hermitian_objective(c, xr, xi, yr, yi):
    # real embedding [[Re, -Im], [Im, Re]] of the hermitian full matrix
    m = np.eye(8)
    for s in range(2):
        o = 4 * s
        m[o + 0, o + 1] = xr
        m[o + 1, o + 0] = xr
        m[o + 2, o + 3] = yr
        m[o + 3, o + 2] = yr
        for i in range(2):
            for j in range(2):
                m[o + i, o + 2 + j] = c[i, j]
                m[o + 2 + j, o + i] = c[i, j]
    # imaginary part: Im[0,1] = xi, Im[1,0] = -xi, Im[2,3] = yi, Im[3,2] = -yi
    m[4 + 0, 1] = xi
    m[4 + 1, 0] = -xi
    m[4 + 2, 3] = yi
    m[4 + 3, 2] = -yi
    for r in range(4):
        for q in range(4):
            m[q, 4 + r] = m[4 + r, q]
    w, v, ok = _jacobi(m, MAX_SWEEPS)
    return w[0], v[:, 0], ok


def _lambda_real(c: np.ndarray, x: float, y: float) -> float:
    lam, _, ok = _real_objective(c, x, y)
    if not ok:
        raise ConvergenceError("Jacobi did not converge")
    return lam


def _real_supergradient(c, p):
    lam, v, ok = _real_objective(c, p[0], p[1])
    if not ok:
        raise ConvergenceError("Jacobi did not converge")
    return lam, np.array([2.0 * v[0] * v[1], 2.0 * v[2] * v[3]])


def _hermitian_supergradient(c, p):
    xr, xi, yr, yi = p
    lam, v8, ok = _hermitian_objective(c, xr, xi, yr, yi)
    if not ok:
        raise ConvergenceError("Jacobi did not converge")
    v = v8[:4] + 1j * v8[4:]
    zx = np.conj(v[0]) * v[1]
    zy = np.conj(v[2]) * v[3]
    return lam, np.array([2.0 * zx.real, -2.0 * zx.imag, 2.0 * zy.real, -2.0 * zy.imag])


# -- maximizers --------------------------------------------------------------

def golden_max(f, lo: float, hi: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    """Maximize a concave (unimodal) ``f`` on ``[lo, hi]``.

    Returns the best evaluated ``(argmax, max)``; the endpoints are always
    evaluated so boundary optima are hit exactly.
    """
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
            if f1 > best_f:
                best_x, best_f = x1, f1
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
            if f2 > best_f:
                best_x, best_f = x2, f2
    for x in (lo, hi):
        fx = f(x)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def _nested_golden(c: np.ndarray, tol: float) -> tuple[float, float, float]:
    inner_best = {}

    def profile(x):
        y, lam = golden_max(lambda y: _lambda_real(c, x, y), -1.0, 1.0, tol)
        inner_best[x] = y
        return lam

    x, lam = golden_max(profile, -1.0, 1.0, tol)
    return x, inner_best[x], lam


def ellipsoid_max(fg, n: int, outside, radius2: float,
                  gap: float = ELLIPSOID_GAP, max_iter: int = 20000):
    """Central-cut ellipsoid method for a concave ``f`` on a convex set.

    ``fg(p)`` returns ``(f(p), supergradient)``; ``outside(p)`` returns None
    inside the set, otherwise the gradient of a violated convex constraint.
    Stops once the certified gap between the best value and the upper bound
    ``f(c) + sqrt(g' P g)`` drops below ``gap``.  Returns ``(point, value, bound)``.
    """
    center = np.zeros(n)
    shape = radius2 * np.eye(n)
    best_p, best_f = None, -math.inf
    upper = math.inf
    scale = n * n / (n * n - 1.0)
    for _ in range(max_iter):
        cut = outside(center)
        if cut is not None:
            g = -np.asarray(cut, dtype=float)
        else:
            val, g = fg(center)
            if val > best_f:
                best_p, best_f = center.copy(), val
            gpg = float(g @ shape @ g)
            if gpg <= 0.0:
                upper = val
                break
            upper = min(upper, val + math.sqrt(gpg))
            if upper - best_f <= gap:
                break
        pg = shape @ g
        gpg = float(g @ pg)
        if gpg <= 0.0:
            break
        step = pg / math.sqrt(gpg)
        center = center + step / (n + 1)
        shape = scale * (shape - (2.0 / (n + 1)) * np.outer(step, step))
        shape = 0.5 * (shape + shape.T)
    return best_p, best_f, upper


def _box_cut(p):
    i = int(np.argmax(np.abs(p)))
    if abs(p[i]) <= 1.0:
        return None
    g = np.zeros_like(p)
    g[i] = math.copysign(1.0, p[i])
    return g


def _disk_cut(p):
    for k in (0, 2):
        r2 = p[k] ** 2 + p[k + 1] ** 2
        if r2 > 1.0:
            g = np.zeros_like(p)
            g[k], g[k + 1] = p[k], p[k + 1]
            return g
    return None


def max_min_eigenvalue(block, mode: str = "real", method: str | None = None,
                       tol: float = GOLDEN_TOL):
    """Maximize the minimum eigenvalue of the full matrix over ``|x|, |y| <= 1``.

    Returns ``(x_star, y_star, lambda_star)``; complex ``x_star, y_star`` in
    hermitian mode.  ``method`` is ``"golden"`` (real mode only) or
    ``"ellipsoid"``; the default is golden for real and ellipsoid for
    hermitian.  ``x = y = 0`` is returned whenever it is optimal to 1e-12.
    """
    c = np.ascontiguousarray(as_block(block).c)
    if mode not in ("real", "hermitian"):
        raise ValueError(f"mode must be 'real' or 'hermitian', got {mode!r}")
    method = method or ("golden" if mode == "real" else "ellipsoid")
    if mode == "real" and method == "golden":
        x, y, lam = _nested_golden(c, tol)
    elif mode == "real" and method == "ellipsoid":
        p, lam, _ = ellipsoid_max(lambda p: _real_supergradient(c, p), 2, _box_cut, 2.0)
        x, y = float(p[0]), float(p[1])
    elif method == "ellipsoid":
        p, lam, _ = ellipsoid_max(lambda p: _hermitian_supergradient(c, p), 4, _disk_cut, 2.0)
        x, y = complex(p[0], p[1]), complex(p[2], p[3])
    else:
        raise ValueError(f"method {method!r} is not available in {mode} mode")

    lam0 = _lambda_real(c, 0.0, 0.0)
    if lam0 >= lam - _ZERO_PREFERENCE:
        x, y, lam = 0.0, 0.0, max(lam, lam0)
        if mode == "hermitian":
            x, y = 0j, 0j
    x = float(np.clip(x, -1.0, 1.0)) if mode == "real" else x
    y = float(np.clip(y, -1.0, 1.0)) if mode == "real" else y
    return x, y, float(lam)


def realize_gram(full: FullCorrelationMatrix, tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Rows ``(u1, u2, v1, v2)`` whose pairwise inner products reproduce ``full``."""
    if full.hermitian:
        raise NotSymmetric("realize_gram works over the reals only")
    return gram_vectors(full.assembled, tol)


def decide_hilbert_model(block, mode: str = "real", tol: float = DEFAULT_PSD_TOL,
                         method: str | None = None) -> CompletionResult:
    """Decide whether some completion of ``block`` is PSD within ``tol``."""
    block = as_block(block)
    x, y, lam = max_min_eigenvalue(block, mode, method)
    if lam >= -tol:
        vecs = None
        if mode == "real":
            vecs = realize_gram(assemble_full(block, x, y), tol)
        return CompletionResult(Status.FEASIBLE, x, y, lam, mode, gram_vectors=vecs)

    cert = None
    s = chsh_value(block)
    if abs(s) > TSIRELSON:
        plus, minus = r_certificate(block)
        cert = AnalyticCertificate("R-", minus) if s > 0 else AnalyticCertificate("R+", plus)
    return CompletionResult(Status.INFEASIBLE, x, y, lam, mode, analytic_certificate=cert)


# -- independent grid oracle -------------------------------------------------

def _grid_stack(c: np.ndarray, step: float):
    if not 0 < step <= 0.1:
        raise ValueError("step must lie in (0, 0.1]")
    n = int(round(2.0 / step)) + 1
    ticks = np.linspace(-1.0, 1.0, n)
    xs, ys = np.meshgrid(ticks, ticks, indexing="ij")
    m = np.broadcast_to(np.eye(4), (n, n, 4, 4)).copy()
    m[..., 0, 1] = m[..., 1, 0] = xs
    m[..., 2, 3] = m[..., 3, 2] = ys
    m[..., :2, 2:] = c
    m[..., 2:, :2] = c.T
    return ticks, m


def grid_max_min_eigenvalue(block, step: float) -> tuple[float, float, float]:
    """Exhaustive ``(x, y)`` grid search with LAPACK eigenvalues."""
    ticks, m = _grid_stack(as_block(block).c, step)
    lam = np.linalg.eigvalsh(m)[..., 0]
    i, j = np.unravel_index(int(np.argmax(lam)), lam.shape)
    return float(ticks[i]), float(ticks[j]), float(lam[i, j])


def feasibility_oracle_grid(block, step: float = 0.01, tol: float = DEFAULT_PSD_TOL) -> bool:
    """True iff some grid point gives a minimum eigenvalue >= ``-tol``.

    Each grid point is tested through the leading principal minors of
    ``M + tol * I`` (Sylvester's criterion), which is exhaustive and much
    cheaper than eigenvalues.  The minimum eigenvalue is 1-Lipschitz in
    each of x and y, so the grid maximum is within ``step`` of the true
    maximum; comparisons against an exact solver should allow
    ``tol + 4 * step``.
    """
    _, m = _grid_stack(as_block(block).c, step)
    m += tol * np.eye(4)
    minor2 = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] ** 2
    positive = (minor2 > 0) & (np.linalg.det(m[..., :3, :3]) > 0) & (np.linalg.det(m) > 0)
    return bool(positive.any())


# -- exercise: is B <= 2 necessary for a real Hilbert model? -----------------

@dataclass(frozen=True, eq=False)
class ExerciseResult:
    block: CorrelationBlock
    b_value: float
    completion: CompletionResult
    vectors: VectorModel
    source: str  # "construction" or "sample <index>"
    best_sampled_b: float
    samples: int
    seed: int

    @property
    def disproved(self) -> bool:
        return self.completion.feasible and self.b_value > 2.0 + 1e-6


def exercise_search(samples: int = 10_000, seed: int = 0, dim: int = 2) -> ExerciseResult:
    """Search real unit-vector models for the largest CHSH value.

    Candidate 0 is the planar construction reaching 2 sqrt(2); candidates
    1..samples are random 4-tuples of unit vectors in ``R^dim``.  Every
    candidate is a Gram model, so any value above 2 is a real Hilbert model
    violating the CHSH inequality.  Ties go to the lowest index.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = SplitMix64(seed)
    best_model = tsirelson_vector_model()
    best_b = chsh_all_variants(correlations_from_vectors(best_model)[0])[1]
    source = "construction"
    best_sampled = -math.inf
    for k in range(1, samples + 1):
        model = random_vector_model(rng, dim)
        b = chsh_all_variants(correlations_from_vectors(model)[0])[1]
        best_sampled = max(best_sampled, b)
        if b > best_b:
            best_model, best_b, source = model, b, f"sample {k}"
    block, _ = correlations_from_vectors(best_model)
    result = decide_hilbert_model(block, "real")
    return ExerciseResult(block, best_b, result, best_model, source, best_sampled, samples, seed)


def witness_is_psd(result: CompletionResult, block, tol: float = 1e-8) -> bool:
    return is_psd(assemble_full(block, result.x_star, result.y_star).assembled, tol)

