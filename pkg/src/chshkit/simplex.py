"""Dense phase-1 simplex for tiny feasibility problems ``A w = b, w >= 0``."""

from __future__ import annotations

import numpy as np

FEASIBILITY_TOL = 1e-9
_PIVOT_TOL = 1e-12


def find_feasible_point(a, b, max_iter: int = 1000) -> np.ndarray | None:
    """Return some ``w >= 0`` with ``a @ w == b``, or None if none exists.

    Artificial variables are minimized with Bland's rule, which cannot
    cycle.  The problem is declared infeasible when the phase-1 optimum
    exceeds ``FEASIBILITY_TOL``.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    m, n = a.shape
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0

    # tableau columns: n originals, m artificials, rhs
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b
    # reduced costs of the phase-1 objective (sum of artificials)
    tab[m, :n] = -a.sum(axis=0)
    tab[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for _ in range(max_iter):
        costs = tab[m, :-1]
        entering = next((j for j in range(n + m) if costs[j] < -_PIVOT_TOL), None)
        if entering is None:
            break
        col = tab[:m, entering]
        rows = [i for i in range(m) if col[i] > _PIVOT_TOL]
        if not rows:  # unbounded, impossible for a phase-1 problem
            break
        ratios = [tab[i, -1] / col[i] for i in rows]
        best = min(ratios)
        leaving = min(
            (i for i, r in zip(rows, ratios) if r <= best + _PIVOT_TOL),
            key=lambda i: basis[i],
        )
        tab[leaving] /= tab[leaving, entering]
        for i in range(m + 1):
            if i != leaving and tab[i, entering] != 0.0:
                tab[i] -= tab[i, entering] * tab[leaving]
        basis[leaving] = entering
    else:
        raise RuntimeError("simplex iteration limit reached")

    if -tab[m, -1] > FEASIBILITY_TOL:
        return None
    w = np.zeros(n + m)
    for i, j in enumerate(basis):
        w[j] = tab[i, -1]
    return np.maximum(w[:n], 0.0)
