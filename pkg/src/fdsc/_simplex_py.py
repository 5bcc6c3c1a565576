"""Pure-Python (numpy) tableau pivot loop; twin of the Cython kernel.

The tableau T has shape (m+1, n+1): rows 0..m-1 are constraints, row m holds
reduced costs, column n the right-hand side.  T[m, n] carries minus the
current objective value.  Pivoting uses Dantzig's rule and switches to
Bland's rule permanently once the objective stalls, which prevents cycling
on degenerate bases.
"""

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
MAXITER = 2

_STALL_LIMIT = 50


def pivot_loop(T, basis, n_eligible, tol=1e-9, max_iter=20000):
    m = T.shape[0] - 1
    rhs_col = T.shape[1] - 1
    bland = False
    stall = 0
    last = T[m, rhs_col]

    for it in range(max_iter):
        costs = T[m, :n_eligible]
        if bland:
            cand = np.flatnonzero(costs < -tol)
            if cand.size == 0:
                return OPTIMAL, it
            j = int(cand[0])
        else:
            j = int(np.argmin(costs))
            if costs[j] >= -tol:
                return OPTIMAL, it

        col = T[:m, j]
        mask = col > tol
        if not mask.any():
            return UNBOUNDED, it
        ratios = np.full(m, np.inf)
        ratios[mask] = T[:m, rhs_col][mask] / col[mask]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-9 * (1.0 + abs(rmin)))
        if ties.size > 1:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[0])

        piv = T[r, j]
        T[r, :] /= piv
        colvals = T[:, j].copy()
        colvals[r] = 0.0
        T -= np.outer(colvals, T[r, :])
        T[:, j] = 0.0
        T[r, j] = 1.0
        basis[r] = j

        cur = T[m, rhs_col]
        if cur > last + tol * (1.0 + abs(last)):
            stall = 0
            last = cur
        else:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
    return MAXITER, max_iter
