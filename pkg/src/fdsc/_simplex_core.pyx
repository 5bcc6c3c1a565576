# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tableau pivot loop; behavioral twin of _simplex_py.pivot_loop."""

OPTIMAL = 0
UNBOUNDED = 1
MAXITER = 2

cdef int _STALL_LIMIT = 50


def pivot_loop(double[:, ::1] T, long long[::1] basis, Py_ssize_t n_eligible,
               double tol=1e-9, Py_ssize_t max_iter=20000):
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t rhs_col = T.shape[1] - 1
    cdef Py_ssize_t ncols = T.shape[1]
    cdef bint bland = False
    cdef int stall = 0
    cdef double last = T[m, rhs_col]
    cdef Py_ssize_t it, i, j, k, r
    cdef double best, v, ratio, rmin, piv, factor, cur, tie_eps

    for it in range(max_iter):
        # entering column
        j = -1
        if bland:
            for k in range(n_eligible):
                if T[m, k] < -tol:
                    j = k
                    break
        else:
            best = -tol
            for k in range(n_eligible):
                v = T[m, k]
                if v < best:
                    best = v
                    j = k
        if j < 0:
            return OPTIMAL, it

        # ratio test: find the minimum ratio, then break ties towards the
        # smallest basis index (two passes, mirroring the numpy twin)
        r = -1
        rmin = 0.0
        for i in range(m):
            v = T[i, j]
            if v > tol:
                ratio = T[i, rhs_col] / v
                if r < 0 or ratio < rmin:
                    r = i
                    rmin = ratio
        if r < 0:
            return UNBOUNDED, it
        tie_eps = 1e-9 * (1.0 + (rmin if rmin > 0 else -rmin))
        for i in range(m):
            v = T[i, j]
            if v > tol and T[i, rhs_col] / v <= rmin + tie_eps and basis[i] < basis[r]:
                r = i

        # pivot
        piv = T[r, j]
        for k in range(ncols):
            T[r, k] /= piv
        for i in range(m + 1):
            if i == r:
                continue
            factor = T[i, j]
            if factor != 0.0:
                for k in range(ncols):
                    T[i, k] -= factor * T[r, k]
        for i in range(m + 1):
            T[i, j] = 0.0
        T[r, j] = 1.0
        basis[r] = j

        cur = T[m, rhs_col]
        if cur > last + tol * (1.0 + (last if last > 0 else -last)):
            stall = 0
            last = cur
        else:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
    return MAXITER, max_iter
