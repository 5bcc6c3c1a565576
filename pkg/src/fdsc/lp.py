"""Small dense linear programs with exact positive-part reformulations.

The solver is a two-phase tableau simplex sized for the problems this package
generates (tens of variables).  Positive parts (x)+ appearing in objectives
and budget constraints are rewritten exactly with epigraph variables, so the
LP optimum equals the optimum of the original piecewise-linear program.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

FEAS_TOL = 1e-9
DUAL_TOL = 1e-7


@dataclass
class LinearProgram:
    """minimize objective . x  subject to rows (coeffs, sense, rhs), lb <= x <= ub."""

    num_vars: int
    objective: np.ndarray
    rows: list  # (coeffs: np.ndarray, sense: "<=" | ">=" | "=", rhs: float)
    lower: np.ndarray
    upper: list  # per-var float or None
    names: list

    def validate(self):
        if self.objective.shape != (self.num_vars,):
            raise ValueError("objective length != num_vars")
        for coeffs, sense, _ in self.rows:
            if coeffs.shape != (self.num_vars,):
                raise ValueError("constraint row length != num_vars")
            if sense not in ("<=", ">=", "="):
                raise ValueError(f"bad sense {sense!r}")


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray | None
    value: float
    niter: int = 0
    # standardized-form certificate data (equality form A z = b, z >= 0)
    cert: dict | None = None


class LpBuilder:
    """Incremental construction of a LinearProgram.

    Affine expressions are (const, {var_index: coeff}) pairs.
    """

    def __init__(self):
        self._names = []
        self._lower = []
        self._upper = []
        self._obj = {}
        self._rows = []

    @property
    def num_vars(self):
        return len(self._names)

    def new_var(self, name=None, lb=0.0, ub=None) -> int:
        idx = len(self._names)
        self._names.append(name or f"x{idx}")
        self._lower.append(float(lb))
        self._upper.append(None if ub is None else float(ub))
        return idx

    def add_objective(self, var: int, coeff: float):
        self._obj[var] = self._obj.get(var, 0.0) + float(coeff)

    def add_constraint(self, coeffs: dict, sense: str, rhs: float):
        self._rows.append((dict(coeffs), sense, float(rhs)))

    def add_pos_part_in_objective(self, expr, weight: float, name=None) -> int:
        """Adds weight*(expr)+ to the objective via an epigraph variable u.

        u >= expr and u >= 0; exact for minimization since weight >= 0.
        Returns the index of u.
        """
        if weight < 0:
            raise ValueError(f"positive-part weight must be >= 0, got {weight}")
        const, coeffs = expr
        u = self.new_var(name=name or f"u{self.num_vars}")
        # expr - u <= 0
        row = dict(coeffs)
        row[u] = row.get(u, 0.0) - 1.0
        self.add_constraint(row, "<=", -const)
        self.add_objective(u, weight)
        return u

    def add_pos_part_budget(self, exprs, budget: float):
        """Adds sum_t (expr_t)+ <= budget.

        Each term gets a variable s_t >= expr_t, s_t >= 0; any point feasible
        for the original constraint stays feasible with s_t = (expr_t)+, and
        the projection onto the original variables is unchanged.
        """
        svars = []
        for expr in exprs:
            const, coeffs = expr
            s = self.new_var(name=f"s{self.num_vars}")
            row = dict(coeffs)
            row[s] = row.get(s, 0.0) - 1.0
            self.add_constraint(row, "<=", -const)
            svars.append(s)
        self.add_constraint({s: 1.0 for s in svars}, "<=", budget)
        return svars

    def build(self) -> LinearProgram:
        n = self.num_vars
        obj = np.zeros(n)
        for i, c in self._obj.items():
            obj[i] = c
        rows = []
        for coeffs, sense, rhs in self._rows:
            a = np.zeros(n)
            for i, c in coeffs.items():
                a[i] = c
            rows.append((a, sense, rhs))
        lp = LinearProgram(
            num_vars=n,
            objective=obj,
            rows=rows,
            lower=np.array(self._lower, dtype=float),
            upper=list(self._upper),
            names=list(self._names),
        )
        lp.validate()
        return lp


def _standardize(lp: LinearProgram):
    """Equality standard form: A z = b, z >= 0, minimize c . z (+ const).

    Variables are shifted by their lower bounds; upper bounds become extra
    rows; every inequality gets a slack/surplus column.  Rows are flipped so
    b >= 0.  Returns (A, b, c, const, n_struct, slack_of_row).
    """
    n = lp.num_vars
    rows = list(lp.rows)
    for i, ub in enumerate(lp.upper):
        if ub is not None:
            e = np.zeros(n)
            e[i] = 1.0
            rows.append((e, "<=", float(ub)))

    m = len(rows)
    n_slack = sum(1 for _, sense, _ in rows if sense != "=")
    A = np.zeros((m, n + n_slack))
    b = np.zeros(m)
    const = float(lp.objective @ lp.lower)
    k = n
    slack_of_row = [-1] * m
    for i, (a, sense, rhs) in enumerate(rows):
        A[i, :n] = a
        b[i] = rhs - a @ lp.lower
        if sense == "<=":
            A[i, k] = 1.0
            slack_of_row[i] = k
            k += 1
        elif sense == ">=":
            A[i, k] = -1.0
            slack_of_row[i] = k
            k += 1
        if b[i] < 0:
            A[i, :] = -A[i, :]
            b[i] = -b[i]
    c = np.zeros(n + n_slack)
    c[:n] = lp.objective
    return A, b, c, const, n, slack_of_row


def solve(lp: LinearProgram, tol: float = FEAS_TOL, pivot_fn=None) -> LpSolution:
    """Two-phase simplex.  Infeasible/unbounded are reported in the status."""
    lp.validate()
    if pivot_fn is None:
        pivot_fn = _backend.pivot_loop
    A, b, c, const, n, slack_of_row = _standardize(lp)
    m, n_total = A.shape

    # initial basis: slack columns with coefficient +1, artificials elsewhere
    basis = np.full(m, -1, dtype=np.int64)
    need_art = []
    for i in range(m):
        j = slack_of_row[i]
        if j >= 0 and A[i, j] == 1.0:
            basis[i] = j
        else:
            need_art.append(i)

    n_art = len(need_art)
    T = np.zeros((m + 1, n_total + n_art + 1))
    T[:m, :n_total] = A
    T[:m, -1] = b
    for k, i in enumerate(need_art):
        T[i, n_total + k] = 1.0
        basis[i] = n_total + k

    niter = 0
    if n_art:
        # phase-1 objective: minimize sum of artificials
        for i in need_art:
            T[m, :] -= T[i, :]
        T[m, n_total:n_total + n_art] = 0.0
        status, it = pivot_fn(T, basis, n_total, tol, 20000)
        niter += it
        if status == _backend.MAXITER:
            raise RuntimeError("simplex iteration limit in phase 1")
        if -T[m, -1] > 1e-7:
            return LpSolution(status="infeasible", x=None, value=np.nan, niter=niter)
        # drive remaining artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= n_total:
                j = np.flatnonzero(np.abs(T[i, :n_total]) > tol)
                if j.size:
                    _pivot(T, basis, i, int(j[0]))
        T[m, :] = 0.0

    # phase-2 objective row
    T[m, :n_total] = c
    T[m, n_total:] = 0.0
    T[m, -1] = 0.0
    for i in range(m):
        j = basis[i]
        if j < n_total and T[m, j] != 0.0:
            T[m, :] -= T[m, j] * T[i, :]

    status, it = pivot_fn(T, basis, n_total, tol, 20000)
    niter += it
    if status == _backend.MAXITER:
        raise RuntimeError("simplex iteration limit in phase 2")
    if status == _backend.UNBOUNDED:
        return LpSolution(status="unbounded", x=None, value=-np.inf, niter=niter)

    z = np.zeros(n_total)
    for i in range(m):
        if basis[i] < n_total:
            z[basis[i]] = T[i, -1]
    x = z[:n] + lp.lower
    value = float(lp.objective @ x)

    # dual certificate from the final basis: B^T y = c_B
    cols = [int(j) for j in basis]
    Bmat = np.zeros((m, m))
    cB = np.zeros(m)
    ext_c = np.concatenate([c, np.zeros(n_art)])
    for k2, j in enumerate(cols):
        if j < n_total:
            Bmat[:, k2] = A[:, j]
        else:
            Bmat[need_art[j - n_total], k2] = 1.0
        cB[k2] = ext_c[j]
    try:
        y = np.linalg.solve(Bmat.T, cB)
    except np.linalg.LinAlgError:
        y = np.linalg.lstsq(Bmat.T, cB, rcond=None)[0]

    cert = {"A": A, "b": b, "c": c, "z": z, "y": y, "const": const}
    return LpSolution(status="optimal", x=x, value=value, niter=niter, cert=cert)


def _pivot(T, basis, r, j):
    T[r, :] /= T[r, j]
    colvals = T[:, j].copy()
    colvals[r] = 0.0
    T -= np.outer(colvals, T[r, :])
    T[:, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


def check_certificate(sol: LpSolution, tol: float = DUAL_TOL) -> dict:
    """Verifies primal feasibility, dual feasibility, complementary slackness
    and strong duality of an optimal solution in the standardized space.

    Returns the residuals; raises if any exceeds tol.
    """
    if sol.status != "optimal" or sol.cert is None:
        raise ValueError("certificate check requires an optimal solution")
    A, b, c, z, y = (sol.cert[k] for k in ("A", "b", "c", "z", "y"))
    primal = float(np.max(np.abs(A @ z - b))) if len(b) else 0.0
    nonneg = float(max(0.0, -z.min())) if z.size else 0.0
    reduced = c - A.T @ y
    dual = float(max(0.0, -reduced.min())) if reduced.size else 0.0
    comp = float(np.max(np.abs(z * reduced))) if z.size else 0.0
    gap = abs(float(c @ z) - float(y @ b))
    res = {"primal": primal, "nonneg": nonneg, "dual": dual,
           "complementary": comp, "duality_gap": gap}
    scale = 1.0 + abs(float(c @ z))
    bad = {k: v for k, v in res.items() if v > tol * scale}
    if bad:
        raise AssertionError(f"LP certificate violated: {bad}")
    return res


def to_lp_format(lp: LinearProgram, name: str = "problem") -> str:
    """CPLEX LP text dump for external cross-checking."""
    def term(c, v):
        return f"{'+' if c >= 0 else '-'} {abs(c):.12g} {v} "

    out = [f"\\ {name}", "Minimize", " obj: "]
    line = ""
    for i, cval in enumerate(lp.objective):
        if cval != 0.0:
            line += term(cval, lp.names[i])
    out[-1] += line if line else "0 " + lp.names[0]
    out.append("Subject To")
    for k, (a, sense, rhs) in enumerate(lp.rows):
        line = f" c{k}: "
        for i, cval in enumerate(a):
            if cval != 0.0:
                line += term(cval, lp.names[i])
        op = {"<=": "<=", ">=": ">=", "=": "="}[sense]
        out.append(line + f"{op} {rhs:.12g}")
    out.append("Bounds")
    for i in range(lp.num_vars):
        lo = lp.lower[i]
        hi = lp.upper[i]
        if hi is None:
            out.append(f" {lo:.12g} <= {lp.names[i]}")
        else:
            out.append(f" {lo:.12g} <= {lp.names[i]} <= {hi:.12g}")
    out.append("End")
    return "\n".join(out) + "\n"
