"""Dense simplex solver for the monic min-max problems.

The primal problem is: minimize t over real coefficient variables u
subject to F u + g <= t componentwise, where each row encodes one
(mesh point, phase) pair of the regular polygon outer approximation of
the modulus.  With few variables and many rows, the efficient dense
formulation is the standard-form problem its multipliers solve:

    min (-g).lam   s.t.  F^T lam = 0,  sum lam = 1,  lam >= 0,

a tableau with d+1 rows and one column per constraint.  A two-phase
primal simplex runs on that dense matrix; the optimal basis multipliers
return the coefficients u and the optimum t* of the min-max itself.

Pricing is by most-negative reduced cost with the classical
lexicographic ratio test on the [rhs | B^-1] block, which is
deterministic and cannot cycle.  (Lowest-index pricing alone also
terminates but was measured to need two orders of magnitude more
iterations on production-size instances; it is kept as a fallback.)
Every solve is verified against its optimality certificate before the
result is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverFailure

_RC_TOL = 1e-9  # reduced-cost threshold
_PIV_TOL = 1e-9  # smallest acceptable pivot


class _IterationCap(Exception):
    pass


def _pivot(tab, rhs, basis, row, col):
    piv = tab[row, col]
    tab[row] /= piv
    rhs[row] /= piv
    colvals = tab[:, col].copy()
    colvals[row] = 0.0
    mask = colvals != 0.0
    if mask.any():
        tab[mask] -= np.outer(colvals[mask], tab[row])
        rhs[mask] -= colvals[mask] * rhs[row]
    tab[:, col] = 0.0
    tab[row, col] = 1.0
    basis[row] = col


def _run_simplex(tab, rhs, basis, cost, allowed, n_struct, max_iter, bland):
    """Iterate to optimality; returns iteration count."""
    m = tab.shape[0]
    iters = 0
    while True:
        iters += 1
        if iters > max_iter:
            raise _IterationCap
        reduced = cost[:allowed] - cost[basis] @ tab[:, :allowed]
        negative = np.flatnonzero(reduced < -_RC_TOL)
        if negative.size == 0:
            return iters
        col = int(negative[0]) if bland else int(np.argmin(reduced))
        column = tab[:, col]
        rows = np.flatnonzero(column > _PIV_TOL)
        if rows.size == 0:
            raise SolverFailure("standard-form LP unbounded; the min-max construction is broken")
        ratios = rhs[rows] / column[rows]
        tie = rows[ratios <= ratios.min() + 1e-12]
        if bland or tie.size == 1:
            row = int(tie[np.argmin(basis[tie])])
        else:
            # lexicographic comparison of [rhs | B^-1] rows scaled by the pivot
            block = np.column_stack([rhs[tie], tab[tie, n_struct:]]) / column[tie, None]
            row = int(tie[np.lexsort(block.T[::-1])[0]])
        _pivot(tab, rhs, basis, row, col)


def solve_standard_form(B, h, c, max_iter=50000):
    """min c.lam s.t. B lam = h, lam >= 0.

    Returns (value, lam, pi, iterations) where pi are the optimal basis
    multipliers.  Raises SolverFailure on infeasibility or breakdown.
    """
    B = np.asarray(B, dtype=float)
    h = np.asarray(h, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = B.shape
    flip = h < 0
    Bw = B.copy()
    hw = h.copy()
    Bw[flip] *= -1.0
    hw[flip] *= -1.0

    def attempt(bland, cap):
        tab = np.hstack([Bw, np.eye(m)])
        rhs = hw.copy()
        basis = np.arange(n, n + m)
        phase1_cost = np.concatenate([np.zeros(n), np.ones(m)])
        iters = _run_simplex(tab, rhs, basis, phase1_cost, n + m, n, cap, bland)
        if float(rhs[basis >= n].sum()) > 1e-7 * max(1.0, float(np.abs(hw).max())):
            raise SolverFailure("phase 1 ended infeasible")
        for row in range(m):  # drive artificial columns out of the basis when possible
            if basis[row] >= n:
                nz = np.flatnonzero(np.abs(tab[row, :n]) > 1e-7)
                if nz.size:
                    _pivot(tab, rhs, basis, row, int(nz[0]))
        phase2_cost = np.concatenate([c, np.zeros(m)])
        iters += _run_simplex(tab, rhs, basis, phase2_cost, n, n, cap, bland)
        return tab, rhs, basis, iters

    try:
        tab, rhs, basis, iters = attempt(bland=False, cap=max_iter)
    except _IterationCap:
        try:
            tab, rhs, basis, iters = attempt(bland=True, cap=8 * max_iter)
        except _IterationCap:
            raise SolverFailure("simplex iteration cap exceeded") from None

    lam = np.zeros(n)
    in_struct = basis < n
    lam[basis[in_struct]] = rhs[in_struct]
    value = float(c @ lam)
    cost_full = np.concatenate([c, np.zeros(m)])
    basis_matrix = np.hstack([Bw, np.eye(m)])[:, basis]
    try:
        pi = np.linalg.solve(basis_matrix.T, cost_full[basis])
    except np.linalg.LinAlgError:
        pi = np.linalg.lstsq(basis_matrix.T, cost_full[basis], rcond=None)[0]
    pi[flip] *= -1.0
    return value, lam, pi, iters


@dataclass
class MinimaxResult:
    """Certified solution of a monic min-max instance on one mesh.

    log_value is the log of the polygonal optimum t*; the true mesh
    min-max and the achieved norm of `coefficients` both lie in
    [log_value, log_value + log_bracket_factor].
    """

    log_value: float
    coefficients: np.ndarray  # complex, one per lower monomial
    bracket_factor: float  # 1.0 on the exact real path
    iterations: int
    real_path: bool
    feasibility_residual: float
    duality_gap: float

    @property
    def log_bracket_high(self) -> float:
        return self.log_value + math.log(self.bracket_factor)


def solve_minimax(lower_vals, target_vals, log_weight_pow, m_phases: int = 32) -> MinimaxResult:
    """Minimize max_zeta w^k |target(zeta) + sum_b a_b lower_b(zeta)| over complex a.

    `lower_vals` is (d, npts), `target_vals` (npts,), `log_weight_pow`
    the per-point log of w^k (finite; drop zero-weight points first).
    Real-valued instances are solved exactly with two-sided constraints;
    otherwise the modulus is relaxed to a regular m_phases-gon, giving
    the certified bracket [t*, t*/cos(pi/m)].
    """
    lower_vals = np.asarray(lower_vals, dtype=complex)
    target_vals = np.asarray(target_vals, dtype=complex)
    log_weight_pow = np.asarray(log_weight_pow, dtype=float)
    d, npts = lower_vals.shape if lower_vals.size else (0, target_vals.shape[0])
    if not np.all(np.isfinite(log_weight_pow)):
        raise ValueError("zero-weight points must be removed before solving")
    if m_phases < 3:
        raise ValueError("the polygon relaxation needs at least 3 phases")

    shift = float(log_weight_pow.max())
    W = np.exp(log_weight_pow - shift)
    real_path = bool(np.all(lower_vals.imag == 0) and np.all(target_vals.imag == 0))

    target_scale = float(np.max(W * np.abs(target_vals)))
    if d == 0 or target_scale == 0.0:
        # the class is {target} itself, or the target vanishes on the mesh
        # (then interpolation by zero coefficients is already optimal)
        value = target_scale
        log_value = math.log(value) + shift if value > 0 else -math.inf
        return MinimaxResult(log_value, np.zeros(d, dtype=complex), 1.0, 0, real_path, 0.0, 0.0)

    col_scale = np.maximum(np.max(W * np.abs(lower_vals), axis=1), 1e-300)
    low_scaled = lower_vals / col_scale[:, None]
    tgt_scaled = target_vals / target_scale

    if real_path:
        base = (low_scaled.real * W).T  # (npts, d)
        F = np.vstack([base, -base])
        g = np.concatenate([W * tgt_scaled.real, -(W * tgt_scaled.real)])
        bracket = 1.0
        n_x = d
    else:
        phases = np.exp(2j * np.pi * np.arange(m_phases) / m_phases)
        rot_low = phases[:, None, None] * low_scaled[None, :, :]  # (m, d, npts)
        rot_tgt = phases[:, None] * tgt_scaled[None, :]  # (m, npts)
        Fx = (rot_low.real * W[None, None, :]).transpose(0, 2, 1).reshape(-1, d)
        Fy = (-rot_low.imag * W[None, None, :]).transpose(0, 2, 1).reshape(-1, d)
        F = np.hstack([Fx, Fy])
        g = (rot_tgt.real * W[None, :]).reshape(-1)
        bracket = 1.0 / math.cos(math.pi / m_phases)
        n_x = 2 * d

    n_rows = F.shape[0]
    B = np.vstack([F.T, np.ones((1, n_rows))])
    h = np.zeros(n_x + 1)
    h[-1] = 1.0
    value, lam, pi, iters = solve_standard_form(B, h, -g)

    u = pi[:n_x]
    t_star = -pi[-1]
    t_lam = -value  # = g.lam, equal to t_star at optimality
    t_poly = float(np.max(F @ u + g))  # value achieved by the returned coefficients
    gap = abs(t_star - t_lam)
    feas = abs(t_poly - t_star)
    scale_ref = max(1.0, abs(t_star))
    if gap > 1e-5 * scale_ref or feas > 1e-5 * scale_ref:
        raise SolverFailure(
            f"optimality certificate failed (gap={gap:.3e}, achieved-vs-optimal={feas:.3e})"
        )

    if real_path:
        coeffs = (u / col_scale).astype(complex) * target_scale
    else:
        coeffs = (u[:d] + 1j * u[d:]) / col_scale * target_scale
    raw = max(t_poly, 0.0) * target_scale
    log_value = math.log(raw) + shift if raw > 0 else -math.inf
    return MinimaxResult(log_value, coeffs, bracket, iters, real_path,
                         feasibility_residual=feas, duality_gap=gap)
