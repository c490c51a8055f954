"""Weighted Vandermonde determinants in the log domain, and their maximizers.

The level-k basis is always the graded monomial stream restricted to the
level-k lattice; permuting it only flips the determinant's sign, which is
discarded.  Weight powers w^k are folded in as k * sum(log w) over the
chosen points, so the monomial matrix itself never under- or overflows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .body import ConvexBody, Exponent
from .errors import (
    BruteForceCapExceeded,
    InsufficientSupport,
    TooManyPoints,
    ValidationError,
)
from .mesh import Mesh, monomial_values


def log_abs_det(matrix) -> float:
    """log |det| by LU with partial pivoting, accumulating pivot magnitudes.

    Returns -inf exactly when a pivot vanishes (e.g. repeated points make
    two columns bitwise equal, so elimination cancels them exactly).
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 0.0
    total = 0.0
    for col in range(n):
        piv = int(np.argmax(np.abs(a[col:, col]))) + col
        pval = a[piv, col]
        if pval == 0:
            return -math.inf
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
        total += math.log(abs(pval))
        if col + 1 < n:
            a[col + 1:, col:] -= np.outer(a[col + 1:, col] / pval, a[col, col:])
    return total


def _batched_log_abs_det(stack: np.ndarray) -> np.ndarray:
    sign, ld = np.linalg.slogdet(stack)
    return np.where(sign == 0, -np.inf, ld)


@dataclass(frozen=True)
class VdmValue:
    """log |VDM| for one point selection at level k (s points, s <= M_k)."""

    log_abs: float
    point_indices: tuple[int, ...]
    k: int
    s: int


@dataclass(frozen=True)
class BruteForce:
    """Exhaustive scan of all M_k-subsets (exact); refuses above `cap` subsets."""

    cap: int = 2_000_000


@dataclass(frozen=True)
class Greedy:
    """Seeded greedy growth plus single-point exchange passes (lower bound).

    Restart r starts from the r-th highest-weight point, so runs are
    reproducible; `seed` is carried for config echo only.
    """

    restarts: int = 4
    seed: int = 0


@dataclass(frozen=True)
class MaxVdmResult:
    value: VdmValue
    exact: bool


def basis_exponents(body: ConvexBody, k: int) -> list[Exponent]:
    """The level-k monomial basis in graded order."""
    return body.lattice_points(k)


def vandermonde_det(mesh: Mesh, body: ConvexBody, k: int, point_indices) -> VdmValue:
    """log |det [w(zeta_l)^k z^(alpha_j)(zeta_l)]| for the first s basis monomials."""
    indices = tuple(int(i) for i in point_indices)
    basis = basis_exponents(body, k)
    s = len(indices)
    if s > len(basis):
        raise TooManyPoints(f"{s} points exceed the level-{k} dimension {len(basis)}")
    if len(set(indices)) < s:
        return VdmValue(-math.inf, indices, k, s)
    logw = mesh.log_weights[list(indices)]
    if k > 0 and not np.all(np.isfinite(logw)):
        return VdmValue(-math.inf, indices, k, s)
    mat = monomial_values(mesh.points[list(indices)], basis[:s])
    log_det = log_abs_det(mat)
    weight_term = float(k * logw.sum()) if k > 0 else 0.0
    return VdmValue(log_det + weight_term, indices, k, s)


def _support_data(mesh: Mesh, body: ConvexBody, k: int):
    basis = basis_exponents(body, k)
    m_k = len(basis)
    support = mesh.support
    if support.size < m_k:
        raise InsufficientSupport(
            f"need {m_k} positively weighted points, mesh has {support.size}"
        )
    z = monomial_values(mesh.points[support], basis)
    logw = mesh.log_weights[support]
    return basis, m_k, support, z, logw


def _brute_force(mesh, body, k, strategy: BruteForce):
    basis, m_k, support, z, logw = _support_data(mesh, body, k)
    ns = support.size
    n_subsets = math.comb(ns, m_k)
    if n_subsets > strategy.cap:
        raise BruteForceCapExceeded(
            f"C({ns},{m_k}) = {n_subsets} subsets exceed the cap {strategy.cap}"
        )
    chunk = max(1, int(2_000_000 / max(1, m_k * m_k)))
    best_val = -math.inf
    best_combo = None
    combos = itertools.combinations(range(ns), m_k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        cols = np.array(block)
        stack = z[:, cols].transpose(1, 0, 2)  # (chunk, m_k, m_k)
        lds = _batched_log_abs_det(stack)
        totals = lds + k * logw[cols].sum(axis=1)
        i = int(np.argmax(totals))
        if totals[i] > best_val:  # strict: lexicographically first subset wins ties
            best_val = float(totals[i])
            best_combo = block[i]
    indices = tuple(int(support[i]) for i in best_combo)
    return MaxVdmResult(VdmValue(best_val, indices, k, m_k), exact=True)


def _greedy_value(z, logw, k, sel) -> float:
    return log_abs_det(z[: len(sel), sel]) + float(k * logw[sel].sum())


def _greedy_grow(z, logw, k, start: int, m_k: int) -> list[int]:
    ns = z.shape[1]
    sel = [start]
    for s in range(1, m_k):
        cols = np.array(sel)
        try:
            y = np.linalg.solve(z[:s, cols].T, z[s, cols])
            with np.errstate(divide="ignore", invalid="ignore"):
                scores = np.log(np.abs(z[s] - y @ z[:s])) + k * logw
        except np.linalg.LinAlgError:
            # singular prefix: score candidates by the full bordered determinant
            trial = np.array([sel + [c] for c in range(ns)])
            stack = z[: s + 1][:, trial].transpose(1, 0, 2)
            scores = _batched_log_abs_det(stack) + k * logw[trial].sum(axis=1)
        scores[cols] = -np.inf
        scores[np.isnan(scores)] = -np.inf  # inf - inf residuals must not win the argmax
        sel.append(int(np.argmax(scores)))
    return sel


def _exchange_passes(z, logw, k, sel: list[int], m_k: int):
    ns = z.shape[1]
    val = _greedy_value(z, logw, k, sel)
    improved = True
    while improved:
        improved = False
        for pos in range(m_k):
            cands = np.array([c for c in range(ns) if c not in sel])
            if cands.size == 0:
                continue
            trials = np.tile(np.array(sel), (cands.size, 1))
            trials[:, pos] = cands
            stack = z[:m_k][:, trials].transpose(1, 0, 2)
            totals = _batched_log_abs_det(stack) + k * logw[trials].sum(axis=1)
            i = int(np.argmax(totals))
            if totals[i] > val + 1e-12:
                sel[pos] = int(cands[i])
                val = float(totals[i])
                improved = True
    return sel, val


def _greedy(mesh, body, k, strategy: Greedy):
    basis, m_k, support, z, logw = _support_data(mesh, body, k)
    ns = support.size
    seeds = sorted(range(ns), key=lambda i: (-logw[i], i))[: max(1, min(strategy.restarts, ns))]
    best_val = -math.inf
    best_sel = None
    for start in seeds:
        sel = _greedy_grow(z, logw, k, start, m_k)
        sel, val = _exchange_passes(z, logw, k, sel, m_k)
        if val > best_val:
            best_val = val
            best_sel = sel
    indices = tuple(int(support[i]) for i in best_sel)
    return MaxVdmResult(VdmValue(best_val, indices, k, m_k), exact=False)


def max_vdm(mesh: Mesh, body: ConvexBody, k: int, strategy=None) -> MaxVdmResult:
    """Maximize log |VDM| over M_k-point subsets of the mesh.

    BruteForce is exact (subject to its subset cap); Greedy returns a
    certified lower bound that in practice reaches the optimum on the
    mesh sizes this package targets.
    """
    if k < 1:
        raise ValidationError("max_vdm needs k >= 1")
    strategy = strategy if strategy is not None else Greedy()
    if isinstance(strategy, BruteForce):
        return _brute_force(mesh, body, k, strategy)
    if isinstance(strategy, Greedy):
        return _greedy(mesh, body, k, strategy)
    raise ValidationError(f"unknown strategy {strategy!r}")


def fekete_points(mesh: Mesh, body: ConvexBody, k: int, strategy=None) -> list[int]:
    """Mesh indices of the maximizing configuration from `max_vdm`."""
    return list(max_vdm(mesh, body, k, strategy).value.point_indices)


def strategy_from_config(raw) -> BruteForce | Greedy:
    """Strategy object from its config form {'kind': 'brute-force' | 'greedy', ...}."""
    if raw is None:
        return Greedy()
    if isinstance(raw, (BruteForce, Greedy)):
        return raw
    kind = raw.get("kind")
    if kind == "brute-force":
        return BruteForce(cap=int(raw.get("cap", BruteForce.cap)))
    if kind == "greedy":
        return Greedy(restarts=int(raw.get("restarts", Greedy.restarts)),
                      seed=int(raw.get("seed", Greedy.seed)))
    raise ValidationError(f"unknown strategy kind {kind!r}")


def fekete_to_dict(mesh: Mesh, result: MaxVdmResult) -> dict:
    """Structured-text form of a maximizer: k, log value, exactness, point coordinates."""
    pts = []
    for i in result.value.point_indices:
        row = []
        for zc in mesh.points[i]:
            row.extend([zc.real, zc.imag])
        pts.append(row)
    return {
        "k": result.value.k,
        "log_vdm": result.value.log_abs,
        "exact": result.exact,
        "points": pts,
    }
