"""Discrete Chebyshev constants, directional estimates, and the transform grid.

For a degree level k and a lattice exponent alpha, the monic class
consists of z^alpha plus arbitrary complex combinations of the strictly
preceding monomials inside the level-k lattice; the discrete constant
is the k-th root of the minimal weighted sup norm over the mesh.  Each
instance is one LP (`lp.solve_minimax`), exact on real meshes and
bracketed by the polygon factor otherwise.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .body import ConvexBody, Exponent, as_fraction, check_dagger
from .errors import DegenerateWeight, ThetaNotInterior, ValidationError
from .lp import solve_minimax
from .mesh import Mesh, Polynomial, monomial_values
from .order import CGREVLEX, GREVLEX, order_key


@dataclass
class ChebyshevRecord:
    """One solved monic min-max instance.

    log_nu is the log of the optimal weighted sup norm (i.e. k * log T_k);
    the true mesh optimum and the achieved norm of `coefficients` both lie
    in [log_nu, log_nu + log(bracket_factor)].
    """

    k: int
    alpha: Exponent
    ordering: str
    log_nu: float
    coefficients: Polynomial
    bracket_factor: float
    iterations: int
    real_path: bool

    @property
    def log_T(self) -> float:
        """log of the k-th root of the optimal norm."""
        return self.log_nu / self.k if self.k else self.log_nu

    @property
    def log_bracket_high(self) -> float:
        return self.log_nu + math.log(self.bracket_factor)


def lower_monomials(body: ConvexBody, k: int, alpha: Exponent, ordering: str) -> list[Exponent]:
    """Exponents in the level-k lattice strictly preceding alpha under `ordering`."""
    alpha = tuple(int(a) for a in alpha)
    if body.gauge(alpha) > k:
        raise ValidationError(f"alpha={alpha} lies outside level {k} (gauge {body.gauge(alpha)})")
    key = order_key(body, ordering)
    cut = key(alpha)
    return [beta for beta in body.lattice_points(k) if key(beta) < cut]


def chebyshev_constant(mesh: Mesh, body: ConvexBody, k: int, alpha: Exponent,
                       ordering: str = CGREVLEX, m_phases: int = 32) -> ChebyshevRecord:
    """Solve the monic min-max for (k, alpha) on the mesh."""
    alpha = tuple(int(a) for a in alpha)
    if mesh.dim != body.dim:
        raise ValidationError(f"mesh dimension {mesh.dim} != body dimension {body.dim}")
    support = mesh.support
    if support.size == 0:
        raise DegenerateWeight("no positively weighted mesh points")
    lower = lower_monomials(body, k, alpha, ordering)
    # the origin exponent precedes every other one in both orders, so only
    # alpha = 0 may have an empty class tail
    assert lower or alpha == (0,) * body.dim
    pts = mesh.points[support]
    low_vals = monomial_values(pts, lower) if lower else np.zeros((0, pts.shape[0]), dtype=complex)
    tgt_vals = monomial_values(pts, [alpha])[0]
    result = solve_minimax(low_vals, tgt_vals, k * mesh.log_weights[support], m_phases)
    terms = {alpha: 1.0 + 0.0j}
    for beta, c in zip(lower, result.coefficients):
        if c != 0:
            terms[beta] = c
    return ChebyshevRecord(
        k=k,
        alpha=alpha,
        ordering=ordering,
        log_nu=result.log_value,
        coefficients=Polynomial(terms),
        bracket_factor=result.bracket_factor,
        iterations=result.iterations,
        real_path=result.real_path,
    )


# ---------------------------------------------------------------------------
# Transform grid: every lattice exponent of one level, both orderings.
# ---------------------------------------------------------------------------

@dataclass
class TransformRow:
    alpha: Exponent
    theta: tuple[Fraction, ...]
    gauge: Fraction
    records: dict[str, ChebyshevRecord]
    errors: dict[str, str]


@dataclass
class TransformTable:
    k: int
    orderings: tuple[str, ...]
    rows: list[TransformRow]

    def log_T_values(self, ordering: str) -> list[float]:
        """Per-row log T_k for one ordering; failed rows are skipped."""
        return [row.records[ordering].log_T for row in self.rows if ordering in row.records]


def transform_grid(mesh: Mesh, body: ConvexBody, k: int,
                   orderings=(GREVLEX, CGREVLEX), m_phases: int = 32,
                   workers: int = 1) -> TransformTable:
    """One ChebyshevRecord per lattice exponent of level k per ordering.

    Rows whose solve fails are kept with the error message recorded, so
    the table is always returned whole.
    """
    if k < 1:
        raise ValidationError("transform grid needs k >= 1")
    alphas = body.lattice_points(k)
    orderings = tuple(orderings)
    tasks = [(alpha, ordering) for alpha in alphas for ordering in orderings]

    def solve(task):
        alpha, ordering = task
        try:
            return chebyshev_constant(mesh, body, k, alpha, ordering, m_phases)
        except Exception as exc:  # row-level isolation
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(solve, tasks))
    else:
        outcomes = [solve(t) for t in tasks]

    rows = []
    for i, alpha in enumerate(alphas):
        records: dict[str, ChebyshevRecord] = {}
        errors: dict[str, str] = {}
        for j, ordering in enumerate(orderings):
            out = outcomes[i * len(orderings) + j]
            if isinstance(out, ChebyshevRecord):
                records[ordering] = out
            else:
                errors[ordering] = f"{type(out).__name__}: {out}"
        rows.append(TransformRow(
            alpha=alpha,
            theta=tuple(Fraction(a, k) for a in alpha),
            gauge=body.gauge(alpha),
            records=records,
            errors=errors,
        ))
    return TransformTable(k=k, orderings=orderings, rows=rows)


def transform_to_csv(table: TransformTable, path):
    """Columns: alpha, theta components, gauge, logT per ordering, bracket of the graded value."""
    dim = len(table.rows[0].alpha) if table.rows else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["alpha"] + [f"theta_{i + 1}" for i in range(dim)] + ["gauge",
                  "logT_grevlex", "logT_C", "bracket_low", "bracket_high"]
        writer.writerow(header)
        for row in table.rows:
            rec_g = row.records.get(GREVLEX)
            rec_c = row.records.get(CGREVLEX)
            out = [" ".join(map(str, row.alpha))]
            out += [format(float(t), ".17g") for t in row.theta]
            out.append(format(float(row.gauge), ".17g"))
            out.append(format(rec_g.log_T, ".17g") if rec_g else "")
            out.append(format(rec_c.log_T, ".17g") if rec_c else "")
            ref = rec_c or rec_g
            out.append(format(ref.log_T, ".17g") if ref else "")
            out.append(format(ref.log_bracket_high / max(ref.k, 1), ".17g") if ref else "")
            writer.writerow(out)


# ---------------------------------------------------------------------------
# Directional estimates along a fixed interior direction.
# ---------------------------------------------------------------------------

@dataclass
class DirectionalStep:
    k: int
    alpha: Exponent
    log_T: float


@dataclass
class DirectionalResult:
    """Directional Chebyshev estimates for one interior theta, both orderings.

    error_proxy is the absolute difference of the last two iterates (not
    a bound; no extrapolation is attempted).  limit_guaranteed is False
    for the graded ordering when the leading-term stability check fails,
    in which case the value is still reported but the limit is heuristic.
    """

    theta: tuple[Fraction, ...]
    schedule: tuple[int, ...]
    steps: dict[str, list[DirectionalStep]]
    final: dict[str, float]
    error_proxy: dict[str, float]
    limit_guaranteed: dict[str, bool]
    dagger_verdict: str


def select_direction_exponent(body: ConvexBody, theta, k: int) -> Exponent:
    """Componentwise round of k*theta, repaired into the level-k lattice.

    Repair decrements the coordinate with the largest rounding fraction
    (lowest index on ties) until the gauge is at most k; any selection
    with alpha/k -> theta works, this one is deterministic.
    """
    theta = tuple(as_fraction(t) for t in theta)
    scaled = [k * t for t in theta]
    alpha = [math.floor(s + Fraction(1, 2)) for s in scaled]
    fracs = [s - math.floor(s) for s in scaled]
    while body.gauge(alpha) > k:
        candidates = [i for i, a in enumerate(alpha) if a >= 1]
        if not candidates:
            break
        i = min(candidates, key=lambda i: (-fracs[i], i))
        alpha[i] -= 1
    return tuple(alpha)


def directional_constant(mesh: Mesh, body: ConvexBody, theta, schedule,
                         orderings=(GREVLEX, CGREVLEX), m_phases: int = 32,
                         dagger_cap: int | None = None) -> DirectionalResult:
    """Estimate the directional constant T(theta) along increasing degree levels."""
    theta = tuple(as_fraction(t) for t in theta)
    if len(theta) != body.dim:
        raise ValidationError(f"theta has dimension {len(theta)}, body has {body.dim}")
    if any(t <= 0 for t in theta) or body.gauge(theta) >= 1:
        raise ThetaNotInterior(f"theta={theta} is not strictly inside the body")
    schedule = tuple(int(k) for k in schedule)
    if not schedule or any(k < 1 for k in schedule) or list(schedule) != sorted(set(schedule)):
        raise ValidationError("schedule must be a strictly increasing list of positive levels")

    dagger = check_dagger(body, dagger_cap if dagger_cap is not None else max(schedule))
    steps: dict[str, list[DirectionalStep]] = {o: [] for o in orderings}
    for k in schedule:
        alpha = select_direction_exponent(body, theta, k)
        for ordering in orderings:
            rec = chebyshev_constant(mesh, body, k, alpha, ordering, m_phases)
            steps[ordering].append(DirectionalStep(k=k, alpha=alpha, log_T=rec.log_T))
    final = {o: math.exp(s[-1].log_T) for o, s in steps.items()}
    proxy = {
        o: abs(math.exp(s[-1].log_T) - math.exp(s[-2].log_T)) if len(s) > 1 else math.inf
        for o, s in steps.items()
    }
    guaranteed = {
        o: (o == GREVLEX) or dagger.verdict != "violated" for o in orderings
    }
    return DirectionalResult(
        theta=theta,
        schedule=schedule,
        steps=steps,
        final=final,
        error_proxy=proxy,
        limit_guaranteed=guaranteed,
        dagger_verdict=dagger.verdict,
    )
