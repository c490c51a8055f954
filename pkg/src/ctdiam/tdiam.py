"""Transfinite-diameter estimates and the per-level consistency report.

Two routes are assembled side by side.  The determinant route reads the
maximal Vandermonde value V_k and normalizes it two ways: the k-th order
diameter V_k^(1/L_k) and the size estimate D = V_k^(1/(k M_k)).  The
transform route averages the per-exponent Chebyshev logs over the
level-k lattice; the factorial sandwich
    prod T^k <= V_k <= M_k! * prod T^k
pins the two routes together within log(M_k!)/(k M_k) whenever V_k is
exact, which is also why the determinant route carries a finite-k bias
of that size.  The final length-scaled diameter is D ** (1/A) with A the
volume-averaged coordinate sum of the body.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .body import ConvexBody, as_fraction, average_total_degree, body_quadrature, check_dagger
from .cheb import TransformTable, transform_grid
from .errors import InsufficientSupport, ValidationError
from .leja import leja_diameter
from .mesh import Mesh
from .order import CGREVLEX, GREVLEX
from .vdm import Greedy, MaxVdmResult, max_vdm, strategy_from_config


def delta_k(mesh: Mesh, body: ConvexBody, k: int, strategy=None) -> float:
    """k-th order diameter: max |VDM| to the power 1/L_k."""
    result = max_vdm(mesh, body, k, strategy)
    _, _, l_k = body.counts(k)
    return math.exp(result.value.log_abs / l_k)


def d_estimate_vdm(mesh: Mesh, body: ConvexBody, k: int, strategy=None) -> float:
    """Size estimate from the determinant route: max |VDM| to the power 1/(k M_k)."""
    result = max_vdm(mesh, body, k, strategy)
    m_k, _, _ = body.counts(k)
    return math.exp(result.value.log_abs / (k * m_k))


def transform_mean_log(table: TransformTable, ordering: str) -> float:
    """Mean over the level lattice of log T_k; requires every row solved."""
    values = table.log_T_values(ordering)
    if len(values) != len(table.rows):
        failed = [row.alpha for row in table.rows if ordering not in row.records]
        raise ValidationError(f"transform rows failed for {ordering}: {failed}")
    finite = [v for v in values if not math.isinf(v)]
    if len(finite) < len(values):
        return -math.inf
    return float(np.mean(values))


def d_estimate_transform(mesh: Mesh, body: ConvexBody, k: int, ordering: str = CGREVLEX,
                         m_phases: int = 32, workers: int = 1,
                         method: str = "lattice-average",
                         resolution=Fraction(1, 32), subsamples: int = 32,
                         table: TransformTable | None = None) -> float:
    """Size estimate from the Chebyshev route.

    'lattice-average' exponentiates the mean of log T_k over the level-k
    lattice (the quantity the factorial sandwich controls directly).
    'cell-quadrature' integrates the piecewise-constant transform over
    the 1/k-cell grid, dropping boundary cells; useful as a cross-check
    once k is large enough for interior cells to exist.
    """
    if table is None:
        table = transform_grid(mesh, body, k, orderings=(ordering,), m_phases=m_phases,
                               workers=workers)
    if method == "lattice-average":
        return math.exp(transform_mean_log(table, ordering))
    if method == "cell-quadrature":
        volume, _ = body_quadrature(body, resolution, subsamples)
        half = Fraction(1, 2 * k)
        total = 0.0
        cell_vol = (1.0 / k) ** body.dim
        for row in table.rows:
            if ordering not in row.records:
                raise ValidationError(f"transform row failed for {row.alpha}")
            if _cell_strictly_interior(body, row.alpha, k, half):
                total += row.records[ordering].log_T * cell_vol
        return math.exp(total / volume)
    raise ValidationError(f"unknown transform method {method!r}")


def _cell_strictly_interior(body: ConvexBody, alpha, k: int, half: Fraction) -> bool:
    lo = [Fraction(a, k) - half for a in alpha]
    hi = [Fraction(a, k) + half for a in alpha]
    if any(l <= 0 for l in lo):
        return False
    for a, b in body.halfspaces:
        mx = sum((aj * (h if aj > 0 else l) for aj, l, h in zip(a, lo, hi)), Fraction(0))
        if mx >= b:
            return False
    return True


def final_delta(mesh: Mesh, body: ConvexBody, k: int, strategy=None, route: str = "vdm",
                m_phases: int = 32, workers: int = 1,
                resolution=Fraction(1, 32), subsamples: int = 32):
    """Length-scaled diameter estimate D ** (1/A) plus its report row."""
    options = ReportOptions(strategy=strategy if strategy is not None else Greedy(),
                            m_phases=m_phases, workers=workers,
                            resolution=as_fraction(resolution), subsamples=subsamples,
                            include_leja=False)
    report = build_report(mesh, body, k, options)
    row = report.rows[-1]
    if route == "vdm":
        d_value = row.d_vdm
    elif route == "transform":
        d_value = row.d_transform.get(CGREVLEX)
    else:
        raise ValidationError(f"unknown route {route!r}")
    if d_value is None:
        raise ValidationError(f"route {route} unavailable: {row.errors}")
    return d_value ** (1.0 / report.a_n), row


@dataclass
class ReportOptions:
    strategy: object = field(default_factory=Greedy)
    orderings: tuple[str, ...] = (GREVLEX, CGREVLEX)
    m_phases: int = 32
    include_leja: bool = False
    resolution: Fraction = Fraction(1, 32)
    subsamples: int = 32
    workers: int = 1
    transform_method: str = "lattice-average"


@dataclass
class ReportRow:
    k: int
    m_k: int
    h_k: int
    l_k: int
    log_vdm: float | None
    exact: bool | None
    delta: float | None
    d_vdm: float | None
    d_transform: dict[str, float]
    leja_value: float | None
    sandwich_consistent: bool | None
    errors: dict[str, str]


@dataclass
class DiameterReport:
    rows: list[ReportRow]
    a_n: float
    dagger_verdict: str
    final_delta_vdm: float | None
    final_delta_transform: float | None
    mesh_provenance: str
    options: ReportOptions


def build_report(mesh: Mesh, body: ConvexBody, k_max: int, options: ReportOptions | None = None) -> DiameterReport:
    """Assemble per-level rows for k = 1..k_max; row-level failures never abort."""
    if k_max < 1:
        raise ValidationError("k_max must be >= 1")
    m_1, _, _ = body.counts(1)
    if mesh.support.size < m_1:
        raise InsufficientSupport(
            f"mesh supports {mesh.support.size} points; even level 1 needs {m_1}"
        )
    options = options or ReportOptions()
    strategy = strategy_from_config(options.strategy)
    dagger = check_dagger(body, k_max)
    a_n = average_total_degree(body, options.resolution, options.subsamples)

    leja_rows = {}
    leja_error = None
    if options.include_leja:
        try:
            leja_report = leja_diameter(mesh, body, k_max)
            leja_rows = {r.k: r.value for r in leja_report.rows}
        except Exception as exc:
            leja_error = f"{type(exc).__name__}: {exc}"

    rows = []
    for k in range(1, k_max + 1):
        m_k, h_k, l_k = body.counts(k)
        errors: dict[str, str] = {}
        if leja_error:
            errors["leja"] = leja_error
        log_vdm = exact = delta = d_vdm = None
        try:
            result: MaxVdmResult = max_vdm(mesh, body, k, strategy)
            log_vdm = result.value.log_abs
            exact = result.exact
            delta = math.exp(log_vdm / l_k)
            d_vdm = math.exp(log_vdm / (k * m_k))
        except Exception as exc:
            errors["vdm"] = f"{type(exc).__name__}: {exc}"
        d_transform: dict[str, float] = {}
        sum_log_nu: dict[str, float] = {}
        try:
            table = transform_grid(mesh, body, k, orderings=options.orderings,
                                   m_phases=options.m_phases, workers=options.workers)
            for ordering in options.orderings:
                try:
                    mean_log = transform_mean_log(table, ordering)
                    d_transform[ordering] = math.exp(mean_log)
                    sum_log_nu[ordering] = mean_log * k * m_k
                except ValidationError as exc:
                    errors[f"transform:{ordering}"] = str(exc)
        except Exception as exc:
            errors["transform"] = f"{type(exc).__name__}: {exc}"
        sandwich = None
        if exact and CGREVLEX in sum_log_nu and math.isfinite(log_vdm):
            slack = 1e-6 * m_k
            lo = sum_log_nu[CGREVLEX]
            sandwich = (lo - slack <= log_vdm <= lo + math.lgamma(m_k + 1) + slack)
        rows.append(ReportRow(k=k, m_k=m_k, h_k=h_k, l_k=l_k, log_vdm=log_vdm,
                              exact=exact, delta=delta, d_vdm=d_vdm,
                              d_transform=d_transform, leja_value=leja_rows.get(k),
                              sandwich_consistent=sandwich, errors=errors))

    last = rows[-1]
    fd_vdm = last.d_vdm ** (1.0 / a_n) if last.d_vdm is not None else None
    d_tr = last.d_transform.get(CGREVLEX)
    fd_tr = d_tr ** (1.0 / a_n) if d_tr is not None else None
    return DiameterReport(rows=rows, a_n=a_n, dagger_verdict=dagger.verdict,
                          final_delta_vdm=fd_vdm, final_delta_transform=fd_tr,
                          mesh_provenance=mesh.provenance, options=options)


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    return format(value, ".17g")


def report_to_csv(report: DiameterReport, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "M_k", "h_k", "L_k", "logV", "exact", "delta_k", "D_vdm",
                         "D_transform_C", "D_transform_grevlex", "leja_value"])
        for r in report.rows:
            writer.writerow([
                r.k, r.m_k, r.h_k, r.l_k, _fmt(r.log_vdm),
                "" if r.exact is None else str(r.exact).lower(),
                _fmt(r.delta), _fmt(r.d_vdm),
                _fmt(r.d_transform.get(CGREVLEX)), _fmt(r.d_transform.get(GREVLEX)),
                _fmt(r.leja_value),
            ])


def json_safe(obj):
    """Recursively convert report objects to JSON-serializable values.

    Non-finite floats become strings so the output stays standard JSON;
    fractions are serialized exactly as 'p/q' strings.
    """
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj).replace("np.", "")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {name: json_safe(getattr(obj, name)) for name in obj.__dataclass_fields__}
    return obj


def report_to_json(report: DiameterReport, path, config_echo: dict | None = None):
    payload = {
        "a_n": report.a_n,
        "dagger_verdict": report.dagger_verdict,
        "final_delta_vdm": json_safe(report.final_delta_vdm),
        "final_delta_transform": json_safe(report.final_delta_transform),
        "mesh": report.mesh_provenance,
        "rows": [json_safe(r) for r in report.rows],
        "options": json_safe(report.options),
    }
    if config_echo is not None:
        payload["config"] = json_safe(config_echo)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
