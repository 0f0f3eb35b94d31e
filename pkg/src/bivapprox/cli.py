"""Batch front-end.

    bivapprox run CONFIG.json [--tol T] [--p P] [--out DIR] [--jobs N]
    bivapprox catalog

Exit status: 0 success, 1 configuration or parse error, 2 a required
estimate did not converge (reports are still written), 3 evaluation domain
error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .approx import approx_A, midpoint_E, midpoint_F, remainder_B
from .bivariation import SMOOTH_QUADRATURE, total_bivariation
from .bounds import VARIATION_TOL, ac_bounds, linf_norm, lp_norm, variation_bound
from .catalog import list_catalog
from .domain import MAX_ORDER, DerivativeField, EvalPoint, Rectangle
from .expr import DomainError, ParseError
from .kernels import COROLLARY, MIDPOINT_VARIANTS, PROOF_CONSISTENT, SIGN_VARIANTS

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_DOMAIN = 0, 1, 2, 3
CSV_HEADER = ["x", "y", "n", "f", "A_n", "B_n", "residual", "var_bound_pt", "var_bound_global",
              "linf_bound", "lp_bound", "converged"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    function: str
    rectangle: tuple[float, float, float, float]
    n_values: tuple[int, ...]
    points: tuple
    p: float = 2.0
    tol: float = 1e-6
    sign_variant: str = PROOF_CONSISTENT
    midpoint_variant: str = COROLLARY
    outputs: str = "."

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = set(raw) - {"function", "rectangle", "n_values", "n", "points", "p", "tol",
                              "variants", "outputs"}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            function = raw["function"]
            rect = raw["rectangle"]
            points = raw.get("points", ["midpoint"])
        except KeyError as exc:
            raise ConfigError(f"missing configuration key {exc}") from None
        n_values = raw.get("n_values", raw.get("n", [0]))
        if not isinstance(function, str):
            raise ConfigError("'function' must be a string")
        if not (isinstance(rect, list) and len(rect) == 4):
            raise ConfigError("'rectangle' must be [a, b, c, d]")
        if not (isinstance(n_values, list) and n_values
                and all(isinstance(n, int) and 0 <= n and 2 * n + 2 <= MAX_ORDER for n in n_values)):
            raise ConfigError(f"'n_values' must be a non-empty list of integers in [0, {MAX_ORDER // 2 - 1}]")
        if not isinstance(points, list) or not points:
            raise ConfigError("'points' must be a non-empty list")
        variants = raw.get("variants", {})
        sign = variants.get("sign_variant", PROOF_CONSISTENT)
        mid = variants.get("midpoint_variant", COROLLARY)
        if sign not in SIGN_VARIANTS or mid not in MIDPOINT_VARIANTS:
            raise ConfigError(f"unknown variant in {variants}")
        p = float(raw.get("p", 2.0))
        tol = float(raw.get("tol", 1e-6))
        if not p > 1 or not tol > 0:
            raise ConfigError("need p > 1 and tol > 0")
        return cls(function, tuple(float(v) for v in rect), tuple(sorted(set(n_values))),
                   tuple(tuple(pt) if isinstance(pt, list) else pt for pt in points),
                   p, tol, sign, mid, str(raw.get("outputs", ".")))

    def to_dict(self) -> dict:
        return {"function": self.function, "rectangle": list(self.rectangle),
                "n_values": list(self.n_values),
                "points": [list(p) if isinstance(p, tuple) else p for p in self.points],
                "p": self.p, "tol": self.tol,
                "variants": {"sign_variant": self.sign_variant, "midpoint_variant": self.midpoint_variant},
                "outputs": self.outputs}


def expand_points(spec, Q: Rectangle) -> list[EvalPoint]:
    out = []
    for item in spec:
        if item == "midpoint":
            out.append(Q.midpoint)
        elif isinstance(item, str) and item.startswith("grid:"):
            try:
                k = int(item[5:])
            except ValueError:
                raise ConfigError(f"bad grid spec {item!r}") from None
            if k < 1:
                raise ConfigError(f"bad grid spec {item!r}")
            for i in range(1, k + 1):
                for j in range(1, k + 1):
                    out.append(EvalPoint(Q.a + i * Q.width / (k + 1), Q.c + j * Q.height / (k + 1)))
        elif isinstance(item, tuple) and len(item) == 2:
            pt = EvalPoint(float(item[0]), float(item[1]))
            if not Q.contains(pt.x, pt.y):
                raise ConfigError(f"point {list(item)} lies outside the rectangle")
            out.append(pt)
        else:
            raise ConfigError(f"bad point spec {item!r}")
    return out


@dataclass
class ReportRow:
    x: float
    y: float
    n: int
    f: float | None = None
    A_n: float | None = None
    B_n: float | None = None
    B_est_error: float | None = None
    residual: float | None = None
    var_bound_pt: float | None = None
    var_bound_global: float | None = None
    linf_bound: float | None = None
    lp_bound: float | None = None
    converged: bool = False
    advisory: bool = False
    sign_variant: str = PROOF_CONSISTENT
    midpoint_variant: str = COROLLARY
    E_M: float | None = None
    F_M: float | None = None
    midpoint_residual: float | None = None
    error: str | None = None


@dataclass
class OrderSummary:
    n: int
    variation: float | None = None
    variation_converged: bool = False
    linf_norm: float | None = None
    linf_converged: bool = False
    lp_norm: float | None = None
    lp_converged: bool = False
    error: str | None = None


@dataclass
class AuditReport:
    config: dict
    orders: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    exit_status: int = EXIT_OK

    def to_dict(self) -> dict:
        return {"config": self.config, "orders": [asdict(o) for o in self.orders],
                "rows": [asdict(r) for r in self.rows], "exit_status": self.exit_status}

    @classmethod
    def from_dict(cls, raw: dict) -> "AuditReport":
        return cls(raw["config"], [OrderSummary(**o) for o in raw["orders"]],
                   [ReportRow(**r) for r in raw["rows"]], raw["exit_status"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def load_report(path) -> AuditReport:
    return AuditReport.from_dict(json.loads(Path(path).read_text()))


def _num(v) -> str:
    return "" if v is None else format(v, ".17g")


def residuals_csv(report: AuditReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        writer.writerow([_num(r.x), _num(r.y), r.n, _num(r.f), _num(r.A_n), _num(r.B_n),
                         _num(r.residual), _num(r.var_bound_pt), _num(r.var_bound_global),
                         _num(r.linf_bound), _num(r.lp_bound), "true" if r.converged else "false"])
    return buf.getvalue()


def _order_summary(fld, n, Q, p):
    try:
        V = total_bivariation(fld, (n, n), Q, SMOOTH_QUADRATURE, tol=VARIATION_TOL)
        ninf = linf_norm(fld, (n + 1, n + 1), Q)
        nlp = lp_norm(fld, (n + 1, n + 1), Q, p)
    except DomainError as exc:
        return OrderSummary(n, error=f"DomainError: {exc}"), None
    summary = OrderSummary(n, float(V.value), bool(V.converged), float(ninf.value), bool(ninf.converged),
                           float(nlp.value), bool(nlp.converged))
    return summary, (V, (ninf, nlp))


def _row(fld, cfg, Q, point, n, summary, cache):
    row = ReportRow(point.x, point.y, n, sign_variant=cfg.sign_variant,
                    midpoint_variant=cfg.midpoint_variant)
    if cache is None:
        row.error = summary.error
        return row
    V, norms = cache
    try:
        f = float(fld(point.x, point.y))
        A = approx_A(fld, n, point, Q)
        B = remainder_B(fld, n, point, Q, cfg.tol, sign_variant=cfg.sign_variant)
        row.f, row.A_n, row.B_n, row.B_est_error = f, A, B.value, B.est_error
        row.residual = (f - A) - B.value
        row.var_bound_pt, row.var_bound_global = variation_bound(fld, n, point, Q, V)
        row.linf_bound, row.lp_bound = ac_bounds(fld, n, point, Q, cfg.p, norms)
        row.advisory = not (V.converged and norms[0].converged and norms[1].converged)
        converged = B.converged
        if point == Q.midpoint:
            row.E_M = midpoint_E(fld, n, Q)
            F = midpoint_F(fld, n, Q, cfg.tol, cfg.midpoint_variant)
            row.F_M = F.value
            row.midpoint_residual = (f - row.E_M) - F.value
            converged = converged and F.converged
        row.advisory = bool(row.advisory)
        row.converged = bool(converged and not row.advisory)
    except DomainError as exc:
        row.error = f"DomainError: {exc}"
    return row


def run(cfg: RunConfig, out_dir=None, jobs: int = 1) -> tuple[int, AuditReport]:
    """Execute ``cfg`` and write report.json and residuals.csv into the output directory."""
    try:
        fld = DerivativeField.from_source(cfg.function)
        Q = Rectangle(*cfg.rectangle)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    points = expand_points(cfg.points, Q)
    report = AuditReport(cfg.to_dict())
    caches = {}
    for n in cfg.n_values:
        summary, cache = _order_summary(fld, n, Q, cfg.p)
        report.orders.append(summary)
        caches[n] = (summary, cache)
    cells = [(pt, n) for pt in points for n in cfg.n_values]

    def work(cell):
        pt, n = cell
        return _row(fld, cfg, Q, pt, n, *caches[n])

    if jobs <= 1:
        report.rows = [work(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            report.rows = list(pool.map(work, cells))

    if any(r.error for r in report.rows) or any(o.error for o in report.orders):
        status = EXIT_DOMAIN
    elif not all(r.converged for r in report.rows):
        status = EXIT_NONCONVERGED
    else:
        status = EXIT_OK
    report.exit_status = status
    out = Path(out_dir if out_dir is not None else cfg.outputs)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json())
    (out / "residuals.csv").write_text(residuals_csv(report))
    return status, report


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig.from_dict(raw)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bivapprox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an audit configuration")
    p_run.add_argument("config")
    p_run.add_argument("--tol", type=float)
    p_run.add_argument("--p", type=float)
    p_run.add_argument("--out")
    p_run.add_argument("--jobs", type=int, default=1, help="worker threads for (point, n) cells")
    sub.add_parser("catalog", help="list the built-in test functions")
    args = parser.parse_args(argv)

    if args.command == "catalog":
        print(list_catalog())
        return EXIT_OK
    try:
        cfg = load_config(args.config)
        overrides = {k: v for k, v in (("tol", args.tol), ("p", args.p)) if v is not None}
        if overrides:
            raw = cfg.to_dict()
            raw.update(overrides)
            cfg = RunConfig.from_dict(raw)
        status, _ = run(cfg, args.out, args.jobs)
    except ParseError as exc:
        print(f"error: cannot parse function: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
