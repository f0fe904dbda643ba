"""Command-line front end: config parsing, run orchestration, serialization.

Configs are single JSON files with fixed key paths (unknown keys are
rejected, so typos fail fast).  Fields travel as CSV with header
``t1,...,tp,u1,...,un``, one row per node in lexicographic node order and
17 significant digits, which round-trips float64 exactly; the optional
closed form repeats the wrap faces (N_alpha + 1 rows per axis) for
interchange with external producers.  Run reports are JSON with sorted
keys; identical config and seed reproduce them byte-for-byte except for
the single isolated ``timestamp`` field.

Exit codes: 0 success/converged, 2 not converged or failed checks,
3 invalid config or malformed input, 4 expression error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .action import PotentialDomainError
from .expr import ExprError, ExpressionPotential, line_col
from .grid import Field, GridSpec, l2_norm, mean, solve_linear_poisson
from .potential import (
    CheckReport,
    CosineLattice,
    GrowthEnvelope,
    LinearForcing,
    Potential,
    SampleSpec,
    ShiftedQuadratic,
    check_grad_consistency,
    check_gradient_growth,
    check_periodicity,
    check_positivity,
)
from .solver import SolverConfig, check_minimizing_bounds, minimize, random_init
from .verify import certify

__all__ = ["ConfigError", "FormatError", "main", "console_main"]

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_BAD_CONFIG = 3
EXIT_BAD_EXPR = 4

THREADS_ENV = "POISSON_GRAD_THREADS"

CHECK_NAMES = ("periodicity", "positivity", "gradient_growth", "grad_consistency")


class ConfigError(ValueError):
    """Invalid or malformed run configuration."""


class FormatError(ValueError):
    """Malformed field CSV."""


# ---------------------------------------------------------------------------
# config schema

_SECTIONS = {
    "grid": {"p", "n", "extents", "nodes"},
    "potential": {
        "kind",
        "amplitudes",
        "periods",
        "floor",
        "modulation",
        "modulation_axis",
        "center",
        "forcing_csv",
        "expr",
        "positive",
        "growth",
    },
    "init": {"kind", "value", "seed", "path"},
    "solver": {
        "method",
        "max_iters",
        "tol_residual",
        "tol_action",
        "armijo_c1",
        "backtrack_factor",
        "initial_step",
        "canonicalize_every",
        "rng_seed",
    },
    "output": {"field_csv", "closed_csv", "report_json"},
    "checks": {"names", "samples", "seed", "x_radius"},
}

_GROWTH_KEYS = {"m", "g_max", "a0", "a_slope", "b_max"}


def load_config(path: str | Path) -> dict:
    """Read and structurally validate a run config."""
    try:
        raw = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from err
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    for section, body in cfg.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section {section!r}")
        if not isinstance(body, dict):
            raise ConfigError(f"section {section!r} must be an object")
        for key in body:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
    growth = cfg.get("potential", {}).get("growth")
    if growth is not None:
        if not isinstance(growth, dict):
            raise ConfigError("potential.growth must be an object")
        for key in growth:
            if key not in _GROWTH_KEYS:
                raise ConfigError(f"unknown config key potential.growth.{key}")
    for section in ("grid", "potential"):
        if section not in cfg:
            raise ConfigError(f"config section {section!r} is required")
    return cfg


def _need(section: dict, key: str, path: str):
    if key not in section:
        raise ConfigError(f"missing config key {path}")
    return section[key]


def _floats(value, path: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{path} must be a non-empty array of numbers")
    try:
        return [float(v) for v in value]
    except (TypeError, ValueError) as err:
        raise ConfigError(f"{path} must contain numbers: {err}") from err


def build_grid(cfg: dict) -> GridSpec:
    g = cfg["grid"]
    p = int(_need(g, "p", "grid.p"))
    n = int(_need(g, "n", "grid.n"))
    extents = _floats(_need(g, "extents", "grid.extents"), "grid.extents")
    nodes = _need(g, "nodes", "grid.nodes")
    if not isinstance(nodes, (list, tuple)):
        raise ConfigError("grid.nodes must be an array of integers")
    if len(extents) != p or len(nodes) != p:
        raise ConfigError(
            f"grid.extents and grid.nodes must have length grid.p = {p}"
        )
    try:
        return GridSpec(tuple(extents), tuple(int(k) for k in nodes), n=n)
    except ValueError as err:
        raise ConfigError(f"invalid grid: {err}") from err


def _growth_from(cfg_growth: dict) -> GrowthEnvelope:
    try:
        return GrowthEnvelope(**{k: float(v) for k, v in cfg_growth.items()})
    except ValueError as err:
        raise ConfigError(f"invalid potential.growth: {err}") from err


def build_potential(cfg: dict, spec: GridSpec) -> Potential:
    pot = cfg["potential"]
    kind = _need(pot, "kind", "potential.kind")
    if kind == "cosine":
        periods = _floats(_need(pot, "periods", "potential.periods"), "potential.periods")
        if len(periods) != spec.n:
            raise ConfigError(f"potential.periods must have length grid.n = {spec.n}")
        amplitudes = _floats(
            pot.get("amplitudes", [1.0] * spec.n), "potential.amplitudes"
        )
        if len(amplitudes) != spec.n:
            raise ConfigError(f"potential.amplitudes must have length grid.n = {spec.n}")
        axis = int(pot.get("modulation_axis", 0))
        if not 0 <= axis < spec.p:
            raise ConfigError(f"potential.modulation_axis out of range for p = {spec.p}")
        try:
            return CosineLattice(
                amplitudes,
                periods,
                floor=float(pot.get("floor", 0.1)),
                modulation=float(pot.get("modulation", 0.0)),
                mod_axis=axis,
                mod_extent=spec.extents[axis],
                p=spec.p,
            )
        except ValueError as err:
            raise ConfigError(f"invalid cosine potential: {err}") from err
    if kind == "quadratic":
        center = _floats(_need(pot, "center", "potential.center"), "potential.center")
        if len(center) != spec.n:
            raise ConfigError(f"potential.center must have length grid.n = {spec.n}")
        try:
            quad = ShiftedQuadratic(center, floor=float(pot.get("floor", 1.0)), p=spec.p)
        except ValueError as err:
            raise ConfigError(f"invalid quadratic potential: {err}") from err
        declared = pot.get("periods")
        if declared is not None:
            # a periodicity *claim*, not a property: the check command will
            # falsify it by sampling
            declared = _floats(declared, "potential.periods")
            if len(declared) != spec.n:
                raise ConfigError(f"potential.periods must have length grid.n = {spec.n}")
            quad.periods = np.asarray(declared)
        return quad
    if kind == "linear":
        path = _need(pot, "forcing_csv", "potential.forcing_csv")
        if not Path(path).exists():
            raise ConfigError(f"potential.forcing_csv does not exist: {path}")
        forcing, closed = read_field_csv(path, spec)
        if closed:
            raise ConfigError("potential.forcing_csv must be an open (wrapped) field CSV")
        return LinearForcing(forcing)
    if kind == "expr":
        source = _need(pot, "expr", "potential.expr")
        periods = pot.get("periods")
        if periods is not None:
            periods = _floats(periods, "potential.periods")
            if len(periods) != spec.n:
                raise ConfigError(f"potential.periods must have length grid.n = {spec.n}")
        growth = pot.get("growth")
        return ExpressionPotential(
            source,
            spec.p,
            spec.n,
            periods=periods,
            positivity_claim=bool(pot.get("positive", False)),
            growth=None if growth is None else _growth_from(growth),
        )
    raise ConfigError(
        f"potential.kind must be cosine|quadratic|linear|expr, got {kind!r}"
    )


def build_solver_config(cfg: dict, seed_override: int | None) -> SolverConfig:
    s = dict(cfg.get("solver", {}))
    if seed_override is not None:
        s["rng_seed"] = seed_override
    try:
        return SolverConfig(**s)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid solver config: {err}") from err


def build_init(cfg: dict, spec: GridSpec, pot: Potential, seed_override: int | None) -> Field:
    init = cfg.get("init", {"kind": "random"})
    kind = init.get("kind", "random")
    if kind == "constant":
        value = _need(init, "value", "init.value")
        vec = np.atleast_1d(np.asarray(value, dtype=np.float64))
        if vec.size not in (1, spec.n):
            raise ConfigError(f"init.value must be a scalar or length {spec.n}")
        return Field.constant(spec, vec if vec.size == spec.n else vec[0])
    if kind == "random":
        seed = int(init.get("seed", cfg.get("solver", {}).get("rng_seed", 0)))
        if seed_override is not None:
            seed = seed_override
        return random_init(spec, periods=pot.periods, seed=seed)
    if kind == "csv":
        path = _need(init, "path", "init.path")
        if not Path(path).exists():
            raise ConfigError(f"init.path does not exist: {path}")
        field, closed = read_field_csv(path, spec)
        if closed:
            raise ConfigError("init.path must be an open (wrapped) field CSV")
        return field
    raise ConfigError(f"init.kind must be constant|random|csv, got {kind!r}")


def build_sampler(cfg: dict, spec: GridSpec) -> SampleSpec:
    checks = cfg.get("checks", {})
    return SampleSpec(
        count=int(checks.get("samples", 1000)),
        seed=int(checks.get("seed", 0)),
        t_extents=spec.extents,
        x_radius=float(checks.get("x_radius", 8.0)),
    )


def threads_cap() -> int | None:
    """Validated POISSON_GRAD_THREADS value; evaluation itself is a single
    vectorized process, so any cap >= 1 is trivially honored."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return None
    try:
        cap = int(raw)
    except ValueError as err:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from err
    if cap < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {cap}")
    return cap


# ---------------------------------------------------------------------------
# field CSV

def _header(spec: GridSpec) -> str:
    return ",".join(
        [f"t{a + 1}" for a in range(spec.p)] + [f"u{i + 1}" for i in range(spec.n)]
    )


def write_field_csv(path: str | Path, field: Field, closed: bool = False) -> None:
    """Write a field as CSV; 17 significant digits round-trip float64 exactly."""
    spec = field.spec
    values = field.closed_values() if closed else field.values
    shape = values.shape[:-1]
    lines = [_header(spec)]
    for idx in np.ndindex(*shape):
        coords = [k * h for k, h in zip(idx, spec.spacings)]
        row = list(coords) + [values[idx + (i,)] for i in range(spec.n)]
        lines.append(",".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_field_csv(path: str | Path, spec: GridSpec) -> tuple[Field | np.ndarray, bool]:
    """Read a field CSV against a grid.

    Returns ``(Field, False)`` for the open form (N_alpha rows per axis) or
    ``(values, True)`` for the closed form (N_alpha + 1 rows per axis, wrap
    faces duplicated).  Node order, column count, and node coordinates are
    all validated; any mismatch raises FormatError.
    """
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise FormatError(f"cannot read field CSV {path}: {err}") from err
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != _header(spec):
        raise FormatError(
            f"field CSV {path} must start with header {_header(spec)!r}"
        )
    try:
        data = np.array(
            [[float(cell) for cell in ln.split(",")] for ln in lines[1:]],
            dtype=np.float64,
        )
    except ValueError as err:
        raise FormatError(f"field CSV {path} has a malformed row: {err}") from err
    if data.ndim != 2 or data.shape[1] != spec.p + spec.n:
        raise FormatError(
            f"field CSV {path} must have {spec.p + spec.n} columns"
        )
    open_rows = spec.node_count
    closed_rows = math.prod(k + 1 for k in spec.nodes)
    if data.shape[0] == open_rows:
        closed = False
        shape = spec.nodes
    elif data.shape[0] == closed_rows:
        closed = True
        shape = tuple(k + 1 for k in spec.nodes)
    else:
        raise FormatError(
            f"field CSV {path} has {data.shape[0]} rows; expected {open_rows} "
            f"(open) or {closed_rows} (closed) for grid {spec.nodes}"
        )
    coords = data[:, : spec.p].reshape(shape + (spec.p,))
    expected = np.stack(
        np.meshgrid(
            *(h * np.arange(k) for h, k in zip(spec.spacings, shape)), indexing="ij"
        ),
        axis=-1,
    )
    tol = 1e-9 * (1.0 + max(spec.extents))
    if np.max(np.abs(coords - expected)) > tol:
        raise FormatError(
            f"field CSV {path} node coordinates do not match the configured grid"
        )
    values = data[:, spec.p :].reshape(shape + (spec.n,))
    if closed:
        return values, True
    return Field(spec, values), False


# ---------------------------------------------------------------------------
# report JSON

def _finite_or_none(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def _check_dict(report: CheckReport) -> dict:
    return {
        "name": report.name,
        "passed": report.passed,
        "samples": report.samples,
        "worst": _finite_or_none(report.worst),
        "threshold": report.threshold,
        "detail": report.detail,
    }


def _audit_dict(audit) -> dict:
    def one(result):
        return {
            "passed": result.passed,
            "worst_margin": _finite_or_none(result.worst),
            "note": result.note,
        }

    return {
        "energy_descent": one(audit.energy),
        "wirtinger": one(audit.wirtinger),
        "mean_in_cell": one(audit.mean_cell),
        "f_floor": audit.f_floor,
        "all_passed": audit.all_passed,
    }


def _certificate_dict(cert) -> dict:
    out = {
        "residual_l2": cert.residual_l2,
        "residual_linf": cert.residual_linf,
        "residual_tol": cert.residual_tol,
        "residual_ok": cert.residual_ok,
        "wirtinger": {
            "lhs": cert.wirtinger.lhs,
            "rhs": cert.wirtinger.rhs,
            "constant": cert.wirtinger.constant,
            "passed": cert.wirtinger.passed,
        },
    }
    if cert.boundary is not None:
        out["boundary"] = {
            "threshold": cert.boundary.threshold,
            "passed": cert.boundary.passed,
            "axes": [
                {
                    "axis": ax.axis,
                    "value_mismatch": ax.value_mismatch,
                    "quotient_mismatch": ax.quotient_mismatch,
                }
                for ax in cert.boundary.axes
            ],
        }
    return out


def write_report(path: str | Path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n")


# ---------------------------------------------------------------------------
# commands

def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def run_checks(
    pot: Potential, sampler: SampleSpec, names
) -> tuple[list[CheckReport], list[str]]:
    """Run the requested hypothesis checks; unrunnable ones become notes."""
    reports: list[CheckReport] = []
    notes: list[str] = []
    for name in names:
        if name == "periodicity":
            if pot.periods is None:
                notes.append("periodicity: skipped, no periods declared")
                continue
            reports.append(check_periodicity(pot, sampler))
        elif name == "positivity":
            reports.append(check_positivity(pot, sampler))
        elif name == "gradient_growth":
            if pot.growth is None:
                notes.append("gradient_growth: skipped, no growth envelope declared")
                continue
            reports.append(check_gradient_growth(pot, pot.growth, sampler))
        elif name == "grad_consistency":
            reports.append(check_grad_consistency(pot, sampler))
        else:
            raise ConfigError(f"unknown check name {name!r}")
    return reports, notes


def _requested_checks(cfg: dict):
    names = cfg.get("checks", {}).get("names", list(CHECK_NAMES))
    if not isinstance(names, (list, tuple)):
        raise ConfigError("checks.names must be an array of check names")
    for name in names:
        if name not in CHECK_NAMES:
            raise ConfigError(f"unknown check name {name!r}")
    return names


def _positivity_floor(pot: Potential, sampler: SampleSpec) -> float:
    report = check_positivity(pot, sampler)
    return 0.0 if report.passed else min(0.0, report.worst)


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    threads = threads_cap()
    spec = build_grid(cfg)
    pot = build_potential(cfg, spec)
    sampler = build_sampler(cfg, spec)
    solver_cfg = build_solver_config(cfg, args.seed)
    init = build_init(cfg, spec, pot, args.seed)

    checks, notes = run_checks(pot, sampler, _requested_checks(cfg))
    failed = [c.name for c in checks if not c.passed]
    for c in checks:
        _say(args, str(c))
    for note in notes:
        _say(args, note)
    if failed:
        print(
            f"warning: hypothesis checks failed: {', '.join(failed)}", file=sys.stderr
        )
        if args.strict:
            print("aborting (--strict)", file=sys.stderr)
            return EXIT_NOT_CONVERGED

    final, report = minimize(pot, init, solver_cfg)
    audit = check_minimizing_bounds(
        report, spec, f_floor=_positivity_floor(pot, sampler)
    )
    cert = certify(final, pot, solver_cfg.tol_residual)

    out = cfg.get("output", {})
    field_csv = out.get("field_csv", "field.csv")
    report_json = out.get("report_json", "report.json")
    write_field_csv(field_csv, final)
    if out.get("closed_csv", False):
        closed_path = str(field_csv)
        closed_path = (
            closed_path[: -len(".csv")] + ".closed.csv"
            if closed_path.endswith(".csv")
            else closed_path + ".closed"
        )
        write_field_csv(closed_path, final, closed=True)
        _say(args, f"wrote closed field to {closed_path}")

    payload = {
        "schema": "poisson-grad-report-v1",
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "command": "solve",
        "config": cfg,
        "seed": args.seed,
        "threads": threads,
        "checks": [_check_dict(c) for c in checks],
        "check_notes": notes,
        "status": report.status,
        "iterations": [r.to_dict() for r in report.iterations],
        "final": {
            "action_total": report.final.action_total,
            "action_kinetic": report.final.action_kinetic,
            "action_potential": report.final.action_potential,
            "residual_l2": report.final.residual_l2,
            "mean": list(report.final.mean),
            "tilde_norm": report.final.tilde_norm,
        },
        "bound_audit": _audit_dict(audit),
        "certificate": _certificate_dict(cert),
        "assumptions": {
            "potential_term_weak_lower_semicontinuity": (
                "assumed; has no finite-grid test"
            )
        },
    }
    write_report(report_json, payload)

    _say(
        args,
        f"status={report.status} iters={report.final.index} "
        f"action={report.final.action_total:.12g} "
        f"residual={report.final.residual_l2:.3e} "
        f"audit={'pass' if audit.all_passed else 'FAIL'}",
    )
    _say(args, f"wrote field to {field_csv} and report to {report_json}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_check(args) -> int:
    cfg = load_config(args.config)
    spec = build_grid(cfg)
    pot = build_potential(cfg, spec)
    sampler = build_sampler(cfg, spec)
    checks, notes = run_checks(pot, sampler, _requested_checks(cfg))
    for c in checks:
        _say(args, str(c))
    for note in notes:
        _say(args, note)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NOT_CONVERGED


def cmd_residual(args) -> int:
    cfg = load_config(args.config)
    spec = build_grid(cfg)
    pot = build_potential(cfg, spec)
    tol = build_solver_config(cfg, None).tol_residual
    loaded, closed = read_field_csv(args.field_csv, spec)
    if closed:
        closed_values = loaded
        interior = closed_values[tuple(slice(0, k) for k in spec.nodes)]
        field = Field(spec, interior)
        cert = certify(field, pot, tol, closed=closed_values)
    else:
        field = loaded
        cert = certify(field, pot, tol, closed=boundary_data(field))
    _say(
        args,
        f"residual_l2={cert.residual_l2:.6e} residual_linf={cert.residual_linf:.6e} "
        f"tol={cert.residual_tol:.1e} -> {'ok' if cert.residual_ok else 'FAIL'}",
    )
    w = cert.wirtinger
    _say(
        args,
        f"wirtinger lhs={w.lhs:.6e} rhs={w.rhs:.6e} constant={w.constant:.6e} "
        f"-> {'ok' if w.passed else 'FAIL'}",
    )
    if cert.boundary is not None:
        for ax in cert.boundary.axes:
            _say(
                args,
                f"boundary axis {ax.axis}: value={ax.value_mismatch:.3e} "
                f"quotient={ax.quotient_mismatch:.3e} "
                f"(threshold {cert.boundary.threshold:.3e})",
            )
    return EXIT_OK if cert.residual_ok else EXIT_NOT_CONVERGED


def boundary_data(field: Field) -> np.ndarray:
    """Closed export of an internal field (for self-certification)."""
    return field.closed_values()


def cmd_oracle_linear(args) -> int:
    cfg = load_config(args.config)
    spec = build_grid(cfg)
    loaded, closed = read_field_csv(args.rhs_csv, spec)
    if closed:
        raise FormatError("oracle-linear expects an open (wrapped) field CSV")
    try:
        solution = solve_linear_poisson(loaded)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    write_field_csv(args.output, solution)
    _say(
        args,
        f"solved stencil Poisson problem: |u|_L2={l2_norm(solution):.6e}, "
        f"mean={mean(solution)}; wrote {args.output}",
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry points

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-grad",
        description=(
            "Minimize the periodic action integral of |du/dt|^2/2 + F(t,u) "
            "and certify critical points of laplacian(u) = grad F(t,u)."
        ),
    )
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument(
        "--strict", action="store_true", help="abort solve when hypothesis checks fail"
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override init/solver random seed"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="run hypothesis checks, minimize, audit, certify")
    sp.add_argument("config")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("check", help="run the hypothesis checks only")
    sp.add_argument("config")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("residual", help="certify a field CSV against a config")
    sp.add_argument("field_csv")
    sp.add_argument("config")
    sp.set_defaults(func=cmd_residual)

    sp = sub.add_parser(
        "oracle-linear", help="solve laplacian(u) = f for a zero-mean CSV right-hand side"
    )
    sp.add_argument("rhs_csv")
    sp.add_argument("config")
    sp.add_argument("--output", default="oracle.csv", help="solution CSV path")
    sp.set_defaults(func=cmd_oracle_linear)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ExprError as err:
        source = _expr_source(args)
        if source is not None:
            line, col = line_col(source, err.pos)
            print(f"expression error at line {line}, column {col}: {err.message}", file=sys.stderr)
        else:
            print(f"expression error: {err}", file=sys.stderr)
        return EXIT_BAD_EXPR
    except (ConfigError, FormatError, PotentialDomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG


def _expr_source(args) -> str | None:
    config = getattr(args, "config", None)
    if config is None:
        return None
    try:
        return json.loads(Path(config).read_text())["potential"]["expr"]
    except Exception:
        return None


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
