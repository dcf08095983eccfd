"""Command-line runner: pick a benchmark case (or a custom problem), run it
and emit machine-readable text outputs.

Outputs written to the chosen directory:

* ``snapshot_t{t}.csv``  -- per-snapshot table, header ``x,u,v``
* ``field_u.csv``        -- one row per snapshot: t followed by U at the knots
* ``summary.json``       -- config echo, timings, status and (for the shock
  case) computed vs reference global relative errors
"""

from __future__ import annotations

import argparse
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import cases as cases_mod
from .banded import SingularMatrixError
from .cases import CaseDefinition, exact_shock, gre
from .basis import UniformGrid
from .scheme import BoundaryData, KsProblem
from .stepper import FitError, SolverBlowUpError, fit_initial, run

__all__ = ["RunConfig", "RunSummary", "UsageError", "parse_config", "execute", "main"]


class UsageError(ValueError):
    """Bad flags, bad config keys or inconsistent values."""


_CONFIG_KEYS = (
    "case", "n", "dt", "t_end", "theta", "alpha", "snapshots",
    "init", "pivot", "out", "precision", "domain", "ic",
)

# namespace for --ic expressions
_IC_NAMES = {
    name: getattr(np, name)
    for name in ("sin", "cos", "tan", "exp", "tanh", "cosh", "sinh", "sqrt", "abs", "pi", "e")
}


@dataclass
class RunConfig:
    case: Optional[str] = None
    n: Optional[int] = None
    dt: Optional[float] = None
    t_end: Optional[float] = None
    theta: Optional[float] = None
    alpha: Optional[float] = None
    snapshots: Optional[list] = None
    init: str = "function-fit"
    pivot: str = "partial"
    out: Path = Path("ksctb-out")
    precision: int = 9
    domain: Optional[tuple] = None
    ic: Optional[str] = None


@dataclass
class RunSummary:
    case: str
    config: dict
    status: str = "completed"
    n_steps: int = 0
    timings: dict = field(default_factory=dict)
    gre: list = field(default_factory=list)
    max_abs_u: Optional[float] = None
    files: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "completed"

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "config": self.config,
            "status": self.status,
            "n_steps": self.n_steps,
            "timings": self.timings,
            "gre": self.gre,
            "max_abs_u": self.max_abs_u,
            "files": self.files,
        }


class _Parser(argparse.ArgumentParser):
    # raise instead of sys.exit so library callers get an exception
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ksctb", description=__doc__)
    sub = parser.add_subparsers(dest="command")
    p = sub.add_parser("run", help="run a benchmark case or a custom problem")
    p.add_argument("--case", choices=("a", "b", "c"), help="built-in case id")
    p.add_argument("--n", type=int, help="number of grid intervals")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--t-end", dest="t_end", type=float, help="final time")
    p.add_argument("--theta", type=float, help="fourth-order coefficient")
    p.add_argument("--alpha", type=float, help="second-order coefficient")
    p.add_argument("--snapshots", type=str, help="comma-separated snapshot times")
    p.add_argument("--init", choices=("function-fit", "uxx-fit"), default=None)
    p.add_argument("--pivot", choices=("partial", "none"), default=None)
    p.add_argument("--out", type=str, help="output directory")
    p.add_argument("--precision", type=int, help="significant digits in text output")
    p.add_argument("--domain", type=float, nargs=2, metavar=("XMIN", "XMAX"),
                   help="custom domain endpoints")
    p.add_argument("--ic", type=str, help="custom initial condition, expression in x")
    p.add_argument("--config", type=str, help="flat key = value config file")
    return parser


def _parse_snapshots(text: str) -> list:
    try:
        return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --snapshots value {text!r}: {exc}") from exc


def _read_config_file(path: Path) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def _coerce_file_values(raw: dict) -> dict:
    out: dict = {}
    for key, value in raw.items():
        try:
            if key in ("n", "precision"):
                out[key] = int(value)
            elif key in ("dt", "t_end", "theta", "alpha"):
                out[key] = float(value)
            elif key == "snapshots":
                out[key] = _parse_snapshots(value)
            elif key == "domain":
                parts = value.replace(",", " ").split()
                if len(parts) != 2:
                    raise ValueError("domain needs two endpoints")
                out[key] = (float(parts[0]), float(parts[1]))
            else:
                out[key] = value
        except ValueError as exc:
            raise UsageError(f"bad config value for {key!r}: {exc}") from exc
    return out


def parse_config(argv: Optional[Sequence[str]] = None, config_file: Optional[str] = None) -> RunConfig:
    """Parse CLI arguments (and an optional config file) into a RunConfig.

    Flags override file values; unknown flags or config keys raise
    :class:`UsageError`.
    """
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command != "run":
        raise UsageError("expected the 'run' subcommand")

    file_path = config_file or ns.config
    file_values = _coerce_file_values(_read_config_file(Path(file_path))) if file_path else {}

    def pick(flag_value, key, default=None):
        if flag_value is not None:
            return flag_value
        return file_values.get(key, default)

    cfg = RunConfig(
        case=pick(ns.case, "case"),
        n=pick(ns.n, "n"),
        dt=pick(ns.dt, "dt"),
        t_end=pick(ns.t_end, "t_end"),
        theta=pick(ns.theta, "theta"),
        alpha=pick(ns.alpha, "alpha"),
        snapshots=pick(
            _parse_snapshots(ns.snapshots) if ns.snapshots is not None else None,
            "snapshots",
        ),
        init=pick(ns.init, "init", "function-fit"),
        pivot=pick(ns.pivot, "pivot", "partial"),
        out=Path(pick(ns.out, "out", "ksctb-out")),
        precision=pick(ns.precision, "precision", 9),
        domain=tuple(ns.domain) if ns.domain is not None else file_values.get("domain"),
        ic=pick(ns.ic, "ic"),
    )

    if cfg.case is None and cfg.ic is None:
        raise UsageError("--case or a custom --ic/--domain problem is required")
    if cfg.case is not None and cfg.case not in ("a", "b", "c"):
        raise UsageError(f"unknown case {cfg.case!r}")
    if cfg.init not in ("function-fit", "uxx-fit"):
        raise UsageError(f"bad init mode {cfg.init!r}")
    if cfg.pivot not in ("partial", "none"):
        raise UsageError(f"bad pivot mode {cfg.pivot!r}")
    if cfg.n is not None and cfg.n <= 0:
        raise UsageError(f"--n must be positive, got {cfg.n}")
    if cfg.dt is not None and cfg.dt <= 0:
        raise UsageError(f"--dt must be positive, got {cfg.dt}")
    if cfg.t_end is not None and cfg.t_end < 0:
        raise UsageError(f"--t-end must be nonnegative, got {cfg.t_end}")
    if cfg.precision < 1:
        raise UsageError(f"--precision must be at least 1, got {cfg.precision}")
    if cfg.theta is not None and cfg.theta <= 0:
        raise UsageError(f"--theta must be positive, got {cfg.theta}")
    return cfg


def _ic_function(expr: str):
    def u0(x):
        names = dict(_IC_NAMES)
        names["x"] = np.asarray(x, dtype=float)
        try:
            value = eval(expr, {"__builtins__": {}}, names)  # noqa: S307
        except Exception as exc:
            raise UsageError(f"bad --ic expression {expr!r}: {exc}") from exc
        return np.broadcast_to(np.asarray(value, dtype=float), np.shape(names["x"])).copy()

    return u0


def _resolve(cfg: RunConfig):
    """Turn a RunConfig into (label, problem, exact, reference, t_end, snapshots)."""
    if cfg.case is not None:
        if cfg.case == "a":
            case = cases_mod.case_a(cfg.n or 150, cfg.dt or 0.01)
        elif cfg.case == "b":
            case = cases_mod.case_b(cfg.theta if cfg.theta is not None else 0.05,
                                    cfg.n or 512, cfg.dt or 0.001)
        else:
            case = cases_mod.case_c(cfg.n or 120, cfg.dt or 0.001)
        problem = case.problem
        if cfg.alpha is not None or (cfg.theta is not None and cfg.case != "b"):
            problem = KsProblem(
                alpha=cfg.alpha if cfg.alpha is not None else problem.alpha,
                theta=cfg.theta if cfg.theta is not None else problem.theta,
                grid=problem.grid,
                dt=problem.dt,
                initial_u=problem.initial_u,
                initial_v=problem.initial_v,
                boundary=problem.boundary,
            )
        t_end = cfg.t_end if cfg.t_end is not None else case.t_end
        if cfg.snapshots is not None:
            snapshots = list(cfg.snapshots)
        else:
            snapshots = [t for t in case.snapshot_times if t <= t_end + 1e-12]
            if not snapshots:
                snapshots = [t_end]
        label = cfg.case
        exact = case.exact
        reference = case.reference_gre
    else:
        if cfg.domain is None or cfg.n is None or cfg.dt is None:
            raise UsageError("custom problems need --ic, --domain, --n and --dt")
        grid = UniformGrid(cfg.domain[0], cfg.domain[1], cfg.n)
        u0 = _ic_function(cfg.ic)
        problem = KsProblem(
            alpha=cfg.alpha if cfg.alpha is not None else 1.0,
            theta=cfg.theta if cfg.theta is not None else 1.0,
            grid=grid,
            dt=cfg.dt,
            initial_u=u0,
            boundary=BoundaryData(float(u0(grid.a)), float(u0(grid.b))),
        )
        t_end = cfg.t_end if cfg.t_end is not None else 1.0
        snapshots = list(cfg.snapshots) if cfg.snapshots is not None else [t_end]
        label = "custom"
        exact = None
        reference = None

    for t_s in snapshots:
        if t_s > t_end + 1e-12:
            raise UsageError(f"snapshot time {t_s} exceeds t_end={t_end}")
    return label, problem, exact, reference, t_end, snapshots


def _config_echo(cfg: RunConfig, problem: KsProblem, t_end, snapshots) -> dict:
    return {
        "case": cfg.case or "custom",
        "n": problem.grid.n_intervals,
        "dt": problem.dt,
        "t_end": t_end,
        "alpha": problem.alpha,
        "theta": problem.theta,
        "domain": [problem.grid.a, problem.grid.b],
        "snapshots": list(snapshots),
        "init": cfg.init,
        "pivot": cfg.pivot,
        "precision": cfg.precision,
        "ic": cfg.ic,
        "out": str(cfg.out),
    }


def execute(cfg: RunConfig) -> RunSummary:
    """Run the configured problem and write snapshots, field dump and summary."""
    label, problem, exact, reference, t_end, snapshots = _resolve(cfg)
    summary = RunSummary(case=label, config=_config_echo(cfg, problem, t_end, snapshots))
    summary.n_steps = max(0, math.ceil(t_end / problem.dt - 1e-12))
    out_dir = cfg.out
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = f"%.{cfg.precision}g"

    t0 = time.perf_counter()
    try:
        coeffs = fit_initial(problem, cfg.init)
        t_fit = time.perf_counter() - t0
        t1 = time.perf_counter()
        traj = run(problem, t_end, snapshots, pivoting=cfg.pivot, coeffs=coeffs)
        t_run = time.perf_counter() - t1
    except (SolverBlowUpError, SingularMatrixError, FitError) as exc:
        summary.status = f"failed: {exc}"
        summary.timings = {"total_seconds": time.perf_counter() - t0}
        _write_summary(out_dir, summary)
        return summary

    summary.timings = {
        "fit_seconds": t_fit,
        "step_seconds_mean": t_run / summary.n_steps if summary.n_steps else 0.0,
        "total_seconds": time.perf_counter() - t0,
    }

    x = problem.grid.x
    for t_s, u, v in traj.snapshots:
        name = f"snapshot_t{t_s:g}.csv"
        table = np.column_stack([x, u, v])
        np.savetxt(out_dir / name, table, fmt=fmt, delimiter=",", header="x,u,v", comments="")
        summary.files.append(name)

    field = np.column_stack([traj.times, traj.u_matrix()])
    np.savetxt(out_dir / "field_u.csv", field, fmt=fmt, delimiter=",")
    summary.files.append("field_u.csv")

    summary.max_abs_u = float(np.max(np.abs(traj.u_matrix())))

    if exact is not None:
        for t_s, u, _ in traj.snapshots:
            # error metric over knots 1 .. N
            u_ref = exact_shock(exact, x, t_s)
            computed = gre(u[1:], u_ref[1:])
            ref_value = None
            if reference:
                for t_ref, g_ref in reference.items():
                    if abs(t_ref - t_s) < 1e-9:
                        ref_value = g_ref
            summary.gre.append({"t": t_s, "computed": computed, "reference": ref_value})

    _write_summary(out_dir, summary)
    return summary


def _write_summary(out_dir: Path, summary: RunSummary):
    path = out_dir / "summary.json"
    path.write_text(json.dumps(summary.as_dict(), indent=2, sort_keys=True) + "\n")
    if "summary.json" not in summary.files:
        summary.files.append("summary.json")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", flush=True)
        return 2
    summary = execute(cfg)
    print(f"case {summary.case}: {summary.status} "
          f"({summary.n_steps} steps, outputs in {cfg.out})")
    for entry in summary.gre:
        ref = entry["reference"]
        ref_text = f"  reference {ref:.6e}" if ref is not None else ""
        print(f"  t={entry['t']:g}  gre={entry['computed']:.6e}{ref_text}")
    return 0 if summary.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
