"""Initial spline fits, time stepping and trajectory recording."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import scheme
from .banded import BandedMatrix, SingularMatrixError, lu_factor
from .basis import KnotConstants
from .scheme import Coefficients, KsProblem

__all__ = [
    "SolverState",
    "Trajectory",
    "SolverBlowUpError",
    "FitError",
    "fit_initial",
    "fd_second_derivative",
    "step",
    "run",
]

INIT_MODES = ("function-fit", "uxx-fit")


class SolverBlowUpError(RuntimeError):
    """Raised when a step produces non-finite parameters."""

    def __init__(self, time: float, level: int):
        self.time = time
        self.level = level
        super().__init__(f"non-finite solution at t={time:g} (step {level})")


class FitError(RuntimeError):
    """Raised when an initial-fit system cannot be solved."""


@dataclass
class SolverState:
    """Solution snapshot: step index, time and the spline parameters."""

    level: int
    time: float
    coeffs: Coefficients
    problem: KsProblem


class Trajectory:
    """Recorded knot values (time, U_i, V_i) at the requested cadence."""

    def __init__(self, cadence: Sequence[float]):
        self.cadence = list(cadence)
        self.snapshots: list[tuple[float, np.ndarray, np.ndarray]] = []

    def record(self, time: float, u: np.ndarray, v: np.ndarray):
        self.snapshots.append((time, u, v))

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _, _ in self.snapshots])

    def u_matrix(self) -> np.ndarray:
        """Snapshot-by-knot matrix of U values (rows follow the cadence)."""
        return np.array([u for _, u, _ in self.snapshots])

    def __len__(self):
        return len(self.snapshots)


# fourth-order second-derivative stencils; one-sided at the domain edges
_CENTRAL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_FORWARD = np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0


def fd_second_derivative(f, x: np.ndarray, s: float, a: float, b: float) -> np.ndarray:
    """Fourth-order finite-difference u_xx of ``f`` at points ``x``.

    Central stencil with step ``s`` where possible; one-sided at points
    within ``2 s`` of the domain ends ``a``, ``b``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for idx, xi in enumerate(x):
        if xi - 2 * s < a:
            offs = np.arange(6) * s
            out[idx] = (_FORWARD * f(xi + offs)).sum() / (s * s)
        elif xi + 2 * s > b:
            offs = -np.arange(6) * s
            out[idx] = (_FORWARD * f(xi + offs)).sum() / (s * s)
        else:
            offs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * s
            out[idx] = (_CENTRAL * f(xi + offs)).sum() / (s * s)
    return out


def _initial_v_values(problem: KsProblem, x: np.ndarray) -> np.ndarray:
    if problem.initial_v is not None:
        return np.asarray(problem.initial_v(x), dtype=float)
    grid = problem.grid
    # step h/30 keeps the interpolation data well below the 1e-8 checks
    return fd_second_derivative(problem.initial_u, x, grid.h / 30.0, grid.a, grid.b)


def _fit_system(n_params: int) -> BandedMatrix:
    return BandedMatrix(n_params, 2, 2)


def _alpha_row(M: BandedMatrix, r: int, k: int, con: KnotConstants):
    """Row r: value stencil at knot k (parameters k-1, k, k+1 -> cols k .. k+2)."""
    M[r, k] = con.alpha1
    M[r, k + 1] = con.alpha2
    M[r, k + 2] = con.alpha1


def _gamma_row(M: BandedMatrix, r: int, k: int, con: KnotConstants):
    """Row r: second-derivative stencil at knot k."""
    M[r, k] = con.gamma1
    M[r, k + 1] = con.gamma2
    M[r, k + 2] = con.gamma1


def fit_initial(problem: KsProblem, mode: str = "function-fit") -> Coefficients:
    """Fit the initial spline parameters.

    Parameters
    ----------
    problem : KsProblem
    mode : {"function-fit", "uxx-fit"}
        ``function-fit`` interpolates u(x, 0) at every knot and closes the
        system with the end conditions U_xx = 0.  ``uxx-fit`` interpolates
        u_xx(x, 0) at the interior knots instead; since second-derivative
        data leave the function level undetermined, the endpoint values
        U(a) = u0(a) and U(b) = u0(b) anchor it.

    In both modes the V parameters interpolate u_xx(x, 0) at the interior
    knots subject to V = 0 at the ends, closed with natural ends V_xx = 0.

    Raises
    ------
    FitError
        If a fit system is singular (reports the mode and spacing).
    """
    if mode not in INIT_MODES:
        raise ValueError(f"unknown init mode {mode!r}; expected one of {INIT_MODES}")
    grid = problem.grid
    con = problem.constants()
    N = grid.n_intervals
    x = grid.x
    u0 = np.asarray(problem.initial_u(x), dtype=float)
    v0 = _initial_v_values(problem, x)

    # delta system over the N+3 parameters delta_{-1} .. delta_{N+1}
    Md = _fit_system(N + 3)
    rd = np.zeros(N + 3)
    if mode == "function-fit":
        _gamma_row(Md, 0, 0, con)  # U_xx(a) = 0
        for i in range(N + 1):
            _alpha_row(Md, 1 + i, i, con)
            rd[1 + i] = u0[i]
        _gamma_row(Md, N + 2, N, con)  # U_xx(b) = 0
    else:
        _gamma_row(Md, 0, 0, con)
        _alpha_row(Md, 1, 0, con)  # U(a) = u0(a) anchors the function level
        rd[1] = u0[0]
        for i in range(1, N):
            _gamma_row(Md, 1 + i, i, con)
            rd[1 + i] = v0[i]
        _alpha_row(Md, N + 1, N, con)
        rd[N + 1] = u0[N]
        _gamma_row(Md, N + 2, N, con)

    # phi system: V interpolates u_xx(x,0) inside, vanishes at the ends,
    # natural ends V_xx = 0 close the two leftover degrees of freedom
    Mp = _fit_system(N + 3)
    rp = np.zeros(N + 3)
    _gamma_row(Mp, 0, 0, con)
    _alpha_row(Mp, 1, 0, con)  # V(a) = 0
    for i in range(1, N):
        _alpha_row(Mp, 1 + i, i, con)
        rp[1 + i] = v0[i]
    _alpha_row(Mp, N + 1, N, con)  # V(b) = 0
    _gamma_row(Mp, N + 2, N, con)

    try:
        delta = lu_factor(Md).solve(rd)
        phi = lu_factor(Mp).solve(rp)
    except SingularMatrixError as exc:
        raise FitError(
            f"initial fit singular (mode={mode}, h={grid.h:g}): {exc}"
        ) from exc
    return Coefficients(delta, phi)


def step(
    state: SolverState,
    pivoting: str = "partial",
    b_matrix: Optional[BandedMatrix] = None,
) -> SolverState:
    """Advance one Crank-Nicolson step.

    ``b_matrix`` may carry the assembled (constant) right-hand matrix to
    avoid rebuilding it every step; ``run`` passes it automatically.
    """
    problem = state.problem
    con = problem.constants()
    A = scheme.assemble_A(problem, state.coeffs)
    if b_matrix is None:
        b_matrix = scheme.assemble_B(problem)
    rhs = b_matrix.matvec(state.coeffs.interleaved()) + scheme.boundary_rhs(problem)
    try:
        z = lu_factor(A, pivoting=pivoting).solve(rhs)
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            exc.row, f"linear solve failed at step {state.level + 1}: {exc}"
        ) from exc
    if not np.all(np.isfinite(z)):
        raise SolverBlowUpError((state.level + 1) * problem.dt, state.level + 1)
    coeffs = Coefficients.from_interleaved(z, con)
    return SolverState(state.level + 1, (state.level + 1) * problem.dt, coeffs, problem)


def run(
    problem: KsProblem,
    t_end: float,
    snapshot_times: Optional[Sequence[float]] = None,
    init_mode: str = "function-fit",
    pivoting: str = "partial",
    coeffs: Optional[Coefficients] = None,
) -> Trajectory:
    """Fit, march to ``t_end`` and record knot values at the snapshot times.

    Snapshot times are matched to the nearest time level (they must fall
    within dt/2 of one).  ``t_end = 0`` records only the fitted state.  A
    pre-fitted ``coeffs`` skips the internal call to :func:`fit_initial`.
    """
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    dt = problem.dt
    n_steps = max(0, math.ceil(t_end / dt - 1e-12))
    if snapshot_times is None:
        snapshot_times = [t_end]
    wanted: dict[int, int] = {}
    for t_s in snapshot_times:
        lvl = int(round(t_s / dt))
        if not 0 <= lvl <= n_steps or abs(t_s - lvl * dt) > 0.5 * dt + 1e-12:
            raise ValueError(
                f"snapshot time {t_s} not within dt/2 of a reachable time level"
            )
        wanted[lvl] = wanted.get(lvl, 0) + 1

    con = problem.constants()
    if coeffs is None:
        coeffs = fit_initial(problem, init_mode)
    state = SolverState(0, 0.0, coeffs, problem)
    B = scheme.assemble_B(problem)

    traj = Trajectory(snapshot_times)

    def record(st: SolverState):
        for _ in range(wanted.get(st.level, 0)):
            traj.record(st.time, st.coeffs.u_knots(con), st.coeffs.v_knots(con))

    record(state)
    for _ in range(n_steps):
        state = step(state, pivoting=pivoting, b_matrix=B)
        record(state)
    return traj
