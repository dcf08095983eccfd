"""Built-in benchmark problems, the exact shock solution and error metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import UniformGrid
from .scheme import BoundaryData, KsProblem

__all__ = [
    "ShockParams",
    "CaseDefinition",
    "exact_shock",
    "gre",
    "case_a",
    "case_b",
    "case_c",
    "REFERENCE_GRE_CASE_A",
    "QUINTIC_GRE_CASE_A",
]

# Published global-relative-error values for the travelling-shock benchmark
# (case a, N=150, dt=0.01): the collocation solver this package reimplements,
# and the quintic-spline comparison column quoted alongside it.
REFERENCE_GRE_CASE_A = {1.0: 2.98416e-5, 2.0: 7.00758e-5, 3.0: 9.51142e-5, 4.0: 1.79237e-4}
QUINTIC_GRE_CASE_A = {1.0: 3.81725e-4, 2.0: 5.51142e-4, 3.0: 7.03980e-4, 4.0: 8.63662e-4}


@dataclass(frozen=True)
class ShockParams:
    """Parameters of the tanh/tanh^3 travelling shock."""

    b: float   # wave speed
    k: float   # steepness
    x0: float  # initial position
    d: float   # amplitude scale
    e: float   # tanh weight
    f: float   # tanh^3 weight

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("steepness k must be nonzero")


@dataclass(frozen=True)
class CaseDefinition:
    """A ready-to-run benchmark: problem, defaults, optional exact solution."""

    id: str
    problem: KsProblem
    t_end: float
    snapshot_times: tuple
    exact: Optional[ShockParams] = None
    reference_gre: Optional[dict] = None


def exact_shock(p: ShockParams, x, t):
    """Travelling-wave solution u = b + (15/19) d (e tanh(z) + f tanh^3(z))
    with z = k (x - b t - x0)."""
    z = np.tanh(p.k * (np.asarray(x, dtype=float) - p.b * t - p.x0))
    return p.b + (15.0 / 19.0) * p.d * (p.e * z + p.f * z**3)


def gre(numeric, exact):
    """Global relative error sum|U_j - u_j| / sum|u_j|."""
    U = np.asarray(numeric, dtype=float)
    u = np.asarray(exact, dtype=float)
    if U.shape != u.shape:
        raise ValueError(f"length mismatch {U.shape} vs {u.shape}")
    denom = np.sum(np.abs(u))
    if denom == 0.0:
        raise ZeroDivisionError("gre undefined: exact vector has zero 1-norm")
    return float(np.sum(np.abs(U - u)) / denom)


def case_a(n_intervals: int = 150, dt: float = 0.01) -> CaseDefinition:
    """Travelling shock on [-30, 30], alpha = theta = 1.

    The initial and boundary data come from the exact solution; the second
    derivative of the initial profile is left to the finite-difference
    fallback rather than a hand-derived expression.
    """
    params = ShockParams(
        b=5.0,
        k=0.5 * np.sqrt(11.0 / 19.0),
        x0=-12.0,
        d=np.sqrt(11.0 / 19.0),
        e=-9.0,
        f=11.0,
    )
    grid = UniformGrid(-30.0, 30.0, n_intervals)

    def u0(x):
        return exact_shock(params, x, 0.0)

    problem = KsProblem(
        alpha=1.0,
        theta=1.0,
        grid=grid,
        dt=dt,
        initial_u=u0,
        initial_v=None,
        boundary=BoundaryData(g0=float(u0(grid.a)), g1=float(u0(grid.b))),
    )
    return CaseDefinition(
        id="a",
        problem=problem,
        t_end=4.0,
        snapshot_times=(1.0, 2.0, 3.0, 4.0),
        exact=params,
        reference_gre=dict(REFERENCE_GRE_CASE_A),
    )


def case_b(theta: float = 0.05, n_intervals: int = 512, dt: float = 0.001) -> CaseDefinition:
    """Chaotic run on [0, 4 pi] from u(x,0) = cos(x/2) sin(x/2) = sin(x)/2.

    The hyper-viscosity theta controls how early irregular dynamics set in;
    the published runs use theta in {0.05, 0.02, 0.01, 0.002}.
    """
    if theta <= 0:
        raise ValueError(f"theta={theta} must be positive")
    grid = UniformGrid(0.0, 4.0 * np.pi, n_intervals)

    def u0(x):
        return np.cos(0.5 * x) * np.sin(0.5 * x)

    def u0_xx(x):
        # u0 = sin(x)/2, so u0'' = -u0
        return -np.cos(0.5 * x) * np.sin(0.5 * x)

    problem = KsProblem(
        alpha=1.0,
        theta=theta,
        grid=grid,
        dt=dt,
        initial_u=u0,
        initial_v=u0_xx,
        boundary=BoundaryData(0.0, 0.0),
    )
    snaps = tuple(np.round(np.arange(0.0, 10.0 + 1e-9, 0.05), 9))
    return CaseDefinition(id="b", problem=problem, t_end=10.0, snapshot_times=snaps)


def case_c(n_intervals: int = 120, dt: float = 0.001) -> CaseDefinition:
    """Gaussian-dip start u(x,0) = -exp(-x^2) on [-30, 30], alpha = theta = 1."""
    grid = UniformGrid(-30.0, 30.0, n_intervals)

    def u0(x):
        return -np.exp(-np.asarray(x, dtype=float) ** 2)

    def u0_xx(x):
        x = np.asarray(x, dtype=float)
        return (2.0 - 4.0 * x**2) * np.exp(-(x**2))

    problem = KsProblem(
        alpha=1.0,
        theta=1.0,
        grid=grid,
        dt=dt,
        initial_u=u0,
        initial_v=u0_xx,
        boundary=BoundaryData(0.0, 0.0),
    )
    snaps = tuple(np.round(np.arange(0.0, 20.0 + 1e-9, 0.1), 9))
    return CaseDefinition(id="c", problem=problem, t_end=20.0, snapshot_times=snaps)
