"""Linearised Crank-Nicolson collocation system for the KS equation.

The fourth-order problem ``u_t + u u_x + alpha u_xx + theta u_xxxx = 0`` is
split into the coupled pair ``u_t + u u_x + alpha v + theta v_xx = 0``,
``v = u_xx`` and both fields are expanded in the trigonometric cubic
B-spline basis with time-dependent parameters ``delta_i`` (for U) and
``phi_i`` (for V), i = -1 .. N+1.  Collocating the Crank-Nicolson form at
the knots, with the product term linearised a la Rubin-Graves
(``(U U_x)^{n+1} ~ U^{n+1} U_x^n + U^n U_x^{n+1} - U^n U_x^n``), gives one
banded linear solve per step:  A(state^n) z^{n+1} = B z^n + boundary data.

Unknown ordering is interleaved, z = (delta_0, phi_0, ..., delta_N, phi_N).
The four ghost parameters are eliminated with the boundary constraints

    U_xx(a) = 0,  V(a) = 0,  U_xx(b) = 0,  V(b) = 0,

which determine the ghosts but also make the two boundary v-collocation
rows identically zero after substitution (each is a linear combination of
two constraint rows), leaving the square system rank-deficient by two.  The
two degenerate rows are therefore replaced by the Dirichlet conditions
``U(a) = g0`` and ``U(b) = g1`` taken from the problem statement; see
``tests/test_scheme.py`` for the rank demonstration.

Row layout of the reduced (2N+2) x (2N+2) system, bandwidths kl = ku = 3:

    row 0      : Dirichlet row at x_0     (replaces the v-row at m = 0)
    row 1      : u-collocation at m = 0, ghost-folded
    row 2m     : u-collocation at m        (1 <= m <= N-1)
    row 2m+1   : v-collocation at m        (1 <= m <= N-1)
    row 2N     : Dirichlet row at x_N     (replaces the v-row at m = N)
    row 2N+1   : u-collocation at m = N, ghost-folded
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .banded import BandedMatrix
from .basis import KnotConstants, UniformGrid, knot_constants

__all__ = [
    "BoundaryData",
    "KsProblem",
    "Coefficients",
    "RowCoefficients",
    "row_coefficients",
    "assemble_A",
    "assemble_B",
    "boundary_rhs",
    "eliminate_ghosts",
    "recover_ghosts",
]


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet endpoint values; the scheme additionally enforces
    ``U_xx = 0`` and ``V = 0`` at both ends through ghost elimination."""

    g0: float = 0.0
    g1: float = 0.0


@dataclass
class KsProblem:
    """Problem definition: coefficients, grid, step size and initial data.

    ``initial_u`` maps knot coordinates to u(x, 0) and must accept numpy
    arrays.  ``initial_v`` supplies u_xx(x, 0); when None, a fourth-order
    finite-difference fallback is applied to ``initial_u``.
    """

    alpha: float
    theta: float
    grid: UniformGrid
    dt: float
    initial_u: Callable[[np.ndarray], np.ndarray]
    initial_v: Optional[Callable[[np.ndarray], np.ndarray]] = None
    boundary: BoundaryData = field(default_factory=BoundaryData)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"time step dt={self.dt} must be positive")
        if self.theta == 0:
            raise ValueError("fourth-order coefficient theta must be nonzero")

    def constants(self) -> KnotConstants:
        return knot_constants(self.grid.h)


class Coefficients:
    """Interleaved spline parameters ``delta_i``, ``phi_i`` for i = -1 .. N+1.

    Storage index ``i + 1`` holds parameter ``i``; the ghost entries
    (first and last) always satisfy the four boundary constraints.
    """

    def __init__(self, delta: np.ndarray, phi: np.ndarray):
        delta = np.asarray(delta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if delta.shape != phi.shape or delta.ndim != 1 or delta.size < 5:
            raise ValueError("delta and phi must be 1-d arrays of equal length >= 5")
        self.delta = delta
        self.phi = phi

    @classmethod
    def zeros(cls, n_intervals: int) -> "Coefficients":
        return cls(np.zeros(n_intervals + 3), np.zeros(n_intervals + 3))

    @property
    def n_intervals(self) -> int:
        return self.delta.size - 3

    def interleaved(self) -> np.ndarray:
        """Interior unknown vector (delta_0, phi_0, ..., delta_N, phi_N)."""
        z = np.empty(2 * (self.n_intervals + 1))
        z[0::2] = self.delta[1:-1]
        z[1::2] = self.phi[1:-1]
        return z

    @classmethod
    def from_interleaved(cls, z: np.ndarray, constants: KnotConstants) -> "Coefficients":
        z = np.asarray(z, dtype=float)
        if z.ndim != 1 or z.size % 2 != 0:
            raise ValueError("interleaved vector must have even length")
        return recover_ghosts(z[0::2], z[1::2], constants)

    def ghost_residuals(self, constants: KnotConstants) -> np.ndarray:
        """The four boundary constraint expressions (all zero when valid)."""
        a1, a2 = constants.alpha1, constants.alpha2
        g1, g2 = constants.gamma1, constants.gamma2
        d, p = self.delta, self.phi
        return np.array(
            [
                g1 * d[0] + g2 * d[1] + g1 * d[2],
                a1 * p[0] + a2 * p[1] + a1 * p[2],
                g1 * d[-3] + g2 * d[-2] + g1 * d[-1],
                a1 * p[-3] + a2 * p[-2] + a1 * p[-1],
            ]
        )

    def u_knots(self, constants: KnotConstants) -> np.ndarray:
        """U at the collocation knots x_0 .. x_N."""
        d = self.delta
        return constants.alpha1 * d[:-2] + constants.alpha2 * d[1:-1] + constants.alpha1 * d[2:]

    def ux_knots(self, constants: KnotConstants) -> np.ndarray:
        d = self.delta
        return constants.beta1 * (d[:-2] - d[2:])

    def uxx_knots(self, constants: KnotConstants) -> np.ndarray:
        d = self.delta
        return constants.gamma1 * d[:-2] + constants.gamma2 * d[1:-1] + constants.gamma1 * d[2:]

    def v_knots(self, constants: KnotConstants) -> np.ndarray:
        p = self.phi
        return constants.alpha1 * p[:-2] + constants.alpha2 * p[1:-1] + constants.alpha1 * p[2:]

    def copy(self) -> "Coefficients":
        return Coefficients(self.delta.copy(), self.phi.copy())


@dataclass(frozen=True)
class RowCoefficients:
    """Entries of one u-collocation row: the linearisation state (k1, k2)
    and the six A-side / four distinct B-side stencil weights."""

    k1: float
    k2: float
    nu1: float
    nu2: float
    nu3: float
    nu4: float
    nu5: float
    nu6: float
    nu7: float
    nu8: float
    nu9: float


def row_coefficients(
    constants: KnotConstants,
    delta_window,
    dt: float,
    alpha: float,
    theta: float,
) -> RowCoefficients:
    """Stencil weights of the u-collocation row at one knot.

    ``delta_window`` holds (delta_{m-1}, delta_m, delta_{m+1}) at the known
    time level; k1 and k2 are the nodal value and slope of U^n there.
    """
    dm, d0, dp = delta_window
    a1, a2 = constants.alpha1, constants.alpha2
    b1 = constants.beta1
    g1, g2 = constants.gamma1, constants.gamma2
    k1 = a1 * dm + a2 * d0 + a1 * dp
    k2 = b1 * (dm - dp)
    s = 2.0 / dt + k2
    nu2 = alpha * a1 + theta * g1
    nu4 = alpha * a2 + theta * g2
    return RowCoefficients(
        k1=k1,
        k2=k2,
        nu1=s * a1 + k1 * b1,
        nu2=nu2,
        nu3=s * a2,
        nu4=nu4,
        nu5=s * a1 - k1 * b1,
        nu6=(2.0 / dt) * a1,
        nu7=-nu2,
        nu8=(2.0 / dt) * a2,
        nu9=-nu4,
    )


def eliminate_ghosts(row, side: str, constants: KnotConstants) -> np.ndarray:
    """Fold the ghost columns of a boundary row block into interior columns.

    ``row`` has six coefficients.  On the left they multiply
    (delta_{-1}, phi_{-1}, delta_0, phi_0, delta_1, phi_1); on the right
    (delta_{N-1}, phi_{N-1}, delta_N, phi_N, delta_{N+1}, phi_{N+1}).
    Returns the four coefficients on the surviving interior unknowns.
    """
    r = np.asarray(row, dtype=float)
    if r.shape != (6,):
        raise ValueError("row block must have six entries")
    ra = constants.gamma2 / constants.gamma1  # delta ghost: -ra*delta_edge - delta_in
    rb = constants.alpha2 / constants.alpha1
    if side == "left":
        return np.array(
            [r[2] - r[0] * ra, r[3] - r[1] * rb, r[4] - r[0], r[5] - r[1]]
        )
    if side == "right":
        return np.array(
            [r[0] - r[4], r[1] - r[5], r[2] - r[4] * ra, r[3] - r[5] * rb]
        )
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def recover_ghosts(delta_interior, phi_interior, constants: KnotConstants) -> Coefficients:
    """Extend interior parameters with ghosts from the four constraints."""
    di = np.asarray(delta_interior, dtype=float)
    pi = np.asarray(phi_interior, dtype=float)
    if di.shape != pi.shape or di.ndim != 1 or di.size < 3:
        raise ValueError("interior parameter vectors must match and have length >= 3")
    ra = constants.gamma2 / constants.gamma1
    rb = constants.alpha2 / constants.alpha1
    delta = np.empty(di.size + 2)
    phi = np.empty(pi.size + 2)
    delta[1:-1] = di
    phi[1:-1] = pi
    delta[0] = -ra * di[0] - di[1]
    delta[-1] = -di[-2] - ra * di[-1]
    phi[0] = -rb * pi[0] - pi[1]
    phi[-1] = -pi[-2] - rb * pi[-1]
    return Coefficients(delta, phi)


def _dirichlet_weight(constants: KnotConstants) -> float:
    """Coefficient of delta_edge in the ghost-folded row U(edge) = g."""
    return constants.alpha2 - constants.alpha1 * constants.gamma2 / constants.gamma1


def assemble_A(problem: KsProblem, coeffs: Coefficients) -> BandedMatrix:
    """Left-hand matrix of one Crank-Nicolson step, from the level-n state."""
    con = problem.constants()
    N = problem.grid.n_intervals
    if coeffs.n_intervals != N:
        raise ValueError("coefficient vector does not match the grid")
    a1, a2 = con.alpha1, con.alpha2
    b1 = con.beta1
    g1, g2 = con.gamma1, con.gamma2
    dt, al, th = problem.dt, problem.alpha, problem.theta

    d = coeffs.delta
    k1 = a1 * d[:-2] + a2 * d[1:-1] + a1 * d[2:]
    k2 = b1 * (d[:-2] - d[2:])
    s = 2.0 / dt + k2
    nu1 = s * a1 + k1 * b1
    nu3 = s * a2
    nu5 = s * a1 - k1 * b1
    nu2 = al * a1 + th * g1
    nu4 = al * a2 + th * g2

    n = 2 * N + 2
    kl = ku = 3
    data = np.zeros((kl + ku + 1, n))

    # interior u-rows r = 2m, columns 2m-2 .. 2m+3 (m = 1 .. N-1)
    m = np.arange(1, N)
    r = 2 * m
    data[ku + 2, r - 2] = nu1[m]
    data[ku + 1, r - 1] = nu2
    data[ku + 0, r] = nu3[m]
    data[ku - 1, r + 1] = nu4
    data[ku - 2, r + 2] = nu5[m]
    data[ku - 3, r + 3] = nu2

    # interior v-rows r = 2m+1, same columns
    r = 2 * m + 1
    data[ku + 3, r - 3] = -g1
    data[ku + 2, r - 2] = a1
    data[ku + 1, r - 1] = -g2
    data[ku + 0, r] = a2
    data[ku - 1, r + 1] = -g1
    data[ku - 2, r + 2] = a1

    # boundary rows
    A = BandedMatrix(n, kl, ku, data)
    d0 = _dirichlet_weight(con)
    A[0, 0] = d0
    A[2 * N, 2 * N] = d0
    left = eliminate_ghosts(
        [nu1[0], nu2, nu3[0], nu4, nu5[0], nu2], "left", con
    )
    for j in range(4):
        if left[j] != 0.0:
            A[1, j] = left[j]
    right = eliminate_ghosts(
        [nu1[N], nu2, nu3[N], nu4, nu5[N], nu2], "right", con
    )
    for j in range(4):
        if right[j] != 0.0:
            A[2 * N + 1, 2 * N - 2 + j] = right[j]
    return A


def assemble_B(problem: KsProblem) -> BandedMatrix:
    """Right-hand matrix; constant over the whole run (no state dependence)."""
    con = problem.constants()
    N = problem.grid.n_intervals
    a1, a2 = con.alpha1, con.alpha2
    g1, g2 = con.gamma1, con.gamma2
    dt, al, th = problem.dt, problem.alpha, problem.theta
    nu6 = (2.0 / dt) * a1
    nu7 = -(al * a1 + th * g1)
    nu8 = (2.0 / dt) * a2
    nu9 = -(al * a2 + th * g2)

    n = 2 * N + 2
    kl = ku = 3
    data = np.zeros((kl + ku + 1, n))

    m = np.arange(1, N)
    r = 2 * m
    data[ku + 2, r - 2] = nu6
    data[ku + 1, r - 1] = nu7
    data[ku + 0, r] = nu8
    data[ku - 1, r + 1] = nu9
    data[ku - 2, r + 2] = nu6
    data[ku - 3, r + 3] = nu7

    # v-rows of B are the exact negation of the v-rows of A
    r = 2 * m + 1
    data[ku + 3, r - 3] = g1
    data[ku + 2, r - 2] = -a1
    data[ku + 1, r - 1] = g2
    data[ku + 0, r] = -a2
    data[ku - 1, r + 1] = g1
    data[ku - 2, r + 2] = -a1

    B = BandedMatrix(n, kl, ku, data)
    # Dirichlet rows (0 and 2N) stay zero; boundary_rhs carries g0, g1.
    row = [nu6, nu7, nu8, nu9, nu6, nu7]
    left = eliminate_ghosts(row, "left", con)
    for j in range(4):
        if left[j] != 0.0:
            B[1, j] = left[j]
    right = eliminate_ghosts(row, "right", con)
    for j in range(4):
        if right[j] != 0.0:
            B[2 * N + 1, 2 * N - 2 + j] = right[j]
    return B


def boundary_rhs(problem: KsProblem) -> np.ndarray:
    """Constant right-hand contribution of the two Dirichlet rows."""
    N = problem.grid.n_intervals
    out = np.zeros(2 * N + 2)
    out[0] = problem.boundary.g0
    out[2 * N] = problem.boundary.g1
    return out
