"""Trigonometric cubic B-spline basis on a uniform grid.

The basis function attached to knot ``x_i`` is supported on
``[x_{i-2}, x_{i+2}]`` and is built piecewise from products of half-angle
sines ``sin((x - x_j)/2)``, normalised by
``gamma = sin(h/2) sin(h) sin(3h/2)``.  Every piece lives in
``span{sin(x/2), cos(x/2), sin(3x/2), cos(3x/2)}``, so the spline is C^2 and
degenerates to the classical polynomial cubic B-spline as ``h -> 0``.

Because up to two derivatives exist at the knots, evaluating a spline
``sum_i c_i T_i`` and its first two derivatives at a knot reduces to the
three-term stencils of :func:`nodal_values` with the closed-form constants of
:func:`knot_constants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "UniformGrid",
    "KnotConstants",
    "knot_constants",
    "eval_basis",
    "eval_basis_derivative",
    "eval_basis_recursive",
    "nodal_values",
]

# largest admissible spacing: 3h/2 must stay below pi so the normaliser
# gamma = sin(h/2) sin(h) sin(3h/2) is nonzero
MAX_SPACING = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class KnotConstants:
    """Values of a basis function and its two derivatives at its knots.

    ``alpha1 = T(x_{i +/- 1})``, ``alpha2 = T(x_i)``,
    ``beta1 = T'(x_{i+1}) = -T'(x_{i-1})``,
    ``gamma1 = T''(x_{i +/- 1})``, ``gamma2 = T''(x_i)``.
    """

    alpha1: float
    alpha2: float
    beta1: float
    gamma1: float
    gamma2: float


def knot_constants(h: float) -> KnotConstants:
    """Closed-form knot values for spacing ``h``.

    Parameters
    ----------
    h : float
        Knot spacing, required to lie in ``(0, 2*pi/3)``.

    Returns
    -------
    KnotConstants

    Raises
    ------
    ValueError
        If ``h`` is outside the admissible interval.
    """
    if not 0.0 < h < MAX_SPACING:
        raise ValueError(
            f"knot spacing h={h!r} outside the admissible interval (0, 2*pi/3)"
        )
    sh2 = math.sin(0.5 * h)
    ch2 = math.cos(0.5 * h)
    sh = math.sin(h)
    ch = math.cos(h)
    s3h2 = math.sin(1.5 * h)
    c3h2 = math.cos(1.5 * h)
    alpha1 = sh2 * sh2 / (sh * s3h2)
    alpha2 = 2.0 / (1.0 + 2.0 * ch)
    beta1 = -0.75 / s3h2
    gamma1 = 3.0 * (1.0 + 3.0 * ch) / (16.0 * sh2 * sh2 * (2.0 * ch2 + c3h2))
    # note: the second derivative at the centre knot involves cot(h/2);
    # direct differentiation of the pieces confirms this (see tests)
    gamma2 = -3.0 * (ch2 / sh2) ** 2 / (2.0 + 4.0 * ch)
    return KnotConstants(alpha1, alpha2, beta1, gamma1, gamma2)


class UniformGrid:
    """Uniform partition of ``[a, b]`` into ``n_intervals`` cells.

    Holds the collocation knots ``x_0 .. x_N`` together with the two
    extension knots on each side needed by the basis functions attached to
    ``x_{-1}``, ``x_0``, ``x_N`` and ``x_{N+1}``.
    """

    def __init__(self, a: float, b: float, n_intervals: int):
        if n_intervals < 2:
            raise ValueError("need at least 2 intervals")
        if not b > a:
            raise ValueError(f"empty domain [{a}, {b}]")
        h = (b - a) / n_intervals
        if not h < MAX_SPACING:
            raise ValueError(
                f"spacing h={h} too coarse; basis requires h < 2*pi/3"
            )
        self.a = float(a)
        self.b = float(b)
        self.n_intervals = int(n_intervals)
        self.h = h
        # knots x_i, i = -2 .. N+2, spaced exactly h apart
        self.knots = self.a + h * np.arange(-2, n_intervals + 3)

    def knot(self, i: int) -> float:
        """Knot coordinate ``x_i`` for ``i`` in ``-2 .. N+2``."""
        if not -2 <= i <= self.n_intervals + 2:
            raise IndexError(f"knot index {i} out of range")
        return float(self.knots[i + 2])

    @property
    def x(self) -> np.ndarray:
        """The collocation knots ``x_0 .. x_N``."""
        return self.knots[2:-2]

    def __repr__(self):
        return (
            f"UniformGrid(a={self.a}, b={self.b}, "
            f"n_intervals={self.n_intervals})"
        )


# The four pieces of T_i over [x_{i-2}, x_{i+2}], written as signed triple
# products of W(c) = sin((x - c)/2); offsets index the knots t_k = x_{i-2+k}.
# (Y(c) = sin((c - x)/2) = -W(c) absorbs the signs.)
_PIECES = (
    ((1.0, (0, 0, 0)),),
    ((-1.0, (0, 0, 2)), (-1.0, (0, 1, 3)), (-1.0, (1, 1, 4))),
    ((1.0, (0, 3, 3)), (1.0, (1, 3, 4)), (1.0, (2, 4, 4))),
    ((-1.0, (4, 4, 4)),),
)


def _piece_eval(x: float, t: np.ndarray, piece: int, order: int) -> float:
    """Evaluate one piece (or its derivative) as a sum of triple products."""
    total = 0.0
    for sign, (k1, k2, k3) in _PIECES[piece]:
        s1, s2, s3 = (math.sin(0.5 * (x - t[k])) for k in (k1, k2, k3))
        if order == 0:
            total += sign * s1 * s2 * s3
            continue
        c1, c2, c3 = (math.cos(0.5 * (x - t[k])) for k in (k1, k2, k3))
        if order == 1:
            total += 0.5 * sign * (c1 * s2 * s3 + s1 * c2 * s3 + s1 * s2 * c3)
        else:
            total += 0.25 * sign * (
                -3.0 * s1 * s2 * s3
                + 2.0 * (c1 * c2 * s3 + c1 * s2 * c3 + s1 * c2 * c3)
            )
    return total


def _eval(grid: UniformGrid, i: int, x: float, order: int) -> float:
    if not -1 <= i <= grid.n_intervals + 1:
        raise ValueError(f"basis index {i} outside -1 .. N+1")
    # support knots t_k = x_{i-2+k}; synthesised so the edge functions
    # (i = -1, N+1) work even though their outermost knot is not stored
    t = grid.a + grid.h * (i - 2 + np.arange(5.0))
    r = (x - t[0]) / grid.h
    if r < 0.0 or r > 4.0:
        return 0.0
    # closed pieces, ties resolved to the left piece (values agree by C^2)
    piece = min(3, max(0, math.ceil(r) - 1))
    gamma = math.sin(0.5 * grid.h) * math.sin(grid.h) * math.sin(1.5 * grid.h)
    return _piece_eval(x, t, piece, order) / gamma


def eval_basis(grid: UniformGrid, i: int, x: float) -> float:
    """Value of the basis function attached to knot ``x_i`` at ``x``.

    Zero outside the support ``[x_{i-2}, x_{i+2}]``.
    """
    return _eval(grid, i, x, 0)


def eval_basis_derivative(grid: UniformGrid, i: int, x: float, order: int) -> float:
    """First or second derivative of the basis function at ``x``.

    ``order`` must be 1 or 2; higher derivatives do not exist at the knots.
    """
    if order not in (1, 2):
        raise ValueError(f"unsupported derivative order {order}")
    return _eval(grid, i, x, order)


def eval_basis_recursive(grid: UniformGrid, i: int, x: float, k: int) -> float:
    """Order-``k`` trigonometric B-spline via the two-term recursion.

    The order-1 function is the indicator of ``[x_i, x_{i+1})``; orders 2..4
    follow from the half-angle sine recursion.  This evaluator is a
    cross-check for :func:`eval_basis` only: the order-4 result is
    proportional to ``eval_basis`` (shifted by two knots) with an
    h-dependent constant, not equal to it.  Requires ``i`` and ``i+k`` to
    address knots inside the extended range ``-2 .. N+2``.
    """
    if not 1 <= k <= 4:
        raise ValueError(f"order k={k} outside 1 .. 4")
    xi = grid.knot(i)
    if k == 1:
        return 1.0 if xi <= x < grid.knot(i + 1) else 0.0
    # both denominators equal sin((k-1) h / 2) on a uniform grid
    denom = math.sin(0.5 * (k - 1) * grid.h)
    left = math.sin(0.5 * (x - xi)) / denom
    right = math.sin(0.5 * (grid.knot(i + k) - x)) / denom
    return left * eval_basis_recursive(grid, i, x, k - 1) + right * eval_basis_recursive(
        grid, i + 1, x, k - 1
    )


def nodal_values(window, constants: KnotConstants):
    """Spline value and first two derivatives at a knot from a 3-window.

    ``window`` holds the coefficients ``(c_{i-1}, c_i, c_{i+1})`` of the three
    basis functions that are nonzero at knot ``x_i``.
    """
    cm, c0, cp = window
    value = constants.alpha1 * cm + constants.alpha2 * c0 + constants.alpha1 * cp
    d1 = constants.beta1 * cm - constants.beta1 * cp
    d2 = constants.gamma1 * cm + constants.gamma2 * c0 + constants.gamma1 * cp
    return value, d1, d2
