"""Walk through the trigonometric cubic B-spline basis.

Plots a few neighbouring basis functions with their first two derivatives,
prints the knot-constant table for a couple of spacings, and shows the
degeneration towards the polynomial cubic B-spline values as h shrinks.

Run from the repository root:

    python3 demos/demo_basis_functions.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ksctb import UniformGrid, eval_basis, eval_basis_derivative, knot_constants

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# ---------------------------------------------------------------------------
# knot constants: the three-term stencil weights used everywhere else
# ---------------------------------------------------------------------------
print("knot constants (value / slope / curvature stencils):")
print(f"{'h':>8} {'alpha1':>12} {'alpha2':>12} {'beta1':>12} {'gamma1':>12} {'gamma2':>12}")
for h in (1.0, 0.4, 0.1, 0.01):
    c = knot_constants(h)
    print(f"{h:8.3g} {c.alpha1:12.6f} {c.alpha2:12.6f} {c.beta1:12.4f} "
          f"{c.gamma1:12.4f} {c.gamma2:12.4f}")

print("\nsmall-h degeneration towards the polynomial cubic B-spline:")
print(f"{'h':>8} {'alpha1':>10} {'alpha2':>10} {'h*beta1':>10} {'h^2*g1':>10} {'h^2*g2':>10}")
for h in (0.5, 0.1, 1e-3, 1e-6):
    c = knot_constants(h)
    print(f"{h:8.1e} {c.alpha1:10.6f} {c.alpha2:10.6f} {h*c.beta1:10.6f} "
          f"{h*h*c.gamma1:10.6f} {h*h*c.gamma2:10.6f}")
print("    limits:  0.166667   0.666667  -0.500000   1.000000  -2.000000")

# the curvature stencil applied to a constant does NOT vanish: the basis
# space cannot represent constants, which caps the solver's accuracy on
# solutions with a large mean level (see demo_shock_accuracy.py)
print("\ncurvature-stencil bias on constants, (2*gamma1+gamma2):")
for h in (0.5, 0.4, 0.2, 0.1):
    c = knot_constants(h)
    print(f"  h={h:4.2f}: {2*c.gamma1 + c.gamma2:+.6e}  (~ -0.047 h^2)")

# ---------------------------------------------------------------------------
# plot the basis and its derivatives over a short grid
# ---------------------------------------------------------------------------
grid = UniformGrid(0.0, 1.0, 5)
xs = np.linspace(0.0, 1.0, 801)

fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
for i in range(-1, grid.n_intervals + 2):
    values = [eval_basis(grid, i, x) for x in xs]
    axes[0].plot(xs, values, label=f"i={i}")
    axes[1].plot(xs, [eval_basis_derivative(grid, i, x, 1) for x in xs])
    axes[2].plot(xs, [eval_basis_derivative(grid, i, x, 2) for x in xs])
axes[0].set_ylabel("T_i(x)")
axes[0].legend(ncol=4, fontsize=8)
axes[1].set_ylabel("T_i'(x)")
axes[2].set_ylabel("T_i''(x)")
axes[2].set_xlabel("x")
for ax in axes:
    for knot in grid.x:
        ax.axvline(knot, color="0.85", lw=0.5, zorder=0)
fig.suptitle("Trigonometric cubic B-splines on [0, 1], N = 5")
fig.tight_layout()
fig.savefig(OUT / "basis_functions.png", dpi=130)
print(f"\nwrote {OUT / 'basis_functions.png'}")
