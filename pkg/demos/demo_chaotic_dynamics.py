"""Chaotic regimes: hyper-viscosity sweep and the Gaussian-dip run.

Documents (from the field dumps, not asserted anywhere) the qualitative
sensitivity to the fourth-order coefficient: the smaller it is, the earlier
the solution leaves the coherent cellular pattern and turns irregular.
Produces x-t heatmaps like the usual presentations of this equation.

    python3 demos/demo_chaotic_dynamics.py          # full sweep, ~1 min
    python3 demos/demo_chaotic_dynamics.py --quick  # coarse preview
"""

import pathlib
import sys
import time

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ksctb import case_b, case_c, run

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)
QUICK = "--quick" in sys.argv[1:]

# ---------------------------------------------------------------------------
# sweep the fourth-order coefficient on [0, 4 pi]
# ---------------------------------------------------------------------------
thetas = (0.05, 0.02) if QUICK else (0.05, 0.02, 0.01, 0.002)
t_end = 5.0 if QUICK else 10.0
snap_times = np.round(np.arange(0.0, t_end + 1e-9, 0.05), 9)

fig, axes = plt.subplots(1, len(thetas), figsize=(4.2 * len(thetas), 4.6),
                         sharey=True)
onset_report = []
for ax, theta in zip(np.atleast_1d(axes), thetas):
    case = case_b(theta=theta, n_intervals=256 if QUICK else 512)
    t0 = time.perf_counter()
    traj = run(case.problem, t_end, snap_times)
    u = traj.u_matrix()
    print(f"theta={theta}: {len(traj)} snapshots, max|U|={np.max(np.abs(u)):.2f}, "
          f"{time.perf_counter()-t0:.1f}s")

    # crude irregularity onset: first time the amplitude departs from the
    # smooth early transient by more than 25%
    amp = np.max(np.abs(u), axis=1)
    base = amp[0]
    jumps = np.nonzero(np.abs(np.diff(amp)) > 0.25 * np.maximum(base, amp[:-1]))[0]
    onset = traj.times[jumps[0] + 1] if jumps.size else np.inf
    onset_report.append((theta, onset))

    extent = [case.problem.grid.a, case.problem.grid.b, 0.0, t_end]
    ax.imshow(u, origin="lower", aspect="auto", extent=extent, cmap="RdBu_r")
    ax.set_title(f"theta = {theta}")
    ax.set_xlabel("x")
np.atleast_1d(axes)[0].set_ylabel("t")
fig.suptitle("sensitivity of the dynamics to the fourth-order coefficient")
fig.tight_layout()
fig.savefig(OUT / "theta_sweep.png", dpi=130)
print(f"wrote {OUT / 'theta_sweep.png'}")

print("\nirregularity onset (amplitude-jump heuristic, qualitative only):")
for theta, onset in onset_report:
    label = f"{onset:.2f}" if np.isfinite(onset) else f"> {t_end:g}"
    print(f"  theta={theta:6.3f}: first jump near t ~ {label}")
print("smaller theta -> earlier and more complex irregularity.")

# ---------------------------------------------------------------------------
# Gaussian dip on [-30, 30]
# ---------------------------------------------------------------------------
case = case_c(n_intervals=120)
t_end_c = 5.0 if QUICK else 20.0
snaps_c = np.round(np.arange(0.0, t_end_c + 1e-9, 0.1), 9)
t0 = time.perf_counter()
traj = run(case.problem, t_end_c, snaps_c)
u = traj.u_matrix()
print(f"\ngaussian dip: max|U|={np.max(np.abs(u)):.2f}, {time.perf_counter()-t0:.1f}s")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.4))
extent = [case.problem.grid.a, case.problem.grid.b, 0.0, t_end_c]
ax1.imshow(u, origin="lower", aspect="auto", extent=extent, cmap="RdBu_r")
ax1.set_xlabel("x")
ax1.set_ylabel("t")
ax1.set_title("x-t field")
x = case.problem.grid.x
for frac, color in ((0.0, "0.7"), (0.25, "C0"), (1.0, "C3")):
    idx = int(frac * (len(traj) - 1))
    ax2.plot(x, u[idx], color=color, label=f"t={traj.times[idx]:g}")
ax2.set_xlabel("x")
ax2.set_ylabel("u")
ax2.set_title("profiles")
ax2.legend()
fig.tight_layout()
fig.savefig(OUT / "gaussian_dip.png", dpi=130)
print(f"wrote {OUT / 'gaussian_dip.png'}")
