"""Assembly of the step system against brute-force references."""

import numpy as np
import pytest

from ksctb.basis import UniformGrid, knot_constants
from ksctb.cases import case_a
from ksctb.scheme import (
    BoundaryData,
    Coefficients,
    KsProblem,
    assemble_A,
    assemble_B,
    boundary_rhs,
    eliminate_ghosts,
    recover_ghosts,
    row_coefficients,
)
from ksctb.stepper import SolverState, fit_initial, step

from reference import FullSystem, random_consistent_state


def small_problem(N=4, h=0.4, dt=0.05, alpha=1.0, theta=1.0, g0=0.0, g1=0.0):
    grid = UniformGrid(0.0, N * h, N)
    return KsProblem(
        alpha=alpha,
        theta=theta,
        grid=grid,
        dt=dt,
        initial_u=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        boundary=BoundaryData(g0, g1),
    )


def test_row_coefficients_zero_window():
    con = knot_constants(0.4)
    dt, alpha, theta = 0.5, 1.3, 0.7
    rc = row_coefficients(con, (0.0, 0.0, 0.0), dt, alpha, theta)
    assert rc.k1 == 0.0 and rc.k2 == 0.0
    assert rc.nu1 == pytest.approx((2 / dt) * con.alpha1, rel=1e-14)
    assert rc.nu5 == pytest.approx((2 / dt) * con.alpha1, rel=1e-14)
    assert rc.nu3 == pytest.approx((2 / dt) * con.alpha2, rel=1e-14)
    assert rc.nu2 == pytest.approx(alpha * con.alpha1 + theta * con.gamma1, rel=1e-14)
    assert rc.nu4 == pytest.approx(alpha * con.alpha2 + theta * con.gamma2, rel=1e-14)


def test_row_coefficients_antisymmetric_window():
    con = knot_constants(0.4)
    rc = row_coefficients(con, (1.0, 0.0, -1.0), 0.1, 1.0, 1.0)
    assert rc.k1 == pytest.approx(0.0, abs=1e-15)
    assert rc.k2 == pytest.approx(2 * con.beta1, rel=1e-14)


def test_row_coefficient_identities_random():
    con = knot_constants(0.7)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        window = rng.standard_normal(3)
        dt = float(rng.uniform(0.001, 1.0))
        alpha = float(rng.uniform(-2, 2))
        theta = float(rng.uniform(0.01, 2))
        rc = row_coefficients(con, window, dt, alpha, theta)
        assert rc.nu2 == -rc.nu7
        assert rc.nu4 == -rc.nu9
        assert rc.nu1 + rc.nu5 == pytest.approx(
            2 * (2 / dt + rc.k2) * con.alpha1, rel=1e-12
        )


def test_row_coefficients_against_term_by_term_recomputation():
    # case (a) initial state, collocation row at the knot nearest x = -12
    case = case_a()
    problem = case.problem
    coeffs = fit_initial(problem)
    N = problem.grid.n_intervals
    m = int(round((-12.0 - problem.grid.a) / problem.grid.h))
    sys = FullSystem(
        N, problem.grid.h, problem.dt, problem.alpha, problem.theta,
        coeffs.delta, coeffs.phi,
    )
    row, _ = sys.u_row(m)
    con = problem.constants()
    rc = row_coefficients(
        con, (coeffs.delta[m], coeffs.delta[m + 1], coeffs.delta[m + 2]),
        problem.dt, problem.alpha, problem.theta,
    )
    from reference import dcol, pcol

    assert row[dcol(m - 1)] == pytest.approx(rc.nu1, rel=1e-12)
    assert row[pcol(m - 1)] == pytest.approx(rc.nu2, rel=1e-12)
    assert row[dcol(m)] == pytest.approx(rc.nu3, rel=1e-12)
    assert row[pcol(m)] == pytest.approx(rc.nu4, rel=1e-12)
    assert row[dcol(m + 1)] == pytest.approx(rc.nu5, rel=1e-12)
    assert row[pcol(m + 1)] == pytest.approx(rc.nu2, rel=1e-12)


def test_assemble_A_hand_reference_n2():
    problem = small_problem(N=2, h=0.4, dt=1.0)
    con = problem.constants()
    a1, a2 = con.alpha1, con.alpha2
    g1, g2 = con.gamma1, con.gamma2
    nu1 = nu5 = 2 * a1
    nu3 = 2 * a2
    nu2 = a1 + g1
    nu4 = a2 + g2
    d0 = a2 - a1 * g2 / g1
    expected = np.zeros((6, 6))
    expected[0, 0] = d0
    expected[1, :3] = [nu3 - nu1 * g2 / g1, nu4 - nu2 * a2 / a1, nu5 - nu1]
    expected[2, :] = [nu1, nu2, nu3, nu4, nu5, nu2]
    expected[3, :] = [-g1, a1, -g2, a2, -g1, a1]
    expected[4, 4] = d0
    expected[5, 2:] = [nu1 - nu5, 0.0, nu3 - nu5 * g2 / g1, nu4 - nu2 * a2 / a1]
    A = assemble_A(problem, Coefficients.zeros(2))
    np.testing.assert_allclose(A.to_dense(), expected, rtol=1e-13, atol=1e-13)


def test_interior_v_rows_pattern():
    problem = small_problem(N=6)
    con = problem.constants()
    A = assemble_A(problem, Coefficients.zeros(6)).to_dense()
    pattern = [-con.gamma1, con.alpha1, -con.gamma2, con.alpha2, -con.gamma1, con.alpha1]
    for m in range(1, 6):
        r = 2 * m + 1
        np.testing.assert_allclose(A[r, 2 * m - 2 : 2 * m + 4], pattern, rtol=1e-14)


def test_band_extents():
    # the interleaved stencil spans lower bandwidth 3 (v-rows) and upper 3
    # (u-rows); nothing falls outside that
    problem = small_problem(N=6)
    rng = np.random.default_rng(1)
    delta, phi = random_consistent_state(6, problem.grid.h, rng)
    A = assemble_A(problem, Coefficients(delta, phi))
    dense = A.to_dense()
    n = dense.shape[0]
    for i in range(n):
        for j in range(n):
            if j - i > 3 or i - j > 3:
                assert dense[i, j] == 0.0
    # v-rows genuinely use the third subdiagonal
    assert any(dense[2 * m + 1, 2 * m - 2] != 0.0 for m in range(1, 6))


def test_assemble_B_values_and_reuse():
    problem = small_problem(N=5, dt=0.2, alpha=1.5, theta=0.3)
    con = problem.constants()
    B1 = assemble_B(problem)
    B2 = assemble_B(problem)
    np.testing.assert_array_equal(B1.data, B2.data)
    nu6 = (2 / problem.dt) * con.alpha1
    nu7 = -(problem.alpha * con.alpha1 + problem.theta * con.gamma1)
    nu8 = (2 / problem.dt) * con.alpha2
    nu9 = -(problem.alpha * con.alpha2 + problem.theta * con.gamma2)
    dense = B1.to_dense()
    m = 2
    np.testing.assert_allclose(
        dense[2 * m, 2 * m - 2 : 2 * m + 4], [nu6, nu7, nu8, nu9, nu6, nu7], rtol=1e-14
    )


def test_A_B_structural_relations_at_zero_state():
    problem = small_problem(N=6, dt=0.15, alpha=0.9, theta=0.4)
    A = assemble_A(problem, Coefficients.zeros(6)).to_dense()
    B = assemble_B(problem).to_dense()
    for m in range(1, 6):
        r = 2 * m
        cols = slice(2 * m - 2, 2 * m + 4)
        # u-rows at zero state: delta columns agree, phi columns flip sign
        np.testing.assert_allclose(A[r, cols][0::2], B[r, cols][0::2], rtol=1e-14)
        np.testing.assert_allclose(A[r, cols][1::2], -B[r, cols][1::2], rtol=1e-14)
        # v-rows of B are the exact negation of the v-rows of A
        np.testing.assert_allclose(B[r + 1, cols], -A[r + 1, cols], rtol=1e-14)


def test_eliminate_ghosts_single_coefficient():
    con = knot_constants(0.4)
    c = 2.37
    row = np.array([c, 0.0, 0.0, 0.0, 0.0, 0.0])
    folded = eliminate_ghosts(row, "left", con)
    np.testing.assert_allclose(
        folded, [-c * con.gamma2 / con.gamma1, 0.0, -c, 0.0], rtol=1e-14
    )
    row = np.array([0.0, 0.0, 0.0, 0.0, c, 0.0])  # coefficient on delta_{N+1}
    folded = eliminate_ghosts(row, "right", con)
    np.testing.assert_allclose(
        folded, [-c, 0.0, -c * con.gamma2 / con.gamma1, 0.0], rtol=1e-14
    )
    with pytest.raises(ValueError):
        eliminate_ghosts(np.ones(5), "left", con)
    with pytest.raises(ValueError):
        eliminate_ghosts(np.ones(6), "middle", con)


def test_ghost_recovery_consistency():
    con = knot_constants(0.3)
    rng = np.random.default_rng(4)
    for _ in range(20):
        di = rng.standard_normal(9)
        pi = rng.standard_normal(9)
        coeffs = recover_ghosts(di, pi, con)
        np.testing.assert_allclose(coeffs.ghost_residuals(con), 0.0, atol=1e-12)
        # folding a random row against recovered ghosts reproduces the
        # unreduced inner product
        row = rng.standard_normal(6)
        full_left = np.array(
            [coeffs.delta[0], coeffs.phi[0], coeffs.delta[1], coeffs.phi[1],
             coeffs.delta[2], coeffs.phi[2]]
        )
        folded = eliminate_ghosts(row, "left", con)
        inner = np.array([coeffs.delta[1], coeffs.phi[1], coeffs.delta[2], coeffs.phi[2]])
        assert row @ full_left == pytest.approx(folded @ inner, rel=1e-12)


def test_paper_literal_system_is_rank_deficient():
    # keeping the boundary v-collocation rows and adding the four
    # constraints gives rank 2N+4 of 2N+6: the two boundary v-rows are
    # linear combinations of constraint rows; this is why the assembled
    # system replaces them with Dirichlet rows
    N, h = 6, 0.4
    rng = np.random.default_rng(0)
    delta, phi = random_consistent_state(N, h, rng)
    sys = FullSystem(N, h, 0.01, 1.0, 1.0, delta, phi)
    M_lit, _ = sys.build(literal=True)
    assert M_lit.shape == (2 * N + 6, 2 * N + 6)
    assert np.linalg.matrix_rank(M_lit) == 2 * N + 4
    M_rep, _ = sys.build(literal=False)
    assert np.linalg.matrix_rank(M_rep) == 2 * N + 6


@pytest.mark.parametrize("N", [4, 5, 6])
def test_step_matches_dense_augmented_oracle(N):
    rng = np.random.default_rng(N)
    h = 0.5
    problem = small_problem(N=N, h=h, dt=0.02, alpha=1.1, theta=0.6, g0=0.3, g1=-0.2)
    delta, phi = random_consistent_state(N, h, rng)
    coeffs = Coefficients(delta.copy(), phi.copy())
    new_state = step(SolverState(0, 0.0, coeffs, problem))

    sys = FullSystem(N, h, problem.dt, problem.alpha, problem.theta,
                     delta, phi, g0=0.3, g1=-0.2)
    M, rhs = sys.build(literal=False)
    x_full = np.linalg.solve(M, rhs)
    expect_delta = x_full[0::2]
    expect_phi = x_full[1::2]
    scale = np.max(np.abs(x_full))
    np.testing.assert_allclose(new_state.coeffs.delta, expect_delta,
                               rtol=1e-10, atol=1e-10 * scale)
    np.testing.assert_allclose(new_state.coeffs.phi, expect_phi,
                               rtol=1e-10, atol=1e-10 * scale)


def test_boundary_rhs_vector():
    problem = small_problem(N=4, g0=1.25, g1=-0.5)
    vec = boundary_rhs(problem)
    assert vec.shape == (10,)
    assert vec[0] == 1.25 and vec[8] == -0.5
    assert np.count_nonzero(vec) == 2


def test_problem_validation():
    grid = UniformGrid(0.0, 1.0, 8)
    with pytest.raises(ValueError):
        KsProblem(alpha=1.0, theta=0.0, grid=grid, dt=0.1, initial_u=lambda x: x)
    with pytest.raises(ValueError):
        KsProblem(alpha=1.0, theta=1.0, grid=grid, dt=-0.1, initial_u=lambda x: x)


def test_coefficients_interleaving_roundtrip():
    con = knot_constants(0.4)
    rng = np.random.default_rng(9)
    coeffs = recover_ghosts(rng.standard_normal(7), rng.standard_normal(7), con)
    z = coeffs.interleaved()
    back = Coefficients.from_interleaved(z, con)
    np.testing.assert_allclose(back.delta, coeffs.delta, rtol=1e-14)
    np.testing.assert_allclose(back.phi, coeffs.phi, rtol=1e-14)
