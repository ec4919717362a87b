import numpy as np
import pytest

from advect2d import (
    DescentDiverged,
    DoswellParams,
    InverseProblem,
    ScalarField2D,
    SchemeKind,
    SolverConfig,
    cost,
    doswell_exact,
    doswell_field,
    evaluate_design,
    forward_solve,
    gd_solve,
    gradient,
    make_grid,
    sample,
    uniform_field,
)

VBAR = 2.59807
PARAMS = DoswellParams(VBAR, 1.0)


def _smooth_field(grid, seed):
    rng = np.random.RandomState(seed)
    xx, yy = grid.meshgrid()
    lx = grid.xmax - grid.xmin
    ly = grid.ymax - grid.ymin
    out = np.zeros_like(xx)
    for _ in range(4):
        kx, ky = rng.randint(1, 3, size=2)
        amp = rng.randn()
        phx, phy = rng.uniform(0, 2 * np.pi, size=2)
        out += amp * np.sin(2 * np.pi * kx * xx / lx + phx) * np.sin(
            2 * np.pi * ky * yy / ly + phy
        )
    return ScalarField2D(grid, out)


def _zero_velocity_problem(n=12, **kwargs):
    g = make_grid(-5, 5, -5, 5, n, n)
    target = kwargs.pop("target", ScalarField2D(g, np.zeros((n, n))))
    return InverseProblem(
        target=target,
        T=1.0,
        field=uniform_field(0.0, 0.0),
        forward_cfg=SolverConfig(SchemeKind.LW),
        adjoint_cfg=SolverConfig(SchemeKind.LW),
        **kwargs,
    )


def _vortex_problem(n=40, T=1.0, adjoint=SchemeKind.LW, **kwargs):
    g = make_grid(-5, 5, -5, 5, n, n)
    target = sample(lambda x, y: doswell_exact(x, y, T, PARAMS), g)
    return InverseProblem(
        target=target,
        T=T,
        field=doswell_field(VBAR),
        forward_cfg=SolverConfig(SchemeKind.LW),
        adjoint_cfg=SolverConfig(adjoint),
        **kwargs,
    )


def test_cost_zero_when_target_reached_exactly():
    prob = _vortex_problem(n=24)
    u0 = _smooth_field(prob.target.grid, 3)
    prob.target = forward_solve(u0, prob.field, prob.T, prob.forward_cfg)
    assert cost(u0, prob) == 0.0


def test_cost_zero_for_zero_problem():
    prob = _zero_velocity_problem()
    zero = ScalarField2D(prob.target.grid, np.zeros_like(prob.target.values))
    assert cost(zero, prob) == 0.0


def test_cost_of_constant_mismatch_is_half_c_squared_times_area():
    prob = _zero_velocity_problem(n=16)
    c = 0.3
    u0 = ScalarField2D(prob.target.grid, np.full((16, 16), c))
    assert cost(u0, prob) == pytest.approx(0.5 * c * c * 100.0)


def test_gradient_zero_when_target_reached():
    prob = _vortex_problem(n=24)
    u0 = _smooth_field(prob.target.grid, 4)
    prob.target = forward_solve(u0, prob.field, prob.T, prob.forward_cfg)
    g = gradient(u0, prob)
    np.testing.assert_allclose(g.values, 0.0, atol=1e-15)


def test_gradient_without_transport_is_pointwise_mismatch():
    prob = _zero_velocity_problem(n=16, target=_smooth_field(make_grid(-5, 5, -5, 5, 16, 16), 50))
    u0 = _smooth_field(prob.target.grid, 5)
    g = gradient(u0, prob)
    np.testing.assert_allclose(g.values, u0.values - prob.target.values, atol=1e-14)


def test_gradient_matches_central_finite_differences():
    prob = _vortex_problem(n=40)
    grid = prob.target.grid
    u0 = _smooth_field(grid, 1)
    du = _smooth_field(grid, 2)
    h = 1e-4
    plus = ScalarField2D(grid, u0.values + h * du.values)
    minus = ScalarField2D(grid, u0.values - h * du.values)
    fd = (cost(plus, prob) - cost(minus, prob)) / (2.0 * h)
    inner = np.sum(gradient(u0, prob).values * du.values) * grid.dx * grid.dy
    assert abs(inner - fd) / abs(fd) < 0.05


def test_gradient_linear_in_state_and_target_jointly():
    g = make_grid(-5, 5, -5, 5, 20, 20)
    vel = doswell_field(VBAR)
    cfgs = dict(forward_cfg=SolverConfig(SchemeKind.LW), adjoint_cfg=SolverConfig(SchemeKind.MMOC))
    u0a, ta = _smooth_field(g, 6), _smooth_field(g, 7)
    u0b, tb = _smooth_field(g, 8), _smooth_field(g, 9)
    ga = gradient(u0a, InverseProblem(target=ta, T=1.0, field=vel, **cfgs))
    gb = gradient(u0b, InverseProblem(target=tb, T=1.0, field=vel, **cfgs))
    both = gradient(
        ScalarField2D(g, u0a.values + u0b.values),
        InverseProblem(target=ScalarField2D(g, ta.values + tb.values), T=1.0, field=vel, **cfgs),
    )
    np.testing.assert_allclose(both.values, ga.values + gb.values, atol=1e-12)


def test_cost_is_exactly_quadratic_along_lines():
    prob = _vortex_problem(n=12, T=0.5)
    grid = prob.target.grid
    base = _smooth_field(grid, 10)
    direction = _smooth_field(grid, 11)
    s = np.linspace(-1.0, 2.0, 7)
    j = np.array([
        cost(ScalarField2D(grid, base.values + si * direction.values), prob) for si in s
    ])
    coeffs = np.polyfit(s, j, 2)
    residual = np.linalg.norm(j - np.polyval(coeffs, s))
    assert residual / np.linalg.norm(j) < 1e-10


def test_gd_trivial_problem_converges_immediately():
    prob = _zero_velocity_problem(n=10)
    zero = ScalarField2D(prob.target.grid, np.zeros((10, 10)))
    report = gd_solve(prob, zero)
    assert report.converged
    assert report.iterations == 1
    assert report.j_history == [0.0]
    assert report.rel_change_history == [0.0]
    np.testing.assert_array_equal(report.u0.values, 0.0)


def test_gd_identity_transport_recovers_target():
    g = make_grid(-5, 5, -5, 5, 16, 16)
    target = _smooth_field(g, 12)
    prob = _zero_velocity_problem(n=16, target=target, tol=1e-10)
    report = gd_solve(prob, ScalarField2D(g, np.zeros((16, 16))))
    assert report.converged
    np.testing.assert_allclose(report.u0.values, target.values, atol=1e-8)
    # fixed-point contraction at eta=0.5 halves the error every iteration
    assert 20 <= report.iterations <= 50
    assert all(b <= a for a, b in zip(report.j_history, report.j_history[1:]))


def test_gd_report_histories_align_with_iterations():
    prob = _vortex_problem(n=20, T=0.5, tol=1e-3)
    zero = ScalarField2D(prob.target.grid, np.zeros((20, 20)))
    report = gd_solve(prob, zero)
    assert len(report.j_history) == report.iterations
    assert len(report.rel_change_history) == report.iterations
    if report.converged:
        assert report.rel_change_history[-1] <= prob.tol


def test_gd_flags_max_iter_exhaustion():
    prob = _vortex_problem(n=20, T=0.5, tol=1e-14, max_iter=5)
    zero = ScalarField2D(prob.target.grid, np.zeros((20, 20)))
    report = gd_solve(prob, zero)
    assert not report.converged
    assert report.iterations == 5
    assert report.rel_change_history[-1] > prob.tol


def test_gd_divergence_guard_trips():
    g = make_grid(-5, 5, -5, 5, 10, 10)
    target = _smooth_field(g, 13)
    prob = _zero_velocity_problem(n=10, target=target, eta=50.0, max_iter=100)
    with pytest.raises(DescentDiverged, match="consecutive"):
        gd_solve(prob, ScalarField2D(g, np.zeros((10, 10))))


def test_gd_final_state_is_transport_of_final_u0():
    prob = _vortex_problem(n=20, T=0.5, tol=1e-3)
    zero = ScalarField2D(prob.target.grid, np.zeros((20, 20)))
    report = gd_solve(prob, zero)
    redone = forward_solve(report.u0, prob.field, prob.T, prob.forward_cfg)
    np.testing.assert_array_equal(report.uT.values, redone.values)


def test_evaluate_design_scores_perfect_recovery_as_zero():
    prob = _zero_velocity_problem(n=10)
    zero = ScalarField2D(prob.target.grid, np.zeros((10, 10)))
    report = gd_solve(prob, zero)
    e_u0, e_uT = evaluate_design(report, zero, prob.target)
    assert e_u0 == 0.0
    assert e_uT == 0.0
    assert report.e_u0 == 0.0 and report.e_uT == 0.0


def test_inverse_problem_validation():
    g = make_grid(-5, 5, -5, 5, 8, 8)
    target = ScalarField2D(g, np.zeros((8, 8)))
    kwargs = dict(
        target=target,
        T=1.0,
        field=uniform_field(0.0, 0.0),
        forward_cfg=SolverConfig(SchemeKind.LW),
        adjoint_cfg=SolverConfig(SchemeKind.LW),
    )
    with pytest.raises(ValueError, match="step size"):
        InverseProblem(eta=0.0, **kwargs)
    with pytest.raises(ValueError, match="tolerance"):
        InverseProblem(tol=-1.0, **kwargs)
    with pytest.raises(ValueError, match="max_iter"):
        InverseProblem(max_iter=0, **kwargs)


def test_gd_rejects_mismatched_grids():
    prob = _zero_velocity_problem(n=10)
    other = make_grid(0, 1, 0, 1, 10, 10)
    with pytest.raises(ValueError, match="grids"):
        gd_solve(prob, ScalarField2D(other, np.zeros((10, 10))))
