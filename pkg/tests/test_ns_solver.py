import numpy as np
import pytest

from ns_apriori.errors import LinearSolverStall, NonlinearDivergence, PreconditionError
from ns_apriori.forcing import ForcingSpec
from ns_apriori.function_spaces import Grid, VectorField, lq_norm, sobolev_norm
from ns_apriori.ns_solver import (
    FluidProblem,
    SolverConfig,
    StaggeredField,
    advect,
    convective_faces,
    divergence,
    energy_check,
    inner,
    ns_residual,
    random_solenoidal,
    solve_navier_stokes,
    solve_stokes,
    stokes_residual,
    weak_residual,
)

CFG = SolverConfig()


def trig(grid, amp):
    return ForcingSpec("trig", amp).nodes(grid, 1.0)


def wall_faces(state):
    """Normal-velocity values on the six walls."""
    out = []
    for c, a in enumerate(state.velocity.comps):
        out.append(np.take(a, 0, axis=c))
        out.append(np.take(a, -1, axis=c))
    return np.concatenate([w.ravel() for w in out])


def assert_state_invariants(state, g, nonlinear=False):
    assert np.all(wall_faces(state) == 0.0)
    assert state.max_divergence() <= CFG.div_tol
    assert abs(state.pressure_mean()) <= 1e-12
    gf = g if isinstance(g, StaggeredField) else None
    if nonlinear:
        assert ns_residual(state, g) <= 10 * CFG.inner_tol * (1 + _sup_faces(g))
    else:
        assert stokes_residual(state, g) <= CFG.inner_tol * (1 + _sup_faces(g))
    del gf


def _sup_faces(g):
    from ns_apriori.ns_solver import _as_faces

    return _as_faces(g).sup()


# --- convective term ------------------------------------------------------------


def test_advect_examples():
    g = Grid(9)
    x, y, z = g.mesh()
    v = VectorField.from_function(g, lambda x, y, z: (y, x, 0 * x))
    np.testing.assert_allclose(advect(v).values[0], x, atol=1e-13)
    np.testing.assert_allclose(advect(v).values[1], y, atol=1e-13)
    np.testing.assert_allclose(advect(v).values[2], 0.0, atol=1e-13)
    c = VectorField.from_function(g, lambda x, y, z: (1 + 0 * x, -2 + 0 * x, 0.5 + 0 * x))
    assert np.all(advect(c).values == 0.0)
    w = VectorField.from_function(g, lambda x, y, z: (np.sin(y), x * z, np.cos(x + y)))
    np.testing.assert_allclose(advect(w * 3.0).values, 9.0 * advect(w).values, rtol=1e-12, atol=1e-13)


# --- Stokes ---------------------------------------------------------------------


def test_stokes_zero_forcing_gives_zero_state():
    g = Grid(9)
    st = solve_stokes(VectorField.zeros(g), 1.0)
    assert st.velocity.sup() == 0.0
    assert np.all(st.pressure == 0.0)


@pytest.mark.parametrize("poisson", ["fst", "cg"])
def test_stokes_invariants(poisson):
    g = Grid(17)
    f = trig(g, 1.0)
    cfg = SolverConfig(poisson=poisson)
    st = solve_stokes(f, 1.0, cfg=cfg)
    assert_state_invariants(st, f)


def test_fast_transform_and_cg_paths_agree():
    g = Grid(9)
    f = ForcingSpec("bump", 1.0).nodes(g, 1.0)
    a = solve_stokes(f, 0.7, cfg=SolverConfig(poisson="fst"))
    b = solve_stokes(f, 0.7, cfg=SolverConfig(poisson="cg", inner_tol=1e-11))
    assert (a.velocity - b.velocity).sup() <= 1e-8 * a.velocity.sup()


def test_stokes_superposition():
    g = Grid(9)
    rng = np.random.default_rng(5)
    g1 = VectorField(g, rng.normal(size=(3, 9, 9, 9)))
    g2 = VectorField(g, rng.normal(size=(3, 9, 9, 9)))
    s1, s2, s12 = (solve_stokes(f, 1.0) for f in (g1, g2, g1 + g2))
    assert (s12.velocity - s1.velocity - s2.velocity).sup() <= 10 * CFG.inner_tol * (1 + s12.velocity.sup())


def test_stokes_stall_carries_residual():
    g = Grid(9)
    with pytest.raises(LinearSolverStall) as info:
        solve_stokes(trig(g, 1.0), 1.0, cfg=SolverConfig(max_uzawa=1))
    assert info.value.residual > 0


def test_reflection_symmetry():
    # f1(x,y,z) = f2(y,x,z), f3 symmetric in (x, y)  =>  same for v
    g = Grid(17)

    def func(x, y, z):
        a = np.sin(np.pi * x) * np.cos(2 * np.pi * y) * z
        b = np.sin(np.pi * y) * np.cos(2 * np.pi * x) * z
        return a, b, np.cos(np.pi * (x + y)) * np.sin(np.pi * z)

    f = VectorField.from_function(g, func)
    st = solve_navier_stokes(FluidProblem(1.0, f))
    v = st.velocity_nodes().values
    refl = np.stack([v[1].transpose(1, 0, 2), v[0].transpose(1, 0, 2), v[2].transpose(1, 0, 2)])
    assert np.max(np.abs(v - refl)) <= 10 * CFG.inner_tol


# --- Navier-Stokes -----------------------------------------------------------------


def test_navier_stokes_zero_forcing_one_iteration():
    st = solve_navier_stokes(FluidProblem(1.0, VectorField.zeros(Grid(9))))
    assert len(st.trace) == 1
    assert st.velocity.sup() == 0.0


@pytest.mark.parametrize("amp", [0.1, 0.5])
def test_picard_trace_decreases_under_small_data(amp):
    g = Grid(17)
    f = trig(g, amp)
    st = solve_navier_stokes(FluidProblem(1.0, f))
    upd = [t.update_sup for t in st.trace]
    assert all(b < a for a, b in zip(upd[1:], upd[2:]))
    assert_state_invariants(st, f, nonlinear=True)


def test_divergence_error_on_huge_data():
    f = trig(Grid(9), 1e6)
    with pytest.raises(NonlinearDivergence) as info:
        solve_navier_stokes(FluidProblem(1.0, f))
    assert "smaller forcing amplitude" in str(info.value)
    assert info.value.trace


def test_damped_picard_reaches_same_state():
    g = Grid(9)
    f = trig(g, 5.0)
    a = solve_navier_stokes(FluidProblem(1.0, f))
    b = solve_navier_stokes(FluidProblem(1.0, f), SolverConfig(damping=0.6))
    assert (a.velocity - b.velocity).sup() <= 1e-7


# --- weak form --------------------------------------------------------------------


def test_weak_residual_zero_state():
    g = Grid(9)
    st = solve_navier_stokes(FluidProblem(1.0, VectorField.zeros(g)))
    eta = random_solenoidal(g, 0)
    assert weak_residual(st, VectorField.zeros(g), eta) == 0.0


def test_weak_residual_on_random_solenoidal_fields():
    g = Grid(17)
    f = trig(g, 1.0)
    st = solve_navier_stokes(FluidProblem(1.0, f))
    fnorm = lq_norm(f, 2.0)
    for seed in range(20):
        eta = random_solenoidal(g, seed)
        assert np.max(np.abs(divergence(eta))) <= 1e-12
        bound = 1e-6 * (1 + fnorm) * sobolev_norm(eta.to_nodes(), 1, 2.0)
        assert weak_residual(st, f, eta) <= bound


def test_weak_residual_preconditions():
    g = Grid(9)
    st = solve_navier_stokes(FluidProblem(1.0, trig(g, 0.1)))
    rng = np.random.default_rng(0)
    bad = StaggeredField(g, tuple(rng.normal(size=a.shape) for a in StaggeredField.zeros(g).comps))
    with pytest.raises(PreconditionError):
        weak_residual(st, trig(g, 0.1), bad)
    with pytest.raises(PreconditionError):
        weak_residual(st, trig(g, 0.1), VectorField.zeros(g))


def test_convection_is_skew_against_the_solution():
    g = Grid(17)
    st = solve_navier_stokes(FluidProblem(1.0, trig(g, 1.0)))
    conv = convective_faces(st.velocity)
    v = st.velocity
    rel = abs(inner(conv, v)) / np.sqrt(inner(conv, conv) * inner(v, v))
    assert rel <= 1e-6


# --- energy ------------------------------------------------------------------------


def test_energy_check_zero_forcing():
    g = Grid(9)
    st = solve_navier_stokes(FluidProblem(1.0, VectorField.zeros(g)))
    assert energy_check(st, VectorField.zeros(g)) == (0.0, 0.0)


def test_energy_ratios_bounded_over_sweep():
    g = Grid(17)
    r1, r2 = [], []
    for amp in (0.1, 0.2, 0.5, 1.0):
        f = trig(g, amp)
        a, b = energy_check(solve_navier_stokes(FluidProblem(1.0, f)), f)
        r1.append(a)
        r2.append(b)
    assert max(r1) / min(r1) < 2 and max(r2) / min(r2) < 2
