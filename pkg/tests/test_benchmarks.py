import mpmath
import numpy as np
import pytest

from burgers1d import (ConfigurationError, DomainError, build_uniform_mesh, example1_exact,
                       example2_exact, get_case, initial_field)
from burgers1d.benchmarks import nodal_slopes

from oracles import burgers_residual, ex1_decaying_mp, ex1_printed_mp, ex2_mp

mp = mpmath.mp


def _ex1_points(rng, n=50):
    return zip(rng.uniform(0, 1, n), rng.uniform(0, 1, n))


def _ex2_points(rng, Re, n=50):
    t = rng.uniform(0, 0.1, n)
    # cluster points inside the layer where the profile actually varies
    x = t + rng.normal(scale=4.0 / Re, size=n)
    return zip(x, t)


@pytest.mark.parametrize("eps", [1e-5, 0.05, 1.0])
def test_example1_decaying_formula_solves_pde(eps):
    mp.dps = 40
    u = ex1_decaying_mp(mp, mp.mpf(eps), 2)
    rng = np.random.default_rng(1)
    pts = list(_ex1_points(rng))
    umax = max(abs(u(x, t)) for x, t in pts)
    worst = max(abs(burgers_residual(mp, u, mp.mpf(eps), x, t)) for x, t in pts)
    assert worst <= 1e-6 * umax
    # and our float evaluator is that formula
    for x, t in pts[:10]:
        assert example1_exact(x, t, eps, 2.0) == pytest.approx(float(u(x, t)), rel=1e-12, abs=1e-300)


def test_example1_printed_formula_fails_pde():
    mp.dps = 40
    eps = mp.mpf("0.05")
    u = ex1_printed_mp(mp, eps, 2)
    rng = np.random.default_rng(1)
    pts = list(_ex1_points(rng))
    umax = max(abs(u(x, t)) for x, t in pts)
    worst = max(abs(burgers_residual(mp, u, eps, x, t)) for x, t in pts)
    assert worst > 1e-3 * umax


def test_example2_shock_solves_pde():
    mp.dps = 40
    Re = 1e4
    u = ex2_mp(mp, mp.mpf(Re), mp.mpf("0.5"), mp.mpf("1.5"), +1)
    pts = list(_ex2_points(np.random.default_rng(2), Re))
    worst = max(abs(burgers_residual(mp, u, 1 / mp.mpf(Re), x, t)) for x, t in pts)
    assert worst <= 1e-6 * 1.5
    for x, t in pts[:10]:
        assert example2_exact(x, t, Re, 0.5, 1.5) == pytest.approx(float(u(x, t)), rel=1e-12)


def test_example2_printed_orientation_fails_pde():
    mp.dps = 40
    Re = 1e4
    u = ex2_mp(mp, mp.mpf(Re), mp.mpf("0.5"), mp.mpf("1.5"), -1)
    pts = list(_ex2_points(np.random.default_rng(2), Re))
    worst = max(abs(burgers_residual(mp, u, 1 / mp.mpf(Re), x, t)) for x, t in pts)
    assert worst > 1.0
    for x, t in pts[:10]:
        assert example2_exact(x, t, Re, 0.5, 1.5, profile="printed") == pytest.approx(float(u(x, t)), rel=1e-12)


def test_example1_point_values():
    for t in (0.0, 0.3, 7.0):
        assert example1_exact(0.0, t, 1e-5, 2.0) == 0.0
        assert abs(example1_exact(1.0, t, 1e-5, 2.0)) < 1e-20
    assert example1_exact(0.5, 0.0, 1e-5, 2.0) == pytest.approx(np.pi * 1e-5, rel=1e-14)
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(example1_exact(x, 0.0, 0.01, 3.0),
                               2 * 0.01 * np.pi * np.sin(np.pi * x) / (3 + np.cos(np.pi * x)), rtol=1e-14)
    with pytest.raises(DomainError):
        example1_exact(0.5, 0.0, 0.01, 1.0)


def test_example2_point_values():
    for profile in ("shock", "printed"):
        t = 0.037
        assert example2_exact(t, t, 1e4, 0.5, 1.5, profile) == 1.0
    assert example2_exact(1e6, 0.0, 1e4, 0.5, 1.5, "printed") == 1.5
    assert example2_exact(-0.5, 0.0, 1e4, 0.5, 1.5, "printed") == pytest.approx(0.5, abs=1e-12)
    # the decreasing wave has the plateaus the other way round
    assert example2_exact(-0.5, 0.0, 1e4, 0.5, 1.5) == pytest.approx(1.5, abs=1e-12)
    assert example2_exact(1e6, 0.0, 1e4, 0.5, 1.5) == 0.5
    with np.errstate(over="raise"):
        example2_exact(np.array([-1e9, 1e9]), 0.0, 1e12, 0.5, 1.5)
    with pytest.raises(DomainError):
        example2_exact(0.0, 0.0, 1e4, 1.5, 0.5)


def test_example2_monotone():
    x = np.linspace(-0.5, 0.5, 1000)
    for t in (0.0, 0.05, 0.1):
        assert np.all(np.diff(example2_exact(x, t, 1e4, 0.5, 1.5)) <= 0)
        assert np.all(np.diff(example2_exact(x, t, 1e4, 0.5, 1.5, "printed")) >= 0)


def test_case_invariants():
    for name in ("example1", "example2"):
        case = get_case(name)
        assert abs(case.eps * case.Re - 1) <= 1e-14
    e2 = get_case("example2")
    assert e2.u1 < e2.u2 and e2.bc == (1.5, 0.5)
    assert get_case("example2", profile="printed").bc == (0.5, 1.5)
    assert round(0.1 / (e2.dt)) == 304 and e2.dt == pytest.approx(3.3e-4, rel=0.01)
    with pytest.raises(ConfigurationError):
        get_case("example3")
    with pytest.raises(ConfigurationError):
        get_case("example1", k=0.5)


def test_initial_field_example1():
    case = get_case("example1")
    mesh = build_uniform_mesh(0, 1, 50)
    field = initial_field(case, mesh)
    assert field.u[0] == 0.0 and field.u[-1] == 0.0
    np.testing.assert_allclose(field.u, case.exact(mesh.nodes, 0.0), rtol=1e-14, atol=1e-20)
    assert field.v is None


def test_initial_field_example2():
    case = get_case("example2", profile="printed")
    mesh = build_uniform_mesh(-0.5, 0.5, 4)
    field = initial_field(case, mesh)
    np.testing.assert_array_equal(field.u, [0.5, 0.5, 1.0, 1.5, 1.5])
    shock = initial_field(get_case("example2"), mesh)
    np.testing.assert_array_equal(shock.u, [1.5, 1.5, 1.0, 0.5, 0.5])
    custom = initial_field(get_case("example2", jump_value=0.8), mesh)
    assert custom.u[2] == 0.8
    odd = initial_field(case, build_uniform_mesh(-0.5, 0.5, 3))
    assert 1.0 not in odd.u


def test_initial_field_derivative_and_mismatch():
    case = get_case("example1")
    mesh = build_uniform_mesh(0, 1, 10)
    field = initial_field(case, mesh, with_derivative=True)
    np.testing.assert_allclose(field.v, nodal_slopes(mesh, field.u))
    lin = nodal_slopes(mesh, 3 * mesh.nodes - 1)
    np.testing.assert_allclose(lin, 3.0, rtol=1e-13)
    with pytest.raises(ConfigurationError):
        initial_field(case, build_uniform_mesh(0, 2, 10))
