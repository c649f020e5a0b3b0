import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from scipy import integrate

from conftest import power_map
from valdist.errors import AtomOnBoundary, DegenerateInput, NoConvergence
from valdist.greenjensen import (
    CONVENTION,
    QuadratureSpec,
    RadialDensity,
    boundary_mean,
    disc_integral,
    jensen_residual,
    log_modulus_density,
    nabla_integral,
)
from valdist.projective import fs_pullback_density


def nested_oracle(u, r, n_r=48, n_t=96):
    """int_0^r dt/t int_{|z|<t} u dA with a plain polar tensor rule per t and scipy quad outside."""
    xg, wg = np.polynomial.legendre.leggauss(n_r)
    theta = 2 * np.pi * np.arange(n_t) / n_t

    def inner(t):
        rho = 0.5 * t * (xg + 1)
        vals = u(rho[:, None] * np.exp(1j * theta)[None, :]).mean(axis=1)
        return float(np.sum(0.5 * t * wg * 2 * np.pi * rho * vals))

    return integrate.quad(lambda t: inner(t) / t, 0, r, epsabs=1e-13, epsrel=1e-11)[0]


def test_convention_tag():
    assert CONVENTION == "ddc=laplacian/2pi"


@pytest.mark.parametrize("phi, r, expected", [
    (lambda z: z.real, 0.7, 0.0),
    (lambda z: np.abs(z) ** 2, 0.5, 0.25),
    (lambda z: np.log(np.abs(z - 2)), 0.9, np.log(2)),
])
def test_boundary_mean_examples(phi, r, expected):
    assert boundary_mean(phi, r) == pytest.approx(expected, abs=1e-12)


def test_boundary_mean_gives_up():
    q = QuadratureSpec(n_theta=16, max_refine=1)
    with pytest.raises(NoConvergence):
        boundary_mean(lambda z: np.abs(z - 0.5 - 1e-4) ** 0.5, 0.5, q)


def test_nabla_constant_density():
    u = RadialDensity(lambda z: np.full(z.shape, 2 / np.pi))
    assert nabla_integral(u, 0.5) == pytest.approx(0.25, abs=1e-13)


def test_nabla_single_atom():
    u = RadialDensity(None, ((0.2j, 1.0),))
    assert nabla_integral(u, 0.5) == pytest.approx(np.log(2.5), abs=1e-15)


def test_nabla_fs_cubic_closed_form():
    f = power_map(3)
    u = RadialDensity(lambda z: fs_pullback_density(f, z))
    closed = 0.5 * np.log1p(0.9**6)
    assert nabla_integral(u, 0.9) == pytest.approx(closed, abs=1e-12)
    # independent 2-D quadrature of the log-weighted form
    oracle = integrate.dblquad(lambda t, rho: np.log(0.9 / rho) * rho * float(fs_pullback_density(f, rho * np.exp(1j * t))),
                               0, 0.9, 0, 2 * np.pi, epsabs=1e-11)[0]
    assert closed == pytest.approx(oracle, abs=1e-8)


def test_atom_guards():
    with pytest.raises(AtomOnBoundary):
        nabla_integral(RadialDensity(None, ((0.5, 1.0),)), 0.5)
    with pytest.raises(DegenerateInput):
        nabla_integral(RadialDensity(None, ((0j, 1.0),)), 0.5)
    with pytest.raises(ValueError):
        RadialDensity(None, ((1.2, 1.0),))


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(n_theta=100)
    with pytest.raises(ValueError):
        QuadratureSpec(tol=1e-13)
    assert QuadratureSpec().doubled().n_theta == 512


def test_fixed_rule_mode_skips_refinement():
    # a rough integrand that the adaptive rule would keep refining
    q = QuadratureSpec(n_theta=16, n_radial=8, max_refine=0)
    u = RadialDensity(lambda z: 1 / (np.abs(z - 0.3) ** 2 + 1e-3))
    assert np.isfinite(nabla_integral(u, 0.6, q))


@pytest.mark.parametrize("r", [0.2, 0.4, 0.6, 0.8, 0.95])
def test_jensen_calibration_examples(r):
    sq = RadialDensity(lambda z: np.full(z.shape, 2 / np.pi))
    assert abs(jensen_residual(lambda z: np.abs(z) ** 2, sq, r)) < 1e-9
    a = 0.3 * np.exp(0.4j)
    if abs(abs(a) - r) > 1e-3:
        res = jensen_residual(lambda z: np.log(np.abs(z - a)), log_modulus_density([(a, 1.0)]), r)
        assert abs(res) < 1e-9


def test_log_atom_both_sides_equal_log_8_3():
    a = 0.3j
    lhs = nabla_integral(log_modulus_density([(a, 1.0)]), 0.8)
    rhs = boundary_mean(lambda z: np.log(np.abs(z - a)), 0.8) - np.log(0.3)
    assert lhs == pytest.approx(np.log(8 / 3), abs=1e-12)
    assert rhs == pytest.approx(np.log(8 / 3), abs=1e-10)


def _random_poly_phi(seed, degree=6):
    x, y = sympy.symbols("x y", real=True)
    rng = np.random.default_rng(seed)
    expr = sum(int(rng.integers(-5, 6)) * x**i * y**j
               for i in range(degree + 1) for j in range(degree + 1 - i))
    lap = sympy.diff(expr, x, 2) + sympy.diff(expr, y, 2)
    phi = sympy.lambdify((x, y), expr, "numpy")
    dens = sympy.lambdify((x, y), lap / (2 * sympy.pi), "numpy")
    return (lambda z: phi(z.real, z.imag) + 0 * z.real), (lambda z: dens(z.real, z.imag) + 0 * z.real)


@pytest.mark.parametrize("seed", range(5))
def test_jensen_random_polynomial(seed):
    phi, dens = _random_poly_phi(seed)
    # the symbolic Laplacian agrees with a finite-difference one
    z0, h = np.array([0.21 - 0.33j]), 1e-3
    fd = sum(phi(z0 + h * d) + phi(z0 - h * d) for d in (1, 1j)) - 4 * phi(z0)
    assert fd / h**2 / (2 * np.pi) == pytest.approx(dens(z0), rel=1e-4, abs=1e-6)
    res = jensen_residual(phi, RadialDensity(dens), 0.5)
    assert abs(res) < 1e-8 * (1 + abs(boundary_mean(phi, 0.5)))


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.5, 3), st.floats(0.15, 0.95))
def test_fubini_against_nested_oracle(a, b, c, r):
    u = lambda z: np.exp(a * z.real) * (1 + 0.5 * np.cos(c * z.imag)) + b * np.abs(z) ** 2
    got = nabla_integral(RadialDensity(u), r)
    want = nested_oracle(u, r)
    assert got == pytest.approx(want, rel=1e-6, abs=1e-9)


@given(st.floats(0.05, 0.9), st.floats(0.01, 0.09))
def test_monotone_in_r(r, dr):
    u = RadialDensity(lambda z: 1 + np.sin(3 * z.real) ** 2, ((0.3 + 0.2j, 0.5),))
    lo, hi = r, min(r + dr, 0.99)
    if min(abs(lo - abs(0.3 + 0.2j)), abs(hi - abs(0.3 + 0.2j))) < 1e-6:
        return
    assert nabla_integral(u, hi) >= nabla_integral(u, lo) - 1e-12


def test_disc_integral_fs_mass():
    f = power_map(1)
    mass = disc_integral(lambda z: fs_pullback_density(f, z), 10.0)
    assert mass == pytest.approx(100 / 101, abs=1e-10)
