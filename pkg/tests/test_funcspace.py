from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import M
from valdist.errors import DegenerateInput, ExactModeRequired, InputError, NotCoprime, RootOnBoundary
from valdist.funcspace import (
    GaussQ,
    Poly,
    RationalMap,
    all_roots,
    common_root_order,
    parse_coefficient,
    radical_degree,
    roots_in_disc,
    squarefree_decomposition,
    winding_number,
)


def brute_winding(p: Poly, r: float, n: int = 200_000) -> int:
    theta = np.linspace(0, 2 * np.pi, n + 1)
    vals = p(r * np.exp(1j * theta))
    return int(round(np.sum(np.diff(np.unwrap(np.angle(vals)))) / (2 * np.pi)))


@pytest.mark.parametrize("text, expected", [
    ("3", GaussQ(3)),
    ("-i", GaussQ(0, -1)),
    ("1/2+3/4*i", GaussQ(Fraction(1, 2), Fraction(3, 4))),
    ("2-5i", GaussQ(2, -5)),
    ("1e-3", GaussQ(Fraction(1, 1000))),
    ("0.25", GaussQ(Fraction(1, 4))),
])
def test_parse_coefficient(text, expected):
    assert parse_coefficient(text) == expected


def test_parse_rejects_garbage():
    with pytest.raises(InputError):
        Poly.parse("1, two, 3")


def test_text_roundtrip():
    p = Poly.parse("1/3, 0, -2+1/7*i, 5")
    assert Poly.parse(p.to_text()).exact_coeffs == p.exact_coeffs


def test_trailing_zeros_trimmed():
    p = Poly.parse("1,2,0,0")
    assert p.degree == 1


def test_zero_poly_has_no_roots():
    with pytest.raises(DegenerateInput):
        roots_in_disc(Poly.parse("0"), 0.5)


def test_roots_quarter():
    res = roots_in_disc(Poly.parse("-1/4,0,1"), 1.0)
    locs = sorted(res.entries, key=lambda e: e[0].real)
    assert [m for _, m in locs] == [1, 1]
    np.testing.assert_allclose([z for z, _ in locs], [-0.5, 0.5], atol=1e-14)


def test_roots_triple_at_origin():
    res = roots_in_disc(Poly.parse("0,0,0,1"), 0.5)
    assert len(res.entries) == 1
    z, m = res.entries[0]
    assert m == 3 and abs(z) < 1e-14


def test_roots_double_with_outside_root():
    p = Poly.from_roots([0.3, 0.3, -0.8])
    res = roots_in_disc(p, 0.5)
    assert len(res.entries) == 1
    z, m = res.entries[0]
    assert m == 2 and abs(z - 0.3) < 1e-7
    assert res.count == brute_winding(p, 0.5) == 2


def test_root_on_boundary():
    with pytest.raises(RootOnBoundary):
        roots_in_disc(Poly.parse("-1/2,1"), 0.5)


def test_roots_exact_mode_sympy_oracle():
    z = sympy.Symbol("z")
    expr = sympy.expand((z - sympy.Rational(1, 3)) ** 3 * (z + sympy.Rational(1, 2)) ** 2 * (z - 2))
    coeffs = [str(c) for c in reversed(sympy.Poly(expr, z).all_coeffs())]
    got = sorted(all_roots(Poly.parse(",".join(coeffs))), key=lambda e: e[0].real)
    want = sorted(sympy.roots(expr, z).items(), key=lambda e: float(e[0]))
    assert [m for _, m in got] == [m for _, m in want]
    np.testing.assert_allclose([z for z, _ in got], [complex(w) for w, _ in want], atol=1e-12)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4), st.integers(0, 2**31 - 1))
def test_random_multiplicities_recovered(mults, seed):
    # float polynomials built from well separated roots inside D(0.9)
    rng = np.random.default_rng(seed)
    roots = []
    while len(roots) < len(mults):
        w = 0.85 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if all(abs(w - v) > 0.15 for v in roots):
            roots.append(w)
    p = Poly.from_roots([w for w, m in zip(roots, mults) for _ in range(m)])
    found = all_roots(p)
    assert sorted(m for _, m in found) == sorted(mults)
    for w, m in zip(roots, mults):
        best = min(found, key=lambda e: abs(e[0] - w))
        assert abs(best[0] - w) < 1e-8 and best[1] == m


@given(st.integers(0, 2**31 - 1))
def test_winding_equals_multiplicity_sum(seed):
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(1, 8))
    p = Poly(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
    r = float(rng.uniform(0.2, 1.0))
    try:
        res = roots_in_disc(p, r)
    except RootOnBoundary:
        return
    assert res.count == res.winding == winding_number(p, r)


@pytest.mark.parametrize("text, expected", [
    ("0,0,0,0,0,1", 1),
    ("0,-1,0,1", 3),
    ("0,0,-1,3,-3,1", 2),
])
def test_radical_degree(text, expected):
    assert radical_degree(Poly.parse(text)) == expected


def test_radical_needs_exact():
    with pytest.raises(ExactModeRequired):
        radical_degree(Poly(np.array([1.0, 0.5])))


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4),
       st.lists(st.integers(-3, 3), min_size=2, max_size=4))
def test_radical_additive_on_coprime(a, b):
    p, q = Poly.exact(a), Poly.exact(b)
    if p.degree < 1 or q.degree < 1:
        return
    z = sympy.Symbol("z")
    if sympy.gcd(sympy.Poly(list(reversed(a)), z), sympy.Poly(list(reversed(b)), z)).degree() > 0:
        return
    assert radical_degree(p * q) == radical_degree(p) + radical_degree(q)


def test_squarefree_matches_sympy():
    p = Poly.parse("0,0,-1,3,-3,1")  # z^2 (z-1)^3
    parts = {m: Poly.exact(f).degree for f, m in squarefree_decomposition(p.exact_coeffs)}
    assert parts == {2: 1, 3: 1}


def test_common_root_order():
    w = Poly.parse("-6,11,-6,1")  # (z-1)(z-2)(z-3)
    p = Poly.parse("2,-3,1")  # (z-1)(z-2)
    assert common_root_order(w, p) == 2
    assert common_root_order(Poly.parse("1,-2,1"), Poly.parse("-1,1")) == 2


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5),
       st.lists(st.integers(-4, 4), min_size=1, max_size=5),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_exact_and_float_arithmetic_agree(a, b, z):
    p, q = Poly.exact(a), Poly.exact(b)
    pf, qf = p.as_float(), q.as_float()
    for exact, flt in ((p * q, pf * qf), (p + q, pf + qf), (p - q, pf - qf), (p.deriv(), pf.deriv())):
        assert abs(exact(z) - flt(z)) <= 1e-9 * (1 + abs(flt(z)))


def test_sparse_evaluation_matches_horner():
    p = Poly.parse(",".join(["1"] + ["0"] * 39 + [str(2**40)]))
    z = np.array([0.3 + 0.1j, 0.49j, -0.5])
    np.testing.assert_allclose(p(z), 1 + (2 * z) ** 40, rtol=1e-12)


def test_rational_map_coprime_check():
    with pytest.raises(NotCoprime):
        M("-1,1 | -1,0,1")  # share the factor z - 1
    assert M("1 | 0,1").degree == 1


def test_rational_map_constant_detection():
    assert M("2 | 4").is_constant
    assert RationalMap.unchecked([Poly.parse("1,1"), Poly.parse("2,2")]).is_constant
    assert not M("1 | 0,1").is_constant


def test_mobius_moves_point():
    f = M("1 | 0,1")
    g = f.mobius(0.25)
    x = g(np.array([0.25]))[:, 0]
    assert abs(x[1] / x[0]) < 1e-14


def test_homogeneous_at_infinity():
    f = M("1 | 0,0,1")
    x = f.homogeneous(np.array([1.0]), np.array([0.0]))[:, 0]
    assert abs(x[0]) == 0 and abs(x[1]) == 1
