"""Riemann-Hurwitz counts, Mason's abc bound and the log-tangent Jensen identity on P^1.

A map ``f = [F0 : F1]`` has the Wronskian ``W = F0 F1' - F1 F0'``; its zeros are the finite
ramification points. The log metric with boundary ``D = {a_1, ..., a_k}`` is

    w(x) = (1 + |x|^2)^(-1) * prod_i sigma(x, a_i)^(-1)

with ``sigma`` the chordal distance, and ``psi = log(|f'| w(f))`` equals

    log|W| + (k - 2) log||F|| - sum_i (log|L_i(F)| - log||a_i||)

where ``L_i(x) = x1 - a_i x0`` (``x0`` for ``a_i = inf``). Jensen applied to ``psi`` gives the
identity checked by :func:`taut_identity_check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BasePointOnDivisor,
    ConstantMap,
    DegenerateInput,
    DegreesBounded,
    ExactModeRequired,
    InputError,
    NormalizerNotDiverging,
    NotCoprime,
    OriginOnBoundaryDivisor,
    RamifiedAtOrigin,
)
from .funcspace import GaussQ, Poly, RationalMap, all_roots, common_root_order, gcd, parse_coefficient, radical_degree, roots_in_disc
from .greenjensen import DEFAULT_QUAD, QuadratureSpec, RadialDensity, boundary_mean, nabla_integral
from .nevanlinna import characteristic_geometric, counting
from .projective import MetricizedDivisor, ProjPoint, fs_pullback_density, weil

ON_DIVISOR_TOL = 1e-8
WEIL_BOUND = 10.0


@dataclass(frozen=True)
class IdentityVerdict:
    identity: str
    lhs: float
    rhs: float
    residual: float
    atoms: list = field(default_factory=list)
    tol: float = 0.0

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= self.tol

    def to_json(self) -> dict:
        def num(v):
            return int(v) if isinstance(v, (int, np.integer)) else float(v)
        return {"identity": self.identity, "lhs": num(self.lhs), "rhs": num(self.rhs),
                "residual": num(self.residual), "tol": self.tol, "ok": bool(self.ok),
                "atoms": self.atoms}


# ---------------------------------------------------------------------------
# log metric

def _point_text(a) -> str:
    return "inf" if a is None else str(complex(a)).strip("()")


@dataclass(frozen=True)
class LogMetric:
    """Chordal-product log metric on P^1 with boundary points ``boundary`` (``None`` is infinity)."""

    boundary: tuple

    def __post_init__(self):
        pts = []
        for a in self.boundary:
            if a is None or (isinstance(a, str) and a.strip().lower() in ("inf", "oo", "infinity")) \
                    or (isinstance(a, float) and np.isinf(a)):
                pts.append(None)
            elif isinstance(a, str):
                pts.append(parse_coefficient(a))
            else:
                pts.append(GaussQ.coerce(a))
        if not pts:
            raise ValueError("the boundary needs at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError("boundary points must be distinct")
        object.__setattr__(self, "boundary", tuple(pts))

    @classmethod
    def parse(cls, text: str) -> "LogMetric":
        try:
            return cls(tuple(p.strip() for p in text.split(",") if p.strip()))
        except (ValueError, InputError) as exc:
            raise InputError(f"bad boundary {text!r}: {exc}") from exc

    @property
    def k(self) -> int:
        return len(self.boundary)

    def to_text(self) -> str:
        return ",".join(_point_text(a) for a in self.boundary)

    @staticmethod
    def point_norm(a) -> float:
        return 1.0 if a is None else float(np.sqrt(1 + abs(complex(a)) ** 2))

    def form(self, a, f: RationalMap) -> Poly:
        """``L_a(F)``: the pullback of the linear form vanishing at ``a``."""
        F0, F1 = f.components
        if a is None:
            return F0
        return F1 - F0 * (Poly.exact([a]) if F0.is_exact else Poly(np.array([complex(a)])))

    def divisors(self) -> list[MetricizedDivisor]:
        return [MetricizedDivisor.point("inf" if a is None else a) for a in self.boundary]

    def product_divisor(self) -> MetricizedDivisor:
        """``prod L_a`` as one reduced divisor of degree ``k``."""
        coeffs = [GaussQ(1)]
        for a in self.boundary:
            factor = [GaussQ(1)] if a is None else [-a, GaussQ(1)]
            out = [GaussQ(0)] * (len(coeffs) + len(factor) - 1)
            for i, c in enumerate(coeffs):
                for j, e in enumerate(factor):
                    out[i + j] = out[i + j] + c * e
            coeffs = out
        k = self.k
        terms = tuple(((k - j, j), c) for j, c in enumerate(coeffs) if c)
        return MetricizedDivisor(terms, name=f"D[{self.to_text()}]")

    def weight(self, x) -> np.ndarray:
        """``w`` at affine points ``x``."""
        x = np.asarray(x, dtype=complex)
        out = 1 / (1 + np.abs(x) ** 2)
        nx = np.sqrt(1 + np.abs(x) ** 2)
        for a in self.boundary:
            if a is None:
                sigma = 1 / nx
            else:
                sigma = np.abs(x - complex(a)) / (nx * self.point_norm(a))
            out = out / sigma
        return out

    def on_boundary(self, f: RationalMap, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        F = f(z)
        nF = np.linalg.norm(F, axis=0)
        hit = np.zeros(z.shape, dtype=bool)
        for a in self.boundary:
            L = F[0] if a is None else F[1] - complex(a) * F[0]
            hit |= np.abs(L) <= ON_DIVISOR_TOL * nF * self.point_norm(a)
        return hit


def wronskian(f: RationalMap) -> Poly:
    if f.n != 1:
        raise ValueError("only maps to P^1 have a scalar Wronskian")
    F0, F1 = f.components
    return F0 * F1.deriv() - F1 * F0.deriv()


def log_tangent_norm(f: RationalMap, D: LogMetric, z) -> np.ndarray:
    """``psi = log ||f_*(d/dz)||_log`` evaluated in homogeneous form (no affine overflow)."""
    z = np.asarray(z, dtype=complex)
    F = f(z)
    W = wronskian(f)(z)
    nF = np.linalg.norm(F, axis=0)
    with np.errstate(divide="ignore"):
        out = np.log(np.abs(W)) + (D.k - 2) * np.log(nF)
        for a in D.boundary:
            L = F[0] if a is None else F[1] - complex(a) * F[0]
            out = out - np.log(np.abs(L)) + np.log(D.point_norm(a))
    return out


# ---------------------------------------------------------------------------
# Riemann-Hurwitz

def _check_map(f: RationalMap):
    if f.n != 1:
        raise InputError("expected a self-map of P^1 (two components)")
    if f.is_constant:
        raise ConstantMap(f"{f.label} is constant")


def _reverse(p: Poly, d: int) -> Poly:
    """``w^d p(1/w)``."""
    if p.is_exact:
        c = list(p.exact_coeffs) + [GaussQ(0)] * (d + 1 - len(p.exact_coeffs))
        return Poly.exact(c[::-1])
    c = np.concatenate([p.coeffs, np.zeros(d + 1 - len(p.coeffs), dtype=complex)])
    return Poly(c[::-1])


def _order_at_zero(p: Poly) -> int:
    if p.is_exact:
        for k, c in enumerate(p.exact_coeffs):
            if c:
                return k
        raise DegenerateInput("zero polynomial")
    scale = float(np.max(np.abs(p.coeffs)))
    for k, c in enumerate(p.coeffs):
        if abs(c) > 1e-12 * scale:
            return k
    raise DegenerateInput("zero polynomial")


def chart_at_infinity(f: RationalMap) -> RationalMap:
    d = f.degree
    return RationalMap.unchecked([_reverse(c, d) for c in f.components])


@dataclass(frozen=True)
class RamificationRecord:
    """Points with ``ord_z(R_f) >= 1``; ``z = None`` marks infinity."""

    points: tuple[tuple[complex | None, int], ...]
    off_boundary: tuple[bool, ...] = ()

    def __post_init__(self):
        if any(m < 1 for _, m in self.points):
            raise ValueError("ramification orders are >= 1")

    @property
    def total(self) -> int:
        return sum(m for _, m in self.points)

    @property
    def away(self) -> int:
        return sum(m for (_, m), off in zip(self.points, self.off_boundary) if off)

    def to_json(self) -> list[dict]:
        rows = []
        for i, (z, m) in enumerate(self.points):
            row = {"z": "inf" if z is None else [z.real, z.imag], "ord": int(m)}
            if self.off_boundary:
                row["off_boundary"] = bool(self.off_boundary[i])
            rows.append(row)
        return rows


def ramification(f: RationalMap, D: LogMetric | None = None) -> RamificationRecord:
    _check_map(f)
    W = wronskian(f)
    pts: list[tuple[complex | None, int]] = []
    if W.degree >= 1:
        pts.extend((complex(z), int(m)) for z, m in all_roots(W))
    ord_inf = _order_at_zero(wronskian(chart_at_infinity(f)))
    if ord_inf:
        pts.append((None, ord_inf))
    off: tuple[bool, ...] = ()
    if D is not None:
        off = tuple(not _maps_into(f, D, z) for z, _ in pts)
    return RamificationRecord(tuple(pts), off)


def _value_at_infinity(f: RationalMap) -> np.ndarray:
    d = f.degree
    return np.array([c.coeffs[d] if c.degree == d else 0j for c in f.components])


def _maps_into(f: RationalMap, D: LogMetric, z) -> bool:
    if z is None:
        F = _value_at_infinity(f)
        return bool(D.on_boundary(RationalMap.unchecked([Poly(np.array([F[0]])),
                                                          Poly(np.array([F[1]]))]), 0j))
    return bool(D.on_boundary(f, complex(z)))


def rh_check(f: RationalMap) -> IdentityVerdict:
    """``-2d = -2 - Ram_f`` with ramification summed over all of P^1."""
    rec = ramification(f)
    d = f.degree
    ram = rec.total
    return IdentityVerdict("-2d = -2 - Ram_f", -2 * d, -2 - ram, -2 * d - (-2 - ram),
                           rec.to_json())


def _distinct_preimages(f: RationalMap, P: Poly, d: int) -> int:
    at_inf = 1 if P.degree < d else 0
    if P.degree < 1:
        return at_inf
    if P.is_exact:
        return radical_degree(P) + at_inf
    return len(all_roots(P)) + at_inf


def log_rh_check(f: RationalMap, D: LogMetric) -> IdentityVerdict:
    """``d (k - 2) = -2 + n_red - Ram_away`` with ``n_red = #f^{-1}(D)`` counted without multiplicity."""
    _check_map(f)
    d = f.degree
    W = wronskian(f)
    n_red = 0
    for a in D.boundary:
        P = D.form(a, f)
        if P.is_zero:
            raise DegenerateInput("f maps into the boundary")
        n_red += _distinct_preimages(f, P, d)
    ord_inf = _order_at_zero(wronskian(chart_at_infinity(f)))
    inf_off = not _maps_into(f, D, None)
    if f.is_exact:
        ram_away = W.degree - sum(common_root_order(W, D.form(a, f)) for a in D.boundary)
        ram_away += ord_inf if inf_off else 0
        rec = ramification(f, D)
    else:
        rec = ramification(f, D)
        ram_away = rec.away
    lhs = d * (D.k - 2)
    rhs = -2 + n_red - ram_away
    atoms = rec.to_json() + [{"n_red": n_red, "ram_away": ram_away}]
    return IdentityVerdict("d(k-2) = -2 + n_red - Ram_away", lhs, rhs, lhs - rhs, atoms)


# ---------------------------------------------------------------------------
# Mason

def mason_check(a: Poly, b: Poly) -> IdentityVerdict:
    """``max deg(a, b, c) <= deg rad(abc) - 1`` for ``c = a + b``; the residual is the slack."""
    if not (a.is_exact and b.is_exact):
        raise ExactModeRequired("mason_check needs exact coefficients")
    if a.is_zero or b.is_zero:
        raise DegenerateInput("a and b must be nonzero")
    c = a + b
    if c.is_zero:
        raise NotCoprime("a + b = 0")
    if gcd(a, b).degree > 0:
        raise NotCoprime("a and b share a root")
    top = max(a.degree, b.degree, c.degree)
    if top == 0:
        raise DegenerateInput("a, b, c are all constant")
    rad = radical_degree(a * b * c)
    slack = rad - 1 - top
    return IdentityVerdict("max deg <= deg rad(abc) - 1", top, rad - 1, slack,
                           [{"deg_a": a.degree, "deg_b": b.degree, "deg_c": c.degree,
                             "rad": rad}], tol=0)


def random_mason_pair(rng: np.random.Generator, max_deg: int = 3) -> tuple[Poly, Poly]:
    """``a = p s^2`` with small integer coefficients and ``b`` coprime to ``a``."""
    def rand_poly(deg):
        c = [int(v) for v in rng.integers(-3, 4, deg + 1)]
        c[-1] = int(rng.choice([-2, -1, 1, 2]))
        return Poly.exact(c)

    while True:
        p = rand_poly(int(rng.integers(0, max_deg + 1)))
        s = rand_poly(int(rng.integers(1, max_deg + 1)))
        a = p * s * s
        b = rand_poly(int(rng.integers(0, max_deg + 1)))
        if (a + b).is_zero or gcd(a, b).degree > 0:
            continue
        return a, b


def random_self_map(rng: np.random.Generator, degree: int) -> RationalMap:
    """Exact integer-coefficient map of P^1 to itself of the given degree."""
    while True:
        c0 = [int(v) for v in rng.integers(-4, 5, degree + 1)]
        c1 = [int(v) for v in rng.integers(-4, 5, int(rng.integers(0, degree + 1)) + 1)]
        c0[-1] = c0[-1] or 1
        if rng.random() < 0.5:
            c0, c1 = c1, c0
        try:
            f = RationalMap((Poly.exact(c0), Poly.exact(c1)))
        except (NotCoprime, DegenerateInput):
            continue
        if f.degree == degree and not f.is_constant:
            return f


# ---------------------------------------------------------------------------
# tautological identity

def taut_lhs(f: RationalMap, D: LogMetric, r: float, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Nabla integral of the smooth curvature ``dd^c log w(f) = (k - 2) f^* omega_FS``."""
    if D.k == 2:
        return 0.0
    density = RadialDensity(lambda z: (D.k - 2) * fs_pullback_density(f, z))
    return nabla_integral(density, r, q)


def taut_identity_check(f: RationalMap, D: LogMetric, r: float, q: QuadratureSpec = DEFAULT_QUAD,
                        tol: float = 1e-5) -> IdentityVerdict:
    """Jensen's formula for ``psi = log ||f_*(d/dz)||_log``; returns ``LHS - RHS`` as the residual."""
    _check_map(f)
    W = wronskian(f)
    if bool(D.on_boundary(f, 0j)):
        raise OriginOnBoundaryDivisor("f(0) lies on the boundary divisor")
    w0 = W(np.array([0j]))[0]
    if abs(w0) <= 1e-14 * max(1.0, float(np.sum(np.abs(W.coeffs)))):
        raise RamifiedAtOrigin("f'(0) = 0")
    atoms = []
    ram_term = 0.0
    if W.degree >= 1:
        for z, m in roots_in_disc(W, r).entries:
            if D.on_boundary(f, z):
                continue
            ram_term += m * np.log(r / abs(z))
            atoms.append({"kind": "ramification", "z": [float(z.real), float(z.imag)], "ord": int(m)})
    n_trunc = counting(f, D.product_divisor(), r, truncated=True)
    for a in D.boundary:
        P = D.form(a, f)
        if P.degree >= 1:
            for z, m in roots_in_disc(P, r).entries:
                atoms.append({"kind": "boundary", "value": _point_text(a),
                              "z": [float(z.real), float(z.imag)], "ord": int(m)})
    psi0 = float(log_tangent_norm(f, D, np.array([0j]))[0])
    mean = boundary_mean(lambda z: log_tangent_norm(f, D, z), r, q)
    lhs = taut_lhs(f, D, r, q)
    rhs = -psi0 + mean + n_trunc - ram_term
    return IdentityVerdict("nabla f*c1(L) = -psi(0) + mean psi + N1(D) - N_ram", lhs, rhs,
                           lhs - rhs, atoms, tol)


@dataclass
class TautTrend:
    rows: list[dict]
    r_grid: list[float]
    tail_sup: dict[float, float]
    flagged: list[float]
    tol: float

    @property
    def ok(self) -> bool:
        return not self.flagged

    def to_json(self) -> dict:
        return {"rows": self.rows, "tail_sup": {str(r): v for r, v in self.tail_sup.items()},
                "flagged_radii": self.flagged, "tol": self.tol, "ok": self.ok}


def _check_sequence(f_seq, normalizers: np.ndarray):
    if np.any(normalizers <= 0) or normalizers[-1] < 2 * normalizers[0]:
        raise NormalizerNotDiverging("normalizers do not grow along the sequence")
    degs = [f.degree for f in f_seq]
    half = len(degs) // 2
    if max(degs[half:]) <= max(degs[:half]):
        raise DegreesBounded("degrees stay bounded along the sequence")


def taut_inequality_experiment(f_seq: Sequence[RationalMap], D: LogMetric, r_grid: Sequence[float],
                               ns: Sequence[int] | None = None, tail_from: int | None = None,
                               tol: float = 1e-2, weil_bound: float = WEIL_BOUND,
                               q: QuadratureSpec = DEFAULT_QUAD) -> TautTrend:
    """Normalized curvature pairing ``nabla f_n^* c1(L) / T_n(r)`` along a degenerating sequence."""
    if len(f_seq) < 2:
        raise ValueError("need at least two maps")
    ns = list(ns) if ns is not None else list(range(1, len(f_seq) + 1))
    r_grid = [float(r) for r in r_grid]
    H = MetricizedDivisor.hyperplane(1, 0)
    rmax = max(r_grid)
    _check_sequence(f_seq, np.array([characteristic_geometric(f, H, rmax, q) for f in f_seq]))
    for f in f_seq:
        x0 = ProjPoint(f(np.array([0j]))[:, 0])
        for Dp in D.divisors():
            if weil(Dp, x0) > weil_bound:
                raise BasePointOnDivisor(f"{f.label}: f(0) within weil distance {weil_bound} of D")
    tail_from = tail_from if tail_from is not None else ns[len(ns) // 2]
    rows = []
    for n, f in zip(ns, f_seq):
        for r in r_grid:
            norm = characteristic_geometric(f, H, r, q)
            lhs = taut_lhs(f, D, r, q)
            rows.append({"n": int(n), "r": r, "lhs": lhs, "normalizer": norm, "ell": lhs / norm})
    tail_sup = {r: max(row["ell"] for row in rows if row["r"] == r and row["n"] >= tail_from)
                for r in r_grid}
    flagged = [r for r, v in tail_sup.items() if v > tol]
    return TautTrend(rows, r_grid, tail_sup, flagged, tol)
