"""Characteristic, proximity and counting functions and the first-main-theorem residual."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BoundaryHitsDivisor, DegenerateInput, OriginOnDivisor
from .funcspace import BOUNDARY_BAND, Poly, RationalMap, all_roots, roots_in_disc
from .greenjensen import CONVENTION, DEFAULT_QUAD, QuadratureSpec, RadialDensity, boundary_mean, disc_integral, nabla_integral
from .projective import MetricizedDivisor, divisor_curvature_density, weil_values

DEFAULT_RADII = tuple(float(r) for r in np.geomspace(0.1, 0.95, 16))
FMT_TOL = 1e-6
CSV_COLUMNS = ("r", "T_geom", "T_arith", "m", "N", "const", "residual")


def _pullback(f: RationalMap, D: MetricizedDivisor) -> Poly:
    P = D.pullback(f)
    if P.is_zero:
        raise DegenerateInput(f"the image of {f.label} lies inside {D.name}")
    return P


def _origin_on(P: Poly) -> bool:
    if P.is_exact:
        return not P.exact_coeffs[0] if P.exact_coeffs else True
    return abs(P.coeffs[0]) <= 1e-14 * float(np.sum(np.abs(P.coeffs)))


def _check_boundary(P: Poly, r: float):
    if P.degree < 1:
        return
    for z, _ in all_roots(P):
        if abs(abs(z) - r) < BOUNDARY_BAND:
            raise BoundaryHitsDivisor(f"f(|z|={r}) meets the divisor near z={z}")


def proximity(f: RationalMap, D: MetricizedDivisor, r: float,
              q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Circle mean of the Weil function along ``f``."""
    _check_boundary(_pullback(f, D), r)
    if f.is_constant:
        # the circle mean of a constant is the constant; skip the rounding of the rule
        return float(weil_values(D, f(np.array([0j])))[0])
    return boundary_mean(lambda z: weil_values(D, f(z)), r, q)


def counting(f: RationalMap, D: MetricizedDivisor, r: float, truncated: bool = False) -> float:
    """``sum ord_z(f^*D) log(r/|z|)`` over ``0 < |z| < r``; ``truncated`` caps each order at 1."""
    P = _pullback(f, D)
    if _origin_on(P):
        raise OriginOnDivisor(f"f(0) lies on {D.name}")
    if P.degree < 1:
        return 0.0
    total = 0.0
    for z, m in roots_in_disc(P, r).entries:
        total += (min(1, m) if truncated else m) * np.log(r / abs(z))
    return float(total)


def const_term(f: RationalMap, D: MetricizedDivisor) -> float:
    """``log ||f^* 1_D||(0)``."""
    return -float(weil_values(D, f(np.array([0j])))[0])


def characteristic_geometric(f: RationalMap, D: MetricizedDivisor, r: float,
                             q: QuadratureSpec = DEFAULT_QUAD) -> float:
    density = RadialDensity(lambda z: divisor_curvature_density(D, f, z))
    return nabla_integral(density, r, q)


def area_function(f: RationalMap, D: MetricizedDivisor, r: float,
                  q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Un-integrated area ``int_{|z|<r} f^* c_1(D)``."""
    return disc_integral(lambda z: divisor_curvature_density(D, f, z), r, q)


@dataclass(frozen=True)
class CharacteristicRow:
    r: float
    T_geom: float
    T_arith: float
    m: float
    N: float
    const: float
    residual: float

    def within(self, tol: float = FMT_TOL) -> bool:
        return abs(self.residual) <= tol * (1 + abs(self.T_geom))


def fmt_check(f: RationalMap, D: MetricizedDivisor, r: float,
              q: QuadratureSpec = DEFAULT_QUAD) -> CharacteristicRow:
    """Both sides of the first main theorem at radius ``r``."""
    P = _pullback(f, D)
    if _origin_on(P):
        raise OriginOnDivisor(f"f(0) lies on {D.name}")
    m = proximity(f, D, r, q)
    N = counting(f, D, r)
    c = const_term(f, D)
    t_geom = characteristic_geometric(f, D, r, q)
    t_arith = m + N + c
    return CharacteristicRow(r, t_geom, t_arith, m, N, c, t_geom - t_arith)


def positivity_margin(f: RationalMap, D: MetricizedDivisor, r: float,
                      q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``T(r) - log||f^*1_D||(0) - C_D`` with ``C_D`` the global floor of the Weil function."""
    return characteristic_geometric(f, D, r, q) - const_term(f, D) - D.weil_floor


@dataclass
class CharacteristicReport:
    f_label: str
    D_label: str
    rows: list[CharacteristicRow] = field(default_factory=list)
    tol: float = FMT_TOL

    @property
    def radii(self):
        return [row.r for row in self.rows]

    @property
    def residual(self):
        return [row.residual for row in self.rows]

    @property
    def ok(self) -> bool:
        return all(row.within(self.tol) for row in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow([repr(getattr(row, c)) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "map": self.f_label,
            "divisor": self.D_label,
            "convention": CONVENTION,
            "tol": self.tol,
            "reference": "T_arith",
            "rows": [asdict(row) for row in self.rows],
            "ok": self.ok,
        }


def characteristic_report(f: RationalMap, D: MetricizedDivisor, radii=DEFAULT_RADII,
                          q: QuadratureSpec = DEFAULT_QUAD, tol: float = FMT_TOL) -> CharacteristicReport:
    return CharacteristicReport(f.label, D.name, [fmt_check(f, D, float(r), q) for r in radii], tol)


def area_comparison(f: RationalMap, D: MetricizedDivisor, radii=DEFAULT_RADII,
                    q: QuadratureSpec = DEFAULT_QUAD) -> list[dict]:
    """Area function next to the zero count of ``f^*D``; their difference has no fixed sign.

    By differentiating the first main theorem, ``area - count = r dm/dr``.
    """
    P = _pullback(f, D)
    rows = []
    for r in radii:
        n_r = roots_in_disc(P, float(r)).count if P.degree >= 1 else 0
        a = area_function(f, D, float(r), q)
        rows.append({"r": float(r), "area": a, "count": n_r, "difference": a - n_r,
                     "T": characteristic_geometric(f, D, float(r), q)})
    return rows
