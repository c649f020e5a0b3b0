"""Normalized characteristic currents of degenerating sequences, probed on a finite basis of test forms."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BasePointOnDivisor,
    DegenerateNormalizer,
    InsufficientSamples,
    NormalizerNotDiverging,
)
from .funcspace import RationalMap
from .greenjensen import DEFAULT_QUAD, QuadratureSpec, boundary_mean
from .nevanlinna import characteristic_geometric
from .projective import MetricizedDivisor, ProjPoint, chordal_to, weil

BASE_POINT_BOUND = 10.0
NORMALIZER_TOL = 1e-9
MIN_SAMPLES = 8
DECAY_COLUMNS = ("n", "r", "pairing", "bound", "margin")


@dataclass(frozen=True, eq=False)
class ExactForm:
    """A bounded function ``phi`` on P^n; it pairs with a current through ``dd^c phi``.

    ``phi`` takes homogeneous coordinates of shape ``(n+1, ...)``.
    """

    label: str
    phi: Callable[[np.ndarray], np.ndarray]
    sup: float

    def __post_init__(self):
        if not np.isfinite(self.sup) or self.sup < 0:
            raise ValueError("sup|phi| must be finite and nonnegative")

    @classmethod
    def chordal_squared(cls, point: ProjPoint, label: str = "") -> "ExactForm":
        return cls(label or "chordal^2", lambda x: chordal_to(x, point) ** 2, 1.0)


@dataclass(frozen=True, eq=False)
class TestFormBasis:
    """Curvature forms of metrised divisors (the first one normalizes) plus exact forms."""

    __test__ = False  # keep pytest from collecting this class

    curvature_forms: tuple[tuple[MetricizedDivisor, str], ...]
    exact_forms: tuple[ExactForm, ...] = ()

    def __post_init__(self):
        if not self.curvature_forms:
            raise ValueError("the basis needs the normalizing class first")
        n = {D.n for D, _ in self.curvature_forms}
        if len(n) != 1:
            raise ValueError("all divisors must live on the same P^n")

    @classmethod
    def standard(cls, n: int = 1) -> "TestFormBasis":
        curv = tuple((MetricizedDivisor.hyperplane(n, i), f"x{i}") for i in range(n + 1))
        origin = ProjPoint(np.eye(n + 1)[0])
        return cls(curv, (ExactForm.chordal_squared(origin, "chordal^2(., [1:0])"),))

    @property
    def H(self) -> MetricizedDivisor:
        return self.curvature_forms[0][0]

    @property
    def labels(self) -> list[str]:
        return [lab for _, lab in self.curvature_forms] + [e.label for e in self.exact_forms]


@dataclass(frozen=True)
class CurrentSample:
    n: int
    r: float
    normalizer: float
    pairings: tuple[float, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.normalizer > 0:
            raise DegenerateNormalizer("normalizer must be positive")
        if not all(np.isfinite(self.pairings)):
            raise ValueError("pairings must be finite")


def exact_pairing(f: RationalMap, form: ExactForm, r: float, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Unnormalized ``T_f(r)[dd^c phi] = mean_{|z|=r} phi(f) - phi(f(0))``."""
    at0 = float(form.phi(f(np.array([0j])))[0])
    return boundary_mean(lambda z: form.phi(f(z)), r, q) - at0


def normalized_pairings(f: RationalMap, r: float, basis: TestFormBasis,
                        q: QuadratureSpec = DEFAULT_QUAD, n: int = 0,
                        tol: float = NORMALIZER_TOL) -> CurrentSample:
    normalizer = characteristic_geometric(f, basis.H, r, q)
    if not normalizer > tol:
        raise DegenerateNormalizer(f"T^H({f.label}, {r}) = {normalizer:.3g} is not positive")
    vals = [normalizer / normalizer]
    for D, _ in basis.curvature_forms[1:]:
        vals.append(characteristic_geometric(f, D, r, q) / normalizer)
    for form in basis.exact_forms:
        vals.append(exact_pairing(f, form, r, q) / normalizer)
    return CurrentSample(n, float(r), float(normalizer), tuple(float(v) for v in vals),
                         tuple(basis.labels))


def sample_sequence(f_seq: Sequence[RationalMap], r_grid: Sequence[float], basis: TestFormBasis,
                    ns: Sequence[int] | None = None, q: QuadratureSpec = DEFAULT_QUAD) -> list[CurrentSample]:
    ns = list(ns) if ns is not None else list(range(1, len(f_seq) + 1))
    return [normalized_pairings(f, float(r), basis, q, n) for n, f in zip(ns, f_seq) for r in r_grid]


@dataclass(frozen=True)
class Cluster:
    centre: float
    diameter: float
    size: int


@dataclass
class LimitReport:
    """Tail clusters per radius and basis element."""

    clusters: dict[float, list[list[Cluster]]]
    labels: tuple[str, ...]
    tol: float

    def certified(self, r: float, j: int) -> bool:
        c = self.clusters[r][j]
        return len(c) == 1 and c[0].diameter < self.tol

    def to_json(self) -> dict:
        return {str(r): {lab: [vars(c) for c in cl] for lab, cl in zip(self.labels, per)}
                for r, per in self.clusters.items()}


def _cluster_1d(values: np.ndarray, gap: float) -> list[Cluster]:
    v = np.sort(values)
    cuts = np.flatnonzero(np.diff(v) > gap) + 1
    return [Cluster(float(np.mean(p)), float(p[-1] - p[0]), len(p)) for p in np.split(v, cuts)]


def limit_points(samples: Sequence[CurrentSample], tol: float = 1e-2) -> LimitReport:
    """Cluster the last half of each radius' samples, one basis element at a time."""
    by_r: dict[float, list[CurrentSample]] = {}
    for s in samples:
        by_r.setdefault(s.r, []).append(s)
    out = {}
    labels: tuple[str, ...] = ()
    for r, group in sorted(by_r.items()):
        if len(group) < MIN_SAMPLES:
            raise InsufficientSamples(f"{len(group)} samples at r={r}; need {MIN_SAMPLES}")
        group = sorted(group, key=lambda s: s.n)
        tail = np.array([s.pairings for s in group[len(group) // 2:]])
        labels = group[0].labels or tuple(str(j) for j in range(tail.shape[1]))
        out[r] = [_cluster_1d(tail[:, j], tol) for j in range(tail.shape[1])]
    return LimitReport(out, labels, tol)


@dataclass(frozen=True)
class MarginRow:
    n: int
    r: float
    divisor: str
    pairing: float
    lower_bound: float
    margin: float


def positivity_check(f_seq: Sequence[RationalMap], r_grid: Sequence[float],
                     divisors: Sequence[MetricizedDivisor], ns: Sequence[int] | None = None,
                     base_bound: float = BASE_POINT_BOUND,
                     q: QuadratureSpec = DEFAULT_QUAD) -> list[MarginRow]:
    """Normalized pairings with effective divisors against their a-priori lower bound.

    With ``C_F`` the floor of the Weil function of ``F`` and ``B`` the base-point bound,
    ``T_F(r) >= C_F - B``; the margin is ``(T_F(r) - C_F + B) / T^H(r)``.
    """
    ns = list(ns) if ns is not None else list(range(1, len(f_seq) + 1))
    H = MetricizedDivisor.hyperplane(divisors[0].n, 0) if divisors else None
    rows = []
    for n, f in zip(ns, f_seq):
        x0 = ProjPoint(f(np.array([0j]))[:, 0])
        for F in divisors:
            lam = weil(F, x0)
            if not lam <= base_bound:
                raise BasePointOnDivisor(f"f_{n}(0) is within weil distance {base_bound} of {F.name}")
        for r in r_grid:
            norm = characteristic_geometric(f, H, float(r), q)
            if not norm > NORMALIZER_TOL:
                raise DegenerateNormalizer(f"T^H(f_{n}, {r}) vanishes")
            for F in divisors:
                p = characteristic_geometric(f, F, float(r), q) / norm
                lower = (F.weil_floor - base_bound) / norm
                rows.append(MarginRow(int(n), float(r), F.name, p, lower, p - lower))
    return rows


@dataclass(frozen=True)
class DecayRow:
    n: int
    r: float
    pairing: float
    bound: float
    margin: float


@dataclass
class DecayTable:
    rows: list[DecayRow]
    tol: float = 1e-9

    @property
    def ok(self) -> bool:
        return all(abs(row.pairing) <= row.bound + self.tol for row in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(DECAY_COLUMNS)
        for row in self.rows:
            w.writerow([row.n, repr(row.r), repr(row.pairing), repr(row.bound), repr(row.margin)])
        return buf.getvalue()


def exactness_decay(f_seq: Sequence[RationalMap], form: ExactForm, r_grid: Sequence[float],
                    ns: Sequence[int] | None = None, tol: float = 1e-9,
                    q: QuadratureSpec = DEFAULT_QUAD) -> DecayTable:
    """``|pairing|`` against ``2 sup|phi| / T^H`` along the sequence."""
    ns = list(ns) if ns is not None else list(range(1, len(f_seq) + 1))
    r_grid = [float(r) for r in r_grid]
    if not f_seq:
        raise ValueError("empty sequence")
    H = MetricizedDivisor.hyperplane(f_seq[0].n, 0)
    norms = np.array([[characteristic_geometric(f, H, r, q) for r in r_grid] for f in f_seq])
    last = norms[:, -1]
    if len(f_seq) < 2 or np.any(norms <= NORMALIZER_TOL) or last[-1] < 2 * last[0]:
        raise NormalizerNotDiverging("normalizers do not diverge along the sequence")
    rows = []
    for i, (n, f) in enumerate(zip(ns, f_seq)):
        for j, r in enumerate(r_grid):
            p = exact_pairing(f, form, r, q) / norms[i, j]
            bound = 2 * form.sup / norms[i, j]
            rows.append(DecayRow(int(n), r, float(p), float(bound), float(bound - abs(p))))
    return DecayTable(rows, tol)
