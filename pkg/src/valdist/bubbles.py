"""Discs with bubbles, graph samples, Hausdorff distance and a desk-scale compactness harness."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    AttachOnBoundary,
    BoundaryHitsDivisor,
    EmptySample,
    OriginOnDivisor,
    RootOnBoundary,
)
from .funcspace import BOUNDARY_BAND, RationalMap
from .greenjensen import DEFAULT_QUAD, QuadratureSpec
from .nevanlinna import characteristic_geometric, const_term, counting, proximity
from .projective import MetricizedDivisor

CONCENTRATION_MASS = 0.5


@dataclass(frozen=True, eq=False)
class Bubble:
    """A tree of rational curves glued to the disc at ``attach``."""

    attach: complex
    tree: tuple[RationalMap, ...]
    edges: tuple[tuple[int, int], ...] = ()
    energies: tuple[float, ...] | None = None

    def __post_init__(self):
        a = complex(self.attach)
        if not 0 < abs(a) < 1:
            raise ValueError(f"attach point must satisfy 0 < |z| < 1, got {a}")
        object.__setattr__(self, "attach", a)
        k = len(self.tree)
        if k == 0:
            raise ValueError("a bubble tree needs at least one component")
        if len(self.edges) != k - 1:
            raise ValueError("a tree on k components has k - 1 edges")
        seen = {0}
        frontier = [0]
        adj = {i: set() for i in range(k)}
        for i, j in self.edges:
            if not (0 <= i < k and 0 <= j < k) or i == j:
                raise ValueError(f"bad edge {(i, j)}")
            adj[i].add(j)
            adj[j].add(i)
        while frontier:
            i = frontier.pop()
            for j in adj[i] - seen:
                seen.add(j)
                frontier.append(j)
        if len(seen) != k:
            raise ValueError("bubble tree is not connected")
        if self.energies is not None:
            if len(self.energies) != k or any(e < 0 for e in self.energies):
                raise ValueError("one nonnegative energy per component")
            object.__setattr__(self, "energies", tuple(float(e) for e in self.energies))

    def energy(self, D: MetricizedDivisor | None = None) -> float:
        if self.energies is not None:
            return float(sum(self.energies))
        if D is None:
            raise ValueError("energies not stored; pass the divisor")
        return float(sum(c.degree for c in self.tree) * D.degree)


@dataclass(frozen=True, eq=False)
class DiscWithBubbles:
    base: RationalMap
    bubbles: tuple[Bubble, ...] = ()

    def __post_init__(self):
        pts = [b.attach for b in self.bubbles]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if pts[i] == pts[j]:
                    raise ValueError("attach points must be distinct")


def nabla_bubble(b: DiscWithBubbles, D: MetricizedDivisor, r: float,
                 q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Base characteristic plus ``log(r/|z|)`` times the energy of each bubble inside ``|z| < r``."""
    for bub in b.bubbles:
        if abs(abs(bub.attach) - r) < BOUNDARY_BAND:
            raise AttachOnBoundary(f"bubble at {bub.attach} sits on |z| = {r}")
    total = characteristic_geometric(b.base, D, r, q)
    for bub in b.bubbles:
        if abs(bub.attach) < r:
            total += np.log(r / abs(bub.attach)) * bub.energy(D)
    return total


# ---------------------------------------------------------------------------
# graphs

def _normalize_cols(x: np.ndarray) -> np.ndarray:
    return (x / np.linalg.norm(x, axis=0)).T


@dataclass(frozen=True, eq=False)
class GraphSample:
    """Points ``(z, [x])`` of a graph in ``disc x P^n``; ``x`` rows are unit vectors."""

    z: np.ndarray
    x: np.ndarray
    mesh: int = 0

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex).ravel()
        if len(z) == 0:
            raise EmptySample("a graph sample needs at least one point")
        x = np.asarray(self.x, dtype=complex).reshape(len(z), -1)
        x = x / np.linalg.norm(x, axis=1, keepdims=True)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", x)

    def __len__(self):
        return len(self.z)

    def __or__(self, other: "GraphSample") -> "GraphSample":
        return GraphSample(np.concatenate([self.z, other.z]),
                           np.concatenate([self.x, other.x]), max(self.mesh, other.mesh))

    def projector_features(self) -> np.ndarray:
        # |P_x - P_y|_F / sqrt(2) equals the chordal distance
        P = self.x[:, :, None] * self.x[:, None, :].conj()
        P = P.reshape(len(self), -1) / np.sqrt(2)
        return np.concatenate([P.real, P.imag], axis=1)

    def features(self) -> tuple[np.ndarray, np.ndarray]:
        return np.stack([self.z.real, self.z.imag], axis=1), self.projector_features()


def polar_grid(radius: float, mesh: int, centre: complex = 0j) -> np.ndarray:
    rho = np.linspace(0.0, radius, mesh)[1:]
    theta = 2 * np.pi * np.arange(mesh) / mesh
    ring = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
    return centre + np.concatenate([[0j], ring])


def sphere_points(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Quasi-uniform points ``[s : t]`` of P^1 from a Fibonacci lattice on the Riemann sphere."""
    k = np.arange(count) + 0.5
    h = 1 - 2 * k / count
    phi = np.pi * (1 + 5**0.5) * k
    # stereographic: north pole h=1 is the point at infinity
    s = np.sqrt(1 + h) * np.exp(1j * phi)
    t = np.sqrt(1 - h) + 0j
    return s, t


def sample_curve(g: RationalMap, mesh: int) -> np.ndarray:
    """Unit representatives of ``g(P^1)``, roughly ``mesh**2`` points."""
    s, t = sphere_points(mesh * mesh)
    return _normalize_cols(g.homogeneous(s, t))


def graph_sample(f: RationalMap | DiscWithBubbles, radius: float, mesh: int) -> GraphSample:
    """Polar-grid sample of the graph over ``|z| <= radius``, with bubble trees appended at their nodes."""
    if mesh < 16:
        raise ValueError("mesh must be >= 16")
    base = f.base if isinstance(f, DiscWithBubbles) else f
    z = polar_grid(radius, mesh)
    out = GraphSample(z, _normalize_cols(base(z)), mesh)
    if isinstance(f, DiscWithBubbles):
        for bub in f.bubbles:
            for comp in bub.tree:
                pts = sample_curve(comp, mesh)
                out = out | GraphSample(np.full(len(pts), bub.attach), pts, mesh)
    return out


def limit_graph(base: RationalMap, radius: float, mesh: int,
                nodes: Sequence[tuple[complex, RationalMap]] = ()) -> GraphSample:
    """Graph of ``base`` with whole rational curves attached at arbitrary disc points (origin allowed)."""
    out = graph_sample(base, radius, mesh)
    for z0, comp in nodes:
        pts = sample_curve(comp, mesh)
        out = out | GraphSample(np.full(len(pts), complex(z0)), pts, mesh)
    return out


def _directed(A: GraphSample, B: GraphSample) -> float:
    za, pa = A.features()
    zb, pb = B.features()
    fa = np.concatenate([za, pa], axis=1)
    fb = np.concatenate([zb, pb], axis=1)
    tree = cKDTree(fb)
    _, idx = tree.query(fa)

    def metric(i, j):
        return np.maximum(np.linalg.norm(za[i] - zb[j], axis=-1),
                          np.linalg.norm(pa[i] - pb[j], axis=-1))

    upper = metric(np.arange(len(fa)), idx)
    best = 0.0
    # the Euclidean neighbour bounds the product metric within a factor sqrt(2)
    for i in np.argsort(upper)[::-1]:
        if upper[i] <= best:
            break
        cand = tree.query_ball_point(fa[i], np.sqrt(2) * upper[i] * (1 + 1e-12) + 1e-15)
        exact = float(np.min(metric(np.full(len(cand), i), np.asarray(cand))))
        best = max(best, exact)
    return best


def hausdorff_distance(A: GraphSample, B: GraphSample) -> float:
    """Hausdorff distance for the product metric ``max(|z - z'|, chordal(x, x'))``."""
    if len(A) == 0 or len(B) == 0:
        raise EmptySample("empty graph sample")
    return max(_directed(A, B), _directed(B, A))


# ---------------------------------------------------------------------------
# concentration of Fubini-Study mass

def disc_mass(f: RationalMap, centres, radius: float, tol: float = 1e-7,
              max_points: int = 1 << 15) -> np.ndarray:
    """Mass of ``f^* omega_FS`` in discs ``|z - c| < radius`` via the flux of ``log|F|`` through the circle."""
    centres = np.atleast_1d(np.asarray(centres, dtype=complex))
    n = 128

    def mean_flux(theta):
        e = np.exp(1j * theta)
        w = centres[:, None] + radius * e[None, :]
        F = f(w)
        dF = f.derivative(w)
        num = np.sum(dF * F.conj(), axis=0)
        return np.mean((radius * e[None, :] * num).real / np.sum(np.abs(F) ** 2, axis=0), axis=1)

    theta = 2 * np.pi * np.arange(n) / n
    est = mean_flux(theta)
    while n < max_points:
        new = 0.5 * (est + mean_flux(theta + np.pi / n))
        n *= 2
        theta = 2 * np.pi * np.arange(n) / n
        if np.max(np.abs(new - est)) <= tol:
            return new
        est = new
    return est


@dataclass(frozen=True)
class Concentration:
    location: complex
    mass: float
    scale: float
    tail_masses: tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {"location": [self.location.real, self.location.imag], "mass": self.mass,
                "scale": self.scale, "tail_masses": list(self.tail_masses)}


def _refine(f: RationalMap, centre: complex, eps: float) -> tuple[complex, float]:
    best, rho = centre, eps
    offsets = np.linspace(-1, 1, 9)
    local = (offsets[:, None] + 1j * offsets[None, :]).ravel()
    while rho > 1e-9:
        trial = best + rho * local
        masses = disc_mass(f, trial, rho / 2)
        k = int(np.argmax(masses))
        if masses[k] < CONCENTRATION_MASS:
            break
        best, rho = complex(trial[k]), rho / 2
    return best, rho


def detect_concentration(seq: Sequence[RationalMap], r: float, eps: float) -> list[Concentration]:
    """Points of ``|z| < r`` where ``eps``-discs keep Fubini-Study mass >= 1/2 along the tail of ``seq``."""
    if not seq:
        raise ValueError("empty sequence")
    if not 0 < eps < r / 4:
        raise ValueError("eps must lie in (0, r/4)")
    f = seq[-1]
    h = eps / 2
    xs = np.arange(-r, r + h / 2, h)
    grid = (xs[:, None] + 1j * xs[None, :]).ravel()
    grid = grid[np.abs(grid) < r]
    masses = disc_mass(f, grid, eps)
    cand = grid[masses >= CONCENTRATION_MASS]
    if cand.size == 0:
        return []
    tail = list(seq[len(seq) // 2:]) or [f]
    found: list[Concentration] = []
    order = np.argsort(-masses[masses >= CONCENTRATION_MASS])
    for c in cand[order]:
        if any(abs(c - k.location) < 2 * eps for k in found):
            continue
        loc, scale = _refine(f, complex(c), eps)
        if abs(loc) >= r or any(abs(loc - k.location) < eps for k in found):
            continue
        tail_m = tuple(float(disc_mass(g, loc, eps)[0]) for g in tail)
        if min(tail_m) < CONCENTRATION_MASS:
            continue
        found.append(Concentration(loc, tail_m[-1], scale, tail_m))
    return found


def bubble_image(f: RationalMap, c: Concentration, eps: float, mesh: int) -> GraphSample:
    """``{c} x f(D(c, eps))`` sampled on log-spaced circles down to a hundredth of the bubble scale."""
    rho = np.geomspace(max(c.scale / 100, 1e-12), eps, mesh)
    theta = 2 * np.pi * np.arange(mesh) / mesh
    w = c.location + np.concatenate([[0j], (rho[:, None] * np.exp(1j * theta)).ravel()])
    return GraphSample(np.full(len(w), c.location), _normalize_cols(f(w)), mesh)


def augmented_graph(f: RationalMap, radius: float, mesh: int,
                    concentrations: Sequence[Concentration], eps: float) -> GraphSample:
    g = graph_sample(f, radius, mesh)
    for c in concentrations:
        g = g | bubble_image(f, c, eps, mesh)
    return g


# ---------------------------------------------------------------------------
# compactness harness

def hyperplane_energy(f: RationalMap, r: float, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``T_f(r)`` against the hyperplane ``x0 = 0``; arithmetic side first, quadrature as fallback."""
    H = MetricizedDivisor.hyperplane(f.n, 0)
    try:
        return proximity(f, H, r, q) + counting(f, H, r) + const_term(f, H)
    except (OriginOnDivisor, BoundaryHitsDivisor, RootOnBoundary):
        return characteristic_geometric(f, H, r, q)


def automorphism_grid(a_max: float = 0.5, n_radii: int = 5, n_angles: int = 8) -> list[complex]:
    pts = [0j]
    for rho in np.linspace(0, a_max, n_radii)[1:]:
        pts.extend(rho * np.exp(2j * np.pi * np.arange(n_angles) / n_angles))
    return pts


@dataclass
class GromovVerdict:
    passed: bool
    energies: list[list[tuple[float, float]]]
    violations: list[int]
    automorphism: complex
    subsequence_indices: list[int]
    pairwise_distances: list[tuple[int, int, float]]
    bubbles_detected: list[Concentration]
    unbounded_radii: list[float]
    tolerance: float
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": "PASS" if self.passed else "FAIL",
            "energies": [[[r, e] for r, e in row] for row in self.energies],
            "violations": self.violations,
            "automorphism": [self.automorphism.real, self.automorphism.imag],
            "subsequence_indices": self.subsequence_indices,
            "pairwise_distances": [[i, j, d] for i, j, d in self.pairwise_distances],
            "bubbles_detected": [c.to_json() for c in self.bubbles_detected],
            "unbounded_radii": self.unbounded_radii,
            "tolerance": self.tolerance,
            "witness": self.witness,
        }


def _energy_table(seq, r_grid, q):
    return np.array([[hyperplane_energy(f, r, q) for r in r_grid] for f in seq])


def gromov_harness(seq: Sequence[RationalMap], bound: Callable[[float], float],
                   r_grid: Sequence[float], mesh: int = 64, radius: float | None = None,
                   eps: float | None = None, a_max: float = 0.5, augment: bool = True,
                   min_tail: int = 3, q: QuadratureSpec = DEFAULT_QUAD) -> GromovVerdict:
    """Bounded-energy maps should have a graph-Cauchy tail once bubbles are appended.

    One disc automorphism from a finite grid is applied to the whole sequence when
    the identity leaves energies above ``bound``.
    """
    if len(seq) < 8:
        raise ValueError("the harness needs at least 8 maps")
    r_grid = [float(r) for r in r_grid]
    radius = float(radius if radius is not None else max(r_grid))
    eps = float(eps if eps is not None else min(0.05, radius / 5))
    bounds = np.array([bound(r) for r in r_grid])

    def score(table):
        excess = np.clip(table - bounds[None, :], 0, None)
        return int(np.count_nonzero(excess)), float(np.sum(excess))

    alpha = 0j
    table = _energy_table(seq, r_grid, q)
    best = score(table)
    if best[0]:
        for a in automorphism_grid(a_max)[1:]:
            cand = _energy_table([f.mobius(a) for f in seq], r_grid, q)
            s = score(cand)
            if s < best:
                alpha, table, best = a, cand, s
    maps = [f.mobius(alpha) if alpha else f for f in seq]
    bad_rows = np.any(table > bounds[None, :], axis=1)
    violations = [int(i) for i in np.flatnonzero(bad_rows)]
    good = [i for i in range(len(seq)) if not bad_rows[i]]
    unbounded = [r for r, e, b in zip(r_grid, table[-1], bounds) if e > b]

    concentrations: list[Concentration] = []
    if augment and len(good) >= 1:
        concentrations = detect_concentration([maps[i] for i in good], radius, eps)
    graphs = {i: augmented_graph(maps[i], radius, mesh, concentrations, eps) for i in good}

    tau = 2 / mesh + 0.02
    pairs: list[tuple[int, int, float]] = []
    dist: dict[tuple[int, int], float] = {}

    def d(i, j):
        key = (min(i, j), max(i, j))
        if key not in dist:
            dist[key] = hausdorff_distance(graphs[i], graphs[j])
            pairs.append((key[0], key[1], dist[key]))
        return dist[key]

    sub: list[int] = []
    witness: dict = {}
    if good:
        sub = [good[-1]]
        for i in reversed(good[:-1]):
            far = max(d(i, j) for j in sub)
            if far > tau:
                witness = {"rejected": i, "distance": far}
                break
            sub.insert(0, i)
    passed = len(sub) >= min_tail
    if not passed and not witness and len(good) < min_tail:
        witness = {"reason": "too few maps within the energy bound", "count": len(good)}
    return GromovVerdict(passed, [list(zip(r_grid, map(float, row))) for row in table],
                         violations, complex(alpha), sub, pairs, concentrations,
                         unbounded, tau, witness)
