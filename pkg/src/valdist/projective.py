"""Projective-space geometry: points, metrised divisors, Weil functions and Fubini-Study pullbacks."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy import optimize
from scipy.stats import norm, qmc

from .errors import IndeterminatePoint, InputError
from .funcspace import GaussQ, Poly, RationalMap, parse_coefficient

INDETERMINACY_TOL = 1e-12
SPHERE_SAMPLES = 10_000


@dataclass(frozen=True, eq=False)
class ProjPoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).ravel()
        if c.size < 2 or not np.any(c):
            raise ValueError("a projective point needs >= 2 coordinates, not all zero")
        object.__setattr__(self, "coords", c)

    @classmethod
    def of(cls, *coords) -> "ProjPoint":
        return cls(np.array(coords, dtype=complex))

    def normalized(self) -> np.ndarray:
        return self.coords / np.linalg.norm(self.coords)


@dataclass(frozen=True, eq=False)
class MetricizedDivisor:
    """Zero set of a homogeneous form ``Q`` with the metric ``|Q(x)| / |x|^q``."""

    terms: tuple[tuple[tuple[int, ...], GaussQ], ...]
    name: str = ""

    def __post_init__(self):
        terms = tuple((tuple(int(e) for e in mono), GaussQ.coerce(c))
                      for mono, c in self.terms if GaussQ.coerce(c))
        if not terms:
            raise ValueError("the form Q vanishes identically")
        lengths = {len(m) for m, _ in terms}
        degrees = {sum(m) for m, _ in terms}
        if len(lengths) != 1 or min(lengths) < 2:
            raise ValueError("monomials must share one length >= 2")
        if len(degrees) != 1 or min(degrees) < 1:
            raise ValueError("Q must be homogeneous of positive degree")
        if any(e < 0 for m, _ in terms for e in m):
            raise ValueError("negative exponent")
        object.__setattr__(self, "terms", terms)
        if not self.name:
            object.__setattr__(self, "name", self.to_text())

    @classmethod
    def parse(cls, text: str, name: str = "") -> "MetricizedDivisor":
        """``q; (e0,e1,...)=coeff, ...``"""
        head, sep, body = text.partition(";")
        if not sep:
            raise InputError(f"divisor spec needs 'q; ...': {text!r}")
        try:
            q = int(head.strip())
        except ValueError as exc:
            raise InputError(f"bad divisor degree {head!r}") from exc
        terms = []
        for m in re.finditer(r"\(([^)]*)\)\s*=\s*([^,()]+(?:\*?i)?)", body):
            try:
                mono = tuple(int(e) for e in m.group(1).split(","))
            except ValueError as exc:
                raise InputError(f"bad monomial ({m.group(1)})") from exc
            terms.append((mono, parse_coefficient(m.group(2))))
        if not terms:
            raise InputError(f"divisor spec has no monomials: {text!r}")
        try:
            out = cls(tuple(terms), name=name)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if out.degree != q:
            raise InputError(f"declared degree {q} but Q has degree {out.degree}")
        return out

    @classmethod
    def hyperplane(cls, n: int, i: int = 0, name: str = "") -> "MetricizedDivisor":
        mono = tuple(1 if k == i else 0 for k in range(n + 1))
        return cls(((mono, GaussQ(1)),), name=name or f"x{i}")

    @classmethod
    def point(cls, a, name: str = "") -> "MetricizedDivisor":
        """The point ``a`` of P^1 (``a = inf`` allowed) in the affine coordinate ``x1/x0``."""
        if a is None or (isinstance(a, float) and np.isinf(a)) or a == "inf":
            return cls(((((1, 0)), GaussQ(1)),), name=name or "inf")
        a = GaussQ.coerce(a)
        return cls((((0, 1), GaussQ(1)), ((1, 0), -a)), name=name or f"pt({complex(a):g})")

    def to_text(self) -> str:
        def fmt(c: GaussQ):
            if c.im == 0:
                return str(c.re)
            return f"{c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}*i"
        body = ", ".join(f"({','.join(map(str, m))})={fmt(c)}" for m, c in self.terms)
        return f"{self.degree}; {body}"

    @property
    def degree(self) -> int:
        return sum(self.terms[0][0])

    @property
    def n(self) -> int:
        return len(self.terms[0][0]) - 1

    @property
    def is_exact(self) -> bool:
        return True

    def __call__(self, x) -> np.ndarray:
        """``Q`` at homogeneous coordinates ``x`` of shape ``(n+1, ...)``."""
        x = np.asarray(x, dtype=complex)
        out = np.zeros(x.shape[1:], dtype=complex)
        for mono, c in self.terms:
            term = np.full(x.shape[1:], complex(c), dtype=complex)
            for i, e in enumerate(mono):
                if e:
                    term = term * x[i] ** e
            out = out + term
        return out

    def pullback(self, f: RationalMap) -> Poly:
        """The polynomial ``Q(F(z))``."""
        if f.n != self.n:
            raise ValueError(f"divisor lives on P^{self.n}, map targets P^{f.n}")
        total = None
        for mono, c in self.terms:
            term = Poly.exact([c]) if f.is_exact else Poly(np.array([complex(c)]))
            for i, e in enumerate(mono):
                if e:
                    term = term * f.components[i] ** e
            total = term if total is None else total + term
        return total

    @cached_property
    def sphere_sup(self) -> float:
        """``max |Q|`` on the unit sphere: quasi-random sampling plus local polish."""
        dim = 2 * (self.n + 1)
        u = qmc.Halton(d=dim, seed=0).random(SPHERE_SAMPLES)
        g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))

        def value(v):
            x = (v[: self.n + 1] + 1j * v[self.n + 1:]).reshape(self.n + 1, -1)
            x = x / np.linalg.norm(x, axis=0)
            return np.abs(self(x))

        vals = value(g.T)
        best = float(vals.max())
        for k in np.argsort(vals)[-5:]:
            res = optimize.minimize(lambda v: -float(value(v)[0]), g[k], method="BFGS",
                                    options={"gtol": 1e-12})
            best = max(best, -float(res.fun))
        return best

    @property
    def weil_floor(self) -> float:
        """Lower bound ``C_D = -log max|Q|`` of the Weil function on P^n."""
        return -float(np.log(self.sphere_sup))


def weil_values(D: MetricizedDivisor, x) -> np.ndarray:
    """``-log|Q(x)| + q log|x|`` for homogeneous coordinates ``x`` of shape ``(n+1, ...)``."""
    x = np.asarray(x, dtype=complex)
    nx = np.linalg.norm(x, axis=0)
    with np.errstate(divide="ignore"):
        return -np.log(np.abs(D(x / nx)))


def weil(D: MetricizedDivisor, x: ProjPoint) -> float:
    """Weil function ``-log ||1_D||(x)``; ``+inf`` on the divisor."""
    return float(weil_values(D, x.normalized()[:, None])[0])


def _wedge_sq(F: np.ndarray, G: np.ndarray) -> np.ndarray:
    out = np.zeros(F.shape[1:])
    for i, j in combinations(range(F.shape[0]), 2):
        out = out + np.abs(F[i] * G[j] - F[j] * G[i]) ** 2
    return out


def fs_pullback_density(f: RationalMap, z) -> np.ndarray:
    """Area density of ``f^* omega_FS`` (total mass ``deg f`` over C)."""
    z = np.asarray(z, dtype=complex)
    F = f(z)
    dF = f.derivative(z)
    nF2 = np.sum(np.abs(F) ** 2, axis=0)
    if np.any(nF2 < INDETERMINACY_TOL**2):
        raise IndeterminatePoint("all coordinates of the map vanish")
    return _wedge_sq(F, dF) / (np.pi * nF2**2)


def divisor_curvature_density(D: MetricizedDivisor, f: RationalMap, z) -> np.ndarray:
    """Curvature of ``f^* O(D)`` with the ``|Q|/|x|^q`` metric: ``q`` times the Fubini-Study density."""
    return D.degree * fs_pullback_density(f, z)


def log_norm_fd_density(f: RationalMap, z, h: float = 1e-3) -> np.ndarray:
    """``laplacian(log|F|) / 2pi`` by a fourth-order finite-difference stencil."""
    z = np.asarray(z, dtype=complex)

    def u(w):
        return 0.5 * np.log(np.sum(np.abs(f(w)) ** 2, axis=0))

    c = u(z)
    lap = np.zeros(z.shape)
    for d in (1, 1j):
        lap = lap + (-u(z + 2 * h * d) + 16 * u(z + h * d) - 30 * c
                     + 16 * u(z - h * d) - u(z - 2 * h * d)) / (12 * h * h)
    return lap / (2 * np.pi)


def chordal_distance(x: ProjPoint, y: ProjPoint) -> float:
    """Fubini-Study chordal distance ``|x ^ y| / (|x| |y|)`` in ``[0, 1]``."""
    a, b = x.coords, y.coords
    if a.size != b.size:
        raise ValueError("points live in different projective spaces")
    wedge = float(np.sqrt(_wedge_sq(a[:, None], b[:, None])[0]))
    return min(1.0, wedge / (np.linalg.norm(a) * np.linalg.norm(b)))


def chordal_to(x: np.ndarray, y: ProjPoint) -> np.ndarray:
    """Chordal distances from each column of ``x`` (shape ``(n+1, m)``) to ``y``."""
    b = y.coords[:, None]
    wedge = np.sqrt(_wedge_sq(x, np.broadcast_to(b, x.shape)))
    return np.minimum(1.0, wedge / (np.linalg.norm(x, axis=0) * np.linalg.norm(y.coords)))
