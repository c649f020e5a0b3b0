"""Disc integrals: boundary means, the log-weighted ("nabla") integral and the Jensen residual.

Convention: ``dd^c phi`` is the measure with density ``laplacian(phi) / (2 pi)`` plus
point masses, so that ``dd^c log|z - a|`` is the unit Dirac mass at ``a`` and

    int_0^r dt/t int_{|z|<t} dd^c phi  =  mean_{|z|=r} phi  -  phi(0)

holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import AtomOnBoundary, DegenerateInput, NoConvergence

CONVENTION = "ddc=laplacian/2pi"
ATOM_BAND = 1e-9
# extra bisection depth allowed for radial panels beyond max_refine
_RADIAL_EXTRA_DEPTH = 4
_PANEL_ORDER = 16

Density = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution and stopping rule for the disc quadratures.

    ``max_refine = 0`` switches refinement off: the rules are applied once at the
    stated resolution and no convergence test is made.
    """

    n_theta: int = 256
    n_radial: int = 64
    tol: float = 1e-9
    max_refine: int = 6

    def __post_init__(self):
        if self.n_theta < 16 or self.n_theta & (self.n_theta - 1):
            raise ValueError(f"n_theta must be a power of two >= 16, got {self.n_theta}")
        if self.n_radial < 1:
            raise ValueError("n_radial must be positive")
        if self.tol < 1e-12:
            raise ValueError(f"tol must be >= 1e-12, got {self.tol}")
        if self.max_refine < 0:
            raise ValueError("max_refine must be >= 0")

    def doubled(self) -> "QuadratureSpec":
        return replace(self, n_theta=2 * self.n_theta, n_radial=2 * self.n_radial)


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class RadialDensity:
    """Area density (mass per unit Lebesgue area) plus point masses inside the unit disc.

    ``eval`` takes an array of complex points and returns real densities; ``None``
    stands for a vanishing smooth part.
    """

    eval: Density | None = None
    singular_atoms: tuple[tuple[complex, float], ...] = ()

    def __post_init__(self):
        atoms = tuple((complex(z), float(m)) for z, m in self.singular_atoms)
        for z, _ in atoms:
            if abs(z) >= 1:
                raise ValueError(f"atom {z} is not inside the unit disc")
        object.__setattr__(self, "singular_atoms", atoms)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.eval is None:
            return np.zeros(z.shape)
        return np.asarray(self.eval(z), dtype=float)

    def scaled(self, factor: float) -> "RadialDensity":
        ev = self.eval
        return RadialDensity(None if ev is None else (lambda z: factor * ev(z)),
                             tuple((z, factor * m) for z, m in self.singular_atoms))


def _real(values) -> np.ndarray:
    values = np.asarray(values)
    return values.real if np.iscomplexobj(values) else values.astype(float)


def boundary_mean(phi: Callable, r: float, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Normalised circle mean ``(1/2pi) int phi(r e^{it}) dt`` by the periodic trapezoid rule."""
    n = q.n_theta
    theta = 2 * np.pi * np.arange(n) / n
    est = float(np.mean(_real(phi(r * np.exp(1j * theta)))))
    if q.max_refine == 0:
        return est
    for _ in range(q.max_refine):
        mid = _real(phi(r * np.exp(1j * (theta + np.pi / n))))
        new = 0.5 * (est + float(np.mean(mid)))
        n *= 2
        theta = 2 * np.pi * np.arange(n) / n
        if abs(new - est) <= q.tol * max(1.0, abs(new)):
            return new
        est = new
    raise NoConvergence(f"boundary mean on |z|={r} not converged after {q.max_refine} doublings")


def angular_means(u: Density, rho: np.ndarray, q: QuadratureSpec) -> np.ndarray:
    """Circle means of ``u`` on each radius in ``rho`` (jointly refined)."""
    rho = np.asarray(rho, dtype=float)
    n = q.n_theta
    theta = 2 * np.pi * np.arange(n) / n
    est = np.mean(u(rho[:, None] * np.exp(1j * theta)[None, :]), axis=1)
    if q.max_refine == 0:
        return est
    for _ in range(q.max_refine):
        shifted = np.exp(1j * (theta + np.pi / n))
        new = 0.5 * (est + np.mean(u(rho[:, None] * shifted[None, :]), axis=1))
        n *= 2
        theta = 2 * np.pi * np.arange(n) / n
        if np.max(np.abs(new - est)) <= q.tol * max(1.0, float(np.max(np.abs(new)))):
            return new
        est = new
    raise NoConvergence("angular means not converged")


def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1), 0.5 * w


def radial_integral(kernel: Callable[[np.ndarray], np.ndarray],
                    radius_of: Callable[[np.ndarray], np.ndarray],
                    u: Density, q: QuadratureSpec) -> float:
    """Adaptive composite Gauss-Legendre in ``s`` on ``[0, 1]`` of ``kernel(s) * mean_u(radius_of(s))``.

    Panels are bisected until the two-half estimate agrees with the whole-panel
    estimate to ``tol * scale * width``.
    """
    order = min(_PANEL_ORDER, q.n_radial)
    n_panels = max(1, -(-q.n_radial // order))
    xg, wg = _gauss(order)

    def panel_values(a: np.ndarray, b: np.ndarray):
        s = a[:, None] + (b - a)[:, None] * xg[None, :]
        ker = kernel(s)
        means = angular_means(u, radius_of(s).ravel(), q).reshape(s.shape)
        vals = ker * means
        w = (b - a)[:, None] * wg[None, :]
        return np.sum(w * vals, axis=1), np.sum(w * np.abs(vals), axis=1)

    edges = np.linspace(0.0, 1.0, n_panels + 1)
    a, b = edges[:-1], edges[1:]
    coarse, coarse_abs = panel_values(a, b)
    if q.max_refine == 0:
        return float(np.sum(coarse))
    scale = max(1.0, float(np.sum(coarse_abs)))
    total = 0.0
    depth_limit = q.max_refine + _RADIAL_EXTRA_DEPTH
    for depth in range(depth_limit + 1):
        mid = 0.5 * (a + b)
        left, _ = panel_values(a, mid)
        right, _ = panel_values(mid, b)
        fine = left + right
        ok = np.abs(fine - coarse) <= q.tol * scale * (b - a)
        total += float(np.sum(fine[ok]))
        if ok.all():
            return total
        if depth == depth_limit:
            break
        bad = ~ok
        a = np.concatenate([a[bad], mid[bad]])
        b = np.concatenate([mid[bad], b[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    raise NoConvergence("radial panels not converged")


def nabla_integral(u: RadialDensity, r: float, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``int_0^r dt/t int_{|z|<t} u``, computed as ``int_{|z|<r} log(r/|z|) u dA`` plus atom terms."""
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    atom_sum = 0.0
    for z, m in u.singular_atoms:
        if abs(abs(z) - r) < ATOM_BAND:
            raise AtomOnBoundary(f"atom {z} lies on |z| = {r}")
        if z == 0:
            raise DegenerateInput("atom at the origin makes the integral infinite")
        if abs(z) < r:
            atom_sum += m * np.log(r / abs(z))
    if u.eval is None:
        return atom_sum
    # t = |z|/r = s**3 folds the log kernel into a smooth integrand
    kernel = lambda s: 2 * np.pi * r * r * 9 * s**5 * np.log(1 / s)
    smooth = radial_integral(kernel, lambda s: r * s**3, u.eval, q)
    return smooth + atom_sum


def disc_integral(u: Density, radius: float, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Plain area integral ``int_{|z|<radius} u dA`` (any positive radius)."""
    kernel = lambda s: 2 * np.pi * radius * radius * s
    return radial_integral(kernel, lambda s: radius * s, u, q)


def jensen_residual(phi: Callable, ddc: RadialDensity, r: float,
                    q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``nabla(dd^c phi) - mean_{|z|=r} phi + phi(0)``; zero up to quadrature error."""
    phi0 = float(_real(phi(np.array([0j])))[0])
    if not np.isfinite(phi0):
        raise DegenerateInput("phi must be finite at the origin")
    return nabla_integral(ddc, r, q) - boundary_mean(phi, r, q) + phi0


def log_modulus_density(points: Sequence[tuple[complex, float]]) -> RadialDensity:
    """``dd^c`` of ``sum m log|z - a|``: atoms only."""
    return RadialDensity(None, tuple(points))
