"""Polynomials, rational maps, root localisation and exact Gaussian-rational arithmetic.

Floating coefficients are complex128 and stored ascending (``coeffs[k]`` multiplies
``z**k``).  A polynomial may also carry an exact view with Gaussian-rational
coefficients; every operation that only involves exact operands stays exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    ExactModeRequired,
    InputError,
    NoConvergence,
    NotCoprime,
    RootCountMismatch,
    RootOnBoundary,
)

BOUNDARY_BAND = 1e-9
# single-linkage radii tried in turn when splitting eigenvalue clusters
_CLUSTER_LADDER = (5e-2, 1e-3, 3e-5, 1e-7)
_MULTIPLICITY_TOL = 1e-9


class GaussQ:
    """Gaussian rational ``re + im*i`` with exact :class:`Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, complex):
            re, im = re.real, re.imag + im
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussQ":
        if isinstance(value, GaussQ):
            return value
        if isinstance(value, str):
            return parse_coefficient(value)
        if isinstance(value, (complex, np.complexfloating)):
            return cls(Fraction(float(value.real)), Fraction(float(value.imag)))
        if isinstance(value, (np.floating, np.integer)):
            value = value.item()
        return cls(value)

    def __add__(self, other):
        other = GaussQ.coerce(other)
        return GaussQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussQ.coerce(other)
        return GaussQ(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussQ.coerce(other) - self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussQ.coerce(other)
        return GaussQ(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussQ.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussQ((self.re * other.re + self.im * other.im) / den,
                      (self.im * other.re - self.re * other.im) / den)

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __eq__(self, other):
        try:
            other = GaussQ.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussQ({self.re})"
        return f"GaussQ({self.re}, {self.im})"


_TERM_SPLIT = re.compile(r"(?<=[^eE+\-])(?=[+\-])")


def parse_coefficient(text: str) -> GaussQ:
    """Parse ``a``, ``a+bi`` or ``p/q+r/s*i`` into an exact Gaussian rational."""
    s = text.strip().replace(" ", "")
    if not s:
        raise InputError("empty coefficient")
    re_part = Fraction(0)
    im_part = Fraction(0)
    try:
        for term in _TERM_SPLIT.split(s):
            if term.endswith(("i", "j")):
                body = term[:-1].rstrip("*")
                if body in ("", "+"):
                    im_part += 1
                elif body == "-":
                    im_part -= 1
                else:
                    im_part += Fraction(body)
            else:
                re_part += Fraction(term)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad coefficient {text!r}") from exc
    return GaussQ(re_part, im_part)


# ---------------------------------------------------------------------------
# exact polynomial arithmetic on ascending tuples of GaussQ

def _etrim(a: Sequence[GaussQ]) -> list[GaussQ]:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _eadd(a, b):
    n = max(len(a), len(b))
    zero = GaussQ(0)
    return _etrim([(a[k] if k < len(a) else zero) + (b[k] if k < len(b) else zero)
                   for k in range(n)])


def _eneg(a):
    return [-c for c in a]


def _emul(a, b):
    if not a or not b:
        return []
    out = [GaussQ(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _etrim(out)


def _ederiv(a):
    return _etrim([a[k] * k for k in range(1, len(a))])


def _edivmod(a, b):
    a = _etrim(a)
    b = _etrim(b)
    if not b:
        raise ZeroDivisionError("exact polynomial division by zero")
    if len(a) < len(b):
        return [], a
    lead = b[-1]
    rem = list(a)
    quot = [GaussQ(0)] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] / lead
        quot[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] = rem[k + j] - c * y
    return _etrim(quot), _etrim(rem[: len(b) - 1])


def _emonic(a):
    a = _etrim(a)
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def _egcd(a, b):
    a, b = _etrim(a), _etrim(b)
    while b:
        a, b = b, _edivmod(a, b)[1]
    return _emonic(a)


def squarefree_decomposition(exact: Sequence[GaussQ]) -> list[tuple[list[GaussQ], int]]:
    """Yun's algorithm: ``[(factor, multiplicity), ...]`` with monic squarefree factors."""
    f = _emonic(exact)
    if len(f) <= 1:
        return []
    fp = _ederiv(f)
    a = _egcd(f, fp)
    b = _edivmod(f, a)[0]
    c = _edivmod(fp, a)[0]
    d = _eadd(c, _eneg(_ederiv(b)))
    out = []
    k = 1
    while len(b) > 1:
        a = _egcd(b, d)
        b = _edivmod(b, a)[0]
        c = _edivmod(d, a)[0]
        d = _eadd(c, _eneg(_ederiv(b)))
        if len(a) > 1:
            out.append((a, k))
        k += 1
    return out


def _to_complex(exact: Sequence[GaussQ]) -> np.ndarray:
    return np.array([complex(c) for c in exact], dtype=complex)


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Poly:
    """Univariate complex polynomial with an optional exact view."""

    coeffs: np.ndarray
    exact_coeffs: tuple[GaussQ, ...] | None = None

    def __post_init__(self):
        if self.exact_coeffs is not None:
            exact = tuple(_etrim(GaussQ.coerce(c) for c in self.exact_coeffs))
            object.__setattr__(self, "exact_coeffs", exact)
            object.__setattr__(self, "coeffs", _to_complex(exact))
        else:
            c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
            nz = np.flatnonzero(c)
            c = c[: nz[-1] + 1] if nz.size else c[:0]
            object.__setattr__(self, "coeffs", c)
        self.coeffs.setflags(write=False)

    # construction -----------------------------------------------------------
    @classmethod
    def exact(cls, values: Iterable) -> "Poly":
        return cls(np.zeros(0), tuple(GaussQ.coerce(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Comma separated ascending coefficients, always read exactly."""
        parts = [p for p in text.split(",")]
        if not parts or any(not p.strip() for p in parts):
            raise InputError(f"bad polynomial {text!r}")
        return cls.exact(parse_coefficient(p) for p in parts)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Poly":
        return cls(lead * np.polynomial.polynomial.polyfromroots(roots))

    def to_text(self) -> str:
        def fmt(c):
            if isinstance(c, GaussQ):
                if c.im == 0:
                    return str(c.re)
                return f"{c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}*i"
            c = complex(c)
            return repr(c.real) if c.imag == 0 else f"{c.real!r}{c.imag:+.17g}i"
        vals = self.exact_coeffs if self.is_exact else self.coeffs
        return ",".join(fmt(c) for c in vals) if len(vals) else "0"

    # properties -------------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.exact_coeffs is not None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def scale_at(self, rho) -> np.ndarray:
        """``sum |c_k| rho**k``: the natural size of ``p`` on ``|z| = rho``."""
        return np.polynomial.polynomial.polyval(np.abs(rho), np.abs(self.coeffs))

    # arithmetic -------------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (GaussQ, int, Fraction)):
            return Poly.exact([other])
        return Poly(np.array([other], dtype=complex))

    def __add__(self, other):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return Poly.exact(_eadd(self.exact_coeffs, other.exact_coeffs))
        return Poly(np.polynomial.polynomial.polyadd(self.coeffs, other.coeffs)
                    if len(self.coeffs) and len(other.coeffs)
                    else (self.coeffs if len(self.coeffs) else other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return Poly.exact(_eneg(self.exact_coeffs))
        return Poly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return Poly.exact(_emul(self.exact_coeffs, other.exact_coeffs))
        if self.is_zero or other.is_zero:
            return Poly(np.zeros(0))
        return Poly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self._lift(1) if self.is_exact else Poly(np.ones(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def deriv(self) -> "Poly":
        if self.is_exact:
            return Poly.exact(_ederiv(self.exact_coeffs))
        return Poly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def compose(self, inner: "Poly") -> "Poly":
        """``self(inner(z))`` by Horner's scheme on polynomials."""
        out = self._lift(0) if (self.is_exact and inner.is_exact) else Poly(np.zeros(0))
        vals = self.exact_coeffs if (self.is_exact and inner.is_exact) else self.coeffs
        for c in reversed(list(vals)):
            out = out * inner + self._lift(c)
        return out

    def as_float(self) -> "Poly":
        return Poly(np.array(self.coeffs))

    # evaluation -------------------------------------------------------------
    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        c = self.coeffs
        if len(c) == 0:
            return np.zeros(z.shape, dtype=complex)
        nz = np.flatnonzero(c)
        if len(c) > 12 and 4 * len(nz) < len(c):
            out = np.zeros(z.shape, dtype=complex)
            for k in nz:
                out = out + c[k] * z**int(k)
            return out
        out = np.full(z.shape, c[-1], dtype=complex)
        for a in c[-2::-1]:
            out = out * z + a
        return out

    def __repr__(self):
        return f"Poly({self.to_text()})"


def gcd(p: Poly, q: Poly) -> Poly:
    if not (p.is_exact and q.is_exact):
        raise ExactModeRequired("gcd needs exact coefficients")
    return Poly.exact(_egcd(p.exact_coeffs, q.exact_coeffs))


def divmod_exact(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not (p.is_exact and q.is_exact):
        raise ExactModeRequired("exact division needs exact coefficients")
    a, b = _edivmod(p.exact_coeffs, q.exact_coeffs)
    return Poly.exact(a), Poly.exact(b)


def radical_degree(p: Poly) -> int:
    """Number of distinct roots of ``p``: ``deg(p / gcd(p, p'))`` in exact arithmetic."""
    if not p.is_exact:
        raise ExactModeRequired("radical_degree needs exact coefficients")
    if p.is_zero:
        raise DegenerateInput("zero polynomial has no radical")
    return p.degree - gcd(p, p.deriv()).degree


def common_root_order(w: Poly, p: Poly) -> int:
    """``sum of ord_z(w)`` over the distinct roots ``z`` of ``p`` (exact)."""
    rad = divmod_exact(p, gcd(p, p.deriv()))[0]
    g = gcd(w, rad)
    total = 0
    rest = w
    while g.degree > 0:
        total += g.degree
        rest = divmod_exact(rest, g)[0]
        g = gcd(rest, g)
    return total


# ---------------------------------------------------------------------------
# root localisation

@dataclass(frozen=True)
class RootMultiset:
    entries: tuple[tuple[complex, int], ...]
    radius: float
    winding: int = 0

    @property
    def count(self) -> int:
        return sum(m for _, m in self.entries)

    def locations(self) -> np.ndarray:
        return np.array([z for z, _ in self.entries], dtype=complex)


def _newton_polish(p: Poly, z: np.ndarray, steps: int = 4) -> np.ndarray:
    dp = p.deriv()
    z = np.array(z, dtype=complex)
    for _ in range(steps):
        v = p(z)
        d = dp(z)
        ok = d != 0
        step = np.zeros_like(z)
        step[ok] = v[ok] / d[ok]
        cand = z - step
        better = np.abs(p(cand)) <= np.abs(v)
        z = np.where(better, cand, z)
    return z


def _eigen_roots(coeffs: np.ndarray) -> np.ndarray:
    if len(coeffs) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(coeffs[::-1]).astype(complex)


def _single_linkage(points: np.ndarray, tol: float) -> list[list[int]]:
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) < tol * (1 + max(abs(points[i]), abs(points[j]))):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _verify_multiple(p: Poly, centre: complex, m: int) -> complex | None:
    """Return the refined location if ``p`` has an ``m``-fold root near ``centre``."""
    derivs = [p]
    for _ in range(m):
        derivs.append(derivs[-1].deriv())
    target = derivs[m - 1]
    z = np.array([centre], dtype=complex)
    z = _newton_polish(target, z, steps=8)
    zc = complex(z[0])
    for j in range(m):
        q = derivs[j]
        scale = float(q.scale_at(abs(zc)))
        if scale == 0.0 or abs(q(zc)) > _MULTIPLICITY_TOL * scale:
            return None
    if abs(zc - centre) > 1e-2 * (1 + abs(centre)):
        return None
    return zc


def _clustered_roots(p: Poly) -> list[tuple[complex, int]]:
    lam = _eigen_roots(p.coeffs)
    out: list[tuple[complex, int]] = []

    def resolve(idx: list[int], level: int):
        pts = lam[idx]
        if len(idx) == 1:
            out.append((complex(_newton_polish(p, pts)[0]), 1))
            return
        if level >= len(_CLUSTER_LADDER):
            for z in _newton_polish(p, pts):
                out.append((complex(z), 1))
            return
        for group in _single_linkage(pts, _CLUSTER_LADDER[level]):
            sub = [idx[g] for g in group]
            if len(sub) > 1:
                loc = _verify_multiple(p, complex(np.mean(lam[sub])), len(sub))
                if loc is not None:
                    out.append((loc, len(sub)))
                    continue
            resolve(sub, level + 1)

    if len(lam):
        resolve(list(range(len(lam))), 0)
    return out


def _exact_roots(p: Poly) -> list[tuple[complex, int]]:
    out = []
    for factor, mult in squarefree_decomposition(p.exact_coeffs):
        fp = Poly(_to_complex(factor))
        for z in _newton_polish(fp, _eigen_roots(fp.coeffs)):
            out.append((complex(z), mult))
    return out


def all_roots(p: Poly) -> list[tuple[complex, int]]:
    """Every root of ``p`` with multiplicity (exact squarefree split when available)."""
    if p.is_zero:
        raise DegenerateInput("zero polynomial")
    return _exact_roots(p) if p.is_exact else _clustered_roots(p)


def winding_number(p: Poly, r: float, max_depth: int = 64) -> int:
    """Argument-principle count of zeros in ``|z| < r`` by adaptive phase tracking."""
    if p.is_zero:
        raise DegenerateInput("zero polynomial")
    n0 = max(64, 8 * max(p.degree, 1))
    theta = np.linspace(0.0, 2 * np.pi, n0 + 1)
    vals = p(r * np.exp(1j * theta))
    ta, tb, va, vb = theta[:-1], theta[1:], vals[:-1], vals[1:]
    total = 0.0
    for _ in range(max_depth):
        if np.any(va == 0) or np.any(vb == 0):
            raise RootOnBoundary(f"polynomial vanishes on |z| = {r}")
        inc = np.angle(vb / va)
        bad = np.abs(inc) > 0.5
        total += float(np.sum(inc[~bad]))
        if not bad.any():
            return int(round(total / (2 * np.pi)))
        ta, tb, va, vb = ta[bad], tb[bad], va[bad], vb[bad]
        tm = 0.5 * (ta + tb)
        vm = p(r * np.exp(1j * tm))
        ta, tb = np.concatenate([ta, tm]), np.concatenate([tm, tb])
        va, vb = np.concatenate([va, vm]), np.concatenate([vm, vb])
    raise NoConvergence("phase tracking did not resolve the boundary winding")


def roots_in_disc(p: Poly, r: float) -> RootMultiset:
    """Roots of ``p`` inside ``|z| < r`` with multiplicities, checked by the argument principle."""
    if p.is_zero:
        raise DegenerateInput("zero polynomial")
    if not 0 < r <= 1:
        raise ValueError(f"radius must lie in (0, 1], got {r}")
    roots = all_roots(p)
    for z, _ in roots:
        if abs(abs(z) - r) < BOUNDARY_BAND:
            raise RootOnBoundary(f"root {z} lies on |z| = {r}; perturb the radius")
    inside = tuple(sorted(((z, m) for z, m in roots if abs(z) < r),
                          key=lambda e: (abs(e[0]), np.angle(e[0]))))
    w = winding_number(p, r)
    if sum(m for _, m in inside) != w:
        raise RootCountMismatch(
            f"located {sum(m for _, m in inside)} roots in |z| < {r}, winding gives {w}")
    return RootMultiset(inside, r, w)


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RationalMap:
    """Map from the disc (or P^1) to P^n given by coprime polynomial coordinates."""

    components: tuple[Poly, ...]
    label: str = ""
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Poly) else Poly.exact(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 2:
            raise DegenerateInput("a map to P^n needs at least two coordinates")
        if all(c.is_zero for c in comps):
            raise DegenerateInput("all coordinates vanish identically")
        if self.check:
            self._check_coprime()
        if not self.label:
            object.__setattr__(self, "label", self.to_text())

    @classmethod
    def parse(cls, text: str, label: str = "") -> "RationalMap":
        parts = text.split("|")
        if len(parts) < 2:
            raise InputError(f"map spec needs '|' separated components: {text!r}")
        return cls(tuple(Poly.parse(p) for p in parts), label=label)

    @classmethod
    def unchecked(cls, components, label: str = "") -> "RationalMap":
        return cls(tuple(components), label=label, check=False)

    def to_text(self) -> str:
        return " | ".join(c.to_text() for c in self.components)

    def _check_coprime(self):
        nonzero = [c for c in self.components if not c.is_zero]
        if any(c.degree == 0 for c in nonzero):
            return
        if self.is_exact:
            g = nonzero[0]
            for c in nonzero[1:]:
                g = gcd(g, c)
            if g.degree > 0:
                raise NotCoprime(f"coordinates share the factor {g}")
            return
        base = min(nonzero, key=lambda c: c.degree)
        for z in _eigen_roots(base.coeffs):
            if all(abs(c(z)) <= BOUNDARY_BAND * max(float(c.scale_at(abs(z))), 1e-300)
                   for c in nonzero if c is not base):
                raise NotCoprime(f"coordinates share a root near {z}")

    @property
    def n(self) -> int:
        """Dimension of the target projective space."""
        return len(self.components) - 1

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c in self.components)

    @property
    def is_constant(self) -> bool:
        return self.degree <= 0 or self._wronskians_vanish()

    def _wronskians_vanish(self) -> bool:
        # constant iff every pairwise Wronskian vanishes
        comps = self.components
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                w = comps[i] * comps[j].deriv() - comps[j] * comps[i].deriv()
                if w.is_zero:
                    continue
                size = 1 + np.max(np.abs(comps[i].coeffs), initial=0) * np.max(
                    np.abs(comps[j].coeffs), initial=0)
                if np.max(np.abs(w.coeffs)) > 1e-14 * size:
                    return False
        return True

    def __call__(self, z) -> np.ndarray:
        """Homogeneous coordinates, shape ``(n + 1,) + shape(z)``."""
        z = np.asarray(z, dtype=complex)
        return np.stack([c(z) for c in self.components])

    def derivative(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.stack([c.deriv()(z) for c in self.components])

    def homogeneous(self, s, t) -> np.ndarray:
        """Evaluate at ``[s : t]`` of P^1 (``z = s / t``) after homogenising to the map degree."""
        s = np.asarray(s, dtype=complex)
        t = np.asarray(t, dtype=complex)
        d = self.degree
        out = []
        for c in self.components:
            acc = np.zeros(np.broadcast(s, t).shape, dtype=complex)
            for k, a in enumerate(c.coeffs):
                if a != 0:
                    acc = acc + a * s**k * t ** (d - k)
            out.append(acc)
        return np.stack(out)

    def compose(self, inner: Poly, denom: Poly | None = None) -> "RationalMap":
        """Precompose with ``z -> inner(z) / denom(z)``; coprimality is preserved for Moebius maps."""
        d = self.degree
        comps = []
        for c in self.components:
            acc = None
            vals = c.exact_coeffs if (c.is_exact and inner.is_exact and
                                      (denom is None or denom.is_exact)) else c.coeffs
            for k, a in enumerate(vals):
                if not a:
                    continue
                term = c._lift(a) * inner**k
                if denom is not None:
                    term = term * denom ** (d - k)
                acc = term if acc is None else acc + term
            comps.append(acc if acc is not None else Poly(np.zeros(0)))
        return RationalMap.unchecked(comps)

    def mobius(self, a: complex, rotation: float = 0.0) -> "RationalMap":
        """``f o alpha`` with ``alpha(z) = e^{i rotation} (z - a) / (1 - conj(a) z)``."""
        u = np.exp(1j * rotation)
        inner = Poly(np.array([-u * a, u], dtype=complex))
        denom = Poly(np.array([1.0, -np.conj(a)], dtype=complex))
        out = self.compose(inner, denom)
        return RationalMap.unchecked(out.components, label=f"({self.label})o mob({a:.4g})")

    def rescale(self, centre: complex, scale: float) -> "RationalMap":
        """``w -> f(centre + scale * w)``."""
        inner = Poly(np.array([centre, scale], dtype=complex))
        out = self.compose(inner)
        return RationalMap.unchecked(out.components, label=f"({self.label})@{centre:.3g}")

    def __repr__(self):
        return f"RationalMap[{self.to_text()}]"
