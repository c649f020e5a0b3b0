"""Command-line front end.

Every command writes a JSON report (stdout unless ``--out-json``) and, where a table
makes sense, a CSV file. Exit status: 0 when all checked identities hold, 1 on bad
input, 2 when an identity or verdict fails.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from .errors import IdentityViolation, InputError, ValdistError
from .funcspace import GaussQ, Poly, RationalMap
from .greenjensen import CONVENTION, DEFAULT_QUAD, QuadratureSpec, RadialDensity, jensen_residual
from .projective import MetricizedDivisor, fs_pullback_density

COMMANDS = ("jensen", "fmt", "mason", "rh", "logrh", "taut", "bubble", "gromov", "currents")

# built-in values for keys that may also come from --config
DEFAULTS = {
    "r": None,
    "r_grid": None,
    "tol": None,
    "mesh": 64,
    "seed": 0,
    "boundary": "0,1,inf",
    "eps": 0.05,
    "bound": "1",
    "random": 0,
    "n_theta": DEFAULT_QUAD.n_theta,
    "n_radial": DEFAULT_QUAD.n_radial,
    "max_refine": DEFAULT_QUAD.max_refine,
}


# ---------------------------------------------------------------------------
# spec parsing

def _sympy():
    import sympy
    from sympy.parsing.sympy_parser import (
        convert_xor,
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )
    return sympy, parse_expr, standard_transformations + (implicit_multiplication_application, convert_xor)


def _gauss(c) -> GaussQ | complex:
    import sympy
    re_, im_ = sympy.re(c), sympy.im(c)
    if re_.is_Rational and im_.is_Rational:
        return GaussQ(Fraction(int(re_.p), int(re_.q)), Fraction(int(im_.p), int(im_.q)))
    return complex(c)


def expr_to_poly(expr, z) -> Poly:
    import sympy
    p = sympy.Poly(sympy.expand(expr), z)
    coeffs = [_gauss(c) for c in reversed(p.all_coeffs())]
    if all(isinstance(c, GaussQ) for c in coeffs):
        return Poly.exact(coeffs)
    return Poly(np.array([complex(c) for c in coeffs]))


def _parse_range(text: str) -> list[int]:
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)(?:\s*:\s*(\d+))?", text)
    if m:
        a, b, step = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
        if step < 1 or b < a:
            raise InputError(f"bad range {text!r}")
        return list(range(a, b + 1, step))
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad index list {text!r}") from exc


def parse_sequence(text: str) -> tuple[list[int], list[RationalMap]]:
    """``name:[e0:e1:...],n=a..b[:step]`` or ``n=n1,n2,...``; expressions in ``z`` and ``n``."""
    m = re.fullmatch(r"\s*(\w+)\s*:\s*\[(.*)\]\s*,\s*n\s*=\s*(.+)", text)
    if not m:
        raise InputError(f"sequence spec must look like name:[e0:e1],n=1..50, got {text!r}")
    name, body, rng = m.groups()
    ns = _parse_range(rng)
    sympy, parse_expr, transforms = _sympy()
    z, n = sympy.symbols("z n")
    local = {"z": z, "n": n, "i": sympy.I, "I": sympy.I}
    try:
        exprs = [parse_expr(part, local_dict=local, transformations=transforms)
                 for part in body.split(":")]
    except Exception as exc:  # sympy raises a zoo of exception types
        raise InputError(f"cannot parse {body!r}: {exc}") from exc
    if len(exprs) < 2:
        raise InputError("a map needs at least two components")
    maps = []
    for k in ns:
        comps = [expr_to_poly(e.subs(n, k), z) for e in exprs]
        try:
            maps.append(RationalMap(tuple(comps), label=f"{name}[n={k}]"))
        except ValueError as exc:
            raise InputError(f"{name} at n={k}: {exc}") from exc
    return ns, maps


def parse_map(text: str, exact: bool = False) -> RationalMap:
    try:
        f = RationalMap.parse(text)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"bad map {text!r}: {exc}") from exc
    if exact and not f.is_exact:
        raise InputError(f"--exact given but {text!r} has inexact coefficients")
    return f


def parse_grid(text) -> list[float]:
    if isinstance(text, (int, float)):
        vals = [float(text)]
    else:
        try:
            vals = [float(v) for v in str(text).split(",") if v.strip()]
        except ValueError as exc:
            raise InputError(f"bad radius list {text!r}") from exc
    if not vals or any(not 0 < v < 1 for v in vals):
        raise InputError(f"radii must lie in (0, 1): {text!r}")
    return vals


def parse_bound(text: str):
    try:
        c = float(text)
        return lambda r: c
    except ValueError:
        pass
    sympy, parse_expr, transforms = _sympy()
    r = sympy.Symbol("r")
    try:
        fn = sympy.lambdify(r, parse_expr(text, local_dict={"r": r}, transformations=transforms))
    except Exception as exc:
        raise InputError(f"bad bound {text!r}: {exc}") from exc
    return lambda x: float(fn(x))


def read_config(path: str) -> dict:
    out = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{num}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="valdist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config")
        s.add_argument("--map", action="append")
        s.add_argument("--divisor", action="append")
        s.add_argument("--r", type=float)
        s.add_argument("--r-grid", dest="r_grid")
        s.add_argument("--tol", type=float)
        s.add_argument("--mesh", type=int)
        s.add_argument("--seq")
        s.add_argument("--out-csv", dest="out_csv")
        s.add_argument("--out-json", dest="out_json")
        s.add_argument("--exact", action="store_true", default=None)
        s.add_argument("--seed", type=int)
        s.add_argument("--no-timestamp", dest="no_timestamp", action="store_true", default=None)
        s.add_argument("--degree", type=int, help="expected map degree (sanity check)")
        s.add_argument("--boundary", help="boundary points of P^1, e.g. 0,1,inf")
        s.add_argument("--bubble", action="append", help="attach=energy")
        s.add_argument("--bound", help="energy bound: a number or an expression in r")
        s.add_argument("--eps", type=float)
        s.add_argument("--a")
        s.add_argument("--b")
        s.add_argument("--random", type=int, help="size of a random suite")
        s.add_argument("--n-theta", dest="n_theta", type=int)
        s.add_argument("--n-radial", dest="n_radial", type=int)
        s.add_argument("--max-refine", dest="max_refine", type=int)
    return p


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over built-in defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        file_cfg = read_config(args.config)
        unknown = set(file_cfg) - set(vars(args))
        if unknown:
            raise InputError(f"unknown config keys {sorted(unknown)}")
        cfg.update(file_cfg)
    for key, value in vars(args).items():
        if value is not None and key != "config":
            cfg[key] = value
    for key in ("map", "divisor", "bubble"):
        if isinstance(cfg.get(key), str):
            cfg[key] = [v.strip() for v in cfg[key].split(";") if v.strip()]
    for key, cast in (("mesh", int), ("seed", int), ("random", int), ("degree", int),
                      ("n_theta", int), ("n_radial", int), ("max_refine", int),
                      ("tol", float), ("eps", float), ("r", float)):
        if cfg.get(key) is not None:
            try:
                cfg[key] = cast(cfg[key])
            except (TypeError, ValueError) as exc:
                raise InputError(f"bad value for {key}: {cfg[key]!r}") from exc
    for key in ("exact", "no_timestamp"):
        v = cfg.get(key)
        cfg[key] = v is True or str(v).lower() in ("1", "true", "yes")
    if cfg.get("tol") is not None and cfg["tol"] < 1e-12:
        raise InputError("tol must be >= 1e-12")
    radii = cfg.get("r_grid") if cfg.get("r_grid") is not None else cfg.get("r")
    cfg["radii"] = parse_grid(radii) if radii is not None else None
    try:
        # --tol is the identity tolerance; the quadrature keeps its own stopping rule
        cfg["quad"] = QuadratureSpec(cfg["n_theta"], cfg["n_radial"], DEFAULT_QUAD.tol,
                                     cfg["max_refine"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return cfg


def _need(cfg, key, what=None):
    v = cfg.get(key)
    if v in (None, [], ""):
        raise InputError(f"missing --{(what or key).replace('_', '-')}")
    return v


def _single_map(cfg) -> RationalMap:
    maps = _need(cfg, "map")
    f = parse_map(maps[0], cfg["exact"])
    if cfg.get("degree") is not None and cfg["degree"] != f.degree:
        raise InputError(f"declared degree {cfg['degree']} but the map has degree {f.degree}")
    return f


def _divisors(cfg, n: int) -> list[MetricizedDivisor]:
    specs = cfg.get("divisor") or []
    out = [MetricizedDivisor.parse(s) for s in specs]
    for D in out:
        if D.n != n:
            raise InputError(f"divisor {D.name} lives on P^{D.n}, map targets P^{n}")
    return out


# ---------------------------------------------------------------------------
# commands; each returns (results, ok, csv_text)

def cmd_jensen(cfg):
    f = _single_map(cfg)
    radii = cfg["radii"] or [0.3, 0.6, 0.9]
    q = cfg["quad"]
    tol = cfg["tol"] or 1e-8
    ddc = RadialDensity(lambda z: fs_pullback_density(f, z))

    def phi(z):
        return np.log(np.linalg.norm(f(z), axis=0))

    rows = []
    for r in radii:
        from .greenjensen import boundary_mean
        mean = boundary_mean(phi, r, q)
        res = jensen_residual(phi, ddc, r, q)
        rows.append({"r": r, "mean": mean, "residual": res,
                     "ok": abs(res) <= tol * (1 + abs(mean))})
    lines = ["r,mean,residual"] + [f"{x['r']!r},{x['mean']!r},{x['residual']!r}" for x in rows]
    return {"map": f.label, "tol": tol, "rows": rows}, all(x["ok"] for x in rows), "\n".join(lines) + "\n"


def cmd_fmt(cfg):
    from .nevanlinna import DEFAULT_RADII, characteristic_report
    f = _single_map(cfg)
    Ds = _divisors(cfg, f.n) or [MetricizedDivisor.hyperplane(f.n, 0)]
    tol = cfg["tol"] or 1e-6
    reports = [characteristic_report(f, D, cfg["radii"] or DEFAULT_RADII, cfg["quad"], tol) for D in Ds]
    csv_text = "".join(r.to_csv() if i == 0 else r.to_csv().split("\n", 1)[1]
                       for i, r in enumerate(reports))
    return {"reports": [r.to_json() for r in reports]}, all(r.ok for r in reports), csv_text


def cmd_mason(cfg):
    from .tautological import mason_check, random_mason_pair
    results = []
    if cfg.get("a") is not None or cfg.get("b") is not None:
        a, b = Poly.parse(_need(cfg, "a")), Poly.parse(_need(cfg, "b"))
        results.append(mason_check(a, b).to_json() | {"a": a.to_text(), "b": b.to_text()})
    rng = np.random.default_rng(cfg["seed"])
    for _ in range(cfg["random"]):
        a, b = random_mason_pair(rng)
        results.append(mason_check(a, b).to_json() | {"a": a.to_text(), "b": b.to_text()})
    if not results:
        raise InputError("mason needs --a/--b or --random N")
    ok = all(v["residual"] >= 0 for v in results)
    return {"checks": results}, ok, None


def cmd_rh(cfg):
    from .tautological import random_self_map, rh_check
    maps = []
    if cfg.get("map"):
        maps.append(_single_map(cfg))
    rng = np.random.default_rng(cfg["seed"])
    for _ in range(cfg["random"]):
        maps.append(random_self_map(rng, int(rng.integers(2, 6))))
    if not maps:
        raise InputError("rh needs --map or --random N")
    out = [rh_check(f).to_json() | {"map": f.label, "degree": f.degree} for f in maps]
    return {"checks": out}, all(v["ok"] for v in out), None


def cmd_logrh(cfg):
    from .tautological import LogMetric, log_rh_check
    f = _single_map(cfg)
    D = LogMetric.parse(cfg["boundary"])
    v = log_rh_check(f, D).to_json() | {"map": f.label, "boundary": D.to_text()}
    return v, v["ok"], None


def cmd_taut(cfg):
    from .tautological import LogMetric, taut_identity_check
    f = _single_map(cfg)
    D = LogMetric.parse(cfg["boundary"])
    tol = cfg["tol"] or 1e-5
    rows = [taut_identity_check(f, D, r, cfg["quad"], tol).to_json() | {"r": r}
            for r in cfg["radii"] or [0.5]]
    lines = ["r,lhs,rhs,residual"] + [f"{x['r']!r},{x['lhs']!r},{x['rhs']!r},{x['residual']!r}" for x in rows]
    return {"map": f.label, "boundary": D.to_text(), "rows": rows}, all(x["ok"] for x in rows), \
        "\n".join(lines) + "\n"


def _parse_bubbles(specs):
    from .bubbles import Bubble
    out = []
    for s in specs or []:
        at, sep, en = s.partition("=")
        if not sep:
            raise InputError(f"bubble spec must be attach=energy, got {s!r}")
        try:
            attach = complex(at.strip().replace("i", "j"))
            out.append(Bubble(attach, (RationalMap.parse("1|0,1"),), (), (float(en),)))
        except ValueError as exc:
            raise InputError(f"bad bubble {s!r}: {exc}") from exc
    return tuple(out)


def cmd_bubble(cfg):
    from .bubbles import DiscWithBubbles, detect_concentration, nabla_bubble
    results = {}
    ok = True
    if cfg.get("map"):
        f = _single_map(cfg)
        D = (_divisors(cfg, f.n) or [MetricizedDivisor.hyperplane(f.n, 0)])[0]
        b = DiscWithBubbles(f, _parse_bubbles(cfg.get("bubble")))
        results["nabla"] = [{"r": r, "value": nabla_bubble(b, D, r, cfg["quad"])}
                            for r in cfg["radii"] or [0.5]]
    if cfg.get("seq"):
        ns, maps = parse_sequence(cfg["seq"])
        r = max(cfg["radii"] or [0.5])
        found = detect_concentration(maps, r, cfg["eps"])
        results["concentration"] = {"r": r, "eps": cfg["eps"], "n": ns,
                                    "found": [c.to_json() for c in found]}
    if not results:
        raise InputError("bubble needs --map (with --bubble) or --seq")
    return results, ok, None


def cmd_gromov(cfg):
    from .bubbles import gromov_harness
    ns, maps = parse_sequence(_need(cfg, "seq"))
    v = gromov_harness(maps, parse_bound(str(cfg["bound"])), cfg["radii"] or [0.25, 0.5, 0.75],
                       mesh=cfg["mesh"], eps=cfg["eps"], q=cfg["quad"])
    out = v.to_json()
    out["n"] = ns
    lines = ["n,r,energy"] + [f"{n},{r!r},{e!r}" for n, row in zip(ns, v.energies) for r, e in row]
    return out, v.passed, "\n".join(lines) + "\n"


def cmd_currents(cfg):
    from .currents import MIN_SAMPLES, TestFormBasis, exactness_decay, limit_points, positivity_check, sample_sequence
    ns, maps = parse_sequence(_need(cfg, "seq"))
    radii = cfg["radii"] or [0.6, 0.75]
    n_dim = maps[0].n
    basis = TestFormBasis.standard(n_dim)
    q = cfg["quad"]
    tol = cfg["tol"] or 1e-2
    samples = sample_sequence(maps, radii, basis, ns, q)
    out = {"samples": [asdict(s) for s in samples]}
    if len(ns) >= MIN_SAMPLES:
        out["limits"] = limit_points(samples, tol).to_json()
    decay = exactness_decay(maps, basis.exact_forms[0], radii, ns, q=q)
    out["decay_ok"] = decay.ok
    ok = decay.ok
    divs = _divisors(cfg, n_dim)
    if divs:
        rows = positivity_check(maps, radii, divs, ns, q=q)
        out["margins"] = [asdict(x) for x in rows]
        ok = ok and all(x.margin >= -tol for x in rows)
    return out, ok, decay.to_csv()


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# ---------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _public_config(cfg: dict) -> dict:
    skip = {"quad", "radii", "out_csv", "out_json", "no_timestamp", "config"}
    out = {k: v for k, v in cfg.items() if k not in skip and v is not None}
    out["radii"] = cfg.get("radii")
    return out


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        results, ok, csv_text = HANDLERS[args.command](cfg)
    except (InputError, ValdistError, ValueError) as exc:
        if isinstance(exc, IdentityViolation):
            print(f"identity violated: {exc}", file=sys.stderr)
            return 2
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    report = {
        "command": args.command,
        "config": _public_config(cfg),
        "convention": CONVENTION,
        "results": results,
        "verdict": "PASS" if ok else "FAIL",
        "seed": cfg["seed"],
    }
    if not cfg["no_timestamp"]:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable)
    if cfg.get("out_json"):
        with open(cfg["out_json"], "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if cfg.get("out_csv") and csv_text:
        with open(cfg["out_csv"], "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    if not ok:
        print(f"{args.command}: verdict FAIL", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
