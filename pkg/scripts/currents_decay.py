"""Exact-form pairings of the normalized currents of [1:(2z)^n + 1] against 2 sup|phi| / T."""

import argparse
import sys
from dataclasses import dataclass

from valdist.cli import parse_sequence
from valdist.currents import TestFormBasis, exactness_decay, limit_points, sample_sequence


@dataclass
class DecayConfig:
    seq: str = "g:[1:(2z)^n+1],n=2..50:2"
    radii: tuple[float, ...] = (0.6, 0.75)


def main(cfg: DecayConfig) -> None:
    ns, maps = parse_sequence(cfg.seq)
    basis = TestFormBasis.standard(1)
    table = exactness_decay(maps, basis.exact_forms[0], cfg.radii, ns)
    sys.stdout.write(table.to_csv())
    rep = limit_points(sample_sequence(maps, cfg.radii, basis, ns))
    for r in cfg.radii:
        for lab, cl in zip(rep.labels, rep.clusters[r]):
            print(f"# r={r} {lab}: " + ", ".join(f"{c.centre:.4f} (diam {c.diameter:.1e})" for c in cl),
                  file=sys.stderr)
    print(f"# bound respected: {table.ok}", file=sys.stderr)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seq", default=DecayConfig.seq)
    main(DecayConfig(seq=p.parse_args().seq))
