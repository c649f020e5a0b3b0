"""Area function, zero count and characteristic side by side for [1 : z^d - c].

The area minus the count equals r dm/dr, so the two curves cross and re-cross.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from valdist import MetricizedDivisor, RationalMap
from valdist.nevanlinna import area_comparison


@dataclass
class AreaConfig:
    degree: int = 3
    c: str = "1/8"
    n_radii: int = 24


def main(cfg: AreaConfig) -> None:
    coeffs = [f"-{cfg.c}"] + ["0"] * (cfg.degree - 1) + ["1"]
    f = RationalMap.parse("1|" + ",".join(coeffs))
    D = MetricizedDivisor.hyperplane(1, 1)  # zeros of z^d - c
    radii = np.linspace(0.05, 0.95, cfg.n_radii)
    rows = area_comparison(f, D, radii)
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--degree", type=int, default=AreaConfig.degree)
    p.add_argument("--c", default=AreaConfig.c)
    a = p.parse_args()
    main(AreaConfig(degree=a.degree, c=a.c))
