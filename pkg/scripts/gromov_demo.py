"""Run the compactness harness on three families and print the verdicts.

[1:z+1/n] converges uniformly, [1:nz] bubbles at the origin, and [1:(2z)^n]
has unbounded energy on the outer radii.
"""

import argparse
import json
from dataclasses import dataclass

from valdist.bubbles import gromov_harness
from valdist.cli import parse_sequence

FAMILIES = {
    "shift": "shift:[1:z+1/n],n=10,20,50,100,200,400,700,1000",
    "scale": "scale:[1:nz],n=10,20,50,100,200,400,700,1000",
    "power": "power:[1:(2z)^n],n=3..10",
}


@dataclass
class DemoConfig:
    mesh: int = 48
    bound: float = 1.0
    verbose: bool = False


def main(cfg: DemoConfig) -> None:
    for name, spec in FAMILIES.items():
        _, seq = parse_sequence(spec)
        v = gromov_harness(seq, lambda r: cfg.bound, [0.3, 0.45, 0.6, 0.8], mesh=cfg.mesh)
        out = v.to_json()
        print(f"{name:6s} {'PASS' if v.passed else 'FAIL'}  bubbles={len(v.bubbles_detected)}  "
              f"unbounded radii={v.unbounded_radii}  tail={v.subsequence_indices}")
        if cfg.verbose:
            print(json.dumps(out, indent=1))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--mesh", type=int, default=DemoConfig.mesh)
    p.add_argument("-v", "--verbose", action="store_true")
    a = p.parse_args()
    main(DemoConfig(mesh=a.mesh, verbose=a.verbose))
