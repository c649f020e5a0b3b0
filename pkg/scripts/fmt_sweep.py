"""Sweep the first main theorem over a few maps, divisors and radii; one CSV per pair."""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from valdist import MetricizedDivisor, RationalMap
from valdist.nevanlinna import DEFAULT_RADII, characteristic_report


@dataclass
class SweepConfig:
    maps: list[str] = field(default_factory=lambda: ["1|0,0,0,1", "1|1,0,1|0,2", "1,1|1,0,3"])
    divisors: list[str] = field(default_factory=lambda: ["1; (1,0)=1", "1; (1,0,0)=1", "2; (2,0)=1,(1,1)=-3"])
    radii: tuple[float, ...] = DEFAULT_RADII
    out: Path = Path("out/fmt")


def main(cfg: SweepConfig) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    for i, spec in enumerate(cfg.maps):
        f = RationalMap.parse(spec)
        for j, dspec in enumerate(cfg.divisors):
            D = MetricizedDivisor.parse(dspec)
            if D.n != f.n:
                continue
            rep = characteristic_report(f, D, cfg.radii)
            path = cfg.out / f"fmt_map{i}_div{j}.csv"
            path.write_text(rep.to_csv())
            worst = max(abs(x) for x in rep.residual)
            print(f"{f.label:>28}  {D.name:<24} max|residual| {worst:.2e}  ok={rep.ok}  -> {path}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=SweepConfig.out)
    main(SweepConfig(out=p.parse_args().out))
