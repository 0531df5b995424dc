"""Write the six plot-data files of the Lambda_j figure into a directory."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from gkwseries.cli import main as cli


@dataclass(frozen=True)
class Panel:
    func: str
    j: int
    hi: float


PANELS = (
    Panel("lambda_j", 2, 2.4),
    Panel("lambda_j", 3, 4.7),
    Panel("lambda_j", 4, 6.3),
    Panel("lambda_j", 5, 8.9),
    Panel("lambda_j", 6, 10.4),
    Panel("partial_sum", 8, 7.0),
)


def run(out: Path, samples: int) -> int:
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for p in PANELS:
        target = out / f"{p.func}_{p.j}.dat"
        status |= cli(["plotdata", "--func", p.func, "--j", str(p.j), "--range", f"1:{p.hi}",
                       "--samples", str(samples), "--out", str(target)])
        print(target)
    return status


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figure_data"))
    ap.add_argument("--samples", type=int, default=400)
    args = ap.parse_args()
    raise SystemExit(run(args.out, args.samples))
