"""Depth-k continuant sums: ratio and root estimates of lambda_1(s) against L_N(s)."""

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from gkwseries.oracle import pseudozeta_estimate
from gkwseries.series import mr_partial_sum


@dataclass
class Config:
    s: str = "4"
    k_max: int = 14
    N: int = 20
    rel_tol: float = 1e-4


def run(cfg: Config):
    L = float(mr_partial_sum(cfg.s, cfg.N).value)
    t0 = time.perf_counter()
    est = pseudozeta_estimate(float(Fraction(cfg.s)), cfg.k_max, rel_tol=cfg.rel_tol)
    print(f"L_{cfg.N}({cfg.s}) = {L:.14f}   ({time.perf_counter() - t0:.1f}s)")
    print("k  sum  bracket  root  ratio  ratio-L")
    for k in range(cfg.k_max):
        print(f"{k + 1:2d} {est.sums[k]:.10e} {est.tail_bounds[k]:.2e} {est.root_estimates[k]:.10f} "
              f"{est.ratio_estimates[k]:.10f} {est.ratio_estimates[k] - L:+.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", default=Config.s)
    ap.add_argument("--k-max", type=int, default=Config.k_max)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--rel-tol", type=float, default=Config.rel_tol)
    a = ap.parse_args()
    run(Config(a.s, a.k_max, a.N, a.rel_tol))
