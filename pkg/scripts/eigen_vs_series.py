"""Truncated-matrix eigenvalues against S_N(n) for growing N."""

import argparse
from dataclasses import dataclass, field

import mpmath

from gkwseries.cache import TableCache
from gkwseries.cli import default_cache_dir
from gkwseries.oracle import gkw_eigenvalues
from gkwseries.series import gkw_partial_sum


@dataclass
class Config:
    dim: int = 64
    prec: int = 256
    count: int = 5
    orders: list = field(default_factory=lambda: [5, 10, 20, 30])


def run(cfg: Config):
    cache = TableCache(default_cache_dir())
    ev = gkw_eigenvalues(cfg.dim, cfg.prec, cfg.count)
    for n, lam in enumerate(ev, start=1):
        print(f"n={n} lambda = {mpmath.nstr(lam, 25)}")
        if n == 1:
            continue
        for N in cfg.orders:
            S = gkw_partial_sum(n, N, cache=cache).value
            with mpmath.workprec(cfg.prec):
                d = abs(abs(lam) - mpmath.mpf(S.numerator) / S.denominator)
            print(f"   N={N:3d}  S_N = {mpmath.nstr(mpmath.mpf(S.numerator) / S.denominator, 20)}  "
                  f"diff {mpmath.nstr(d, 3)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=Config.dim)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--orders", default="5,10,20,30")
    a = ap.parse_args()
    run(Config(a.dim, 256, a.count, [int(v) for v in a.orders.split(",")]))
