"""Hensley-constant and Khinchin-Levy estimates from truncated Lambda series."""

import argparse
from dataclasses import dataclass

import mpmath

from gkwseries.recurrence import Variant, build_table
from gkwseries.series import hensley_estimate, khinchin_levy, klevy_linear_form


@dataclass
class Config:
    max_N: int = 10
    prec: int = 256


def run(cfg: Config):
    table = build_table(Variant.MR, cfg.max_N)
    C = khinchin_levy()
    print("N  a  b  |a log2 + b - C|  hensley")
    for N in range(2, cfg.max_N + 1):
        a, b = klevy_linear_form(N, table)
        with mpmath.workprec(cfg.prec):
            gap = abs(a * mpmath.log(2) + mpmath.mpf(b.numerator) / b.denominator - C)
        h = hensley_estimate(N, table, cfg.prec)
        print(N, a, b, mpmath.nstr(gap, 8), mpmath.nstr(h, 12))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-N", type=int, default=Config.max_N)
    ap.add_argument("--prec", type=int, default=Config.prec)
    args = ap.parse_args()
    run(Config(args.max_N, args.prec))
