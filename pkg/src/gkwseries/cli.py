"""Command-line front end: ``gkwseries {build,table,eval,oracle,plotdata}``.

Exit status is 0 when every requested check passes, 1 when a check or
tolerance fails, 2 for usage and domain errors and 3 for internal
inconsistencies.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from . import oracle as orc
from . import tables as ref
from .cache import TableCache
from .domains import ExactPoint
from .errors import GKWError, InternalInconsistency
from .recurrence import Variant, build_table, closed_form_checks, raw_recurrence, values
from .series import (
    gkw_partial_sum,
    mr_partial_sum,
    parse_number,
    plot_points,
    render_decimal,
    s_point,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUG = 0, 1, 2, 3

log = logging.getLogger("gkwseries")


@dataclass
class RunConfig:
    command: str
    cache_dir: Path
    precision: int = 256
    output: str = "human"
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        self.cache_dir = Path(self.cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    @property
    def csv(self) -> bool:
        return self.output == "csv"

    def cache(self) -> TableCache:
        return TableCache(self.cache_dir)


def default_cache_dir() -> Path:
    env = os.environ.get("GKW_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "gkwseries"


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(Fraction(v)) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError("range must satisfy LO <= HI")
    return lo, hi


class _Out:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout

    def __call__(self, line: str = ""):
        self.stream.write(line + "\n")


# --------------------------------------------------------------------------
# build
# --------------------------------------------------------------------------


def _mr_exact_point(s: Fraction):
    if s.denominator != 1 or s <= 1:
        raise ValueError(f"cached MR points need an integer s >= 2, got {s}")
    return ExactPoint(*s_point(s))


def cmd_build(cfg: RunConfig, out: _Out) -> int:
    variant = Variant.parse(cfg.flags["variant"])
    N = cfg.flags["max_j"]
    cache = cfg.cache()
    before = len(cache.files())
    points = cfg.flags.get("points") or []
    if not points:
        build_table(variant, N, cache)
        labels = ["symbolic"]
    else:
        labels = []
        for text in points:
            v = parse_number(text)
            if variant is Variant.GKW:
                if not isinstance(v, Fraction) or v.denominator != 1 or v < 1:
                    raise ValueError(f"GKW points are integers n >= 1, got {text}")
                dom = ExactPoint(v, 2 ** int(v))
            else:
                dom = _mr_exact_point(v)
            build_table(variant, N, cache, domain=dom)
            labels.append(text)
    written = len(cache.files()) - before
    if cfg.csv:
        out("variant,N,points,files_written")
        out(f"{variant.value},{N},{';'.join(labels)},{written}")
    else:
        state = "already cached" if written == 0 else f"{written} files written"
        out(f"{variant.value} order {N} at {', '.join(labels)}: {state}")
    return EXIT_OK


# --------------------------------------------------------------------------
# table
# --------------------------------------------------------------------------


@dataclass
class _Cell:
    label: str
    text: str
    ok: bool | None = None


def _rows(cfg: RunConfig, default: range) -> list[int]:
    rows = cfg.flags.get("rows")
    if rows is None:
        return list(default)
    bad = [r for r in rows if r not in default]
    if bad:
        raise ValueError(f"rows {bad} outside {default.start}..{default.stop - 1}")
    return rows


def _functions_table(cfg, variant, reference, name):
    rows = _rows(cfg, range(len(reference)))
    table = build_table(variant, max(rows), cfg.cache())
    return [_Cell(f"{name}_{j}", str(table.psi[j]), table.psi[j] == reference[j]) for j in rows]


def _values_table(cfg, variant, point, reference):
    rows = _rows(cfg, range(len(reference)))
    table = build_table(variant, max(rows), cfg.cache(), domain=ExactPoint(*point))
    vals = values(table)
    return [_Cell(str(j), str(vals[j]), vals[j] == reference[j]) for j in rows]


def units_off(value, printed: str) -> int:
    """Distance, in units of the last printed place, between ``value`` rendered to
    the same number of decimals and the printed string."""
    d = ref.printed_decimals(printed)
    return abs(Fraction(render_decimal(value, d)) - Fraction(printed)) * 10**d


def _within_unit(value, printed: str) -> bool:
    return units_off(value, printed) <= 1


def _series_table(cfg, columns, all_N, reference, evaluate, col_label):
    Ns = _rows(cfg, range(max(all_N) + 1)) if cfg.flags.get("rows") is not None else list(all_N)
    digits = cfg.flags["digits"]
    cells = []
    for c in columns:
        result = evaluate(c, max(Ns))
        for N in Ns:
            partial = result.partial_sums[N]
            v = 1 / partial
            printed = reference.get((c, N))
            ok = None if printed is None else _within_unit(v, printed)
            cells.append(_Cell(f"{col_label}={c} N={N}", render_decimal(v, digits), ok))
    return cells


def cmd_table(cfg: RunConfig, out: _Out) -> int:
    tid = cfg.flags["id"]
    prec = cfg.precision
    if tid == 1:
        cells = _functions_table(cfg, Variant.GKW, ref.table1(), "Psi")
    elif tid == 4:
        cells = _functions_table(cfg, Variant.MR, ref.table4(), "Lambda")
    elif tid == 3:
        cells = _values_table(cfg, Variant.GKW, (2, 4), ref.TABLE3)
    elif tid == 6:
        cells = _values_table(cfg, Variant.MR, (3, 8), ref.TABLE6)
    elif tid == 2:
        cells = _series_table(cfg, ref.TABLE2_n, ref.TABLE2_N, ref.TABLE2,
                              lambda n, N: gkw_partial_sum(n, N, cache=cfg.cache()), "n")
    elif tid == 5:
        def ev(s, N):
            v = parse_number(s)
            cache = cfg.cache() if isinstance(v, Fraction) and v.denominator == 1 else None
            return mr_partial_sum(v, N, prec=prec, cache=cache)

        cells = _series_table(cfg, ref.TABLE5_s, ref.TABLE5_N, ref.TABLE5, ev, "s")
    else:
        raise ValueError(f"unknown table id {tid}")

    if cfg.csv:
        out("cell,value" + (",ok" if cfg.flags["check"] else ""))
        for c in cells:
            out(f"{c.label},{c.text}" + (f",{_okword(c.ok)}" if cfg.flags["check"] else ""))
    else:
        width = max(len(c.label) for c in cells)
        for c in cells:
            out(f"{c.label:<{width}}  {c.text}")
    if not cfg.flags["check"]:
        return EXIT_OK
    checked = [c for c in cells if c.ok is not None]
    failed = [c for c in checked if not c.ok]
    if not cfg.csv:
        for c in failed:
            out(f"FAIL {c.label}")
        out(f"check: {len(checked) - len(failed)}/{len(checked)} cells match")
    return EXIT_FAIL if failed else EXIT_OK


def _okword(ok):
    return "" if ok is None else ("pass" if ok else "FAIL")


# --------------------------------------------------------------------------
# eval
# --------------------------------------------------------------------------


def cmd_eval(cfg: RunConfig, out: _Out) -> int:
    variant = Variant.parse(cfg.flags["variant"])
    N, digits = cfg.flags["max_j"], cfg.flags["digits"]
    if variant is Variant.GKW:
        if cfg.flags.get("n") is None:
            raise ValueError("--n is required for the GKW variant")
        r = gkw_partial_sum(cfg.flags["n"], N, cache=cfg.cache())
    else:
        if cfg.flags.get("s") is None:
            raise ValueError("--s is required for the MR variant")
        s = parse_number(cfg.flags["s"])
        cache = cfg.cache() if isinstance(s, Fraction) and s.denominator == 1 else None
        r = mr_partial_sum(s, N, prec=cfg.precision, cache=cache)
    text = render_decimal(r.value, digits)
    if cfg.csv:
        point = cfg.flags.get("n") if variant is Variant.GKW else cfg.flags["s"]
        out("variant,point,N,value")
        out(f"{variant.value},{point},{N},{text}")
    else:
        out(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# oracle
# --------------------------------------------------------------------------


def _oracle_matrix(cfg):
    dim, count, N = cfg.flags["dim"], cfg.flags["count"], cfg.flags["max_j"]
    eig = orc.gkw_eigenvalues(dim, cfg.precision, count)
    reports = []
    for n, lam in enumerate(eig, start=1):
        S = gkw_partial_sum(n, N, cache=cfg.cache()).value
        params = {"n": n, "dim": dim, "N": N}
        with mpmath.workprec(cfg.precision):
            mag = abs(lam)
        reports.append((orc.OracleReport(f"|lambda_{n}|", S, mag, params), True))
        sign = 1 if lam > 0 else -1
        reports.append((orc.OracleReport(f"sign(lambda_{n})", (-1) ** (n + 1), sign, params), True))
    return reports


def _oracle_trace(cfg):
    prec = cfg.precision
    tx, tb = orc.trace_xi(prec), orc.trace_binomial(prec)
    printed = Fraction(ref.TRACE)
    return [
        (orc.OracleReport("trace_xi", printed, tx, {"prec": prec}), True),
        (orc.OracleReport("trace_binomial", printed, tb, {"prec": prec}), True),
        (orc.OracleReport("trace_xi-trace_binomial", tx, tb, {"prec": prec}), True),
    ]


def _oracle_pseudozeta(cfg):
    s = parse_number(cfg.flags["s"])
    k, N = cfg.flags["k"], cfg.flags["max_j"]
    est = orc.pseudozeta_estimate(float(s), k, rel_tol=cfg.flags["rel_tol"])
    cache = cfg.cache() if isinstance(s, Fraction) and s.denominator == 1 else None
    L = mr_partial_sum(s, N, prec=cfg.precision, cache=cache).value
    params = {"s": cfg.flags["s"], "k": k, "N": N, "rel_tol": cfg.flags["rel_tol"]}
    return [
        (orc.OracleReport("ratio_estimate", L, est.ratio_estimates[-1], params), True),
        (orc.OracleReport("root_estimate", L, est.root_estimates[-1], {**params, "checked": "no"}), False),
    ]


def _oracle_raw(cfg):
    n, N = cfg.flags["n"], cfg.flags["max_j"]
    raw = raw_recurrence(n, N)
    table = build_table(Variant.GKW, N, cfg.cache(), domain=ExactPoint(n, 2**n))
    dom = table.domain
    reports = []
    for j in range(N + 1):
        reports.append((orc.OracleReport(f"psi_{j}", dom.value(table.psi[j]), raw.psiValues[j], {"n": n}), True))
    worst = max((abs(dom.value(table.grid[key]) - raw.grid[key]) for key in raw.grid), default=Fraction(0))
    reports.append((orc.OracleReport("max|a_pt-A_pt|", Fraction(0), worst, {"n": n, "cells": len(raw.grid)}), True))
    return reports


def _oracle_closedform(cfg):
    n = cfg.flags["n"]
    L = cfg.flags["max_j"] if cfg.flags["max_j"] is not None else n - 1
    rep = closed_form_checks(n, L, table=build_table(Variant.GKW, max(min(L, n - 1), 1), cfg.cache(),
                                                      domain=ExactPoint(n, 2**n)))
    return [(orc.OracleReport(name.split(" = ")[0], e, g, {"n": n}), True) for name, e, g, _ in rep.rows]


_ORACLES = {
    "matrix": _oracle_matrix,
    "trace": _oracle_trace,
    "pseudozeta": _oracle_pseudozeta,
    "raw": _oracle_raw,
    "closedform": _oracle_closedform,
}
_DEFAULT_TOL = {"matrix": 1e-6, "trace": 1e-8, "pseudozeta": 1e-5, "raw": 0.0, "closedform": 0.0}
_DEFAULT_N = {"matrix": 40, "pseudozeta": 20, "raw": 8, "closedform": None, "trace": None}


def cmd_oracle(cfg: RunConfig, out: _Out) -> int:
    kind = cfg.flags["kind"]
    tol = cfg.flags["tol"] if cfg.flags["tol"] is not None else _DEFAULT_TOL[kind]
    if cfg.flags.get("max_j") is None:
        cfg.flags["max_j"] = _DEFAULT_N[kind]
    reports = _ORACLES[kind](cfg)
    ok = all(r.passes(tol) for r, checked in reports if checked)
    if cfg.csv:
        out(orc.CSV_HEADER)
        for r, _ in reports:
            out(r.csv())
    else:
        for r, checked in reports:
            status = ("ok  " if r.passes(tol) else "FAIL") if checked else "info"
            out(f"{status} {r.quantity}: conjecture {orc._fmt(r.conjecture, 20)}  oracle {orc._fmt(r.oracle, 20)}"
                f"  diff {orc._fmt(r.diff, 3)}")
        out(f"{kind}: {'pass' if ok else 'FAIL'} (tol {tol:g})")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# plotdata
# --------------------------------------------------------------------------


def cmd_plotdata(cfg: RunConfig, out: _Out) -> int:
    func, j = cfg.flags["func"], cfg.flags["j"]
    lo, hi = cfg.flags["range"]
    variant = Variant.GKW if func == "psi_j" else Variant.MR
    table = build_table(variant, j, cfg.cache())
    rows, skipped = plot_points(func, j, lo, hi, cfg.flags["samples"], table, prec=cfg.precision)
    lines = [f"{mpmath.nstr(s, 15)} {mpmath.nstr(v, 17)}" for s, v in rows]
    if skipped:
        lines.append(f"# skipped {skipped} samples near poles")
    target = cfg.flags.get("out")
    if target:
        Path(target).write_text("".join(line + "\n" for line in lines), encoding="ascii")
    else:
        for line in lines:
            out(line)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="cache root (default: $GKW_CACHE, else ~/.cache/gkwseries)")
    common.add_argument("--prec", type=int, default=256, help="working precision in bits (>= 64)")
    common.add_argument("--format", choices=("human", "csv"), default="human")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gkwseries", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="compute and cache coefficient tables")
    b.add_argument("--variant", required=True, choices=("gkw", "mr"))
    b.add_argument("--max-j", type=int, required=True)
    b.add_argument("--points", type=lambda t: [v for v in t.split(",") if v], default=None,
                   help="build exact specialized tables at these n (gkw) or integer s (mr) instead")

    t = sub.add_parser("table", parents=[common], help="reproduce a reference table")
    t.add_argument("--id", type=int, required=True, choices=range(1, 7))
    t.add_argument("--rows", type=_int_list, default=None,
                   help="row indices j (tables 1, 3, 4, 6) or truncation orders N (tables 2, 5)")
    t.add_argument("--check", action="store_true", help="compare every cell with the reference values")
    t.add_argument("--digits", type=int, default=14)

    e = sub.add_parser("eval", parents=[common], help="evaluate S_N(n) or L_N(s)")
    e.add_argument("--variant", required=True, choices=("gkw", "mr"))
    e.add_argument("--n", type=int)
    e.add_argument("--s", type=str, help='"p/q", decimal or "a+bi"')
    e.add_argument("--max-j", type=int, required=True)
    e.add_argument("--digits", type=int, default=14)

    o = sub.add_parser("oracle", parents=[common], help="compare with an independent computation")
    o.add_argument("kind", choices=sorted(_ORACLES))
    o.add_argument("--tol", type=float, default=None)
    o.add_argument("--max-j", type=int, default=None, help="series truncation order")
    o.add_argument("--dim", type=int, default=64)
    o.add_argument("--count", type=int, default=5)
    o.add_argument("--n", type=int, default=3)
    o.add_argument("--s", type=str, default="4")
    o.add_argument("--k", type=int, default=14, help="continuant depth")
    o.add_argument("--rel-tol", type=float, default=1e-4, help="pruning threshold for continuant sums")

    d = sub.add_parser("plotdata", parents=[common], help="sample Lambda_j, Psi_j or partial sums")
    d.add_argument("--func", required=True, choices=("lambda_j", "psi_j", "partial_sum"))
    d.add_argument("--j", type=int, required=True)
    d.add_argument("--range", type=_range, required=True, help="LO:HI")
    d.add_argument("--samples", type=int, default=200)
    d.add_argument("--out", type=Path, default=None)
    return p


_COMMANDS = {
    "build": cmd_build,
    "table": cmd_table,
    "eval": cmd_eval,
    "oracle": cmd_oracle,
    "plotdata": cmd_plotdata,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "cache_dir", "prec", "format", "verbose")}
    try:
        cfg = RunConfig(args.command, args.cache_dir or default_cache_dir(), args.prec, args.format, flags)
        return _COMMANDS[args.command](cfg, _Out())
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_BUG
    except (GKWError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
