"""Truncated alternating series S_N(n), L_N(s) and derivative data at s = 2."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .cache import TableCache
from .domains import ExactPoint, FloatPoint, JetPoint
from .errors import DomainError, NearPoleError, ZeroSum
from .exact import RatFunc2, rf_eval_exact, rf_eval_float, rf_partial, to_mp
from .recurrence import CoeffTable, Variant, build_table


@dataclass
class SeriesResult:
    variant: Variant
    point: object
    N: int
    partial_sums: list
    value: object
    term_magnitudes: list
    exact: bool = True
    prec: int | None = None

    @property
    def last_term(self):
        return self.term_magnitudes[-1]


def _alternating(terms: list, zero) -> list:
    out, acc = [], zero
    for j, v in enumerate(terms):
        acc = acc + v if j % 2 == 0 else acc - v
        out.append(acc)
    return out


def _check_table(table: CoeffTable, variant: Variant, N: int):
    if table.variant is not variant:
        raise ValueError(f"expected a {variant.value} table, got {table.variant.value}")
    if table.N < N:
        raise ValueError(f"table has order {table.N} < {N}")


def _exact_terms(table: CoeffTable, x0: Fraction, y0: Fraction, N: int) -> list[Fraction]:
    dom = table.domain
    if table.is_symbolic:
        return [rf_eval_exact(table.psi[j], x0, y0) for j in range(N + 1)]
    if isinstance(dom, ExactPoint):
        if (dom.x0, dom.y0) != (x0, y0):
            raise ValueError(f"table is specialized at ({dom.x0}, {dom.y0}), not ({x0}, {y0})")
        return [dom.value(table.psi[j]) for j in range(N + 1)]
    raise TypeError("an exact series needs a symbolic or exact-point table")


def _finish_exact(variant, point, N, terms) -> SeriesResult:
    sums = _alternating(terms, Fraction(0))
    if sums[-1] == 0:
        raise ZeroSum(f"partial sum vanishes at {point}, N={N}")
    return SeriesResult(variant, point, N, sums, 1 / sums[-1], [abs(v) for v in terms])


def gkw_partial_sum(n: int, N: int, table: CoeffTable | None = None, cache: TableCache | None = None) -> SeriesResult:
    """S_N(n) = 1 / sum_{j<=N} (-1)^j Psi_j(n, 2^n), exactly."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    x0, y0 = Fraction(n), Fraction(2**n)
    if table is None:
        table = build_table(Variant.GKW, N, cache, domain=ExactPoint(x0, y0))
    _check_table(table, Variant.GKW, N)
    return _finish_exact(Variant.GKW, n, N, _exact_terms(table, x0, y0, N))


_COMPLEX = re.compile(r"^\s*([+-]?[\d./]+)\s*([+-])\s*([\d./]*)\s*[ij]\s*$")


def parse_number(text):
    """Parse "p/q", decimals or "a+bi" into a Fraction or an mpc."""
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return Fraction(text)
        if isinstance(text, complex):
            return mpmath.mpc(text)
        return text
    m = _COMPLEX.match(text)
    if m:
        re_part = Fraction(m.group(1))
        im = Fraction(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
        if im == 0:
            return re_part
        return mpmath.mpc(to_mp(re_part), to_mp(im))
    return Fraction(text.strip())


def _real_part(s):
    return s if isinstance(s, Fraction) else mpmath.re(s)


def s_point(s, prec: int = 256):
    """(X, Y) = (s - 1, 2^(s-1)): exact for integer s, mpmath otherwise."""
    if isinstance(s, Fraction) and s.denominator == 1:
        return s - 1, Fraction(2) ** int(s - 1)
    with mpmath.workprec(prec + 32):
        x = to_mp(s) - 1
        return x, mpmath.power(2, x)


def mr_partial_sum(s, N: int, table: CoeffTable | None = None, prec: int = 256,
                   cache: TableCache | None = None) -> SeriesResult:
    """L_N(s) = 1 / sum_{j<=N} (-1)^j Lambda_j(s-1, 2^(s-1)).

    Integer ``s`` is handled in exact rationals.  Otherwise values are computed
    in mpmath at ``prec`` bits, using the principal branch of ``2^(s-1)``.
    """
    s = parse_number(s)
    if _real_part(s) <= 1:
        raise DomainError("the series is only defined for Re s > 1")
    x0, y0 = s_point(s, prec)
    if isinstance(x0, Fraction):
        if table is None:
            table = build_table(Variant.MR, N, cache, domain=ExactPoint(x0, y0))
        _check_table(table, Variant.MR, N)
        return _finish_exact(Variant.MR, s, N, _exact_terms(table, x0, y0, N))

    if table is None:
        table = build_table(Variant.MR, N, domain=FloatPoint(x0, y0, prec))
    _check_table(table, Variant.MR, N)
    if table.is_symbolic:
        terms = [rf_eval_float(table.psi[j], x0, y0, prec) for j in range(N + 1)]
    elif isinstance(table.domain, FloatPoint):
        terms = [table.psi[j] for j in range(N + 1)]
    else:
        raise TypeError("a non-integer s needs a symbolic or float-point table")
    with mpmath.workprec(prec):
        sums = _alternating(terms, mpmath.mpf(0))
        if sums[-1] == 0:
            raise ZeroSum(f"partial sum vanishes at s={s}, N={N}")
        value = 1 / sums[-1]
        mags = [abs(v) for v in terms]
    return SeriesResult(Variant.MR, s, N, sums, value, mags, exact=False, prec=prec)


# --------------------------------------------------------------------------
# Derivatives at s = 2
# --------------------------------------------------------------------------


@dataclass
class Partials:
    """Exact partial derivatives of F_N = sum (-1)^j Lambda_j at (X, Y) = (1, 2)."""

    N: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]


def truncated_sum(table: CoeffTable, N: int) -> RatFunc2:
    total = RatFunc2.const(0)
    for j in range(N + 1):
        total = total + table.psi[j] if j % 2 == 0 else total - table.psi[j]
    return total


def partials_at_2(N: int, order: int = 2, table: CoeffTable | None = None, method: str = "symbolic") -> Partials:
    """F, F_X, F_Y (and second partials when ``order`` is 2) at (1, 2).

    ``method="symbolic"`` differentiates the symbolic truncated sum;
    ``method="jet"`` runs the recurrence on Taylor jets at (1, 2).
    """
    out = Partials(N)
    keys = [(a, b) for a in range(order + 1) for b in range(order + 1 - a)]
    if method == "symbolic":
        if table is None:
            table = build_table(Variant.MR, N)
        _check_table(table, Variant.MR, N)
        if not table.is_symbolic:
            raise TypeError("symbolic method needs a symbolic table")
        F = truncated_sum(table, N)
        for a, b in keys:
            g = F
            if a:
                g = rf_partial(g, "X", a)
            if b:
                g = rf_partial(g, "Y", b)
            out.values[(a, b)] = rf_eval_exact(g, 1, 2)
    elif method == "jet":
        if table is None:
            table = build_table(Variant.MR, N, domain=JetPoint(1, 2, order))
        _check_table(table, Variant.MR, N)
        dom = table.domain
        F = dom.zero()
        for j in range(N + 1):
            F = F + table.psi[j] if j % 2 == 0 else F - table.psi[j]
        for a, b in keys:
            v = F.derivative(a, b)
            out.values[(a, b)] = Fraction(int(v.numerator), int(v.denominator)) if v else Fraction(0)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out


def klevy_linear_form(N: int, table: CoeffTable | None = None, method: str = "symbolic") -> tuple[Fraction, Fraction]:
    """Exact ``(a, b)`` with d/ds F_N(s) at s = 2 equal to ``a*log(2) + b``.

    With X = s - 1 and Y = 2^(s-1), d/ds = d/dX + log(2)*Y*d/dY and Y = 2 at s = 2.
    """
    d = partials_at_2(N, 1, table, method)
    return 2 * d[(0, 1)], d[(1, 0)]


def khinchin_levy() -> mpmath.mpf:
    return mpmath.pi**2 / (12 * mpmath.log(2))


def lambda_derivatives(N: int, table: CoeffTable | None = None, prec: int = 256, method: str = "symbolic"):
    """(lambda_1(2), lambda_1'(2), lambda_1''(2)) from the N-truncated series."""
    d = partials_at_2(N, 2, table, method)
    with mpmath.workprec(prec):
        L = mpmath.log(2)
        y = 2
        f = to_mp(d[(0, 0)])
        f1 = to_mp(d[(1, 0)]) + L * y * to_mp(d[(0, 1)])
        f2 = (to_mp(d[(2, 0)]) + 2 * L * y * to_mp(d[(1, 1)]) + (L * y) ** 2 * to_mp(d[(0, 2)])
              + L**2 * y * to_mp(d[(0, 1)]))
        lam = 1 / f
        lam1 = -f1 / f**2
        lam2 = (2 * f1**2 - f * f2) / f**3
        return lam, lam1, lam2


def hensley_estimate(N: int, table: CoeffTable | None = None, prec: int = 256, method: str = "symbolic"):
    """(lambda'^2 - lambda'') / (pi^6 lambda'^3) at s = 2 from the N-truncated series."""
    if N < 2:
        raise ValueError("N must be at least 2")
    _, l1, l2 = lambda_derivatives(N, table, prec, method)
    with mpmath.workprec(prec):
        return (l1**2 - l2) / (mpmath.pi**6 * l1**3)


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        man, exp = mpmath.mpf(x).man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    if hasattr(x, "numerator"):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def _render_real(x, digits: int) -> str:
    q = _as_fraction(x)
    scaled = round(q * 10**digits)  # Fraction.__round__ is half-even
    sign = "-" if scaled < 0 or (scaled == 0 and q < 0) else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def render_decimal(x, digits: int = 14) -> str:
    """Fixed-point rendering with exactly ``digits`` decimals, rounding half to even."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if isinstance(x, mpmath.mpc):
        re_s = _render_real(x.real, digits)
        im_s = _render_real(abs(x.imag), digits)
        return f"{re_s}{'-' if x.imag < 0 else '+'}{im_s}i"
    return _render_real(x, digits)


def format_point(p) -> str:
    if isinstance(p, Fraction):
        return str(p)
    if isinstance(p, mpmath.mpc):
        return f"{mpmath.nstr(p.real, 15)}{'-' if p.imag < 0 else '+'}{mpmath.nstr(abs(p.imag), 15)}i"
    return str(p)


def csv_row(result: SeriesResult, digits: int = 14) -> str:
    return f"{format_point(result.point)},{result.N},{render_decimal(result.value, digits)},{digits}"


# --------------------------------------------------------------------------
# Plot data
# --------------------------------------------------------------------------


def plot_points(func: str, j: int, lo: float, hi: float, samples: int, table: CoeffTable | None = None,
                prec: int = 128) -> tuple[list[tuple], int]:
    """Sample a function of s on ``[lo, hi]``.

    ``lambda_j`` is Lambda_j(s-1, 2^(s-1)), ``partial_sum`` is the alternating sum
    of Lambda_0..Lambda_j at the same point and ``psi_j`` is Psi_j(x, 2^x).
    Returns the ``(s, value)`` pairs and the number of samples skipped near poles.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    variant = Variant.GKW if func == "psi_j" else Variant.MR
    if func not in ("lambda_j", "psi_j", "partial_sum"):
        raise ValueError(f"unknown function {func!r}")
    if table is None:
        table = build_table(variant, j)
    _check_table(table, variant, j)
    f = truncated_sum(table, j) if func == "partial_sum" else table.psi[j]
    rows, skipped = [], 0
    with mpmath.workprec(prec):
        grid = [mpmath.mpf(lo)] if samples == 1 else mpmath.linspace(mpmath.mpf(lo), mpmath.mpf(hi), samples)
        for s in grid:
            x = s if func == "psi_j" else s - 1
            try:
                if x == int(x):
                    # Y = 2^X is rational here, so evaluate exactly
                    xi = int(x)
                    v = to_mp(rf_eval_exact(f, xi, Fraction(2) ** xi))
                else:
                    v = rf_eval_float(f, x, mpmath.power(2, x), prec)
            except (NearPoleError, ZeroDivisionError):
                skipped += 1
                continue
            rows.append((s, v))
    return rows, skipped
