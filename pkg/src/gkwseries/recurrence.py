"""The recursive construction of A_{p,t}, Psi_j (and the dual B_{p,t}, Lambda_j).

For ``0 <= p, t <= N`` the cells satisfy

    (2^p Y - 2^t) A_{p,t}
      = sum_{k<=p} sum_{j<=min(p-k,t)} sum_{i<=t-j}
            Psi_j A_{k,i} C(X+p-i-j, p-j-k) U(k,i,t-i-j) (-1)^(k+i) 2^(i+j-1)
      + sum_{k<p} sum_{i=max(0,k+t-p)}^{t-1}
            A_{k,i} (X+p-t)/(t-i) C(X+p-i-1, p-k-1) C(p-k-1, p+i-k-t) (-1)^(p+k) 2^i
      + sum_{k<p} A_{k,t} C(X+p-t, p-k) (-1)^(p+k) 2^t

with ``U(k,i,r) = C(X+k-i-1, r)`` for the GKW variant and ``C(k-i, r)`` for the
MR (Mayer-Ruelle) variant.  The unknown ``A_{p,t}`` also appears on the right
through the ``k=p, j=0, i=t`` term and is moved to the left; its total
coefficient vanishes identically on the diagonal, where the equation is solved
for ``Psi_p`` instead and ``A_{p,p}`` is set to zero.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from gmpy2 import mpq

from .cache import TableCache
from .domains import ExactPoint, Symbolic
from .errors import InternalInconsistency, MissingDependency, PoleError
from .exact import gen_binom, int_binom, rf_eval_exact

log = logging.getLogger(__name__)


class Variant(enum.Enum):
    GKW = "GKW"
    MR = "MR"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        return cls(str(value).upper())


@dataclass
class CoeffTable:
    """Grid ``{(p, t): A_{p,t}}`` and list ``{j: Psi_j}`` over some coefficient domain.

    For the MR variant the grid holds B_{p,t} and ``psi`` holds Lambda_j.
    """

    variant: Variant
    N: int
    domain: object = field(default_factory=Symbolic)
    grid: dict = field(default_factory=dict)
    psi: dict = field(default_factory=dict)

    @classmethod
    def seeded(cls, variant, N, domain=None) -> "CoeffTable":
        dom = domain if domain is not None else Symbolic()
        table = cls(Variant.parse(variant), N, dom)
        with dom.context():
            table.grid[(0, 0)] = dom.const(1)
            acc = dom.accumulator()
            acc.add(dom.y(), dom.rat(2))
            acc.add(dom.const(1), dom.rat(-2))
            table.psi[0] = acc.total()
        return table

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.domain, Symbolic)

    def psi_list(self) -> list:
        return [self.psi[j] for j in range(self.N + 1)]

    def __getitem__(self, pt):
        return self.grid[pt]


# --------------------------------------------------------------------------
# Terms of the recurrence
# --------------------------------------------------------------------------


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _cached_rat(dom, key, make):
    cache = dom.__dict__.setdefault("_rat_cache", {})
    v = cache.get(key)
    if v is None:
        v = cache[key] = dom.rat(make())
    return v


def _signed_pow2(dom, sign: int, e: int):
    return _cached_rat(dom, ("p2", sign, e), lambda: sign * Fraction(2) ** e)


def _underlined(variant: Variant, dom, k: int, i: int, r: int):
    if variant is Variant.GKW:
        return dom.binom_x(k - i - 1, r)
    # C(k-i, r) as the binomial polynomial evaluated at the integer k-i
    return _cached_rat(dom, ("gb", k - i, r), lambda: gen_binom(k - i, r))


def _first_sum_groups(variant, dom, p, t):
    """Yield ``(j, [((k, i), multiplier), ...])`` for the triple sum."""
    for j in range(min(p, t) + 1):
        terms = []
        for k in range(p - j + 1):
            for i in range(t - j + 1):
                m = dom.binom_x(p - i - j, p - j - k) * _underlined(variant, dom, k, i, t - i - j)
                m = m * _signed_pow2(dom, _sign(k + i), i + j - 1)
                terms.append(((k, i), m))
        yield j, terms


def _linear_terms(variant, dom, p, t, relax_bounds=False):
    """Second and third sums as ``[((k, i), multiplier)]``."""
    out = []
    for k in range(p):
        lo = 0 if relax_bounds else max(0, k + t - p)
        for i in range(lo, t):
            b = int_binom(p - k - 1, p + i - k - t) if p + i - k - t >= 0 else 0
            if not b and not relax_bounds:
                continue
            m = dom.binom_x(p - t, 1) * dom.binom_x(p - i - 1, p - k - 1)
            m = m * dom.rat(Fraction(_sign(p + k) * b * 2**i, t - i))
            out.append(((k, i), m))
    for k in range(p):
        m = dom.binom_x(p - t, p - k) * dom.rat(_sign(p + k) * 2**t)
        out.append(((k, t), m))
    return out


def _get(store, key, what):
    try:
        return store[key]
    except KeyError:
        raise MissingDependency(f"{what}{key} is required but not computed") from None


def _rhs(table: CoeffTable, p: int, t: int, relax_bounds=False):
    """Right-hand side with the unknowns removed.

    Returns ``(R, self_multiplier, psi_multiplier)`` where the equation reads
    ``(2^p Y - 2^t) A_{p,t} = R + Psi_0 * self_multiplier * A_{p,t}
    + psi_multiplier * Psi_p`` (the last term only on the diagonal).
    """
    dom, variant = table.domain, table.variant
    grid, psi = table.grid, table.psi
    outer = dom.accumulator()
    self_mult = None
    psi_mult = None
    diagonal = p == t
    for j, terms in _first_sum_groups(variant, dom, p, t):
        inner = dom.accumulator()
        unknown_psi = diagonal and j == p
        for (k, i), m in terms:
            if k == p and i == t and j == 0:
                self_mult = m
                continue
            if unknown_psi:
                psi_mult = m if psi_mult is None else psi_mult + m
                continue
            inner.add(_get(grid, (k, i), "A"), m)
        if not unknown_psi:
            outer.add_product(_get(psi, j, "Psi"), inner)
    for (k, i), m in _linear_terms(variant, dom, p, t, relax_bounds):
        outer.add(_get(grid, (k, i), "A"), m)
    return outer.total(), self_mult, psi_mult


def self_coefficient(table: CoeffTable, p: int, t: int, self_mult=None):
    """Total coefficient of A_{p,t} after moving its right-hand occurrence left."""
    dom = table.domain
    if self_mult is None:
        self_mult = dom.binom_x(p - t, 0) * _underlined(table.variant, dom, p, t, 0)
        self_mult = self_mult * dom.rat(_sign(p + t) * Fraction(2) ** (t - 1))
    acc = dom.accumulator()
    acc.add(dom.y(), dom.rat(2**p))
    acc.add(dom.const(1), dom.rat(-(2**t)))
    acc.add(table.psi[0], -self_mult)
    return acc.total()


def solve_cell(table: CoeffTable, p: int, t: int, *, relax_bounds=False):
    """Solve the recurrence at ``(p, t)``; on the diagonal returns ``(Psi_p, 0)``."""
    dom = table.domain
    if (p, t) == (0, 0):
        return table.psi[0], dom.const(1)
    with dom.context():
        R, self_mult, psi_mult = _rhs(table, p, t, relax_bounds)
        coeff = self_coefficient(table, p, t, self_mult)
        if p == t:
            if not dom.is_zero(coeff):
                raise InternalInconsistency(f"self-coefficient does not vanish at ({p}, {p})")
            q = dom.constant_of(psi_mult)
            if q is None:
                raise InternalInconsistency(f"coefficient of Psi_{p} is not constant")
            if isinstance(q, Fraction) and q != Fraction(2) ** (p - 1):
                raise InternalInconsistency(f"coefficient of Psi_{p} is {q}, expected 2^{p - 1}")
            return dom.scale(R, -1 / q), dom.zero()
        try:
            return dom.divide(R, coeff)
        except ZeroDivisionError:
            if table.is_symbolic:
                raise InternalInconsistency(f"self-coefficient vanishes at ({p}, {t})") from None
            raise PoleError(f"self-coefficient of cell ({p}, {t}) vanishes at {dom!r}") from None


def residual(table: CoeffTable, p: int, t: int):
    """LHS minus RHS of the recurrence with every filled value substituted."""
    dom = table.domain
    with dom.context():
        acc = dom.accumulator()
        A = _get(table.grid, (p, t), "A")
        acc.add(A * dom.y(), dom.rat(2**p))
        acc.add(A, dom.rat(-(2**t)))
        rhs = dom.accumulator()
        for j, terms in _first_sum_groups(table.variant, dom, p, t):
            inner = dom.accumulator()
            for (k, i), m in terms:
                inner.add(_get(table.grid, (k, i), "A"), m)
            rhs.add_product(_get(table.psi, j, "Psi"), inner)
        for (k, i), m in _linear_terms(table.variant, dom, p, t):
            rhs.add(_get(table.grid, (k, i), "A"), m)
        acc.add(rhs.total(), dom.rat(-1))
        return acc.total()


def _fill_order(P: int, N: int):
    yield from range(P)
    yield P
    yield from range(P + 1, N + 1)


def build_table(variant, N: int, cache: TableCache | None = None, domain=None, *, relax_bounds=False) -> CoeffTable:
    """Run the recurrence for all ``0 <= p, t <= N``.

    ``domain`` defaults to :class:`~gkwseries.domains.Symbolic`; pass an
    :class:`~gkwseries.domains.ExactPoint` etc. to run the same recurrence on
    specialized values.  With a ``cache``, entries are loaded when present and
    stored after they are computed (symbolic and exact-point domains only).
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    table = CoeffTable.seeded(variant, N, domain)
    dom = table.domain
    key = getattr(dom, "key", lambda: None)()
    cacheable = cache is not None and (table.is_symbolic or key is not None)
    vname = table.variant.value
    for P in range(N + 1):
        for t in _fill_order(P, N):
            if (P, t) == (0, 0):
                continue
            if P == t:
                if cacheable:
                    rf = cache.load(vname, key, "psi", P)
                    if rf is not None:
                        table.psi[P] = dom.from_ratfunc(rf)
                        table.grid[(P, P)] = dom.zero()
                        continue
                psi_p, zero = solve_cell(table, P, P, relax_bounds=relax_bounds)
                table.psi[P] = psi_p
                table.grid[(P, P)] = zero
                if cacheable:
                    cache.store(vname, key, "psi", P, dom.to_ratfunc(psi_p))
                continue
            if cacheable:
                rf = cache.load(vname, key, "grid", (P, t))
                if rf is not None:
                    table.grid[(P, t)] = dom.from_ratfunc(rf)
                    continue
            value = solve_cell(table, P, t, relax_bounds=relax_bounds)
            table.grid[(P, t)] = value
            if cacheable:
                cache.store(vname, key, "grid", (P, t), dom.to_ratfunc(value))
        log.debug("%s column %d done", vname, P)
    return table


def specialize(table: CoeffTable, x0, y0) -> CoeffTable:
    """Evaluate every entry of a symbolic table exactly at ``(x0, y0)``."""
    if not table.is_symbolic:
        raise ValueError("table is already specialized")
    dom = ExactPoint(x0, y0)
    out = CoeffTable(table.variant, table.N, dom)
    for k, v in table.grid.items():
        out.grid[k] = dom.const(rf_eval_exact(v, x0, y0))
    for j, v in table.psi.items():
        out.psi[j] = dom.const(rf_eval_exact(v, x0, y0))
    return out


def values(table: CoeffTable, x0=None, y0=None) -> list[Fraction]:
    """Psi_j values as Fractions: from an exact-point table, or by evaluating a symbolic one."""
    if table.is_symbolic:
        return [rf_eval_exact(table.psi[j], x0, y0) for j in range(table.N + 1)]
    if isinstance(table.domain, ExactPoint):
        return [table.domain.value(table.psi[j]) for j in range(table.N + 1)]
    raise TypeError("values() needs a symbolic or exact-point table")


# --------------------------------------------------------------------------
# The raw coefficient recurrence for a_{p,t}(n), psi_j(n)
# --------------------------------------------------------------------------


@dataclass
class RawTable:
    n: int
    N: int
    grid: dict
    psiValues: list


def _gb(m: int, r: int):
    if r < 0:
        return mpq(0)
    num = 1
    for i in range(r):
        num *= m - i
    return mpq(num, factorial(r))


def raw_recurrence(n: int, N: int) -> RawTable:
    """Coefficients of the formal expansion of G_n(w, z) around w = 2, solved directly.

    This works with the un-normalized three-sum identity (denominators
    ``2^(n+p+1-i-j)`` and ``2^(n+p-i)``), independently of :func:`build_table`.
    """
    if n < 1 or N < 0:
        raise ValueError("need n >= 1 and N >= 0")
    a = {(0, 0): mpq(1)}
    psi = {0: mpq(2 ** (n + 1) - 2)}
    for P in range(N + 1):
        for t in _fill_order(P, N):
            if (P, t) == (0, 0):
                continue
            rest = mpq(0)
            self_coeff = mpq(1)
            psi_coeff = mpq(0)
            for j in range(P + 1):
                for k in range(P - j + 1):
                    for i in range(t - j + 1):
                        c = (_gb(n + P - i - j, P - j - k) * _gb(n + k - i - 1, t - i - j)
                             * _sign(k - i) / mpq(2) ** (n + P + 1 - i - j))
                        if c == 0:
                            continue
                        if (k, i) == (P, t):
                            self_coeff -= c * psi[0]
                        elif j == P and P == t:
                            psi_coeff += c * a[(k, i)]
                        else:
                            rest += psi[j] * a[(k, i)] * c
            for k in range(P + 1):
                for i in range(t + 1):
                    c = _gb(n + P - i, P - k) * _gb(P - k, P + i - k - t) * _sign(P - k) / mpq(2) ** (n + P - i)
                    if c == 0:
                        continue
                    if (k, i) == (P, t):
                        self_coeff -= c
                    else:
                        rest += a[(k, i)] * c
            for k in range(P):
                for i in range(t):
                    c = (_gb(n + P - i - 1, P - k - 1) * _gb(P - k - 1, P + i - k - t)
                         * _sign(P - k - 1) / mpq(2) ** (n + P - i))
                    if c:
                        rest += a[(k, i)] * c
            if P == t:
                if self_coeff != 0:
                    raise InternalInconsistency(f"raw self-coefficient nonzero at ({P}, {P})")
                if psi_coeff == 0:
                    raise InternalInconsistency(f"raw psi coefficient vanishes at ({P}, {P})")
                psi[P] = -rest / psi_coeff
                a[(P, P)] = mpq(0)
            else:
                if self_coeff == 0:
                    raise InternalInconsistency(f"raw self-coefficient vanishes at ({P}, {t})")
                a[(P, t)] = rest / self_coeff
    frac = lambda q: Fraction(int(q.numerator), int(q.denominator))  # noqa: E731
    return RawTable(n, N, {k: frac(v) for k, v in a.items()}, [frac(psi[j]) for j in range(N + 1)])


# --------------------------------------------------------------------------
# Closed forms at w = 2
# --------------------------------------------------------------------------


@dataclass
class CheckReport:
    n: int
    rows: list = field(default_factory=list)

    def add(self, name, expected, got):
        self.rows.append((name, expected, got, expected == got))

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.rows)

    def __str__(self):
        lines = [f"closed-form checks, n={self.n}"]
        for name, e, g, ok in self.rows:
            lines.append(f"  {'ok  ' if ok else 'FAIL'} {name}: {e} vs {g}")
        return "\n".join(lines)


def c_sequence(n: int, L: int) -> list[Fraction]:
    """c_n^(l) for l = 0..L, with d^l/dz^l P_n(2) = (n-1)!/(n-l-1)! c_n^(l)."""
    c = [Fraction(1)]
    for ell in range(1, L + 1):
        if ell % 2 == 0:
            A = 1 - Fraction(2) ** ell
        else:
            A = Fraction(2) ** ell + 1 - Fraction(2) ** (ell + 1 - n)
        s = sum(c[i] * _sign(i) * 2**i * int_binom(ell, i) for i in range(ell))
        c.append(Fraction(2**n - 1, 2**n) / A * s)
    return c


def closed_form_checks(n: int, L: int, table: CoeffTable | None = None) -> CheckReport:
    """Compare the closed forms for P_n and Q_n at z = 2 with the specialized grid.

    ``table`` may be a symbolic GKW table (evaluated at ``(n, 2^n)``) or an
    exact-point table at that point; by default one is built.
    """
    if n < 1:
        raise ValueError("n must be positive")
    L = min(L, n - 1)
    y = 2**n
    if table is None:
        table = build_table(Variant.GKW, max(L, 1), domain=ExactPoint(n, y))
    if table.variant is not Variant.GKW:
        raise ValueError("closed forms concern the GKW variant")

    def cell(p, t):
        v = table.grid[(p, t)]
        return rf_eval_exact(v, n, y) if table.is_symbolic else table.domain.value(v)

    def psi0():
        v = table.psi[0]
        return rf_eval_exact(v, n, y) if table.is_symbolic else table.domain.value(v)

    rep = CheckReport(n)
    rep.add("lambda_n(2) = 2^(n+1) - 2", Fraction(2 ** (n + 1) - 2), psi0())
    rep.add("Q_n(2) = A_{1,0}", Fraction((2**n - 2) * (n + 1), 3 * 2**n - 2), cell(1, 0))
    if n >= 2 and L >= 1:
        rep.add("P'_n(2) = A_{0,1}", Fraction((2**n - 1) * (n - 1), 3 * 2**n - 4), cell(0, 1))
    if n >= 3 and L >= 2:
        d2 = Fraction((2**n - 1) * (n - 1) * (n - 2), 3 * (3 * 2**n - 4))
        rep.add("P''_n(2) = 2! A_{0,2}", d2, 2 * cell(0, 2))
    if n >= 4 and L >= 3:
        d3 = Fraction((2**n - 2) * (2**n - 1) * (n - 1) * (n - 2) * (n - 3), (3 * 2**n - 4) * (9 * 2**n - 16))
        rep.add("P'''_n(2) = 3! A_{0,3}", d3, 6 * cell(0, 3))
    cs = c_sequence(n, L)
    for ell in range(L + 1):
        got = cell(0, ell) * factorial(ell) * factorial(n - ell - 1) / factorial(n - 1)
        rep.add(f"c_n^({ell}) = A_{{0,{ell}}} l!(n-l-1)!/(n-1)!", cs[ell], got)
    return rep
