"""Independent numerical checks: operator matrix, continuant sums and trace formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .errors import BudgetExceeded, ConvergenceFailure


# --------------------------------------------------------------------------
# zeta(k) - 1
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def zeta_minus_one(k: int, prec: int = 256) -> mpmath.mpf:
    """zeta(k) - 1 for integer k >= 2 by Euler-Maclaurin on sum_{m>=2} m^-k."""
    if k < 2:
        raise ValueError("k must be at least 2")
    wp = prec + 20
    with mpmath.workprec(wp):
        eps = mpmath.mpf(2) ** (-prec - 10)
        if k >= prec // 2:
            # m^-k decays so fast that a handful of terms suffice
            total, m = mpmath.mpf(0), 2
            while True:
                term = mpmath.mpf(m) ** (-k)
                total += term
                if term < eps * total:
                    return +total
                m += 1
        n = max(10, prec // 4)
        head = mpmath.fsum(mpmath.mpf(m) ** (-k) for m in range(2, n))
        N = mpmath.mpf(n)
        total = head + N ** (1 - k) / (k - 1) + N ** (-k) / 2
        rising = mpmath.mpf(k)  # k (k+1) ... (k+2i-2)
        for i in range(1, 400):
            if i > 1:
                rising *= (k + 2 * i - 3) * (k + 2 * i - 2)
            term = mpmath.bernoulli(2 * i) / mpmath.factorial(2 * i) * rising * N ** (-k - 2 * i + 1)
            total += term
            if abs(term) < eps * total:
                return +total
        raise ConvergenceFailure(f"Euler-Maclaurin for zeta({k}) did not settle")


# --------------------------------------------------------------------------
# Operator matrix in the basis (x - 1)^l
# --------------------------------------------------------------------------


@dataclass
class OperatorMatrix:
    """T[k, l]: k-th Taylor coefficient at x = 1 of the operator applied to (t - 1)^l."""

    dim: int
    prec: int
    entries: mpmath.matrix

    @classmethod
    def build(cls, dim: int, prec: int = 256) -> "OperatorMatrix":
        z = {m: zeta_minus_one(m, prec) for m in range(2, 2 * dim + 1)}
        with mpmath.workprec(prec + 32):
            T = mpmath.matrix(dim, dim)
            for k in range(dim):
                sk = -1 if k % 2 else 1
                for ell in range(dim):
                    acc = mpmath.mpf(0)
                    for r in range(ell + 1):
                        c = math.comb(ell, r) * math.comb(k + r + 1, k)
                        acc += (c if (ell - r) % 2 == 0 else -c) * z[2 + r + k]
                    T[k, ell] = sk * acc
        return cls(dim, prec, T)

    def trace(self):
        with mpmath.workprec(self.prec):
            return mpmath.fsum(self.entries[i, i] for i in range(self.dim))


def _clean(v, prec):
    if isinstance(v, mpmath.mpc) and abs(v.imag) <= mpmath.mpf(2) ** (-prec // 2) * max(1, abs(v)):
        return v.real
    return v


def gkw_eigenvalues(M: int = 64, prec: int = 256, count: int = 5, matrix: OperatorMatrix | None = None) -> list:
    """Eigenvalues of the truncated operator, largest modulus first.

    Uses mpmath's Hessenberg reduction followed by shifted QR iteration at
    ``prec`` bits; a failure to converge is reported as ConvergenceFailure.
    """
    if M < 8:
        raise ValueError("M must be at least 8")
    if not 1 <= count <= M:
        raise ValueError("count must be between 1 and M")
    T = matrix if matrix is not None else OperatorMatrix.build(M, prec)
    with mpmath.workprec(prec):
        try:
            ev = mpmath.eig(T.entries, left=False, right=False)
        except (ValueError, RuntimeError, ZeroDivisionError) as exc:
            raise ConvergenceFailure(f"QR iteration failed: {exc}") from exc
        ev = sorted(ev, key=lambda v: -abs(v))
        return [_clean(v, prec) for v in ev[:count]]


# --------------------------------------------------------------------------
# Trace formulas
# --------------------------------------------------------------------------


def _xi_term(m):
    r = mpmath.sqrt(m * m + 4)
    return 2 / (r * (r + m))


def trace_xi(prec: int = 256, terms: int = 100_000) -> mpmath.mpf:
    """sum_m 1/(1 + xi_m^2) with xi_m = (m + sqrt(m^2 + 4))/2.

    The summand equals (1 - m/sqrt(m^2+4))/2; the tail beyond ``terms`` is the
    exact integral (sqrt(T^2+4) - T)/2 plus Euler-Maclaurin corrections.
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    with mpmath.workprec(prec + 32):
        head = mpmath.fsum(_xi_term(mpmath.mpf(m)) for m in range(1, terms + 1))
        T = mpmath.mpf(terms)
        tail = (mpmath.sqrt(T * T + 4) - T) / 2 - _xi_term(T) / 2
        for i in range(1, 6):
            d = mpmath.diff(_xi_term, T, 2 * i - 1)
            tail -= mpmath.bernoulli(2 * i) / mpmath.factorial(2 * i) * d
        return +(head + tail)


def trace_binomial(prec: int = 256, terms: int | None = None) -> mpmath.mpf:
    """1/2 - 1/(2 sqrt 5) + (1/2) sum_{k>=1} (-1)^(k-1) C(2k, k) (zeta(2k) - 1).

    The m = 2 part of zeta(2k) - 1 makes the series only conditionally
    convergent; it sums in closed form to 1 - 1/sqrt(2), leaving a remainder
    whose terms decay like (4/9)^k.
    """
    if terms is None:
        terms = int(prec * math.log(2) / math.log(9 / 4)) + 10
    if terms < 1:
        raise ValueError("terms must be positive")
    with mpmath.workprec(prec + 32):
        rest = mpmath.mpf(0)
        for k in range(1, terms + 1):
            z = zeta_minus_one(2 * k, prec + 32) - mpmath.mpf(4) ** (-k)
            t = math.comb(2 * k, k) * z
            rest += t if k % 2 else -t
        m2 = 1 - 1 / mpmath.sqrt(2)
        return +(mpmath.mpf(1) / 2 - 1 / (2 * mpmath.sqrt(5)) + (m2 + rest) / 2)


# --------------------------------------------------------------------------
# Continuant sums
# --------------------------------------------------------------------------


@dataclass
class ContinuantSum:
    """Depth-k continuant sum: ``total <= full sum <= total + tail_bound``."""

    s: float
    k: int
    max_entry: int
    total: float
    tail_bound: float
    nodes: int

    completed: float | None = None

    @property
    def estimate(self) -> float:
        """Best value: pruned subtrees filled in from interpolated depth sums."""
        return self.completed if self.completed is not None else self.total + self.tail_bound / 2

    @property
    def upper(self) -> float:
        return self.total + self.tail_bound


def _zeta_real(s: float) -> float:
    return float(mpmath.zeta(s))


_CHEB_NODES = 24
_EXPLICIT = 16  # dropped children summed one by one before the power-series tail
_TAIL_DEG = 8


class _Completion:
    """Interpolant of F_r(y) = sum_{b in A(r)} (K(b) + y K(b_2..b_r))^-s on [0, 1].

    F_r(y) q^-s is the total weight of all r-digit extensions of a prefix with
    continuant pair (q', q), y = q'/q.  It is analytic on [0, 1] (nearest
    singularity at y = -1), so a modest Chebyshev interpolant is accurate.
    """

    def __init__(self, s: float, values: np.ndarray | None):
        self.s = s
        n = _CHEB_NODES
        j = np.arange(n)
        self.nodes = (1 - np.cos(np.pi * j / (n - 1))) / 2
        w = np.where(j % 2 == 0, 1.0, -1.0)
        w[0] /= 2
        w[-1] /= 2
        self.weights = w
        self.values = np.ones(n) if values is None else values
        # power series in y on [0, 1/(EXPLICIT+1)] for the far tail of dropped children
        h = 1.0 / (_EXPLICIT + 1)
        t = h * (1 - np.cos(np.pi * (np.arange(2 * _TAIL_DEG + 1) + 0.5) / (2 * _TAIL_DEG + 1))) / 2
        self.tail = np.polynomial.polynomial.polyfit(t / h, self(t), _TAIL_DEG) / h ** np.arange(_TAIL_DEG + 1)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        d = y[..., None] - self.nodes
        exact = np.isclose(d, 0.0, atol=1e-15, rtol=0)
        d = np.where(exact, 1.0, d)
        t = self.weights / d
        out = (t @ self.values) / t.sum(axis=-1)
        hit = exact.any(axis=-1)
        if hit.any():
            out = np.where(hit, self.values[np.argmax(exact, axis=-1)], out)
        return out

    def dropped(self, c: np.ndarray, x: np.ndarray, chunk: int = 20_000) -> np.ndarray:
        """sum_{a > c} (a + x)^-s F(1/(a + x)) for each node."""
        if len(c) > chunk:
            return np.concatenate([self.dropped(c[i:i + chunk], x[i:i + chunk], chunk)
                                   for i in range(0, len(c), chunk)])
        s = self.s
        a = c[:, None] + 1.0 + np.arange(_EXPLICIT)
        u = a + x[:, None]
        head = (u ** (-s) * self(1.0 / u)).sum(axis=1)
        start = c + _EXPLICIT + 1.0 + x
        tail = sum(coef * hurwitz_zeta(s + m, start) for m, coef in enumerate(self.tail))
        return head + tail


def _depth_sum(s: float, k: int, roots: np.ndarray, eps: float, lo: list, hi: list, comp: list,
               max_entry: int, max_nodes: int):
    """Depth-k sums started from the pairs (y, 1), one per root.

    Returns (estimates, lower, upper, nodes) as arrays over the roots.  Lower and
    upper bound the exact value using only ``lo[r] <= S_r <= hi[r]``.
    """
    nroots = len(roots)
    root = np.arange(nroots)
    q_prev = roots.astype(np.float64)
    q_cur = np.ones(nroots)
    est = np.zeros(nroots)
    low = np.zeros(nroots)
    high = np.zeros(nroots)
    nodes = nroots
    for depth in range(k - 1):
        r = k - depth - 1  # levels below a child
        qmax = ((lo[r] + hi[r]) / 2 / eps) ** (1.0 / s)
        x = q_prev / q_cur
        c = np.clip(np.floor((qmax - q_prev) / q_cur), 0, max_entry).astype(np.int64)
        qs = q_cur ** (-s)
        # children a > c are not expanded; their subtrees lie between
        # (a q + q' + q)^-s S_r and (a q + q')^-s S_r
        est += np.bincount(root, qs * comp[r].dropped(c.astype(np.float64), x), nroots)
        high += hi[r] * np.bincount(root, qs * hurwitz_zeta(s, c + 1.0 + x), nroots)
        low += lo[r] * np.bincount(root, qs * hurwitz_zeta(s, c + 2.0 + x), nroots)
        total_children = int(c.sum())
        nodes += total_children
        if nodes > max_nodes:
            raise BudgetExceeded(f"continuant enumeration passed {max_nodes} nodes")
        if total_children == 0:
            return est, low, high, nodes
        parent = np.repeat(np.arange(len(c)), c)
        starts = np.cumsum(c) - c
        a = (np.arange(total_children) - np.repeat(starts, c) + 1).astype(np.float64)
        q_prev, q_cur = q_cur[parent], a * q_cur[parent] + q_prev[parent]
        root = root[parent]
    # last entry in closed form: sum_{a>=1} (a q + q')^-s = q^-s zeta(s, 1 + q'/q)
    last = q_cur ** (-s) * hurwitz_zeta(s, 1.0 + q_prev / q_cur)
    exact = np.bincount(root, last, nroots)
    return est + exact, low + exact, high + exact, nodes


def _depth_sums(s: float, k_max: int, max_entry: int, rel_tol: float, max_nodes: int) -> list[ContinuantSum]:
    s = float(s)
    if s <= 1:
        raise ValueError("s must exceed 1")
    if k_max < 1 or max_entry < 2:
        raise ValueError("need k >= 1 and max_entry >= 2")
    comp = [_Completion(s, None)]
    roots = np.concatenate([[0.0], comp[0].nodes])
    lo, hi = [1.0], [1.0]
    out: list[ContinuantSum] = []
    for k in range(1, k_max + 1):
        if k <= 2:
            predicted = _zeta_real(s) if k == 1 else lo[1] * lo[1]
        else:
            predicted = out[-1].estimate * out[-1].estimate / out[-2].estimate
        est, low, high, nodes = _depth_sum(s, k, roots, rel_tol * predicted, lo, hi, comp, max_entry, max_nodes)
        e0 = min(max(est[0], low[0]), high[0])
        out.append(ContinuantSum(s, k, max_entry, float(low[0]), float(high[0] - low[0]), nodes, float(e0)))
        lo.append(float(low[0]))
        hi.append(float(high[0]))
        comp.append(_Completion(s, est[1:]))
    return out


def pseudozeta_sum(s: float, k: int, max_entry: int, rel_tol: float = 1e-4,
                   max_nodes: int = 5_000_000) -> ContinuantSum:
    """Sum of <a>^-s over all k-tuples a of positive integers, with a rigorous bracket.

    Tuples are enumerated breadth first as continuant pairs (q_{j-1}, q_j), with
    entries up to ``max_entry``.  The last entry is always summed in closed
    form, sum_{a>=1} (a q + q')^-s = q^-s zeta(s, 1 + q'/q) (Hurwitz zeta).

    A child whose subtree weight (continuant^-s times the depth-r sum) falls
    below ``rel_tol`` times the predicted total is not expanded.  With
    x = q'/q the subtree below the pair (q', q) equals q^-s F_r(x) where
    (1 + x)^-s S_r <= F_r(x) <= S_r and S_r is the full depth-r sum, known from
    the previous depths; summing this over the dropped children is again a
    Hurwitz zeta value.  The result satisfies total <= sum <= total + tail_bound.
    """
    return _depth_sums(s, k, max_entry, rel_tol, max_nodes)[-1]


@dataclass
class PseudozetaEstimates:
    s: float
    sums: list
    root_estimates: list
    ratio_estimates: list
    tail_bounds: list = field(default_factory=list)


def pseudozeta_estimate(s: float, k_max: int, max_entry: int = 10**6, rel_tol: float = 1e-4,
                        max_nodes: int = 5_000_000) -> PseudozetaEstimates:
    """Depth-k roots sum(k)^(1/k) and ratios sum(k+1)/sum(k) for k = 1..k_max.

    Sums are bracket midpoints.  ``root_estimates[i]`` and ``ratio_estimates[i]``
    refer to depth ``i + 1``; the last ratio needs depth ``k_max + 1``.
    """
    res = _depth_sums(s, k_max + 1, max_entry, rel_tol, max_nodes)
    sums = [r.estimate for r in res]
    roots = [sums[i] ** (1.0 / (i + 1)) for i in range(k_max)]
    ratios = [sums[i + 1] / sums[i] for i in range(k_max)]
    return PseudozetaEstimates(float(s), sums[:k_max], roots, ratios, [r.tail_bound for r in res[:k_max]])


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------


@dataclass
class OracleReport:
    quantity: str
    conjecture: object
    oracle: object
    params: dict = field(default_factory=dict)

    @property
    def diff(self):
        if isinstance(self.conjecture, (int, Fraction)) and isinstance(self.oracle, (int, Fraction)):
            return abs(Fraction(self.conjecture) - Fraction(self.oracle))
        with mpmath.workprec(max(mpmath.mp.prec, 256)):
            return abs(_mp(self.conjecture) - _mp(self.oracle))

    def passes(self, tol: float) -> bool:
        return self.diff <= tol

    def csv(self, digits: int = 20) -> str:
        params = ";".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.quantity},{_fmt(self.conjecture, digits)},{_fmt(self.oracle, digits)},{_fmt(self.diff, 6)},{params}"


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpmathify(v)


def _fmt(v, digits: int) -> str:
    if isinstance(v, (int, Fraction)) and Fraction(v).denominator == 1:
        return str(v)
    with mpmath.workprec(max(mpmath.mp.prec, 4 * digits)):
        return mpmath.nstr(_mp(v), digits)


CSV_HEADER = "quantity,conjecture,oracle,diff,params"
