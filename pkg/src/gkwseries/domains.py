"""Coefficient domains for the recurrence engine.

The recurrence only needs ring operations, the generators X and Y, the
polynomial binomials C(X + a, r) and division by the self-coefficient, which
is a polynomial in Y.  Each domain supplies these for one kind of value:

* :class:`Symbolic` -- exact :class:`~gkwseries.exact.RatFunc2` values;
* :class:`ExactPoint` -- exact rationals at a rational point (x0, y0);
* :class:`FloatPoint` -- mpmath reals/complexes at a floating point (x0, y0);
* :class:`JetPoint` -- truncated Taylor expansions in (X - x0, Y - y0).

Specialization is a ring homomorphism, so running the recurrence in
``ExactPoint(x0, y0)`` produces exactly ``rf_eval_exact(A, x0, y0)`` for every
cell, as long as no self-coefficient vanishes at ``y0``.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction
from functools import lru_cache
from math import factorial

import gmpy2
import mpmath
from gmpy2 import mpq

from . import exact as ex
from .exact import RatFunc2, LinearCombination, mul_raw


class Symbolic:
    name = "symbolic"
    exact = True

    def __init__(self):
        self._binoms = {}

    def key(self):
        return None

    def context(self):
        return contextlib.nullcontext()

    def zero(self):
        return RatFunc2.const(0)

    def const(self, q):
        return RatFunc2.const(q)

    def y(self):
        return RatFunc2.Y()

    def rat(self, q):
        return ex.to_fmpq(q)

    def binom_x(self, shift: int, r: int):
        return ex._poly_binom_mpoly(shift, r)

    def accumulator(self):
        return _SymbolicAccumulator()

    def constant_of(self, multiplier) -> Fraction | None:
        if multiplier.is_constant():
            return ex.to_fraction(multiplier.coefficient(0)) if not multiplier.is_zero() else Fraction(0)
        return None

    def is_zero(self, elem) -> bool:
        return elem.is_zero()

    def divide(self, elem, divisor):
        if not divisor.is_polynomial() or divisor.num.degree_x() > 0:
            raise ValueError("self-coefficient must be a polynomial in Y")
        if divisor.is_zero():
            raise ZeroDivisionError("self-coefficient vanishes")
        return elem / ex.PolyY(divisor.num)

    def scale(self, elem, q):
        return elem * Fraction(q)

    def finish(self, elem):
        return elem

    def to_ratfunc(self, elem) -> RatFunc2:
        return elem

    def from_ratfunc(self, rf: RatFunc2):
        return rf


class _SymbolicAccumulator:
    """Sum of ``elem * multiplier`` terms plus products of RatFunc2 pairs."""

    __slots__ = ("lc",)

    def __init__(self):
        self.lc = LinearCombination()

    def add(self, elem, multiplier):
        if not elem.is_zero():
            self.lc.add(elem, multiplier)

    def add_product(self, a, b_acc):
        """Add ``a * total(b_acc)`` without intermediate cancellation."""
        num, den = b_acc.lc.total_raw()
        if num.is_zero() or a.is_zero():
            return
        other = RatFunc2._make(num, tuple(sorted(den.items())))
        n, d = mul_raw(a, other)
        self.lc.add_raw(n, d)

    def add_elem(self, elem):
        if not elem.is_zero():
            self.lc.add(elem)

    def total(self):
        return self.lc.total()


class _SumAccumulator:
    """Accumulator for scalar-like domains."""

    __slots__ = ("value",)

    def __init__(self, zero):
        self.value = zero

    def add(self, elem, multiplier):
        self.value += elem * multiplier

    def add_product(self, a, b_acc):
        self.value += a * b_acc.value

    def add_elem(self, elem):
        self.value += elem

    def total(self):
        return self.value


class ExactPoint:
    """Exact rational values at the point ``(x0, y0)`` (gmpy2 ``mpq`` internally)."""

    name = "exact"
    exact = True

    def __init__(self, x0, y0):
        self.x0 = Fraction(x0)
        self.y0 = Fraction(y0)
        self._x = mpq(self.x0.numerator, self.x0.denominator)
        self._y = mpq(self.y0.numerator, self.y0.denominator)
        self._binom = lru_cache(maxsize=None)(self._binom_x)

    def __repr__(self):
        return f"ExactPoint({self.x0}, {self.y0})"

    def key(self):
        return ("exact", self.x0, self.y0)

    def context(self):
        return contextlib.nullcontext()

    def zero(self):
        return mpq(0)

    def const(self, q):
        q = Fraction(q)
        return mpq(q.numerator, q.denominator)

    def y(self):
        return self._y

    def rat(self, q):
        return self.const(q)

    def _binom_x(self, shift, r):
        num = mpq(1)
        for i in range(r):
            num *= self._x + shift - i
        return num / factorial(r)

    def binom_x(self, shift, r):
        return self._binom(shift, r)

    def accumulator(self):
        return _SumAccumulator(mpq(0))

    def constant_of(self, multiplier):
        return Fraction(int(multiplier.numerator), int(multiplier.denominator))

    def is_zero(self, elem):
        return elem == 0

    def divide(self, elem, divisor):
        if divisor == 0:
            raise ZeroDivisionError("self-coefficient vanishes at this point")
        return elem / divisor

    def scale(self, elem, q):
        return elem * self.const(q)

    def finish(self, elem):
        return elem

    def to_ratfunc(self, elem) -> RatFunc2:
        return RatFunc2.const(Fraction(int(elem.numerator), int(elem.denominator)))

    def from_ratfunc(self, rf: RatFunc2):
        return self.const(rf.constant_value())

    def value(self, elem) -> Fraction:
        return Fraction(int(elem.numerator), int(elem.denominator))


class FloatPoint:
    """mpmath values at a real or complex point, at ``prec`` bits plus guard bits."""

    name = "float"
    exact = False

    def __init__(self, x0, y0, prec: int = 256, guard: int = ex.GUARD_BITS):
        self.prec = prec
        self.wp = prec + guard
        with mpmath.workprec(self.wp):
            self._x = ex.to_mp(x0)
            self._y = ex.to_mp(y0)
        self._binom = lru_cache(maxsize=None)(self._binom_x)

    def __repr__(self):
        return f"FloatPoint({self._x}, {self._y}, prec={self.prec})"

    def key(self):
        return None

    def context(self):
        return mpmath.workprec(self.wp)

    def zero(self):
        return mpmath.mpf(0)

    def const(self, q):
        q = Fraction(q)
        return mpmath.mpf(q.numerator) / q.denominator

    def y(self):
        return self._y

    def rat(self, q):
        return self.const(q)

    def _binom_x(self, shift, r):
        out = mpmath.mpf(1)
        for i in range(r):
            out *= self._x + shift - i
        return out / factorial(r)

    def binom_x(self, shift, r):
        return self._binom(shift, r)

    def accumulator(self):
        return _SumAccumulator(mpmath.mpf(0))

    def constant_of(self, multiplier):
        return multiplier

    def is_zero(self, elem):
        return elem == 0

    def divide(self, elem, divisor):
        if divisor == 0:
            raise ZeroDivisionError("self-coefficient vanishes at this point")
        return elem / divisor

    def scale(self, elem, q):
        if isinstance(q, (mpmath.mpf, mpmath.mpc)):
            return elem * q
        return elem * self.const(q)

    def finish(self, elem):
        return elem


class Jet:
    """Truncated Taylor polynomial in ``u = X - x0``, ``v = Y - y0``.

    Coefficients are kept for all monomials ``u^i v^j`` with ``i + j <= order``.
    """

    __slots__ = ("order", "c")

    def __init__(self, order: int, coeffs: dict):
        self.order = order
        self.c = coeffs

    @classmethod
    def constant(cls, order, value):
        return cls(order, {(0, 0): value})

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet(self.order, {(0, 0): other})

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return Jet(self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.order, {k: v * other for k, v in self.c.items()})
        out = {}
        d = self.order
        for (i1, j1), a in self.c.items():
            for (i2, j2), b in other.c.items():
                if i1 + i2 + j1 + j2 <= d:
                    k = (i1 + i2, j1 + j2)
                    out[k] = out.get(k, 0) + a * b
        return Jet(d, out)

    __rmul__ = __mul__

    def inverse(self):
        a0 = self.c.get((0, 0), 0)
        if a0 == 0:
            raise ZeroDivisionError("jet with zero constant term")
        # 1/(a0 (1 + e)) = (1/a0) sum (-e)^k
        e = Jet(self.order, {k: v / a0 for k, v in self.c.items() if k != (0, 0)})
        out = Jet.constant(self.order, 1)
        term = Jet.constant(self.order, 1)
        for _ in range(self.order):
            term = term * (-e)
            out = out + term
        return out * (1 / a0 if not isinstance(a0, int) else Fraction(1, a0))

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.inverse()
        return self * (1 / other)

    def __eq__(self, other):
        o = self._lift(other)
        keys = set(self.c) | set(o.c)
        return all(self.c.get(k, 0) == o.c.get(k, 0) for k in keys)

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.c.items() if v != 0)))

    def derivative(self, nx: int, ny: int):
        """Partial derivative d^(nx+ny) / dX^nx dY^ny at the expansion point."""
        return self.c.get((nx, ny), 0) * factorial(nx) * factorial(ny)

    def __repr__(self):
        return f"Jet({self.c})"


class JetPoint:
    """Exact Taylor jets of order ``order`` at the rational point ``(x0, y0)``."""

    name = "jet"
    exact = True

    def __init__(self, x0, y0, order: int = 2):
        self.x0 = Fraction(x0)
        self.y0 = Fraction(y0)
        self.order = order
        self._x = Jet(order, {(0, 0): self._q(self.x0), (1, 0): mpq(1)})
        self._y = Jet(order, {(0, 0): self._q(self.y0), (0, 1): mpq(1)})
        self._binom = lru_cache(maxsize=None)(self._binom_x)

    @staticmethod
    def _q(f: Fraction):
        return mpq(f.numerator, f.denominator)

    def key(self):
        return None

    def context(self):
        return contextlib.nullcontext()

    def zero(self):
        return Jet(self.order, {})

    def const(self, q):
        return Jet.constant(self.order, self._q(Fraction(q)))

    def y(self):
        return self._y

    def rat(self, q):
        return self._q(Fraction(q))

    def _binom_x(self, shift, r):
        out = Jet.constant(self.order, mpq(1))
        for i in range(r):
            out = out * (self._x + (shift - i))
        return out * mpq(1, factorial(r))

    def binom_x(self, shift, r):
        return self._binom(shift, r)

    def accumulator(self):
        return _SumAccumulator(self.zero())

    def constant_of(self, multiplier):
        if isinstance(multiplier, Jet):
            if any(v != 0 for k, v in multiplier.c.items() if k != (0, 0)):
                return None
            v = multiplier.c.get((0, 0), 0)
            return Fraction(int(gmpy2.numer(mpq(v))), int(gmpy2.denom(mpq(v))))
        return Fraction(multiplier)

    def is_zero(self, elem):
        return all(v == 0 for v in elem.c.values())

    def divide(self, elem, divisor):
        if isinstance(divisor, Jet):
            return elem * divisor.inverse()
        if divisor == 0:
            raise ZeroDivisionError("self-coefficient vanishes at this point")
        return elem * (mpq(1) / divisor)

    def scale(self, elem, q):
        return elem * self.rat(q)

    def finish(self, elem):
        return elem
