"""Exact arithmetic on bivariate rational functions with denominators in Q[Y].

Polynomial arithmetic is delegated to python-flint's ``fmpq_mpoly``; this
module adds the canonical form, the factored bookkeeping of denominators,
evaluation (exact and floating), derivatives and the text serialization.

Canonical form of a :class:`RatFunc2` ``num/den``:

* ``den`` is a product of primitive irreducible integer polynomials in ``Y``
  with positive leading coefficients (so ``den`` itself is primitive and has a
  positive leading coefficient);
* all rational content lives in ``num``;
* no factor of ``den`` divides ``num``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

import flint
import mpmath

from .errors import NearPoleError, ParseError, PoleError

CTX = flint.fmpq_mpoly_ctx.get(("X", "Y"), "lex")
_X, _Y = CTX.gens()
_ONE = CTX.constant(1)
_ZERO = CTX.constant(0)

#: extra bits carried by :func:`rf_eval_float` on top of the requested precision
GUARD_BITS = 32

Rational = Union[int, Fraction]


def to_fmpq(q) -> flint.fmpq:
    if isinstance(q, flint.fmpq):
        return q
    if isinstance(q, int):
        return flint.fmpq(q)
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    return Fraction(int(q.numerator), int(q.denominator))


# --------------------------------------------------------------------------
# BiPoly
# --------------------------------------------------------------------------


class BiPoly:
    """Sparse polynomial in X and Y with rational coefficients.

    The term map ``{(degX, degY): coefficient}`` never stores zeros, so two
    polynomials are equal exactly when their term maps are equal.
    """

    __slots__ = ("_p",)

    def __init__(self, terms: Mapping[tuple[int, int], Rational] | None = None):
        if terms is None:
            self._p = _ZERO
            return
        clean = {}
        for (dx, dy), c in terms.items():
            if dx < 0 or dy < 0:
                raise ValueError(f"negative exponent {(dx, dy)}")
            c = to_fmpq(c)
            if c != 0:
                clean[(int(dx), int(dy))] = c
        self._p = CTX.from_dict(clean) if clean else _ZERO

    @classmethod
    def _wrap(cls, p) -> "BiPoly":
        obj = cls.__new__(cls)
        obj._p = p
        return obj

    @classmethod
    def X(cls) -> "BiPoly":
        return cls._wrap(_X)

    @classmethod
    def Y(cls) -> "BiPoly":
        return cls._wrap(_Y)

    @classmethod
    def const(cls, c: Rational) -> "BiPoly":
        return cls._wrap(CTX.constant(to_fmpq(c)))

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return {tuple(m): to_fraction(c) for m, c in self._p.terms()}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def degree_x(self) -> int:
        return -1 if self._p.is_zero() else int(self._p.degrees()[0])

    def degree_y(self) -> int:
        return -1 if self._p.is_zero() else int(self._p.degrees()[1])

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other._p
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return CTX.constant(to_fmpq(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else BiPoly._wrap(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else BiPoly._wrap(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else BiPoly._wrap(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else BiPoly._wrap(self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return BiPoly._wrap(-self._p)

    def __pow__(self, e: int):
        return BiPoly._wrap(self._p**e)

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._p == o

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        return f"BiPoly({self._p})"

    def __str__(self):
        return str(self._p)

    def derivative(self, var: str) -> "BiPoly":
        return BiPoly._wrap(self._p.derivative(_var_index(var)))

    def evaluate(self, x0: Rational, y0: Rational) -> Fraction:
        return to_fraction(self._p(to_fmpq(x0), to_fmpq(y0)))


def _var_index(var: str) -> int:
    try:
        return {"X": 0, "Y": 1}[var.upper()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown variable {var!r}; expected 'X' or 'Y'") from None


# --------------------------------------------------------------------------
# Denominator factors
# --------------------------------------------------------------------------
# A factor key is the tuple of integer coefficients (ascending powers of Y)
# of a primitive irreducible polynomial with positive leading coefficient.
# A denominator is a sorted tuple of (key, multiplicity) pairs.


@lru_cache(maxsize=None)
def _factor_mpoly(key: tuple[int, ...]):
    return CTX.from_dict({(0, i): c for i, c in enumerate(key) if c})


@lru_cache(maxsize=4096)
def _factor_power(key: tuple[int, ...], e: int):
    return _factor_mpoly(key) ** e


def _den_mpoly(den) -> "flint.fmpq_mpoly":
    out = _ONE
    for key, e in den:
        out = out * _factor_power(key, e)
    return out


def linear_key(a: int, b: int) -> tuple[Fraction, tuple[int, int]]:
    """Normalize ``a*Y + b`` into (scalar, factor key); ``a`` must be nonzero."""
    if a == 0:
        raise ValueError("not a linear polynomial")
    from math import gcd

    g = gcd(a, b)
    if a < 0:
        g = -g
    return Fraction(g), (b // g, a // g)


def _factor_int_poly(coeffs: list[int]) -> tuple[Fraction, dict]:
    """Factor an integer polynomial in Y (ascending coefficients)."""
    poly = flint.fmpz_poly(coeffs)
    if poly.is_zero():
        raise ZeroDivisionError("zero denominator")
    content, parts = poly.factor()
    scalar = Fraction(int(content))
    factors: dict[tuple[int, ...], int] = {}
    for f, m in parts:
        key = [int(c) for c in f.coeffs()]
        if key[-1] < 0:
            key = [-c for c in key]
            scalar *= (-1) ** m
        factors[tuple(key)] = factors.get(tuple(key), 0) + int(m)
    return scalar, factors


def _merge_max(d1, d2):
    out = dict(d1)
    for k, e in d2:
        if out.get(k, 0) < e:
            out[k] = e
    return out


def _cofactor(den: tuple, target: Mapping) -> "flint.fmpq_mpoly":
    """Product of factors of ``target`` not already in ``den``."""
    have = dict(den)
    out = _ONE
    for k, e in target.items():
        d = e - have.get(k, 0)
        if d:
            out = out * _factor_power(k, d)
    return out


def _cancel(num, factors: Mapping) -> tuple:
    """Divide common factors out of num/den; returns (num, den tuple)."""
    if num.is_zero():
        return _ZERO, ()
    kept = []
    for key in sorted(factors):
        e = factors[key]
        f = _factor_mpoly(key)
        while e:
            q, r = divmod(num, f)
            if not r.is_zero():
                break
            num = q
            e -= 1
        if e:
            kept.append((key, e))
    return num, tuple(kept)


# --------------------------------------------------------------------------
# PolyY
# --------------------------------------------------------------------------


class PolyY:
    """Polynomial in Y only, with an optional factored view.

    The factored view is ``scalar * prod(factor**multiplicity)`` where each
    factor is a primitive irreducible integer polynomial; linear factors are
    reported as ``(a, b)`` pairs meaning ``a*Y + b``.
    """

    __slots__ = ("poly", "scalar", "factors")

    def __init__(self, poly: BiPoly, scalar: Fraction | None = None, factors=None):
        if poly.degree_x() > 0:
            raise ValueError("PolyY must not depend on X")
        self.poly = poly
        self.scalar = scalar
        self.factors = None if factors is None else tuple(sorted(dict(factors).items()))
        if self.factors is not None:
            expanded = _den_mpoly(self.factors) * to_fmpq(self.scalar)
            if expanded != poly._p:
                raise ValueError("factored view does not expand to the polynomial")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Rational]) -> "PolyY":
        return cls(BiPoly({(0, i): c for i, c in enumerate(coeffs)}))

    @classmethod
    def from_factors(cls, scalar: Rational, factors: Mapping[tuple[int, ...], int]) -> "PolyY":
        scalar = Fraction(scalar)
        factors = {tuple(k): int(e) for k, e in factors.items() if e}
        poly = BiPoly._wrap(_den_mpoly(tuple(sorted(factors.items()))) * to_fmpq(scalar))
        return cls(poly, scalar, factors)

    @classmethod
    def linear(cls, a: int, b: int) -> "PolyY":
        scalar, key = linear_key(a, b)
        return cls.from_factors(scalar, {key: 1})

    def coeffs(self) -> list[Fraction]:
        d = self.poly.degree_y()
        terms = self.poly.terms
        return [terms.get((0, i), Fraction(0)) for i in range(d + 1)]

    def factored(self) -> "PolyY":
        """Return a copy that carries the factored view."""
        if self.factors is not None:
            return self
        coeffs = self.coeffs()
        if not coeffs:
            raise ZeroDivisionError("zero polynomial has no factorization")
        from math import lcm

        m = lcm(*(c.denominator for c in coeffs))
        scalar, factors = _factor_int_poly([int(c * m) for c in coeffs])
        return PolyY(self.poly, scalar / m, factors)

    def linear_factors(self) -> list[tuple[int, int, int]]:
        """``[(a, b, multiplicity)]`` for the linear factors ``a*Y + b``."""
        view = self.factored()
        return [(k[1], k[0], e) for k, e in view.factors if len(k) == 2]

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other):
        if isinstance(other, PolyY):
            return self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"PolyY({self.poly})"


# --------------------------------------------------------------------------
# RatFunc2
# --------------------------------------------------------------------------


class RatFunc2:
    """Exact rational function ``num(X, Y) / den(Y)`` in canonical form.

    Values are immutable.  Arithmetic operators return canonical results; the
    recurrence engine uses :class:`LinearCombination` to defer cancellation.
    """

    __slots__ = ("_num", "_den", "_terms_cache")

    def __init__(self, num: BiPoly | Rational = 0, den: PolyY | BiPoly | Rational | None = None):
        if not isinstance(num, BiPoly):
            num = BiPoly.const(num)
        if den is None:
            den = PolyY(BiPoly.const(1))
        elif not isinstance(den, PolyY):
            den = PolyY(den if isinstance(den, BiPoly) else BiPoly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        view = den.factored()
        n = num._p * to_fmpq(1 / view.scalar)
        n, d = _cancel(n, dict(view.factors))
        self._num, self._den = n, d
        self._terms_cache = None

    @classmethod
    def _make(cls, num, den: tuple) -> "RatFunc2":
        obj = cls.__new__(cls)
        obj._num = num
        obj._den = den if not num.is_zero() else ()
        obj._terms_cache = None
        return obj

    @classmethod
    def _canonical(cls, num, factors: Mapping) -> "RatFunc2":
        n, d = _cancel(num, factors)
        return cls._make(n, d)

    @classmethod
    def X(cls) -> "RatFunc2":
        return cls._make(_X, ())

    @classmethod
    def Y(cls) -> "RatFunc2":
        return cls._make(_Y, ())

    @classmethod
    def const(cls, c: Rational) -> "RatFunc2":
        return cls._make(CTX.constant(to_fmpq(c)), ())

    # -- views -----------------------------------------------------------

    @property
    def num(self) -> BiPoly:
        return BiPoly._wrap(self._num)

    @property
    def den(self) -> PolyY:
        factors = dict(self._den)
        return PolyY(BiPoly._wrap(_den_mpoly(self._den)), Fraction(1), factors)

    @property
    def den_factors(self) -> tuple:
        return self._den

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_constant(self) -> bool:
        return not self._den and self._num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return to_fraction(self._num.coefficient(0)) if not self._num.is_zero() else Fraction(0)

    def is_polynomial(self) -> bool:
        return not self._den

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFunc2):
            return other
        if isinstance(other, BiPoly):
            return RatFunc2._make(other._p, ())
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return RatFunc2._make(CTX.constant(to_fmpq(other)), ())
        return None

    def _add(self, other: "RatFunc2", sign: int) -> "RatFunc2":
        if self._den == other._den:
            num = self._num + other._num if sign > 0 else self._num - other._num
            return RatFunc2._canonical(num, dict(self._den))
        target = _merge_max(self._den, other._den)
        a = self._num * _cofactor(self._den, target)
        b = other._num * _cofactor(other._den, target)
        return RatFunc2._canonical(a + b if sign > 0 else a - b, target)

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self._add(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self._add(o, -1)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o._add(self, -1)

    def __neg__(self):
        return RatFunc2._make(-self._num, self._den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                return RatFunc2._make(_ZERO, ())
            return RatFunc2._make(self._num * to_fmpq(other), self._den)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        factors = dict(self._den)
        for k, e in o._den:
            factors[k] = factors.get(k, 0) + e
        return RatFunc2._canonical(self._num * o._num, factors)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a scalar or by a nonzero polynomial in Y."""
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return RatFunc2._make(self._num / to_fmpq(other), self._den)
        if isinstance(other, RatFunc2) and other.is_polynomial() and other.num.degree_x() <= 0:
            other = PolyY(other.num)
        if isinstance(other, BiPoly):
            other = PolyY(other)
        if not isinstance(other, PolyY):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        view = other.factored()
        factors = dict(self._den)
        for k, e in view.factors:
            factors[k] = factors.get(k, 0) + e
        return RatFunc2._canonical(self._num / to_fmpq(view.scalar), factors)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = RatFunc2.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._den == o._den and self._num == o._num

    def __hash__(self):
        return hash((self._den, tuple(sorted(self.num.terms.items()))))

    def __repr__(self):
        return f"RatFunc2({self})"

    def __str__(self):
        if not self._den:
            return str(self._num)
        parts = []
        for key, e in self._den:
            f = _format_y_poly(key)
            parts.append(f"({f})" + (f"^{e}" if e > 1 else ""))
        return f"({self._num})/({'*'.join(parts)})"

    # -- evaluation ------------------------------------------------------

    def _term_list(self):
        if self._terms_cache is None:
            self._terms_cache = [(int(m[0]), int(m[1]), to_fraction(c)) for m, c in self._num.terms()]
        return self._terms_cache


def _format_y_poly(key) -> str:
    return str(_factor_mpoly(key))


# --------------------------------------------------------------------------
# Deferred-cancellation sums used by the recurrence engine
# --------------------------------------------------------------------------


class LinearCombination:
    """Accumulates ``sum(f_i * m_i)`` for RatFunc2 ``f_i`` and polynomial ``m_i``.

    Terms sharing a denominator are summed before any rescaling, and nothing
    is cancelled until :meth:`total` (or :meth:`total_raw`) is called.
    """

    __slots__ = ("_groups",)

    def __init__(self):
        self._groups: dict[tuple, object] = {}

    def add(self, f: RatFunc2, multiplier=None):
        num = f._num if multiplier is None else f._num * multiplier
        g = self._groups.get(f._den)
        self._groups[f._den] = num if g is None else g + num

    def add_raw(self, num, den: tuple):
        g = self._groups.get(den)
        self._groups[den] = num if g is None else g + num

    def total_raw(self) -> tuple:
        if not self._groups:
            return _ZERO, {}
        target: dict = {}
        for den in self._groups:
            target = _merge_max(tuple(target.items()), den)
        acc = _ZERO
        for den, num in self._groups.items():
            acc = acc + num * _cofactor(den, target)
        return acc, target

    def total(self) -> RatFunc2:
        num, target = self.total_raw()
        return RatFunc2._canonical(num, target)


def mul_raw(a: RatFunc2, b: RatFunc2) -> tuple:
    """Uncancelled product as (num, den tuple)."""
    factors = dict(a._den)
    for k, e in b._den:
        factors[k] = factors.get(k, 0) + e
    return a._num * b._num, tuple(sorted(factors.items()))


# --------------------------------------------------------------------------
# Named operations
# --------------------------------------------------------------------------


def rf_arith(a: RatFunc2, b, op: str) -> RatFunc2:
    """``op`` is one of ``add``, ``sub``, ``mul``, ``scalar-mul``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scalar-mul":
        return a * Fraction(b)
    raise ValueError(f"unknown op {op!r}")


def int_binom(m: int, r: int) -> int:
    """Binomial coefficient C(m, r) for m >= 0, zero outside 0 <= r <= m."""
    if m < 0:
        raise ValueError(f"int_binom called with negative top index {m}")
    if r < 0 or r > m:
        return 0
    from math import comb

    return comb(m, r)


def gen_binom(m: int, r: int) -> Fraction:
    """Polynomial binomial C(X, r) evaluated at the integer X = m."""
    if r < 0:
        return Fraction(0)
    num = 1
    for i in range(r):
        num *= m - i
    from math import factorial

    return Fraction(num, factorial(r))


@lru_cache(maxsize=None)
def _poly_binom_mpoly(shift: int, k: int):
    from math import factorial

    out = _ONE
    for i in range(k):
        out = out * (_X + (shift - i))
    return out / factorial(k)


def poly_binom(shift: int, k: int) -> BiPoly:
    """C(X + shift, k) as a polynomial in X."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return BiPoly._wrap(_poly_binom_mpoly(shift, k))


def rf_partial(f: RatFunc2, var: str, order: int = 1) -> RatFunc2:
    if order < 1:
        raise ValueError("order must be positive")
    idx = _var_index(var)
    for _ in range(order):
        if idx == 0 or not f._den:
            f = RatFunc2._make(f._num.derivative(idx), f._den)
            if f._num.is_zero():
                f = RatFunc2._make(_ZERO, ())
            continue
        # d/dY (N / prod L^e) = (N' R - N sum e L'/L R) / (prod L^e * R),  R = prod L
        radical = _ONE
        for key, _ in f._den:
            radical = radical * _factor_mpoly(key)
        acc = f._num.derivative(1) * radical
        for key, e in f._den:
            L = _factor_mpoly(key)
            acc = acc - f._num * L.derivative(1) * e * (radical / L)
        factors = {k: e + 1 for k, e in f._den}
        f = RatFunc2._canonical(acc, factors)
    return f


def den_value(f: RatFunc2, y0) -> Fraction:
    y = to_fmpq(y0)
    out = flint.fmpq(1)
    for key, e in f._den:
        v = _factor_mpoly(key)(flint.fmpq(0), y)
        out *= v**e
    return to_fraction(out)


def rf_eval_exact(f: RatFunc2, x0: Rational, y0: Rational) -> Fraction:
    d = den_value(f, y0)
    if d == 0:
        raise PoleError(f"denominator vanishes at Y = {y0}")
    return to_fraction(f._num(to_fmpq(x0), to_fmpq(y0))) / d


def rf_eval_float(f: RatFunc2, x0, y0, prec: int = 256):
    """Evaluate at floating or complex ``(x0, y0)``.

    Returns an ``mpf`` for real inputs and an ``mpc`` otherwise.  The result
    has relative error at most ``2**(GUARD_BITS - prec)``: the numerator is
    re-evaluated with more bits whenever cancellation eats into the guard.
    Raises :class:`NearPoleError` if some denominator factor ``L`` satisfies
    ``|L(y0)| <= 2**-prec * sum(|c_i| |y0|^i)``.
    """
    extra = 0
    while True:
        with mpmath.workprec(prec + GUARD_BITS + extra):
            x, y = to_mp(x0), to_mp(y0)
            den = mpmath.mpf(1)
            for key, e in f._den:
                val = mpmath.mpf(0)
                scale = mpmath.mpf(0)
                for c in reversed(key):
                    val = val * y + c
                    scale = scale * abs(y) + abs(c)
                if abs(val) <= scale * mpmath.ldexp(1, -prec):
                    raise NearPoleError(f"denominator factor {_format_y_poly(key)} ~ 0 at Y = {y0}")
                den *= val**e
            num = mpmath.mpf(0)
            mag = mpmath.mpf(0)
            xp = {0: mpmath.mpf(1)}
            yp = {0: mpmath.mpf(1)}
            for dx, dy, c in f._term_list():
                if dx not in xp:
                    xp[dx] = x**dx
                if dy not in yp:
                    yp[dy] = y**dy
                t = mpmath.mpf(c.numerator) / c.denominator * xp[dx] * yp[dy]
                num += t
                mag += abs(t)
            if mag == 0:
                return num / den
            if num != 0:
                lost = int(mpmath.log(mag / abs(num), 2)) + 1
                if lost <= GUARD_BITS // 2 + extra:
                    return num / den
            else:
                lost = prec
            if extra > 8 * prec:
                # cancels to beyond 8x the working precision: zero for all practical purposes
                return num / den
            extra = max(2 * extra, lost + GUARD_BITS)


def to_mp(v):
    """Convert ints, Fractions, fmpq/mpq and mpmath numbers to mpmath values."""
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return v
    if isinstance(v, (int, float, complex)):
        return mpmath.mpmathify(v)
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return mpmath.mpf(int(v.numerator)) / int(v.denominator)
    return mpmath.mpmathify(v)


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rf_serialize(f: RatFunc2, header: Mapping[str, str] | None = None) -> str:
    """Text form: optional header, then NUM lines ``c degX degY`` and DEN lines ``c degY``.

    Terms are listed in descending (degX, degY) order.
    """
    lines = []
    if header is not None:
        fields = " ".join(f"{k}={v}" for k, v in header.items())
        lines.append(f"RATFUNC v1 {fields}".rstrip())
    lines.append("NUM")
    for (dx, dy), c in sorted(f.num.terms.items(), reverse=True):
        lines.append(f"{_fmt_rational(c)} {dx} {dy}")
    lines.append("DEN")
    den = f.den.poly.terms
    for (_, dy), c in sorted(den.items(), reverse=True):
        lines.append(f"{_fmt_rational(c)} {dy}")
    return "\n".join(lines) + "\n"


def _parse_rational(tok: str, lineno: int, col: int, integer_only=False) -> Fraction:
    try:
        if "/" in tok:
            if integer_only:
                raise ValueError
            n, d = tok.split("/")
            if not d.isdigit():
                raise ValueError
            q = Fraction(int(n), int(d))
        else:
            q = Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {tok!r}", lineno, col) from None
    return q


def _parse_exp(tok: str, lineno: int, col: int) -> int:
    if not tok.isdigit():
        raise ParseError(f"bad exponent {tok!r}", lineno, col)
    return int(tok)


def rf_parse_with_header(text: str) -> tuple[dict[str, str], RatFunc2]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header: dict[str, str] = {}
    i = 0
    if lines and lines[0].startswith("RATFUNC"):
        parts = lines[0].split()
        if len(parts) < 2 or parts[1] != "v1":
            raise ParseError("unsupported header version", 1, 9)
        col = len(parts[0]) + len(parts[1]) + 3
        for p in parts[2:]:
            if "=" not in p:
                raise ParseError(f"bad header field {p!r}", 1, col)
            k, v = p.split("=", 1)
            header[k] = v
            col += len(p) + 1
        i = 1
    if i >= len(lines) or lines[i].strip() != "NUM":
        raise ParseError("expected 'NUM'", i + 1, 1)
    i += 1
    num_terms: dict[tuple[int, int], Fraction] = {}
    while i < len(lines) and lines[i].strip() != "DEN":
        toks = lines[i].split()
        if len(toks) != 3:
            raise ParseError("expected '<coefficient> <degX> <degY>'", i + 1, 1)
        cols = _token_columns(lines[i])
        c = _parse_rational(toks[0], i + 1, cols[0])
        m = (_parse_exp(toks[1], i + 1, cols[1]), _parse_exp(toks[2], i + 1, cols[2]))
        if m in num_terms:
            raise ParseError(f"duplicate monomial {m}", i + 1, 1)
        num_terms[m] = c
        i += 1
    if i >= len(lines):
        raise ParseError("missing 'DEN' section", i + 1, 1)
    i += 1
    den_terms: dict[tuple[int, int], Fraction] = {}
    while i < len(lines):
        toks = lines[i].split()
        if len(toks) != 2:
            raise ParseError("expected '<integer> <degY>'", i + 1, 1)
        cols = _token_columns(lines[i])
        c = _parse_rational(toks[0], i + 1, cols[0], integer_only=True)
        m = (0, _parse_exp(toks[1], i + 1, cols[1]))
        if m in den_terms:
            raise ParseError(f"duplicate degree {m[1]}", i + 1, 1)
        den_terms[m] = c
        i += 1
    den = BiPoly(den_terms)
    if den.is_zero():
        raise ParseError("zero denominator polynomial", i, 1)
    return header, RatFunc2(BiPoly(num_terms), PolyY(den))


def _token_columns(line: str) -> list[int]:
    cols, in_tok = [], False
    for j, ch in enumerate(line):
        if ch.isspace():
            in_tok = False
        elif not in_tok:
            cols.append(j + 1)
            in_tok = True
    return cols


def rf_parse(text: str) -> RatFunc2:
    return rf_parse_with_header(text)[1]
