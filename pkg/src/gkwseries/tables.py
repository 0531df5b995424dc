"""Reference values for the six tables, plus helpers to render them."""

from __future__ import annotations

import re
from fractions import Fraction

from .exact import BiPoly, PolyY, RatFunc2

_MONO = re.compile(r"([+-]?)(\d*)(X(?:\^(\d+))?)?(Y(?:\^(\d+))?)?")


def parse_monomials(text: str) -> BiPoly:
    """Parse integer-coefficient sums such as ``-3XY^3+9Y^3+4X^2Y^2-8``."""
    text = text.replace(" ", "")
    terms: dict = {}
    pos = 0
    while pos < len(text):
        m = _MONO.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse monomial at {text[pos:]!r}")
        sign, digits, xs, xe, ys, ye = m.groups()
        if not digits and not xs and not ys:
            raise ValueError(f"empty monomial at {text[pos:]!r}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        dx = (int(xe) if xe else 1) if xs else 0
        dy = (int(ye) if ye else 1) if ys else 0
        terms[(dx, dy)] = terms.get((dx, dy), 0) + c
        pos = m.end()
    return BiPoly({k: v for k, v in terms.items() if v})


def _rf(num: str, scalar: int, factors: dict) -> RatFunc2:
    den = PolyY.from_factors(Fraction(scalar), factors)
    return RatFunc2(parse_monomials(num), den)


# denominators are given as {(b, a): multiplicity} for the factor aY + b
_PSI_TEXT = [
    ("2Y-2", 1, {}),
    ("-3XY^3+9Y^3+4X^2Y^2+6XY^2-27Y^2-4X^2Y-4XY+26Y-8", 1, {(-4, 3): 1, (-2, 3): 1}),
    (
        "243X^2Y^7-405XY^7-216X^4Y^6+54X^2Y^6+2430XY^6+648X^4Y^5-216X^3Y^5-4212X^2Y^5-6804XY^5"
        "-720X^4Y^4+1584X^3Y^4+11400X^2Y^4+11016XY^4+288X^4Y^3-3008X^3Y^3-13248X^2Y^3-10336XY^3"
        "+2176X^3Y^2+7296X^2Y^2+5120XY^2-512X^3Y-1536X^2Y-1024XY",
        12,
        {(-4, 3): 3, (-2, 3): 3},
    ),
    (
        "-531441X^3Y^13-2125764X^2Y^13+4074381XY^13"
        "+209952X^6Y^12-2466936X^4Y^12+6377292X^3Y^12+15011568X^2Y^12-48892572XY^12"
        # printed as +37747620X^3Y^11; see TABLE1_PSI3_PRINTED_SIGN
        "-419904X^6Y^11+3726648X^5Y^11+18869436X^4Y^11-37747620X^3Y^11-24958044X^2Y^11+256710060XY^11"
        "-3779136X^6Y^10-33802272X^5Y^10-47530800X^4Y^10+161593056X^3Y^10-62997264X^2Y^10-774372960XY^10"
        "+22371552X^6Y^9+120885696X^5Y^9-16282944X^4Y^9-568577232X^3Y^9+260620416X^2Y^9+1465717680XY^9"
        "-57583872X^6Y^8-215488512X^5Y^8+406171584X^4Y^8+1568232576X^3Y^8-106759296X^2Y^8-1745883072XY^8"
        "+86686848X^6Y^7+175893120X^5Y^7-1202361408X^4Y^7-3156231744X^3Y^7-984602304X^2Y^7+1145164608XY^7"
        "-80727552X^6Y^6+25159680X^5Y^6+1970357760X^4Y^6+4467896064X^3Y^6+2532955392X^2Y^6-46116864XY^6"
        "+45333504X^6Y^5-202844160X^5Y^5-2057522688X^4Y^5-4360743936X^3Y^5-3125389824X^2Y^5-661966848XY^5"
        "-12926976X^6Y^4+209399808X^5Y^4+1402464256X^4Y^4+2862624768X^3Y^4+2283358208X^2Y^4+644493312XY^4"
        "-147456X^6Y^3-110641152X^5Y^3-607199232X^4Y^3-1205420032X^3Y^3-1008033792X^2Y^3-308854784XY^3"
        "+1245184X^6Y^2+31653888X^5Y^2+152535040X^4Y^2+294256640X^3Y^2+249659392X^2Y^2+78315520XY^2"
        "-262144X^6Y-3932160X^5Y-17039360X^4Y-31719424X^3Y-26738688X^2Y-8388608XY",
        72,
        {(-2, 3): 5, (-4, 3): 5, (-16, 9): 1, (-2, 9): 1},
    ),
]

_LAMBDA_TEXT = [
    ("2Y-2", 1, {}),
    ("XY^2+Y^2-3Y+2", 1, {(-2, 3): 1}),
    (
        "9X^2Y^4-3XY^4-12Y^4-22X^2Y^3+30XY^3+52Y^3-4X^2Y^2-60XY^2-56Y^2+8X^2Y+24XY+16Y",
        12,
        {(-2, 3): 3},
    ),
    (
        "243X^3Y^7-972X^2Y^7+81XY^7+1296Y^7-792X^3Y^6+2916X^2Y^6-3276XY^6-6984Y^6+3840X^3Y^5-3816X^2Y^5"
        "+1632XY^5+9288Y^5-2720X^3Y^4+10752X^2Y^4+13424XY^4-48Y^4-816X^3Y^3-13696X^2Y^3-20976XY^3"
        "-8096Y^3+1152X^3Y^2+7232X^2Y^2+11904XY^2+5824Y^2-256X^3Y-1408X^2Y-2432XY-1280Y",
        72,
        {(-2, 3): 5, (-2, 9): 1},
    ),
]


# Uncorrected reference text has a plus sign on the X^3 Y^11 coefficient of
# Psi_3.  That gives Psi_3(2, 4) = 839514/53125, not row 3 of table 3, and
# Psi_3(1, 2) != 0; the minus sign is consistent with both.
TABLE1_PSI3_PRINTED_SIGN = ((3, 11), 37747620)


def _factor_key(b: int, a: int) -> tuple[int, ...]:
    return (b, a) if a > 0 else (-b, -a)


def table1() -> list[RatFunc2]:
    """Psi_0..Psi_3 (with the X^3 Y^11 sign corrected)."""
    return [_rf(n, s, {_factor_key(*k): e for k, e in f.items()}) for n, s, f in _PSI_TEXT]


def table1_printed_psi3() -> RatFunc2:
    """Psi_3 with the numerator exactly as printed."""
    n, s, f = _PSI_TEXT[3]
    (dx, dy), c = TABLE1_PSI3_PRINTED_SIGN
    n = n.replace(f"-{c}X^{dx}Y^{dy}", f"+{c}X^{dx}Y^{dy}")
    return _rf(n, s, {_factor_key(*k): e for k, e in f.items()})


def table4() -> list[RatFunc2]:
    """Lambda_0..Lambda_3."""
    return [_rf(n, s, {_factor_key(*k): e for k, e in f.items()}) for n, s, f in _LAMBDA_TEXT]


def _q(num: int, *factors: tuple[int, int]) -> Fraction:
    den = 1
    for p, e in factors:
        den *= p**e
    return Fraction(num, den)


# Psi_j(2, 4).  Uncorrected row 2 reads -11/5^2; Psi_2 of table 1 and every
# independent route here give -11/5^3.
TABLE3 = [
    Fraction(6),
    Fraction(13, 5),
    _q(-11, (5, 3)),
    _q(678, (5, 5), (17, 1)),
    _q(-74439, (2, 2), (5, 6), (17, 2)),
    _q(2509823493, (2, 4), (5, 9), (13, 1), (17, 3)),
    _q(-19855538966267, (2, 6), (5, 11), (13, 2), (17, 4)),
    _q(129127251417135911831, (2, 8), (3, 1), (5, 13), (13, 3), (17, 5), (257, 1)),
    _q(-662052024234553451842334613, (2, 10), (5, 15), (7, 1), (13, 4), (17, 6), (257, 2)),
    _q(
        781786025527978909165252890560522881,
        (2, 12), (3, 2), (5, 16), (7, 2), (13, 5), (17, 7), (41, 1), (257, 3),
    ),
]
TABLE3_PRINTED_ROW2 = _q(-11, (5, 2))

# Lambda_j(3, 8)
TABLE6 = [
    Fraction(14),
    Fraction(117, 11),
    _q(6280, (3, 1), (11, 3)),
    _q(-89128, (3, 2), (11, 5)),
    _q(17097857, (3, 1), (5, 2), (11, 7)),
    _q(-43041548352866, (3, 4), (5, 4), (11, 9), (131, 1)),
    _q(5090277810440554529, (3, 4), (5, 6), (11, 11), (131, 2)),
    _q(-56022698078692317056550307, (3, 6), (5, 8), (11, 12), (103, 1), (131, 3)),
    _q(78083190108525386193197430572483023, (2, 1), (3, 7), (5, 10), (11, 14), (17, 1), (103, 2), (131, 4)),
    _q(
        -5692648747977502069023785944103249502105799841,
        (2, 1), (3, 7), (5, 12), (11, 16), (17, 2), (103, 3), (131, 5), (293, 1),
    ),
]

# S_N(n): {(n, N): printed digits}
TABLE2 = {
    (2, 5): "0.30359526888627", (3, 5): "0.10084990161441",
    (4, 5): "0.03553807998183", (5, 5): "0.01291316972180",
    (2, 10): "0.30366223674122", (3, 10): "0.10088416824324",
    (4, 10): "0.03549756178532", (5, 10): "0.01284672844801",
    (2, 20): "0.30366300267057", (3, 20): "0.10088450998887",
    (4, 20): "0.03549615817871", (5, 20): "0.01284378208157",
    (2, 40): "0.30366300289881", (3, 40): "0.10088450926615",
    (4, 40): "0.03549615913748", (5, 40): "0.01284379096146",
}
TABLE2_N = (5, 10, 20, 40)
TABLE2_n = (2, 3, 4, 5)

# L_N(s): {(s, N): printed digits}; s = 18, N = 5 is printed with 13 decimals
TABLE5 = {
    ("5/2", 5): "0.59917481197326", ("3", 5): "0.39652695432136",
    ("4", 5): "0.19950800589324", ("18", 5): "-0.0000863940590",
    ("5/2", 10): "0.59908463832611", ("3", 10): "0.39643522729436",
    ("4", 10): "0.19945914049411", ("18", 10): "0.00017329459246",
    ("5/2", 20): "0.59908399859453", ("3", 20): "0.39643461357311",
    ("4", 20): "0.19945881834668", ("18", 20): "0.00017329515765",
}
TABLE5_N = (5, 10, 20)
TABLE5_s = ("5/2", "3", "4", "18")

KLEVY = {
    3: (Fraction(167, 48), Fraction(-59, 48), "0.00416121139"),
    5: (Fraction(44501, 11520), Fraction(-1909, 1280), "0.00039353038"),
    8: (Fraction(66655217, 15482880), Fraction(-59637137, 33177600), "0.00001907581"),
}

GKW_CONSTANT = "0.30366300289873265859"
TRACE = "0.7711255236"
PSI30_AT_2_4 = 1.5e-11


def printed_decimals(text: str) -> int:
    return len(text.split(".")[1])
