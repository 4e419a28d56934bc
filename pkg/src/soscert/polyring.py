"""Sparse multivariate polynomials over exact rationals and over floating
real/complex scalars.

The exact domain uses `fractions.Fraction` coefficients; the approximate
domains use `float`/`complex`.  Monomials are compared in graded reverse
lexicographic order throughout, so leading terms are degree-compatible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import DimensionMismatch, ParseError

EXACT = "QQ"
REAL = "R"
COMPLEX = "C"

# relative magnitude below which approximate coefficients are dropped
APPROX_PRUNE = 2.0 ** -52


@total_ordering
class Monomial:
    """A power product x^alpha, stored as a tuple of nonnegative exponents."""

    __slots__ = ("exponents",)

    def __init__(self, exponents):
        self.exponents = tuple(int(e) for e in exponents)

    @classmethod
    def unit(cls, nvars):
        return cls((0,) * nvars)

    @classmethod
    def variable(cls, i, nvars):
        return cls(tuple(1 if j == i else 0 for j in range(nvars)))

    @property
    def degree(self):
        return sum(self.exponents)

    def __mul__(self, other):
        return Monomial(a + b for a, b in zip(self.exponents, other.exponents))

    def divides(self, other):
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __truediv__(self, other):
        return Monomial(a - b for a, b in zip(self.exponents, other.exponents))

    def lcm(self, other):
        return Monomial(max(a, b) for a, b in zip(self.exponents, other.exponents))

    def grevlex_key(self):
        # graded reverse lexicographic with x1 < x2 < ... < xn
        return (self.degree, tuple(-e for e in self.exponents))

    def __lt__(self, other):
        return self.grevlex_key() < other.grevlex_key()

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"Monomial{self.exponents}"


def _is_exact(c):
    return isinstance(c, (Fraction, int))


class Polynomial:
    """Finite map Monomial -> coefficient; zero coefficients are never stored.

    The scalar domain is inferred from the coefficients: Fraction/int give
    the exact-rational domain, float gives approx-real, complex approx-complex.
    Values are immutable after construction.
    """

    __slots__ = ("terms", "nvars", "domain")

    def __init__(self, terms, nvars, prune=True):
        self.nvars = nvars
        clean = {}
        domain = EXACT
        for m, c in terms.items():
            if isinstance(c, complex):
                domain = COMPLEX
            elif isinstance(c, float):
                if domain == EXACT:
                    domain = REAL
            if _is_exact(c):
                c = Fraction(c)
                if c == 0:
                    continue
            clean[m] = c
        if domain != EXACT and prune and clean:
            top = max(abs(c) for c in clean.values())
            floor = top * APPROX_PRUNE
            clean = {m: c for m, c in clean.items() if abs(c) > floor}
        if domain == COMPLEX:
            clean = {m: complex(c) for m, c in clean.items()}
        elif domain == REAL:
            clean = {m: float(c) for m, c in clean.items()}
        self.terms = clean
        self.domain = domain if clean else (EXACT if domain == EXACT else domain)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls({}, nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls({Monomial.unit(nvars): c}, nvars)

    @classmethod
    def variable(cls, i, nvars):
        return cls({Monomial.variable(i, nvars): Fraction(1)}, nvars)

    @classmethod
    def from_pairs(cls, pairs, nvars):
        acc = {}
        for m, c in pairs:
            if not isinstance(m, Monomial):
                m = Monomial(m)
            acc[m] = acc.get(m, 0) + c
        return cls(acc, nvars)

    # -- basic queries ------------------------------------------------

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.degree for m in self.terms)

    def leading_monomial(self):
        return max(self.terms)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def coefficient(self, m):
        if self.domain == EXACT:
            return self.terms.get(m, Fraction(0))
        if self.domain == COMPLEX:
            return self.terms.get(m, 0j)
        return self.terms.get(m, 0.0)

    def sorted_terms(self, reverse=True):
        return sorted(self.terms.items(), key=lambda t: t[0].grevlex_key(), reverse=reverse)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars)
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return Polynomial(acc, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.nvars, prune=False)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.constant(other, self.nvars) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return Polynomial.zero(self.nvars)
            return Polynomial({m: c * other for m, c in self.terms.items()}, self.nvars)
        self._check(other)
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, 0) + c1 * c2
        return Polynomial(acc, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (Fraction(1, 1) / scalar if _is_exact(scalar) else 1.0 / scalar)

    def __pow__(self, k):
        result = Polynomial.constant(Fraction(1), self.nvars)
        base = self
        k = int(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return (self - Polynomial.constant(other, self.nvars)).is_zero()
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- conversions --------------------------------------------------

    def to_float(self):
        """Approximate-real (or complex) copy of an exact polynomial."""
        if self.domain == COMPLEX:
            return self
        conv = float if self.domain in (EXACT, REAL) else complex
        return Polynomial({m: conv(c) for m, c in self.terms.items()}, self.nvars)

    def real_part(self):
        return Polynomial({m: c.real for m, c in self.terms.items()}, self.nvars)

    def imag_part(self):
        return Polynomial({m: complex(c).imag for m, c in self.terms.items()}, self.nvars)

    def conjugate(self):
        return Polynomial({m: complex(c).conjugate() for m, c in self.terms.items()}, self.nvars)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)})"


def evaluate(p, point):
    """Evaluate p at a point; exact when both sides are exact."""
    if len(point) != p.nvars:
        raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    total = 0
    for m, c in p.terms.items():
        v = c
        for x, e in zip(point, m.exponents):
            if e:
                v = v * x ** e
        total = total + v
    return total


@dataclass(frozen=True)
class HeightInfo:
    """Bit lengths of a primitive representation p = phat / nu."""

    numerator_height: int
    denominator_height: int


def height(p):
    """Height of an exact polynomial: bit length of the largest numerator and
    of the common (lcm) denominator of a primitive representation."""
    if p.domain != EXACT:
        raise ValueError("height is defined for exact-rational polynomials")
    if p.is_zero():
        return HeightInfo(0, 0)
    nu = 1
    for c in p.terms.values():
        nu = nu * c.denominator // math.gcd(nu, c.denominator)
    top = max(abs(c.numerator * (nu // c.denominator)) for c in p.terms.values())
    return HeightInfo(top.bit_length(), nu.bit_length() if nu > 1 else 0)


def round_binary(x, frac_bits):
    """Truncate a real number to xi / 2^frac_bits with xi = floor(x 2^N)."""
    if frac_bits < 0:
        raise ValueError("frac_bits must be nonnegative")
    if isinstance(x, Fraction):
        return Fraction(math.floor(x * (1 << frac_bits)), 1 << frac_bits)
    if not math.isfinite(x):
        raise ValueError("cannot round a non-finite value")
    return Fraction(math.floor(Fraction(x) * (1 << frac_bits)), 1 << frac_bits)


def round_poly(p, frac_bits):
    """Entrywise binary rounding of an approx-real polynomial to exact dyadics."""
    return Polynomial({m: round_binary(c, frac_bits) for m, c in p.terms.items()}, p.nvars)


# -- ASCII grammar --------------------------------------------------------
#
# Terms like `3/2*x1^2*x2 - x3 + 7`; variables `x1..xn` or declared names;
# whitespace-insensitive.  `**` is accepted as a synonym of `^`.

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>\*\*|[*^+-]))")


def parse_polynomial(text, var_names):
    """Parse the CLI polynomial grammar into an exact Polynomial."""
    nvars = len(var_names)
    index = {name: i for i, name in enumerate(var_names)}
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r} in polynomial")
            break
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op))

    result = Polynomial.zero(nvars)
    i = 0
    n = len(tokens)
    while i < n:
        sign = Fraction(1)
        while i < n and tokens[i] == ("op", "+") or i < n and tokens[i] == ("op", "-"):
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise ParseError("dangling sign in polynomial")
        coeff = sign
        exps = [0] * nvars
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if kind == "op" and val in "+-":
                break
            if kind == "op" and val == "*":
                i += 1
                expect_factor = True
                continue
            if not expect_factor:
                raise ParseError("missing operator between factors")
            if kind == "num":
                coeff *= val
                i += 1
            elif kind == "name":
                if val not in index:
                    raise ParseError(f"unknown variable {val!r}")
                power = 1
                i += 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "num" or tokens[i][1].denominator != 1:
                        raise ParseError("exponent must be a nonnegative integer")
                    power = int(tokens[i][1])
                    i += 1
                exps[index[val]] += power
            else:
                raise ParseError(f"unexpected operator {val!r}")
            expect_factor = False
        if expect_factor:
            raise ParseError("empty term in polynomial")
        m = Monomial(exps)
        result = result + Polynomial({m: coeff}, nvars)
    return result


def _format_coeff(c):
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, complex):
        return f"({c.real:.12g}{c.imag:+.12g}i)"
    return f"{c:.12g}"


def format_polynomial(p, var_names=None):
    """Canonical printing, grevlex-descending, rationals in lowest terms."""
    if var_names is None:
        var_names = [f"x{i + 1}" for i in range(p.nvars)]
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        factors = []
        for name, e in zip(var_names, m.exponents):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        negative = isinstance(c, Fraction) and c < 0
        mag = -c if negative else c
        if not body:
            text = _format_coeff(mag)
        elif isinstance(mag, Fraction) and mag == 1:
            text = body
        else:
            text = f"{_format_coeff(mag)}*{body}"
        if not parts:
            parts.append(f"-{text}" if negative else text)
        else:
            parts.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(parts)
