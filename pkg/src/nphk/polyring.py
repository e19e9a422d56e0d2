"""Exact sparse polynomial arithmetic over the rationals, in one and two variables.

Bivariate polynomials are dictionaries mapping exponent pairs (a, b) to
``fractions.Fraction`` coefficients; univariate ones map a degree to a
coefficient.  Both carry an optional truncation degree, turning the same
representation into jets: a value with ``trunc=N`` is only trusted through
total degree N, and every operation drops terms beyond the tightest
truncation of its inputs.  All symbolic work in this package (coordinate
changes, branch solves, Newton-polygon geometry) happens here, exactly;
floating point never enters.

The zero polynomial has order ``INFINITE_ORDER`` (a float infinity used only
as a sentinel, never in arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

INFINITE_ORDER = math.inf

Coeff = Union[int, str, Fraction]


class ParseError(ValueError):
    """Raised for malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


def _frac(value: Coeff) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def _min_trunc(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class BivariatePolynomial:
    """Immutable sparse polynomial (or jet) in the variables x and y.

    ``terms`` maps (a, b) exponent pairs to nonzero Fractions.  ``trunc`` is
    None for an exact polynomial, otherwise the total degree through which the
    jet is valid.
    """

    __slots__ = ("_terms", "_trunc", "_hash")

    def __init__(self, terms: Mapping[tuple, Coeff], trunc: Optional[int] = None):
        cleaned = {}
        for (a, b), c in terms.items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in term ({a}, {b})")
            if trunc is not None and a + b > trunc:
                continue
            cf = _frac(c)
            if cf != 0:
                cleaned[(int(a), int(b))] = cf
        self._terms = cleaned
        self._trunc = trunc
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def zero(trunc: Optional[int] = None) -> "BivariatePolynomial":
        return BivariatePolynomial({}, trunc)

    @staticmethod
    def constant(c: Coeff, trunc: Optional[int] = None) -> "BivariatePolynomial":
        return BivariatePolynomial({(0, 0): _frac(c)}, trunc)

    @staticmethod
    def monomial(a: int, b: int, c: Coeff = 1) -> "BivariatePolynomial":
        return BivariatePolynomial({(a, b): _frac(c)})

    @staticmethod
    def var_x() -> "BivariatePolynomial":
        return BivariatePolynomial({(1, 0): Fraction(1)})

    @staticmethod
    def var_y() -> "BivariatePolynomial":
        return BivariatePolynomial({(0, 1): Fraction(1)})

    # -- basic queries ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def trunc(self) -> Optional[int]:
        return self._trunc

    @property
    def is_exact(self) -> bool:
        return self._trunc is None

    def coefficient(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> Union[int, float]:
        """Largest total degree with a nonzero term; -inf for the zero polynomial."""
        if not self._terms:
            return -math.inf
        return max(a + b for (a, b) in self._terms)

    def order(self) -> Union[int, float]:
        """Smallest total degree with a nonzero term; INFINITE_ORDER if zero."""
        if not self._terms:
            return INFINITE_ORDER
        return min(a + b for (a, b) in self._terms)

    def degree_in_y(self) -> int:
        if not self._terms:
            return 0
        return max(b for (_, b) in self._terms)

    # -- equality / hashing ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._terms == other._terms and self._trunc == other._trunc

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._terms.items()), self._trunc))
        return self._hash

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BivariatePolynomial(out, _min_trunc(self._trunc, other._trunc))

    def __sub__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) - c
        return BivariatePolynomial(out, _min_trunc(self._trunc, other._trunc))

    def __neg__(self) -> "BivariatePolynomial":
        return BivariatePolynomial({k: -c for k, c in self._terms.items()}, self._trunc)

    def __mul__(self, other) -> "BivariatePolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        trunc = _min_trunc(self._trunc, other._trunc)
        out: dict = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                a, b = a1 + a2, b1 + b2
                if trunc is not None and a + b > trunc:
                    continue
                k = (a, b)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return BivariatePolynomial(out, trunc)

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "BivariatePolynomial":
        cf = _frac(c)
        return BivariatePolynomial({k: cf * v for k, v in self._terms.items()}, self._trunc)

    def __pow__(self, k: int) -> "BivariatePolynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = BivariatePolynomial.constant(1, self._trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, n: int) -> "BivariatePolynomial":
        return BivariatePolynomial(self._terms, n if self._trunc is None else min(self._trunc, n))

    def as_exact(self) -> "BivariatePolynomial":
        return BivariatePolynomial(self._terms, None)

    # -- calculus / structure ----------------------------------------------------

    def partial(self, axis: int) -> "BivariatePolynomial":
        """Partial derivative along axis 0 (x) or 1 (y).

        A jet valid through degree N differentiates to one valid through N-1.
        """
        out = {}
        for (a, b), c in self._terms.items():
            if axis == 0 and a > 0:
                out[(a - 1, b)] = c * a
            elif axis == 1 and b > 0:
                out[(a, b - 1)] = c * b
        trunc = None if self._trunc is None else self._trunc - 1
        return BivariatePolynomial(out, trunc)

    def homogeneous_part(self, k: int) -> "BivariatePolynomial":
        out = {ab: c for ab, c in self._terms.items() if ab[0] + ab[1] == k}
        return BivariatePolynomial(out, self._trunc)

    def y_slice(self, b: int) -> "UnivariatePolynomial":
        """Coefficient of y^b as a univariate polynomial in x."""
        out = {a: c for (a, bb), c in self._terms.items() if bb == b}
        trunc = None if self._trunc is None else max(self._trunc - b, 0)
        return UnivariatePolynomial(out, trunc)

    def evaluate(self, x, y):
        total = 0
        for (a, b), c in self._terms.items():
            total += c * x**a * y**b
        return total

    # -- printing ------------------------------------------------------------------

    def to_string(self) -> str:
        """Deterministic rendering: graded order, x-major inside each degree."""
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda ab: (ab[0] + ab[1], -ab[0]))
        pieces = []
        for idx, (a, b) in enumerate(keys):
            c = self._terms[(a, b)]
            mono = []
            if a == 1:
                mono.append("x")
            elif a > 1:
                mono.append(f"x^{a}")
            if b == 1:
                mono.append("y")
            elif b > 1:
                mono.append(f"y^{b}")
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = str(mag) + "*" + "*".join(mono)
            if idx == 0:
                pieces.append(body if c > 0 else "-" + body)
            else:
                pieces.append((" + " if c > 0 else " - ") + body)
        return "".join(pieces)

    def __repr__(self):
        tag = "" if self._trunc is None else f", trunc={self._trunc}"
        return f"BivariatePolynomial({self.to_string()}{tag})"


class UnivariatePolynomial:
    """Immutable sparse polynomial (or jet) in a single variable."""

    __slots__ = ("_coeffs", "_trunc", "_hash")

    def __init__(self, coeffs: Mapping[int, Coeff], trunc: Optional[int] = None):
        cleaned = {}
        for d, c in coeffs.items():
            if d < 0:
                raise ValueError("negative degree")
            if trunc is not None and d > trunc:
                continue
            cf = _frac(c)
            if cf != 0:
                cleaned[int(d)] = cf
        self._coeffs = cleaned
        self._trunc = trunc
        self._hash = None

    @staticmethod
    def zero(trunc: Optional[int] = None) -> "UnivariatePolynomial":
        return UnivariatePolynomial({}, trunc)

    @staticmethod
    def monomial(d: int, c: Coeff = 1, trunc: Optional[int] = None) -> "UnivariatePolynomial":
        return UnivariatePolynomial({d: _frac(c)}, trunc)

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    @property
    def trunc(self) -> Optional[int]:
        return self._trunc

    def coefficient(self, d: int) -> Fraction:
        return self._coeffs.get(d, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> Union[int, float]:
        return max(self._coeffs) if self._coeffs else -math.inf

    def order(self) -> Union[int, float]:
        return min(self._coeffs) if self._coeffs else INFINITE_ORDER

    def __eq__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs and self._trunc == other._trunc

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._coeffs.items()), self._trunc))
        return self._hash

    def __add__(self, other):
        out = dict(self._coeffs)
        for d, c in other._coeffs.items():
            out[d] = out.get(d, Fraction(0)) + c
        return UnivariatePolynomial(out, _min_trunc(self._trunc, other._trunc))

    def __sub__(self, other):
        out = dict(self._coeffs)
        for d, c in other._coeffs.items():
            out[d] = out.get(d, Fraction(0)) - c
        return UnivariatePolynomial(out, _min_trunc(self._trunc, other._trunc))

    def __neg__(self):
        return UnivariatePolynomial({d: -c for d, c in self._coeffs.items()}, self._trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        trunc = _min_trunc(self._trunc, other._trunc)
        out: dict = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                d = d1 + d2
                if trunc is not None and d > trunc:
                    continue
                out[d] = out.get(d, Fraction(0)) + c1 * c2
        return UnivariatePolynomial(out, trunc)

    __rmul__ = __mul__

    def scale(self, c: Coeff):
        cf = _frac(c)
        return UnivariatePolynomial({d: cf * v for d, v in self._coeffs.items()}, self._trunc)

    def truncate(self, n: int) -> "UnivariatePolynomial":
        return UnivariatePolynomial(self._coeffs, n if self._trunc is None else min(self._trunc, n))

    def evaluate(self, x):
        total = 0
        for d, c in self._coeffs.items():
            total += c * x**d
        return total

    def to_bivariate(self, axis: int = 0) -> BivariatePolynomial:
        if axis == 0:
            terms = {(d, 0): c for d, c in self._coeffs.items()}
        else:
            terms = {(0, d): c for d, c in self._coeffs.items()}
        return BivariatePolynomial(terms, self._trunc)

    def to_string(self) -> str:
        return self.to_bivariate(0).to_string()

    def __repr__(self):
        tag = "" if self._trunc is None else f", trunc={self._trunc}"
        return f"UnivariatePolynomial({self.to_string()}{tag})"


@dataclass(frozen=True)
class LinearMap2:
    """Invertible 2x2 rational matrix acting on the plane: (x, y) -> (ax+by, cx+dy)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.det() == 0:
            raise ValueError("singular linear map")

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "LinearMap2":
        det = self.det()
        return LinearMap2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __matmul__(self, other: "LinearMap2") -> "LinearMap2":
        return LinearMap2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, x, y):
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    @staticmethod
    def identity() -> "LinearMap2":
        return LinearMap2(1, 0, 0, 1)

    @staticmethod
    def swap() -> "LinearMap2":
        return LinearMap2(0, 1, 1, 0)


# -- substitution -------------------------------------------------------------


def compose(p: BivariatePolynomial, sx: BivariatePolynomial, sy: BivariatePolynomial) -> BivariatePolynomial:
    """p(sx, sy) with powers cached; truncation follows the tightest input."""
    trunc = _min_trunc(p.trunc, _min_trunc(sx.trunc, sy.trunc))
    one = BivariatePolynomial.constant(1, trunc)
    pow_x = {0: one}
    pow_y = {0: one}

    def power(cache, base, k):
        if k not in cache:
            cache[k] = power(cache, base, k - 1) * base
        return cache[k]

    sxt = sx if trunc is None else sx.truncate(trunc)
    syt = sy if trunc is None else sy.truncate(trunc)
    total = BivariatePolynomial.zero(trunc)
    for (a, b), c in sorted(p.terms.items()):
        total = total + (power(pow_x, sxt, a) * power(pow_y, syt, b)).scale(c)
    return total


def apply_linear(p: BivariatePolynomial, m: LinearMap2) -> BivariatePolynomial:
    """Pull back p along the linear map: result(x) = p(m(x))."""
    sx = BivariatePolynomial({(1, 0): m.a, (0, 1): m.b})
    sy = BivariatePolynomial({(1, 0): m.c, (0, 1): m.d})
    return compose(p, sx, sy)


def apply_shear(p: BivariatePolynomial, psi: UnivariatePolynomial) -> BivariatePolynomial:
    """result(x, y) = p(x, y + psi(x)); the jet truncation of psi propagates."""
    sx = BivariatePolynomial({(1, 0): Fraction(1)}, psi.trunc)
    sy = BivariatePolynomial({(0, 1): Fraction(1)}, psi.trunc) + psi.to_bivariate(0)
    return compose(p, sx, sy)


def substitute_y(p: BivariatePolynomial, u: UnivariatePolynomial) -> UnivariatePolynomial:
    """p(x, u(x)) as a univariate polynomial, by Horner in y."""
    trunc = _min_trunc(p.trunc, u.trunc)
    ut = u if trunc is None else u.truncate(trunc)
    result = UnivariatePolynomial.zero(trunc)
    for b in range(p.degree_in_y(), -1, -1):
        slice_b = p.y_slice(b)
        result = result * ut + UnivariatePolynomial(slice_b.coeffs, trunc)
    return result


def homogeneous_part(p: BivariatePolynomial, k: int) -> BivariatePolynomial:
    """Sum of the terms of total degree exactly k."""
    return p.homogeneous_part(k)


def univariate_order(q: UnivariatePolynomial) -> Union[int, float]:
    """Smallest degree carrying a nonzero coefficient; INFINITE_ORDER for zero."""
    return q.order()


def series_inverse(u: UnivariatePolynomial, trunc: int) -> UnivariatePolynomial:
    """Multiplicative inverse of a unit jet (nonzero constant term), mod x^(trunc+1)."""
    c0 = u.coefficient(0)
    if c0 == 0:
        raise ValueError("series has no constant term, not invertible")
    inv = {0: 1 / c0}
    coeffs = u.coeffs
    for d in range(1, trunc + 1):
        acc = Fraction(0)
        for j, cj in coeffs.items():
            if 0 < j <= d:
                acc += cj * inv.get(d - j, Fraction(0))
        inv[d] = -acc / c0
    return UnivariatePolynomial(inv, trunc)


def series_divide(num: UnivariatePolynomial, den: UnivariatePolynomial, trunc: int) -> UnivariatePolynomial:
    """num/den as a jet mod x^(trunc+1); requires order(num) >= order(den)."""
    s = den.order()
    if s is INFINITE_ORDER:
        raise ZeroDivisionError("division by the zero jet")
    if num.is_zero():
        return UnivariatePolynomial.zero(trunc)
    if num.order() < s:
        raise ValueError("quotient is not a power series")
    num_shift = UnivariatePolynomial({d - s: c for d, c in num.coeffs.items()}, None)
    den_shift = UnivariatePolynomial({d - s: c for d, c in den.coeffs.items()}, None)
    return (num_shift.truncate(trunc) * series_inverse(den_shift, trunc)).truncate(trunc)


# -- parsing ---------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_space()
        if self.pos >= len(self.text):
            return None, self.pos
        ch = self.text[self.pos]
        if ch.isdigit():
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            if j < len(self.text) and self.text[j] == ".":
                raise ParseError("non-rational coefficient (decimal point)", j)
            return ("int", int(self.text[self.pos:j]), j - self.pos), self.pos
        if ch in "xy":
            return ("var", ch, 1), self.pos
        if ch in "+-*^()/":
            return ("op", ch, 1), self.pos
        raise ParseError(f"unexpected character {ch!r}", self.pos)

    def next(self):
        tok, pos = self.peek()
        if tok is not None:
            self.pos = pos + tok[2]
        return tok, pos


class _Parser:
    """Recursive descent for: sums of terms; term = factors joined by '*' or
    juxtaposition; factor = atom ['^' int]; atom = rational | x | y | (expr)."""

    def __init__(self, text: str):
        self.tz = _Tokenizer(text)

    def parse(self) -> BivariatePolynomial:
        result = self.expression()
        tok, pos = self.tz.peek()
        if tok is not None:
            raise ParseError(f"unexpected trailing input {tok[1]!r}", pos)
        return result

    def expression(self) -> BivariatePolynomial:
        tok, _ = self.tz.peek()
        negate = False
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.tz.next()
            negate = tok[1] == "-"
        total = self.term()
        if negate:
            total = -total
        while True:
            tok, _ = self.tz.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                break
            self.tz.next()
            rhs = self.term()
            total = total - rhs if tok[1] == "-" else total + rhs
        return total

    def term(self) -> BivariatePolynomial:
        total = self.factor()
        while True:
            tok, _ = self.tz.peek()
            if tok is None:
                break
            if tok[0] == "op" and tok[1] == "*":
                self.tz.next()
                total = total * self.factor()
            elif tok[0] in ("int", "var") or (tok[0] == "op" and tok[1] == "("):
                total = total * self.factor()  # juxtaposition
            else:
                break
        return total

    def factor(self) -> BivariatePolynomial:
        base = self.atom()
        tok, _ = self.tz.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.tz.next()
            tok, pos = self.tz.next()
            if tok is not None and tok[0] == "op" and tok[1] == "-":
                raise ParseError("negative exponent", pos)
            if tok is None or tok[0] != "int":
                raise ParseError("exponent must be a nonnegative integer", pos)
            base = base ** tok[1]
        return base

    def atom(self) -> BivariatePolynomial:
        tok, pos = self.tz.next()
        if tok is None:
            raise ParseError("unexpected end of input", pos)
        if tok[0] == "int":
            value = Fraction(tok[1])
            nxt, _ = self.tz.peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "/":
                self.tz.next()
                den_tok, den_pos = self.tz.next()
                if den_tok is None or den_tok[0] != "int":
                    raise ParseError("denominator must be an integer", den_pos)
                if den_tok[1] == 0:
                    raise ParseError("zero denominator", den_pos)
                value = Fraction(tok[1], den_tok[1])
            return BivariatePolynomial.constant(value)
        if tok[0] == "var":
            return BivariatePolynomial.var_x() if tok[1] == "x" else BivariatePolynomial.var_y()
        if tok[0] == "op" and tok[1] == "(":
            inner = self.expression()
            close, cpos = self.tz.next()
            if close is None or close[0] != "op" or close[1] != ")":
                raise ParseError("expected ')'", cpos)
            return inner
        raise ParseError(f"unexpected token {tok[1]!r}", pos)


def parse_polynomial(text: str) -> BivariatePolynomial:
    """Parse polynomial text in x, y with exact rational coefficients.

    Grammar: terms joined by + and -; a term is rationals and monomials joined
    by '*' (or juxtaposition); powers use '^' with nonnegative integer
    exponents; parenthesized subexpressions may be raised to powers, e.g.
    ``(y - x^2)^2 + 1/3*x^7``.
    """
    return _Parser(text).parse()
