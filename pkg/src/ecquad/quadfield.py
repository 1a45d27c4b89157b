#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Exact arithmetic in K = Q(sqrt(d)) and root finding inside K."""

import logging
import re
from fractions import Fraction
from typing import TYPE_CHECKING

from sympy import Poly as SympyPoly
from sympy import Symbol

from . import poly
from .errors import DomainError
from .exactnum import (
    clear_denominators,
    format_rat,
    is_square,
    parse_rat,
    rational_sqrt,
    squarefree_decompose,
)

if TYPE_CHECKING:
    from typing import Iterator, List, Optional, Sequence, Tuple, Union

    RatLike = Union[int, Fraction]
    Scalar = Union[int, Fraction, "QuadElem"]

# pylint: disable=consider-using-f-string

TERM_RE = re.compile(r"[+-]?[^+-]+")
GEN_SYMBOL = "s"
_X = Symbol("x")


class QuadField(object):
    """The field Q(sqrt(d)) for squarefree d; d = 1 stands for Q itself."""

    __slots__ = ("d",)

    characteristic = 0

    def __init__(self, d):
        # type: (int) -> None
        """
        Create the field.

        :param d: Nonzero integer; its square factor is dropped

        A caller passing a non-squarefree d must fold the square factor
        into element coordinates itself.
        """

        if d == 0:
            raise DomainError("Q(sqrt(0)) is not a field")
        decomp = squarefree_decompose(d)
        if decomp.square_root_of_cofactor != 1:
            logging.info(
                "normalized field parameter %s to %s",
                d,
                decomp.squarefree_part,
            )
        object.__setattr__(self, "d", decomp.squarefree_part)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("QuadField is immutable")

    def __eq__(self, other):
        # type: (object) -> bool
        return isinstance(other, QuadField) and other.d == self.d

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(("QuadField", self.d))

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[int]]
        return (QuadField, (self.d,))

    def __repr__(self):
        # type: () -> str
        return "QuadField({})".format(self.d)

    def __str__(self):
        # type: () -> str
        if self.d == 1:
            return "Q"
        return "Q(sqrt({}))".format(self.d)

    @property
    def is_rational(self):
        # type: () -> bool
        """True when the field is Q."""

        return self.d == 1

    @property
    def degree(self):
        # type: () -> int
        """Degree [K:Q]."""

        return 1 if self.d == 1 else 2

    @property
    def zero(self):
        # type: () -> QuadElem
        """Additive identity."""

        return QuadElem(self, 0, 0)

    @property
    def one(self):
        # type: () -> QuadElem
        """Multiplicative identity."""

        return QuadElem(self, 1, 0)

    @property
    def gen(self):
        # type: () -> QuadElem
        """The element sqrt(d)."""

        return QuadElem(self, 0, 1)

    def __call__(self, value):
        # type: (object) -> QuadElem
        """Coerce an int, Fraction, string or QuadElem into the field."""

        if isinstance(value, QuadElem):
            if value.field == self:
                return value
            if value.b == 0:
                return QuadElem(self, value.a, 0)
            raise DomainError(
                "{} does not lie in {}".format(value, self)
            )
        if isinstance(value, str):
            return parse_quad(value, self)
        if isinstance(value, (int, Fraction)):
            return QuadElem(self, value, 0)
        raise DomainError("cannot coerce {!r} into {}".format(value, self))


class QuadElem(object):
    """The element a + b*sqrt(d) of a QuadField, a and b rational."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b=0):
        # type: (QuadField, RatLike, RatLike) -> None
        """
        Create an element.

        :param field: The ambient field
        :param a: Rational part
        :param b: Coefficient of sqrt(d)
        """

        a = Fraction(a)
        b = Fraction(b)
        if field.d == 1 and b:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[QuadField, Fraction, Fraction]]
        return (QuadElem, (self.field, self.a, self.b))

    def _parts(self, other):
        # type: (object) -> Optional[Tuple[QuadField, Fraction, Fraction]]
        """Return (field, a, b) of other lifted next to self."""

        if isinstance(other, QuadElem):
            if other.field == self.field or other.b == 0:
                return self.field, other.a, other.b
            if self.b == 0:
                return other.field, other.a, other.b
            raise DomainError(
                "mixing elements of {} and {}".format(self.field, other.field)
            )
        if isinstance(other, (int, Fraction)):
            return self.field, Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        # type: (object) -> QuadElem
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        field, a, b = parts
        return QuadElem(field, self.a + a, self.b + b)

    __radd__ = __add__

    def __neg__(self):
        # type: () -> QuadElem
        return QuadElem(self.field, -self.a, -self.b)

    def __pos__(self):
        # type: () -> QuadElem
        return self

    def __sub__(self, other):
        # type: (object) -> QuadElem
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        field, a, b = parts
        return QuadElem(field, self.a - a, self.b - b)

    def __rsub__(self, other):
        # type: (object) -> QuadElem
        return (-self).__add__(other)

    def __mul__(self, other):
        # type: (object) -> QuadElem
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        field, a, b = parts
        if not b:
            return QuadElem(field, self.a * a, self.b * a)
        if not self.b:
            return QuadElem(field, self.a * a, self.a * b)
        return QuadElem(
            field,
            self.a * a + self.b * b * field.d,
            self.a * b + self.b * a,
        )

    __rmul__ = __mul__

    def inverse(self):
        # type: () -> QuadElem
        """Multiplicative inverse."""

        if not self.b:
            if not self.a:
                raise ZeroDivisionError("inverse of zero in {}".format(
                    self.field
                ))
            return QuadElem(self.field, 1 / self.a, 0)
        norm = self.norm()
        return QuadElem(self.field, self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        # type: (object) -> QuadElem
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        field, a, b = parts
        if not b:
            if not a:
                raise ZeroDivisionError("division by zero in {}".format(field))
            return QuadElem(field, self.a / a, self.b / a)
        return self * QuadElem(field, a, b).inverse()

    def __rtruediv__(self, other):
        # type: (object) -> QuadElem
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        field, a, b = parts
        return QuadElem(field, a, b) * self.inverse()

    def __pow__(self, exponent):
        # type: (int) -> QuadElem
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = QuadElem(self.field, 1, 0)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        # type: (object) -> bool
        if isinstance(other, QuadElem):
            if self.field != other.field and (self.b or other.b):
                return False
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __ne__(self, other):
        # type: (object) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        # type: () -> bool
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        # type: () -> str
        return "QuadElem({}, {!r})".format(self.field.d, format_quad(self))

    def __str__(self):
        # type: () -> str
        return format_quad(self)

    def conjugate(self):
        # type: () -> QuadElem
        """Apply the nontrivial automorphism sqrt(d) -> -sqrt(d)."""

        return QuadElem(self.field, self.a, -self.b)

    def norm(self):
        # type: () -> Fraction
        """Field norm a**2 - d*b**2."""

        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self):
        # type: () -> Fraction
        """Field trace 2a."""

        return 2 * self.a

    def is_rational(self):
        # type: () -> bool
        """True when the element lies in Q."""

        return not self.b

    def to_rational(self):
        # type: () -> Fraction
        """Return the element as a Fraction; it must be rational."""

        if self.b:
            raise DomainError("{} is not rational".format(self))
        return self.a

    def sort_key(self):
        # type: () -> Tuple[Fraction, Fraction]
        """Lexicographic key on (a, b) used for canonical choices."""

        return (self.a, self.b)


def format_quad(value):
    # type: (Scalar) -> str
    """
    Print an element in the "a+b*s" syntax, s standing for sqrt(d).

    :param value: QuadElem or rational
    """

    if not isinstance(value, QuadElem):
        return format_rat(value)
    if not value.b:
        return format_rat(value.a)
    coeff = value.b
    if coeff == 1:
        irrational = GEN_SYMBOL
    elif coeff == -1:
        irrational = "-" + GEN_SYMBOL
    else:
        irrational = "{}*{}".format(format_rat(coeff), GEN_SYMBOL)
    if not value.a:
        return irrational
    if not irrational.startswith("-"):
        irrational = "+" + irrational
    return format_rat(value.a) + irrational


def parse_quad(text, field):
    # type: (str, QuadField) -> QuadElem
    """
    Parse the "a+b*s" syntax.

    :param text: Sum of rational terms and multiples of s,
                 e.g. "-65/1344+5/1344*s"
    :param field: The field the element belongs to
    """

    compact = "".join(text.split())
    if not compact:
        raise DomainError("empty field element")
    terms = TERM_RE.findall(compact)
    if "".join(terms) != compact:
        raise DomainError("cannot parse field element {!r}".format(text))
    a = Fraction(0)
    b = Fraction(0)
    for term in terms:
        if term.endswith(GEN_SYMBOL):
            coeff = term[: -len(GEN_SYMBOL)]
            if coeff.endswith("*"):
                coeff = coeff[:-1]
                b += parse_rat(coeff)
            elif coeff in ("", "+"):
                b += 1
            elif coeff == "-":
                b -= 1
            else:
                raise DomainError(
                    "cannot parse field element {!r}".format(text)
                )
        else:
            a += parse_rat(term)
    if b and field.d == 1:
        logging.debug("folding sqrt(1) in %s", text)
    return QuadElem(field, a, b)


def sqrt_in_K(value):
    # type: (QuadElem) -> List[QuadElem]
    """
    Return the square roots of value inside its field.

    :param value: Element of K

    a + b*sqrt(d) is a square iff s**2 + d*t**2 = a and 2*s*t = b have a
    rational solution; eliminating t gives s**2 = (a +- sqrt(N))/2 with
    N = a**2 - d*b**2 the norm, so everything reduces to rational squares.
    """

    field = value.field
    if not value:
        return [field.zero]
    roots = []  # type: List[QuadElem]
    if not value.b:
        if is_square(value.a):
            root = QuadElem(field, rational_sqrt(value.a), 0)
            roots = [root, -root]
        elif field.d != 1 and is_square(value.a / field.d):
            root = QuadElem(field, 0, rational_sqrt(value.a / field.d))
            roots = [root, -root]
    else:
        norm = value.norm()
        if is_square(norm):
            norm_root = rational_sqrt(norm)
            for half in ((value.a + norm_root) / 2, (value.a - norm_root) / 2):
                if half and is_square(half):
                    s = rational_sqrt(half)
                    root = QuadElem(field, s, value.b / (2 * s))
                    roots = [root, -root]
                    break
    return sorted(roots, key=QuadElem.sort_key)


def solve_quadratic_in_K(p, q, field=None):
    # type: (Scalar, Scalar, Optional[QuadField]) -> List[QuadElem]
    """
    Solve y**2 + p*y + q = 0 over K.

    :param p: Linear coefficient
    :param q: Constant coefficient
    :param field: K; inferred from p or q when they are QuadElem

    Returns the distinct solutions sorted canonically; the list is empty
    when the discriminant is not a square in K.
    """

    if field is None:
        for value in (p, q):
            if isinstance(value, QuadElem):
                field = value.field
                break
        else:
            field = QuadField(1)
    p_elem = field(p)
    q_elem = field(q)
    disc = p_elem * p_elem - 4 * q_elem
    solutions = {(-p_elem + root) / 2 for root in sqrt_in_K(disc)}
    return sorted(solutions, key=QuadElem.sort_key)


def _integer_coefficients(coeffs):
    # type: (Sequence[Fraction]) -> List[int]
    lcm = clear_denominators(list(coeffs))
    return [int(c * lcm) for c in coeffs]


def rational_factors(coeffs):
    # type: (Sequence[Fraction]) -> Iterator[List[int]]
    """
    Yield the irreducible factors over Q of a rational polynomial.

    :param coeffs: Coefficients, lowest degree first

    Factors come back as integer coefficient lists, lowest degree first.
    """

    ints = _integer_coefficients(coeffs)
    _, factors = SympyPoly(list(reversed(ints)), _X).factor_list()
    for factor, _ in factors:
        yield [int(c) for c in reversed(factor.all_coeffs())]


def _candidate_roots(coeffs, field):
    # type: (Sequence[Fraction], QuadField) -> Iterator[QuadElem]
    for factor in rational_factors(coeffs):
        if len(factor) == 2:
            yield QuadElem(field, Fraction(-factor[0], factor[1]), 0)
        elif len(factor) == 3 and field.d != 1:
            c0, c1, c2 = factor
            ratio = Fraction(c1 * c1 - 4 * c2 * c0, field.d)
            if is_square(ratio):
                t = rational_sqrt(ratio)
                for sign in (1, -1):
                    yield QuadElem(
                        field, Fraction(-c1, 2 * c2), sign * t / (2 * c2)
                    )


def roots_in_K(f, field):
    # type: (Sequence[Scalar], QuadField) -> List[QuadElem]
    """
    Return the multiset of roots of f lying in K.

    :param f: Coefficients, lowest degree first, rational or in K
    :param field: K

    A root u + v*sqrt(d) of f is also a root of the rational polynomial
    f * conj(f), whose K-roots come from its linear factors over Q and
    from its quadratic factors with discriminant in d*Q**2.  Every
    candidate is verified on f exactly and its multiplicity counted by
    repeated division.
    """

    coeffs = poly.trim([field(c) for c in f])
    if not coeffs:
        raise DomainError("the zero polynomial has no finite root set")
    if len(coeffs) == 1:
        return []
    if all(c.is_rational() for c in coeffs):
        rational = [c.a for c in coeffs]
    else:
        rational = [
            c.to_rational()
            for c in poly.mul(coeffs, [c.conjugate() for c in coeffs])
        ]
    roots = []  # type: List[QuadElem]
    for candidate in sorted(
        set(_candidate_roots(rational, field)), key=QuadElem.sort_key
    ):
        rest = coeffs
        while len(rest) > 1:
            quotient, remainder = poly.divide_linear(rest, candidate)
            if remainder:
                break
            roots.append(candidate)
            rest = quotient
    return roots


QQ = QuadField(1)
