#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first.  Coefficients
may be ints, Fractions, QuadElem or FpElem values; nothing here cares which
as long as they support the ring operations.
"""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Any, List, Sequence, Tuple

    Poly = List[Any]


def trim(poly):
    # type: (Sequence[Any]) -> Poly
    """Drop trailing zero coefficients."""

    out = list(poly)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(poly):
    # type: (Sequence[Any]) -> int
    """Return the degree, -1 for the zero polynomial."""

    return len(trim(poly)) - 1


def add(left, right):
    # type: (Sequence[Any], Sequence[Any]) -> Poly
    """Sum of two polynomials."""

    if len(left) < len(right):
        left, right = right, left
    out = list(left)
    for i, coeff in enumerate(right):
        out[i] = out[i] + coeff
    return trim(out)


def neg(poly):
    # type: (Sequence[Any]) -> Poly
    """Additive inverse."""

    return [-c for c in poly]


def sub(left, right):
    # type: (Sequence[Any], Sequence[Any]) -> Poly
    """Difference of two polynomials."""

    return add(left, neg(right))


def scale(poly, factor):
    # type: (Sequence[Any], Any) -> Poly
    """Multiply every coefficient by a scalar."""

    return trim([c * factor for c in poly])


def mul(left, right):
    # type: (Sequence[Any], Sequence[Any]) -> Poly
    """Product of two polynomials (schoolbook)."""

    left, right = trim(left), trim(right)
    if not left or not right:
        return []
    zero = left[0] - left[0]
    out = [zero] * (len(left) + len(right) - 1)
    for i, lcoeff in enumerate(left):
        if lcoeff == 0:
            continue
        for j, rcoeff in enumerate(right):
            out[i + j] = out[i + j] + lcoeff * rcoeff
    return trim(out)


def power(poly, exponent):
    # type: (Sequence[Any], int) -> Poly
    """Raise to a nonnegative integer power."""

    result = [poly[0] ** 0] if poly else [1]
    base = list(poly)
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result


def evaluate(poly, point):
    # type: (Sequence[Any], Any) -> Any
    """Evaluate by Horner's rule."""

    acc = point - point
    for coeff in reversed(poly):
        acc = acc * point + coeff
    return acc


def divide_linear(poly, root):
    # type: (Sequence[Any], Any) -> Tuple[Poly, Any]
    """
    Divide by (x - root).

    :param poly: Dividend
    :param root: The root of the linear divisor

    Returns the quotient and the remainder, which equals poly(root).
    """

    poly = trim(poly)
    if not poly:
        return [], root - root
    quotient = [poly[-1]]
    for coeff in reversed(poly[:-1]):
        quotient.append(coeff + quotient[-1] * root)
    remainder = quotient.pop()
    quotient.reverse()
    return quotient, remainder


def divmod_poly(dividend, divisor):
    # type: (Sequence[Any], Sequence[Any]) -> Tuple[Poly, Poly]
    """Euclidean division over a field."""

    divisor = trim(divisor)
    if not divisor:
        raise ZeroDivisionError("polynomial division by zero")
    rest = trim(dividend)
    if len(rest) < len(divisor):
        return [], rest
    lead = divisor[-1]
    zero = lead - lead
    quotient = [zero] * (len(rest) - len(divisor) + 1)
    while len(rest) >= len(divisor):
        shift = len(rest) - len(divisor)
        factor = rest[-1] / lead
        quotient[shift] = factor
        for i, coeff in enumerate(divisor):
            rest[shift + i] = rest[shift + i] - factor * coeff
        rest.pop()
        rest = trim(rest)
    return trim(quotient), rest


def reverse(poly, deg):
    # type: (Sequence[Any], int) -> Poly
    """Return x**deg * poly(1/x) for deg >= degree(poly)."""

    padded = list(poly) + [poly[0] - poly[0]] * (deg + 1 - len(poly))
    return trim(list(reversed(padded)))


def xgcd(left, right):
    # type: (Sequence[Any], Sequence[Any]) -> Tuple[Poly, Poly, Poly]
    """
    Extended Euclid over a field.

    Returns (g, s, t) with s*left + t*right = g and g monic.
    """

    old_r, r = trim(left), trim(right)
    if not old_r and not r:
        raise ZeroDivisionError("gcd of two zero polynomials")
    unit = (old_r or r)[-1] ** 0
    old_s, s = [unit], []  # type: Poly, Poly
    old_t, t = [], [unit]  # type: Poly, Poly
    while r:
        quotient, remainder = divmod_poly(old_r, r)
        old_r, r = r, remainder
        old_s, s = s, sub(old_s, mul(quotient, s))
        old_t, t = t, sub(old_t, mul(quotient, t))
    lead = old_r[-1]
    return (
        scale(old_r, 1 / lead),
        scale(old_s, 1 / lead),
        scale(old_t, 1 / lead),
    )
