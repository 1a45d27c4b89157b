#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Exact rationals and the integer number theory the other modules share."""

import logging
import math
import re
from collections import namedtuple
from fractions import Fraction
from typing import TYPE_CHECKING

from sympy import isprime
from sympy.ntheory import pollard_pm1, pollard_rho

from .errors import DomainError, UnfactoredError

if TYPE_CHECKING:
    from typing import Dict, List, Optional, Union

    RatLike = Union[int, Fraction]

# pylint: disable=consider-using-f-string

# Rationals are kept in lowest terms with a positive denominator by
# fractions.Fraction itself.
Rat = Fraction

TRIAL_DIVISION_LIMIT = 10**6
DEFAULT_RHO_STEPS = 200000
RHO_RETRIES = 6
PM1_BOUND = 10**5

RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")

_BUDGET = {"rho_steps": DEFAULT_RHO_STEPS}


def set_rho_steps(steps):
    # type: (int) -> None
    """Set the process-wide Pollard-rho step budget."""

    if steps < 1:
        raise DomainError("rho step budget must be positive")
    _BUDGET["rho_steps"] = steps


SquarefreeDecomp = namedtuple(
    "SquarefreeDecomp", ["squarefree_part", "square_root_of_cofactor"]
)


def parse_rat(text):
    # type: (str) -> Fraction
    """
    Parse a rational written as "p/q" or "p".

    :param text: The textual rational
    """

    text = text.strip()
    if not RAT_RE.match(text):
        raise DomainError("not a rational: {!r}".format(text))
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise DomainError("zero denominator in {!r}".format(text)) from None


def format_rat(value):
    # type: (RatLike) -> str
    """Print a rational in canonical lowest terms."""

    return str(Fraction(value))


def jacobi(a, n):
    # type: (int, int) -> int
    """
    Compute the Jacobi symbol (a|n).

    :param a: Any integer
    :param n: Odd positive modulus

    For prime n this is the Legendre symbol.
    """

    if n <= 0 or not n & 1:
        raise DomainError(
            "jacobi needs an odd positive modulus, got {}".format(n)
        )
    if n == 1:
        return 1
    acc = 1
    while True:
        a %= n
        if a == 0:
            return 0
        while not a & 1:
            a >>= 1
            if (n & 7) not in (1, 7):
                acc = -acc
        if a == 1:
            return acc
        if (a & 3) == 3 and (n & 3) == 3:
            acc = -acc
        a, n = n, a


def valuation(value, p):
    # type: (RatLike, int) -> int
    """
    Return the p-adic valuation of a nonzero rational.

    :param value: Nonzero integer or rational
    :param p: Prime
    """

    value = Fraction(value)
    if value == 0:
        raise DomainError("valuation of zero is infinite")
    num, den = value.numerator, value.denominator
    count = 0
    while num % p == 0:
        num //= p
        count += 1
    while den % p == 0:
        den //= p
        count -= 1
    return count


def is_square(value):
    # type: (RatLike) -> bool
    """Tell whether a rational is the square of a rational."""

    value = Fraction(value)
    if value < 0:
        return False
    num, den = value.numerator, value.denominator
    return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den


def rational_sqrt(value):
    # type: (RatLike) -> Fraction
    """Return the nonnegative square root of a rational square."""

    value = Fraction(value)
    if not is_square(value):
        raise DomainError("{} is not a rational square".format(value))
    return Fraction(math.isqrt(value.numerator), math.isqrt(value.denominator))


def _trial_divide(n, factors, limit):
    # type: (int, Dict[int, int], int) -> int
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    i = 5
    step = 2
    while i <= limit and i * i <= n:
        while n % i == 0:
            factors[i] = factors.get(i, 0) + 1
            n //= i
        i += step
        step = 6 - step
    if 1 < n and n < i * i:
        # no factor below i, so n is prime
        factors[n] = factors.get(n, 0) + 1
        n = 1
    return n


def _split(n, rho_steps):
    # type: (int, int) -> int
    for seed in range(RHO_RETRIES):
        divisor = pollard_rho(
            n, s=2 + seed, a=1 + seed, retries=0, max_steps=rho_steps
        )
        if divisor and divisor not in (1, n):
            return int(divisor)
    divisor = pollard_pm1(n, B=PM1_BOUND, retries=2)
    if divisor and divisor not in (1, n):
        return int(divisor)
    return 0


def factorize(n, rho_steps=None):
    # type: (int, Optional[int]) -> Dict[int, int]
    """
    Factor the absolute value of a nonzero integer.

    :param n: Nonzero integer
    :param rho_steps: Step budget for every Pollard-rho attempt, the
                      process-wide budget by default

    Trial division runs up to TRIAL_DIVISION_LIMIT, composite cofactors go
    to Pollard rho and then Pollard p-1.  A cofactor that resists both
    raises UnfactoredError carrying what was found so far.
    """

    if n == 0:
        raise DomainError("cannot factor zero")
    if rho_steps is None:
        rho_steps = _BUDGET["rho_steps"]
    factors = {}  # type: Dict[int, int]
    rest = _trial_divide(abs(n), factors, TRIAL_DIVISION_LIMIT)
    pending = [rest] if rest > 1 else []  # type: List[int]
    while pending:
        m = pending.pop()
        if isprime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            pending.extend((root, root))
            continue
        divisor = _split(m, rho_steps)
        if not divisor:
            logging.info("factorization budget exhausted on %s", m)
            partial = dict(factors)
            raise UnfactoredError(
                "could not factor {} within budget".format(m), partial, m
            )
        pending.extend((divisor, m // divisor))
    return dict(sorted(factors.items()))


def squarefree_decompose(n, rho_steps=None):
    # type: (int, Optional[int]) -> SquarefreeDecomp
    """
    Write n = s * r**2 with s squarefree and r positive.

    :param n: Nonzero integer
    :param rho_steps: Pollard-rho step budget
    """

    if n == 0:
        raise DomainError("squarefree part of zero is undefined")
    squarefree = -1 if n < 0 else 1
    root = 1
    for p, e in factorize(n, rho_steps).items():
        if e & 1:
            squarefree *= p
        root *= p ** (e // 2)
    return SquarefreeDecomp(squarefree, root)


def squarefree_part_of_rational(value, rho_steps=None):
    # type: (RatLike, Optional[int]) -> int
    """Return the squarefree integer s with value = s * (rational)**2."""

    value = Fraction(value)
    return squarefree_decompose(
        value.numerator * value.denominator, rho_steps
    ).squarefree_part


def is_squarefree(n):
    # type: (int) -> bool
    """Tell whether a nonzero integer has no repeated prime factor."""

    return all(e == 1 for e in factorize(n).values())


def is_fundamental_discriminant(n):
    # type: (int) -> bool
    """Tell whether n is the discriminant of a quadratic field."""

    if n in (0, 1):
        return False
    if n % 4 == 1:
        return is_squarefree(n)
    if n % 4 == 0:
        m = n // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def clear_denominators(values):
    # type: (List[Fraction]) -> int
    """Return the least common denominator of a list of rationals."""

    lcm = 1
    for value in values:
        den = Fraction(value).denominator
        lcm = lcm * den // math.gcd(lcm, den)
    return lcm
