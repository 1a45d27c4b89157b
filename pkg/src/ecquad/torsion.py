#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Division polynomials and torsion subgroups over Q and Q(sqrt(d)).

The torsion subgroup is bounded by reducing at good odd primes, then built
one l-primary part at a time: the l-torsion comes from the K-roots of the
l-th division polynomial and every further level from dividing the points
already found by l.  Points are always verified with the exact group law.
"""

import logging
import math
from collections import namedtuple
from functools import lru_cache
from typing import TYPE_CHECKING

from sympy import factorint, primerange
from sympy.ntheory import sqrt_mod

from . import poly
from .curve import CurvePoint, WeierstrassCurve, base_change
from .errors import DomainError, TorsionClassificationError
from .exactnum import jacobi, squarefree_part_of_rational
from .modp import count_points, count_points_ext, reduce_mod_p
from .quadfield import QQ, QuadField, roots_in_K, solve_quadratic_in_K

if TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

    Structure = Tuple[int, int, CurvePoint, CurvePoint]

# pylint: disable=consider-using-f-string,invalid-name

MAX_DIVISION_INDEX = 36
REDUCTION_PRIMES = 12
REDUCTION_PRIME_LIMIT = 5000


class TorsionGroup(namedtuple("TorsionGroup", ["n1", "n2"])):
    """The group Z/n1 x Z/n2 with n1 | n2; n1 = 1 for cyclic groups."""

    __slots__ = ()

    def __new__(cls, n1, n2=None):
        # type: (int, Optional[int]) -> TorsionGroup
        """Create Z/n1 x Z/n2, or the cyclic Z/n1 when n2 is omitted."""

        if n2 is None:
            n1, n2 = 1, n1
        if n1 < 1 or n2 < 1 or n2 % n1:
            raise DomainError(
                "invalid torsion structure {}x{}".format(n1, n2)
            )
        return super(TorsionGroup, cls).__new__(cls, n1, n2)

    @property
    def order(self):
        # type: () -> int
        """Number of elements."""

        return self.n1 * self.n2

    @property
    def is_cyclic(self):
        # type: () -> bool
        """True when n1 = 1."""

        return self.n1 == 1

    def __str__(self):
        # type: () -> str
        if self.n1 == 1:
            return str(self.n2)
        return "{}x{}".format(self.n1, self.n2)


def parse_torsion_group(text):
    # type: (str) -> TorsionGroup
    """Parse "m" or "n1xn2"."""

    parts = text.strip().lower().split("x")
    try:
        numbers = [int(part) for part in parts]
    except ValueError:
        raise DomainError(
            "bad torsion group {!r}".format(text)
        ) from None
    if len(numbers) == 1:
        return TorsionGroup(numbers[0])
    if len(numbers) == 2:
        return TorsionGroup(numbers[0], numbers[1])
    raise DomainError("bad torsion group {!r}".format(text))


RATIONAL_GROUPS = tuple(
    [TorsionGroup(m) for m in range(1, 11)]
    + [TorsionGroup(12)]
    + [TorsionGroup(2, 2 * m) for m in range(1, 5)]
)

QUADRATIC_GROUPS = tuple(
    [TorsionGroup(m) for m in range(1, 19) if m != 17]
    + [TorsionGroup(2, 2 * m) for m in range(1, 7)]
    + [TorsionGroup(3, 3), TorsionGroup(3, 6), TorsionGroup(4, 4)]
)


def is_possible_over_rationals(group):
    # type: (TorsionGroup) -> bool
    """Tell whether some curve over Q has this torsion subgroup."""

    return group in RATIONAL_GROUPS


def is_possible_over_quadratic(group, d=None):
    # type: (TorsionGroup, Optional[int]) -> bool
    """
    Tell whether the group occurs as torsion over a quadratic field.

    :param group: Candidate group
    :param d: Squarefree d of the field, None for "some quadratic field";
              d = 1 means Q itself
    """

    if d == 1:
        return is_possible_over_rationals(group)
    if group not in QUADRATIC_GROUPS:
        return False
    if group.n1 == 3:
        return d in (None, -3)
    if group.n1 == 4:
        return d in (None, -1)
    return True


TorsionData = namedtuple(
    "TorsionData", ["group", "generators", "all_points", "bound"]
)

DivisionPolynomial = namedtuple(
    "DivisionPolynomial", ["m", "reduced", "even", "psi_squared"]
)
DivisionPolynomial.__doc__ = """
psi_m = reduced(x) for odd m and (2y + a1*x + a3) * reduced(x) for even m;
psi_squared is psi_m**2 as a polynomial in x alone.
"""


@lru_cache(maxsize=64)
def _reduced_polynomials(curve, top):
    # type: (WeierstrassCurve, int) -> Tuple[List[Any], ...]
    field = curve.field
    inv = curve.invariants
    b2, b4, b6, b8 = inv.b2, inv.b4, inv.b6, inv.b8
    one = field(1)
    two_div = curve.two_division()
    two_div_sq = poly.mul(two_div, two_div)
    f = [
        [],
        [one],
        [one],
        [b8, 3 * b6, 3 * b4, b2, 3 * one],
        [
            b4 * b8 - b6 * b6,
            b2 * b8 - b4 * b6,
            10 * b8,
            10 * b6,
            5 * b4,
            b2,
            2 * one,
        ],
    ]
    for m in range(5, top + 1):
        k = m // 2
        if m & 1:
            left = poly.mul(f[k + 2], poly.power(f[k], 3))
            right = poly.mul(f[k - 1], poly.power(f[k + 1], 3))
            if k & 1:
                right = poly.mul(right, two_div_sq)
            else:
                left = poly.mul(left, two_div_sq)
            f.append(poly.sub(left, right))
        else:
            inner = poly.sub(
                poly.mul(f[k + 2], poly.mul(f[k - 1], f[k - 1])),
                poly.mul(f[k - 2], poly.mul(f[k + 1], f[k + 1])),
            )
            f.append(poly.mul(f[k], inner))
    return tuple(f[: top + 1])


def division_polynomial(curve, m):
    # type: (WeierstrassCurve, int) -> DivisionPolynomial
    """
    Return the m-th division polynomial of a curve.

    :param curve: Any nonsingular curve
    :param m: Index, 1 <= m <= MAX_DIVISION_INDEX
    """

    if not 1 <= m <= MAX_DIVISION_INDEX:
        raise DomainError(
            "division polynomial index must lie in [1, {}], got {}".format(
                MAX_DIVISION_INDEX, m
            )
        )
    reduced = _reduced_polynomials(curve, m)[m]
    even = not m & 1
    squared = poly.mul(reduced, reduced)
    if even:
        squared = poly.mul(squared, curve.two_division())
    return DivisionPolynomial(m, reduced, even, squared)


def multiplication_numerator(curve, m):
    # type: (WeierstrassCurve, int) -> List[Any]
    """
    Return phi_m with x(m*P) = phi_m(x) / psi_m(x)**2.

    :param curve: Any nonsingular curve
    :param m: Positive multiplier
    """

    if m == 1:
        return [curve.field(0), curve.field(1)]
    f = _reduced_polynomials(curve, m + 1)
    two_div = curve.two_division()
    x = [curve.field(0), curve.field(1)]
    square = poly.mul(f[m], f[m])
    neighbours = poly.mul(f[m + 1], f[m - 1])
    if m & 1:
        return poly.sub(poly.mul(x, square), poly.mul(two_div, neighbours))
    return poly.sub(poly.mul(x, poly.mul(two_div, square)), neighbours)


def _base_field(curve):
    # type: (WeierstrassCurve) -> QuadField
    if not isinstance(curve.field, QuadField):
        raise DomainError("torsion is computed over Q or Q(sqrt(d))")
    return curve.field


def reduction_bound(curve, count=REDUCTION_PRIMES):
    # type: (WeierstrassCurve, int) -> Tuple[int, List[int]]
    """
    Bound the torsion order by reduction at good odd primes.

    :param curve: Curve over Q or over K = Q(sqrt(d))
    :param count: Number of residue fields to use

    Torsion over K injects into E(k) for every residue field k of good
    reduction above an odd prime unramified in K.  Rational curves use
    E(F_p) at split primes and E(F_{p^2}) at inert ones; curves with
    irrational coefficients use the split primes only.  Returns the gcd
    and the primes it used.
    """

    field = _base_field(curve)
    d = field.d
    rational = curve.is_rational()
    model = base_change(curve, QQ) if rational else curve
    bound = 0
    used = []  # type: List[int]
    for p in primerange(3, REDUCTION_PRIME_LIMIT):
        if len(used) >= count:
            break
        p = int(p)
        if d % p == 0:
            continue
        if rational:
            reduction = reduce_mod_p(model, p)
            if not reduction.good:
                continue
            points = count_points(reduction.curve)
            if d != 1 and jacobi(d, p) != 1:
                points = count_points_ext(p + 1 - points, p, 2)
            sizes = [points]
        else:
            if jacobi(d, p) != 1:
                continue
            root = int(sqrt_mod(d % p, p))
            sizes = []
            for branch in sorted({root, p - root}):
                reduction = reduce_mod_p(model, p, branch)
                if reduction.good:
                    sizes.append(count_points(reduction.curve))
            if not sizes:
                continue
        for size in sizes:
            bound = math.gcd(bound, size)
        used.append(p)
        logging.debug("torsion bound after p=%s: %s", p, bound)
    if not used:
        raise DomainError("no good odd prime found for {}".format(curve))
    return bound, used


def _points_above(curve, xs):
    # type: (WeierstrassCurve, Sequence[Any]) -> List[CurvePoint]
    points = []
    for x in sorted(set(xs), key=lambda value: value.sort_key()):
        p, q = curve.y_polynomial(x)
        for y in solve_quadratic_in_K(p, q, curve.field):
            points.append(CurvePoint(curve, x, y))
    return points


def _l_torsion(curve, ell):
    # type: (WeierstrassCurve, int) -> List[CurvePoint]
    if ell == 2:
        xs = roots_in_K(curve.two_division(), curve.field)
    else:
        xs = roots_in_K(division_polynomial(curve, ell).reduced, curve.field)
    return [
        point
        for point in _points_above(curve, xs)
        if (ell * point).is_infinity
    ]


def _divide_by(curve, point, ell):
    # type: (WeierstrassCurve, CurvePoint, int) -> List[CurvePoint]
    """Return every P over K with ell*P = point."""

    numerator = multiplication_numerator(curve, ell)
    denominator = division_polynomial(curve, ell).psi_squared
    target = poly.sub(numerator, poly.scale(denominator, point.x))
    xs = roots_in_K(target, curve.field)
    return [p for p in _points_above(curve, xs) if ell * p == point]


def _primary_part(curve, ell, exponent):
    # type: (WeierstrassCurve, int, int) -> Dict[CurvePoint, int]
    """Map every point of ell-power order to the exponent of its order."""

    found = {curve.infinity: 0}
    frontier = _l_torsion(curve, ell)
    level = 1
    while frontier:
        for point in frontier:
            found[point] = level
        if level >= exponent:
            break
        level += 1
        following = []  # type: List[CurvePoint]
        for point in frontier:
            following.extend(_divide_by(curve, point, ell))
        frontier = [p for p in following if p not in found]
    return found


def _span(first, second, order_first, order_second):
    # type: (CurvePoint, CurvePoint, int, int) -> Set[CurvePoint]
    elements = set()
    row = first.curve.infinity
    for _ in range(order_first):
        current = row
        for _ in range(order_second):
            elements.add(current)
            current = current + second
        row = row + first
    return elements


def _primary_structure(curve, ell, part):
    # type: (WeierstrassCurve, int, Dict[CurvePoint, int]) -> Structure
    """Return (ell**i, ell**j, h, g) with part = <h> + <g>, i <= j."""

    size = len(part)
    total = round(math.log(size, ell)) if size > 1 else 0
    top = max(part.values())
    small = total - top
    ordered = sorted(part, key=CurvePoint.sort_key)
    generator = next(p for p in ordered if part[p] == top)
    if small == 0:
        return 1, ell**top, curve.infinity, generator
    cyclic = _span(generator, curve.infinity, ell**top, 1)
    for candidate in ordered:
        if part[candidate] != small:
            continue
        if (ell ** (small - 1)) * candidate in cyclic:
            continue
        if len(_span(candidate, generator, ell**small, ell**top)) == size:
            return ell**small, ell**top, candidate, generator
    raise TorsionClassificationError(
        "could not split the {}-primary part of {}".format(ell, curve)
    )


def _search_exponents(bound, d):
    # type: (int, int) -> Dict[int, int]
    """Largest l-exponent of a classified group whose order divides bound."""

    groups = RATIONAL_GROUPS if d == 1 else QUADRATIC_GROUPS
    exponents = {}  # type: Dict[int, int]
    for group in groups:
        if bound % group.order or not is_possible_over_quadratic(group, d):
            continue
        for ell, exponent in factorint(group.n2).items():
            ell = int(ell)
            exponents[ell] = max(exponents.get(ell, 0), int(exponent))
    return exponents


def _assemble(curve, bound):
    # type: (WeierstrassCurve, int) -> TorsionData
    field = curve.field
    n1, n2 = 1, 1
    first, second = curve.infinity, curve.infinity
    points = {curve.infinity}
    for ell, exponent in sorted(_search_exponents(bound, field.d).items()):
        part = _primary_part(curve, ell, exponent)
        if len(part) == 1:
            continue
        small, large, h, g = _primary_structure(curve, ell, part)
        logging.debug(
            "%s-primary torsion of %s: Z/%s x Z/%s", ell, curve, small, large
        )
        n1 *= small
        n2 *= large
        first = first + h
        second = second + g
        points = {p + q for p in points for q in part}
    group = TorsionGroup(n1, n2)
    if len(points) != group.order:
        raise TorsionClassificationError(
            "found {} torsion points for group {}".format(len(points), group)
        )
    for point in points:
        if not (n2 * point).is_infinity:
            raise TorsionClassificationError(
                "{} is not killed by {}".format(point, n2)
            )
    if not is_possible_over_quadratic(group, field.d):
        raise TorsionClassificationError(
            "torsion {} over {} is outside the classification".format(
                group, field
            )
        )
    generators = [second] if n1 == 1 else [first, second]
    if group.order == 1:
        generators = []
    return TorsionData(
        group,
        generators,
        sorted(points, key=CurvePoint.sort_key),
        bound,
    )


def torsion_over_Q(curve):
    # type: (WeierstrassCurve) -> TorsionData
    """
    Return the torsion subgroup of a curve over Q.

    :param curve: Curve with rational a-invariants
    """

    if not curve.is_rational():
        raise DomainError("{} is not defined over Q".format(curve))
    model = base_change(curve, QQ)
    bound, primes = reduction_bound(model)
    logging.info("torsion over Q bounded by %s (primes %s)", bound, primes)
    return _assemble(model, bound)


def torsion_over_K(curve, field=None):
    # type: (WeierstrassCurve, Optional[QuadField]) -> TorsionData
    """
    Return the torsion subgroup of a curve over K = Q(sqrt(d)).

    :param curve: Curve over a QuadField
    :param field: K; the curve's own field by default.  A curve over Q
                  is base changed to K.
    """

    if field is not None and field != curve.field:
        curve = base_change(curve, field)
    bound, primes = reduction_bound(curve)
    logging.info(
        "torsion over %s bounded by %s (primes %s)",
        curve.field,
        bound,
        primes,
    )
    return _assemble(curve, bound)


def extra_two_torsion_field(curve):
    # type: (WeierstrassCurve) -> int
    """
    Return the d over which a curve gains its full 2-torsion.

    :param curve: Curve over Q with a rational 2-torsion point

    Returns 1 when the 2-torsion is already rational.
    """

    if not curve.is_rational():
        raise DomainError("{} is not defined over Q".format(curve))
    cubic = [c.to_rational() for c in curve.two_division()]
    roots = sorted(set(roots_in_K(cubic, QQ)), key=lambda r: r.sort_key())
    if not roots:
        raise DomainError("{} has no rational 2-torsion".format(curve))
    if len(roots) == 3:
        return 1
    quadratic, _ = poly.divide_linear(cubic, roots[0].to_rational())
    c0, c1, c2 = quadratic
    return squarefree_part_of_rational(c1 * c1 - 4 * c0 * c2)
