#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Weil and canonical heights, height pairings and independence verdicts.

Heights are absolute: over K = Q(sqrt(d)) every place is weighted by its
local degree and the sum divided by [K:Q], so a rational point has the same
height over Q and over K.  The canonical height uses the normalization
h^(P) = lim 4**-n * h(x(2**n P)).

On a model integral over K the canonical height is

    h^(P) = h(x(P)) + (1/[K:Q]) * sum over places v of n_v * T_v(P)

where T_v is the doubling series sum 4**-(n+1) * log max(|X_n'|, |Z_n'|)
on pairs normalized at v.  Finite places contribute only where P reduces
to a singular point; there the series is summed exactly in p-adic
residues, with valuations capped by the resultant discriminant**2 of the
doubling forms, so no minimal model is needed.  Infinite places are
summed in ball arithmetic: every operation widens a radius by its
rounding, and the tail past the last trusted term is bounded through
Bezout identities for the doubling forms.
"""

import logging
import math
from collections import namedtuple
from fractions import Fraction
from typing import TYPE_CHECKING

import mpmath
from sympy.ntheory import sqrt_mod

from . import poly
from .curve import CurvePoint, WeierstrassCurve, order
from .errors import DomainError, IndeterminateError, UnfactoredError
from .exactnum import clear_denominators, factorize, jacobi, valuation
from .quadfield import QuadElem, QuadField

if TYPE_CHECKING:
    from typing import Any, Iterator, List, Optional, Sequence, Tuple

    Ball = Tuple[Any, Any]
    Residue = Tuple[int, int]

# pylint: disable=consider-using-f-string,invalid-name

DEFAULT_PRECISION = 128
PRECISION_CEILING = 1024
MAX_TORSION_ORDER = 18
RELATION_MULTIPLIERS = 30

VERDICT_INDEPENDENT = "independent"
VERDICT_DEPENDENT = "dependent"
VERDICT_INDETERMINATE = "indeterminate"

_SPLIT = "split"
_INERT = "inert"
_RAMIFIED = "ramified"


class HeightValue(
    namedtuple(
        "HeightValue",
        ["value", "error_bound", "precision", "terms", "primes"],
    )
):
    """
    A real number with a bound on its distance to the true height.

    terms is the number of archimedean doubling steps summed and primes
    the rational primes whose places needed a local correction.
    """

    __slots__ = ()

    def __new__(cls, value, error_bound, precision=0, terms=0, primes=()):
        # type: (Any, Any, int, int, Sequence[int]) -> HeightValue
        return super(HeightValue, cls).__new__(
            cls,
            mpmath.mpf(value),
            mpmath.mpf(error_bound),
            precision,
            terms,
            tuple(primes),
        )

    def __add__(self, other):
        # type: (object) -> HeightValue
        if not isinstance(other, HeightValue):
            return NotImplemented
        return HeightValue(
            self.value + other.value,
            self.error_bound + other.error_bound,
            min(self.precision, other.precision),
        )

    def __sub__(self, other):
        # type: (object) -> HeightValue
        if not isinstance(other, HeightValue):
            return NotImplemented
        return HeightValue(
            self.value - other.value,
            self.error_bound + other.error_bound,
            min(self.precision, other.precision),
        )

    def scaled(self, factor):
        # type: (Any) -> HeightValue
        """Multiply value and error by a real factor."""

        return HeightValue(
            self.value * factor,
            self.error_bound * abs(factor),
            self.precision,
            self.terms,
            self.primes,
        )

    @property
    def lower(self):
        # type: () -> Any
        """Certified lower end."""

        return self.value - self.error_bound

    @property
    def upper(self):
        # type: () -> Any
        """Certified upper end."""

        return self.value + self.error_bound

    def certainly_positive(self):
        # type: () -> bool
        """True when value exceeds its error bound."""

        return self.value > self.error_bound

    def __str__(self):
        # type: () -> str
        return "{} +- {}".format(
            mpmath.nstr(self.value, 20), mpmath.nstr(self.error_bound, 3)
        )


GramMatrix = namedtuple("GramMatrix", ["entries", "determinant"])
GramMatrix.__doc__ = """Symmetric matrix of height pairings with its
determinant; every entry and the determinant are HeightValue."""

IndependenceResult = namedtuple(
    "IndependenceResult",
    ["verdict", "points", "gram", "relation", "precision"],
)


def _to_mpf(value):
    # type: (Fraction) -> Any
    value = Fraction(value)
    return mpmath.mpf(value.numerator) / value.denominator


def _rounding(value, precision):
    # type: (Any, int) -> Any
    return mpmath.ldexp(1 + abs(value), 8 - precision)


Place = namedtuple("Place", ["sign", "complex", "weight"])


def _places(field):
    # type: (QuadField) -> List[Place]
    """Infinite places of K with their local degrees."""

    if field.d == 1:
        return [Place(1, False, 1)]
    if field.d > 0:
        return [Place(1, False, 1), Place(-1, False, 1)]
    return [Place(1, True, 2)]


def _embed(value, field, place):
    # type: (Any, QuadField, Place) -> Any
    """Embed a + b*sqrt(d), dividing out cancellation on real places."""

    if isinstance(value, QuadElem):
        a, b = value.a, value.b
    else:
        a, b = Fraction(value), Fraction(0)
    if not b:
        return _to_mpf(a)
    root = mpmath.sqrt(abs(field.d))
    if place.complex:
        return mpmath.mpc(_to_mpf(a), _to_mpf(b) * root)
    b = b * place.sign
    if (a > 0) == (b > 0) or not a:
        return _to_mpf(a) + _to_mpf(b) * root
    # a and b*sqrt(d) have opposite signs: use the norm to avoid cancellation
    norm = a * a - field.d * b * b
    return _to_mpf(norm) / (_to_mpf(a) - _to_mpf(b) * root)


def _minimal_polynomial(value):
    # type: (QuadElem) -> List[int]
    """Primitive integer minimal polynomial, lowest degree first."""

    coeffs = [value.norm(), -value.trace(), Fraction(1)]
    lcm = clear_denominators(coeffs)
    ints = [int(c * lcm) for c in coeffs]
    common = math.gcd(*ints)
    return [c // common for c in ints]


def weil_height(value, precision=DEFAULT_PRECISION):
    # type: (Any, int) -> HeightValue
    """
    Return the absolute logarithmic Weil height.

    :param value: Rational or element of K
    :param precision: Working precision in bits

    Rationals p/q give log max(|p|, |q|); irrational elements with
    primitive minimal polynomial a*t**2 + b*t + c give the Mahler measure
    form (1/2) * log(|a| * prod max(|x_i|, 1)).
    """

    with mpmath.workprec(precision):
        if not isinstance(value, QuadElem) or value.is_rational():
            rat = (
                value.to_rational()
                if isinstance(value, QuadElem)
                else Fraction(value)
            )
            top = max(abs(rat.numerator), rat.denominator)
            result = mpmath.log(top)
        else:
            lead = _minimal_polynomial(value)[2]
            total = mpmath.log(abs(lead))
            for place in _places(value.field):
                image = abs(_embed(value, value.field, place))
                if image > 1:
                    total += place.weight * mpmath.log(image)
            result = total / 2
        return HeightValue(
            +result, _rounding(result, precision), precision
        )


def _integral_model(curve, point):
    # type: (WeierstrassCurve, CurvePoint) -> Tuple[Any, CurvePoint]
    denominators = []
    for coeff in curve.coefficients:
        denominators.extend((coeff.a, coeff.b))
    u = clear_denominators(denominators)
    if u == 1:
        return curve, point
    scaled = [c * u**w for c, w in zip(curve.coefficients, (1, 2, 3, 4, 6))]
    model = WeierstrassCurve(curve.field, scaled)
    return model, CurvePoint(model, point.x * u**2, point.y * u**3)


def _split_root(d, p, precision):
    # type: (int, int, int) -> Optional[int]
    """A p-adic square root of d modulo p**precision, None unless split."""

    if d == 1:
        return None
    if p == 2:
        if d % 8 != 1:
            return None
    elif d % p == 0 or jacobi(d, p) != 1:
        return None
    modulus = p ** (precision + 1)
    root = int(sqrt_mod(d % modulus, modulus))
    # every precision must pick the same one of the two p-adic roots
    if p == 2:
        if root % 4 != 1:
            root = modulus - root
    elif root % p != int(sqrt_mod(d % p, p)):
        root = modulus - root
    return root % p**precision


def _residue(value, modulus):
    # type: (Fraction, int) -> int
    return value.numerator * pow(value.denominator, -1, modulus) % modulus


class _LocalField(object):
    """
    A prime of K above p, with integral elements held modulo p**digits.

    Residues are integer pairs (a, b) for a + b*t with t**2 = trace*t +
    norm.  Over Q and at split primes b is zero and a is the image of the
    element under sqrt(d) -> sign * (p-adic root of d).  Valuations count
    powers of the prime itself, so they are halved p-adic valuations at
    ramified primes.
    """

    __slots__ = (
        "field",
        "p",
        "kind",
        "sign",
        "trace",
        "norm",
        "pi",
        "degree",
    )

    def __init__(self, field, p, kind, sign=1):
        # type: (QuadField, int, str, int) -> None
        self.field = field
        self.p = p
        self.kind = kind
        self.sign = sign
        self.trace, self.norm = 0, field.d
        if kind == _INERT and p == 2:
            # t = (1 + sqrt(d))/2 spans the local integers
            self.trace, self.norm = 1, (field.d - 1) // 4
        self.pi = (0, 1)
        if kind == _RAMIFIED and p == 2 and field.d % 4 == 3:
            self.pi = (1, 1)
        self.degree = 2 if kind == _INERT else 1

    def __repr__(self):
        # type: () -> str
        return "_LocalField({}, {}, {}, {})".format(
            self.field.d, self.p, self.kind, self.sign
        )

    def _root(self, digits):
        # type: (int) -> int
        root = _split_root(self.field.d, self.p, digits)
        return 0 if root is None else self.sign * root

    def _coordinates(self, value):
        # type: (QuadElem) -> Tuple[Fraction, Fraction]
        if self.trace:
            return value.a - value.b, 2 * value.b
        return value.a, value.b

    def order(self, value):
        # type: (QuadElem) -> int
        """Exact valuation of a nonzero element of K."""

        p = self.p
        if self.kind == _INERT:
            return valuation(value.norm(), p) // 2
        if self.kind == _RAMIFIED:
            return valuation(value.norm(), p)
        den = clear_denominators([value.a, value.b])
        a, b = int(value.a * den), int(value.b * den)
        # the valuation at one split prime is at most that of the norm
        digits = valuation(a * a - self.field.d * b * b, p) + 1
        image = (a + b * self._root(digits)) % p**digits
        return valuation(image, p) - valuation(den, p)

    def image(self, value, digits):
        # type: (QuadElem, int) -> Residue
        """Residue modulo p**digits of an element integral here."""

        p = self.p
        modulus = p**digits
        if self.kind != _SPLIT:
            first, second = self._coordinates(value)
            return _residue(first, modulus), _residue(second, modulus)
        den = clear_denominators([value.a, value.b])
        shift = valuation(den, p)
        a, b = int(value.a * den), int(value.b * den)
        wide = (a + b * self._root(digits + shift)) % p ** (digits + shift)
        unit = den // p**shift
        return wide // p**shift * pow(unit, -1, modulus) % modulus, 0

    def valuation(self, residue, digits):
        # type: (Residue, int) -> Optional[int]
        """Valuation of a residue, None when it vanishes mod p**digits."""

        modulus = self.p**digits
        a, b = residue
        if self.kind == _RAMIFIED:
            parts = [a * a + self.trace * a * b - self.norm * b * b]
        else:
            parts = [a, b]
        found = [
            valuation(part % modulus, self.p)
            for part in parts
            if part % modulus
        ]
        return min(found) if found else None

    def mul(self, left, right):
        # type: (Residue, Residue) -> Residue
        a1, b1 = left
        a2, b2 = right
        return (
            a1 * a2 + self.norm * b1 * b2,
            a1 * b2 + a2 * b1 + self.trace * b1 * b2,
        )

    def divide(self, residue, k, digits):
        # type: (Residue, int, int) -> Residue
        """Divide by the k-th power of the prime, keeping digits - k."""

        p = self.p
        modulus = p ** (digits - k)
        if self.kind != _RAMIFIED:
            step = p**k
            return residue[0] // step % modulus, residue[1] // step % modulus
        conjugate = (self.pi[0], -self.pi[1])
        unit = (self.pi[0] ** 2 - self.norm * self.pi[1] ** 2) // p
        for _ in range(k):
            a, b = self.mul(residue, conjugate)
            residue = (a // p, b // p)
        scale = pow(unit, -k, modulus)
        return residue[0] * scale % modulus, residue[1] * scale % modulus


def _primes_above(field, p):
    # type: (QuadField, int) -> List[_LocalField]
    d = field.d
    if d == 1:
        return [_LocalField(field, p, _SPLIT)]
    if p == 2:
        if d % 4 != 1:
            kind = _RAMIFIED
        else:
            kind = _SPLIT if d % 8 == 1 else _INERT
    elif d % p == 0:
        kind = _RAMIFIED
    else:
        kind = _SPLIT if jacobi(d, p) == 1 else _INERT
    if kind == _SPLIT:
        return [_LocalField(field, p, kind, sign) for sign in (1, -1)]
    return [_LocalField(field, p, kind)]


def _local_combination(parts, modulus):
    # type: (Sequence[Tuple[int, Residue]], int) -> Residue
    return (
        sum(factor * value[0] for factor, value in parts) % modulus,
        sum(factor * value[1] for factor, value in parts) % modulus,
    )


def _local_doubling(place, pair, forms, digits):
    # type: (_LocalField, Sequence[Residue], Sequence[Residue], int) -> Any
    mul = place.mul
    X, Z = pair
    b2, b4, b6, b8 = forms
    modulus = place.p**digits
    X2, Z2, XZ = mul(X, X), mul(Z, Z), mul(X, Z)
    X2Z2, XZ3, Z4 = mul(X2, Z2), mul(XZ, Z2), mul(Z2, Z2)
    top = _local_combination(
        [
            (1, mul(X2, X2)),
            (-1, mul(b4, X2Z2)),
            (-2, mul(b6, XZ3)),
            (-1, mul(b8, Z4)),
        ],
        modulus,
    )
    bottom = _local_combination(
        [
            (4, mul(X2, XZ)),
            (1, mul(b2, X2Z2)),
            (2, mul(b4, XZ3)),
            (1, mul(b6, Z4)),
        ],
        modulus,
    )
    return top, bottom


def _finite_series(model, x, p, terms):
    # type: (WeierstrassCurve, QuadElem, int, int) -> Tuple[Fraction, Fraction]
    """
    Doubling series at the primes above p, in units of log p / [K:Q].

    Returns the sum of the least valuations of the doubling forms along
    the orbit, weighted by residue degree, and a bound on the tail left
    after terms steps.  The sum is subtracted from the naive height.

    :param model: Integral model
    :param x: x-coordinate of the point on the model
    :param p: Rational prime
    :param terms: Number of doubling steps
    """

    inv = model.invariants
    field = model.field
    series = Fraction(0)
    tail = Fraction(0)
    for place in _primes_above(field, p):
        reach = (
            2 * place.order(inv.discriminant) + 8 * place.order(field(2)) + 2
        )
        digits = (terms + 2) * reach
        if not x:
            pair = [(0, 0), (1, 0)]
        elif place.order(x) >= 0:
            pair = [place.image(x, digits), (1, 0)]
        else:
            pair = [(1, 0), place.image(1 / x, digits)]
        forms = [
            place.image(c, digits)
            for c in (inv.b2, inv.b4, inv.b6, inv.b8)
        ]
        weight = Fraction(1, 4)
        for _ in range(terms):
            top, bottom = _local_doubling(place, pair, forms, digits)
            found = [
                v
                for v in (
                    place.valuation(top, digits),
                    place.valuation(bottom, digits),
                )
                if v is not None
            ]
            if not found or digits - min(found) < reach:
                raise IndeterminateError(
                    "{}-adic precision exhausted doubling x = {}".format(
                        p, x
                    )
                )
            k = min(found)
            if k:
                top = place.divide(top, k, digits)
                bottom = place.divide(bottom, k, digits)
                digits -= k
            series += place.degree * k * weight
            weight /= 4
            pair = [top, bottom]
        tail += place.degree * reach * weight * Fraction(4, 3)
    return series, tail


def _norm_numerator(value):
    # type: (QuadElem) -> int
    return abs(value.norm().numerator)


def _bad_primes(model, point):
    # type: (WeierstrassCurve, CurvePoint) -> List[int]
    """Primes with a place where the point may reduce to a singular point."""

    x, y = point.x, point.y
    a1, a2, a3, a4, _ = model.coefficients
    g1 = 2 * y + a1 * x + a3
    g2 = 3 * x * x + 2 * a2 * x + a4 - a1 * y
    disc = _norm_numerator(model.discriminant)
    # a split prime where x is not integral can hide from the norms
    spread = clear_denominators([x.a, x.b])
    common = math.gcd(
        disc,
        math.gcd(_norm_numerator(g1), _norm_numerator(g2)) * spread,
    )
    if common <= 1:
        return []
    try:
        return list(factorize(common))
    except UnfactoredError as err:
        raise IndeterminateError(
            "cannot factor {} to find bad places".format(err.cofactor)
        ) from err


def _ball(value, eps):
    # type: (Any, Any) -> Ball
    """A value correct to a few units in the last place."""

    return value, 16 * eps * abs(value)


def _ball_product(left, right, eps):
    # type: (Ball, Ball, Any) -> Ball
    (c1, r1), (c2, r2) = left, right
    centre = c1 * c2
    radius = abs(c1) * r2 + abs(c2) * r1 + r1 * r2
    return centre, radius + 5 * eps * abs(centre)


def _ball_combination(parts, eps):
    # type: (Sequence[Tuple[int, Ball]], Any) -> Ball
    centre = 0
    radius = 0
    size = 0
    for factor, (c, r) in parts:
        centre += factor * c
        radius += abs(factor) * r
        size += abs(factor * c)
    return centre, radius + 2 * (len(parts) + 1) * eps * size


def _ball_inverse(ball, eps):
    # type: (Ball, Any) -> Ball
    centre, radius = ball
    size = abs(centre)
    inverse = 1 / centre
    return inverse, radius / (size * (size - radius)) + 2 * eps * abs(inverse)


def _ball_scaled(ball, scale, eps):
    # type: (Ball, Any, Any) -> Ball
    centre = ball[0] / scale
    return centre, ball[1] / scale + 2 * eps * abs(centre)


def _doubling_forms(model):
    # type: (WeierstrassCurve) -> Tuple[List[Any], List[Any]]
    inv = model.invariants
    one = model.field(1)
    phi = [-inv.b8, -2 * inv.b6, -inv.b4, model.field(0), one]
    psi = [inv.b6, 2 * inv.b4, inv.b2, 4 * one]
    return phi, psi


def _bezout_size(left, right, field, place):
    # type: (List[Any], List[Any], QuadField, Place) -> Any
    _, s, t = poly.xgcd(left, right)
    return sum(abs(_embed(c, field, place)) for c in s + t)


def _tail_constant(model, place):
    # type: (WeierstrassCurve, Place) -> Any
    """L with |log max(|X'|, |Z'|)| <= L on every normalized pair."""

    field = model.field
    phi, psi = _doubling_forms(model)
    upper = max(
        sum(abs(_embed(c, field, place)) for c in phi),
        sum(abs(_embed(c, field, place)) for c in psi),
    )
    lower = 1 / max(
        _bezout_size(phi, psi, field, place),
        _bezout_size(
            poly.reverse(phi, 4), poly.reverse(psi, 4), field, place
        ),
    )
    return max(mpmath.log(upper), -mpmath.log(lower), mpmath.mpf(0))


def _archimedean_tail(model, x, place, precision):
    # type: (WeierstrassCurve, Any, Place, int) -> Tuple[Any, Any, int]
    """
    Sum the doubling series at one infinite place.

    Returns the sum, a bound on its error and the number of terms used.
    The orbit is followed in balls (centre, radius) whose radii absorb
    every rounding; once a radius reaches half its value the remaining
    terms are bounded by the tail constant instead.
    """

    field = model.field
    with mpmath.workprec(precision):
        eps = mpmath.ldexp(1, -precision)
        inv = model.invariants
        b2, b4, b6, b8 = [
            _ball(_embed(c, field, place), eps)
            for c in (inv.b2, inv.b4, inv.b6, inv.b8)
        ]
        constant = _tail_constant(model, place) * (1 + 64 * eps) + 64 * eps
        terms = int(
            (precision + max(0, int(mpmath.log(constant + 1, 2))) + 2) / 2
        ) + 1
        start = _ball(_embed(x, field, place), eps)
        one = (mpmath.mpf(1), mpmath.mpf(0))
        if abs(start[0]) <= 1:
            X, Z = start, one
        else:
            X, Z = one, _ball_inverse(start, eps)
        total = mpmath.mpf(0)
        error = mpmath.mpf(0)
        weight = mpmath.mpf(1) / 4
        used = 0
        while used < terms:
            X2 = _ball_product(X, X, eps)
            Z2 = _ball_product(Z, Z, eps)
            XZ = _ball_product(X, Z, eps)
            X2Z2 = _ball_product(X2, Z2, eps)
            XZ3 = _ball_product(XZ, Z2, eps)
            Z4 = _ball_product(Z2, Z2, eps)
            top = _ball_combination(
                [
                    (1, _ball_product(X2, X2, eps)),
                    (-1, _ball_product(b4, X2Z2, eps)),
                    (-2, _ball_product(b6, XZ3, eps)),
                    (-1, _ball_product(b8, Z4, eps)),
                ],
                eps,
            )
            bottom = _ball_combination(
                [
                    (4, _ball_product(X2, XZ, eps)),
                    (1, _ball_product(b2, X2Z2, eps)),
                    (2, _ball_product(b4, XZ3, eps)),
                    (1, _ball_product(b6, Z4, eps)),
                ],
                eps,
            )
            big = max(abs(top[0]), abs(bottom[0]))
            size = max(abs(X[0]), abs(Z[0]))
            spread = max(top[1], bottom[1])
            loose = max(X[1], Z[1])
            if 2 * spread >= big or 2 * loose >= size:
                logging.debug("doubling series stopped after %s terms", used)
                break
            # the pair need not be normalized: the term is scale free
            high, low = mpmath.log(big), mpmath.log(size)
            term = high - 4 * low
            total += weight * term
            error += weight * (
                2 * spread / big
                + 8 * loose / size
                + 8 * eps * (abs(high) + 4 * abs(low) + 1)
            )
            error += 2 * eps * abs(total)
            X = _ball_scaled(top, big, eps)
            Z = _ball_scaled(bottom, big, eps)
            weight /= 4
            used += 1
        error += constant * weight * 4 / 3
        return +total, error * (1 + 64 * eps), used


def _height_on_integral_model(model, point, precision):
    # type: (WeierstrassCurve, CurvePoint, int) -> Tuple[Any, Any, int, Any]
    field = model.field
    naive = weil_height(point.x, precision)
    primes = _bad_primes(model, point)
    steps = precision // 2 + 2
    with mpmath.workprec(precision):
        value = naive.value
        error = naive.error_bound
        terms = 0
        for place in _places(field):
            tail, bound, used = _archimedean_tail(
                model, point.x, place, precision
            )
            share = mpmath.mpf(place.weight) / field.degree
            value += share * tail
            error += share * bound
            terms = max(terms, used)
        for p in primes:
            series, tail = _finite_series(model, point.x, p, steps)
            scale = mpmath.log(p) / field.degree
            value -= _to_mpf(series) * scale
            error += _to_mpf(tail) * scale
            logging.debug("local height correction at %s: %s", p, series)
        error += _rounding(value, precision) * (len(primes) + 2)
        return +value, +error, terms, primes


def is_torsion(point):
    # type: (CurvePoint) -> bool
    """Exact torsion test; torsion orders over quadratic fields are <= 18."""

    return order(point, MAX_TORSION_ORDER) is not None


def canonical_height(
    curve,
    point,
    precision=DEFAULT_PRECISION,
    tolerance=None,
    ceiling=PRECISION_CEILING,
):
    # type: (WeierstrassCurve, CurvePoint, int, Any, int) -> HeightValue
    """
    Return the canonical height of a point.

    :param curve: Curve over Q or Q(sqrt(d))
    :param point: Point on the curve
    :param precision: Starting precision in bits
    :param tolerance: Required error bound; precision doubles until it is
                      met and IndeterminateError is raised past ceiling
    :param ceiling: Largest precision tried
    """

    if point.curve != curve:
        raise DomainError("{} is not on {}".format(point, curve))
    if not isinstance(curve.field, QuadField):
        raise DomainError("heights are computed over Q or Q(sqrt(d))")
    if point.is_infinity or is_torsion(point):
        return HeightValue(0, 0, precision)
    model, moved = _integral_model(curve, point)
    while True:
        value, error, terms, primes = _height_on_integral_model(
            model, moved, precision
        )
        result = HeightValue(value, error, precision, terms, primes)
        if tolerance is None or result.error_bound <= tolerance:
            return result
        if precision * 2 > ceiling:
            raise IndeterminateError(
                "height of {} not within {} at {} bits".format(
                    point, tolerance, precision
                )
            )
        precision *= 2
        logging.info("raising height precision to %s bits", precision)


def _determinant_bound(matrix, errors):
    # type: (Any, Any) -> Any
    n = matrix.rows
    size = mpmath.sqrt(
        sum(matrix[i, j] ** 2 for i in range(n) for j in range(n))
    )
    spread = mpmath.sqrt(
        sum(errors[i, j] ** 2 for i in range(n) for j in range(n))
    )
    return (size + spread) ** n - size**n


def gram_matrix(curve, points, precision=DEFAULT_PRECISION):
    # type: (WeierstrassCurve, Sequence[CurvePoint], int) -> GramMatrix
    """
    Return the matrix of pairings <P, Q> = (h(P+Q) - h(P) - h(Q)) / 2.

    :param curve: Curve over Q or Q(sqrt(d))
    :param points: Points on the curve
    :param precision: Working precision in bits
    """

    points = list(points)
    n = len(points)
    diagonal = [canonical_height(curve, p, precision) for p in points]
    entries = [[None] * n for _ in range(n)]  # type: List[List[Any]]
    for i in range(n):
        entries[i][i] = diagonal[i]
        for j in range(i + 1, n):
            pair = canonical_height(curve, points[i] + points[j], precision)
            pairing = (pair - diagonal[i] - diagonal[j]).scaled(
                mpmath.mpf(1) / 2
            )
            entries[i][j] = entries[j][i] = pairing
    with mpmath.workprec(precision):
        if n == 0:
            return GramMatrix([], HeightValue(1, 0, precision))
        values = mpmath.matrix(n, n)
        errors = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                values[i, j] = entries[i][j].value
                errors[i, j] = entries[i][j].error_bound
        det = mpmath.det(values)
        bound = _determinant_bound(values, errors) + _rounding(det, precision)
    return GramMatrix(entries, HeightValue(det, bound, precision))


def _sum_of_multiples(points, coefficients):
    # type: (Sequence[CurvePoint], Sequence[int]) -> CurvePoint
    total = points[0].curve.infinity
    for coeff, point in zip(coefficients, points):
        if coeff:
            total = total + coeff * point
    return total


def _relation_candidates(gram):
    # type: (GramMatrix) -> Iterator[List[int]]
    """Integer vectors near the kernel of the Gram matrix."""

    n = len(gram.entries)
    values = mpmath.matrix(n, n)
    for i in range(n):
        for j in range(n):
            values[i, j] = gram.entries[i][j].value
    eigenvalues, vectors = mpmath.eigsy(values)
    smallest = min(range(n), key=lambda k: abs(eigenvalues[k]))
    kernel = [vectors[i, smallest] for i in range(n)]
    peak = max(kernel, key=abs)
    if not peak:
        return
    kernel = [c / peak for c in kernel]
    seen = set()
    for multiplier in range(1, RELATION_MULTIPLIERS + 1):
        vector = [int(mpmath.nint(c * multiplier)) for c in kernel]
        if any(vector) and tuple(vector) not in seen:
            seen.add(tuple(vector))
            yield vector


def _find_relation(points, gram):
    # type: (Sequence[CurvePoint], GramMatrix) -> Optional[List[int]]
    for index, point in enumerate(points):
        torsion = order(point, MAX_TORSION_ORDER)
        if torsion is not None:
            relation = [0] * len(points)
            relation[index] = torsion
            return relation
    if len(points) < 2:
        return None
    for vector in _relation_candidates(gram):
        total = _sum_of_multiples(points, vector)
        torsion = order(total, MAX_TORSION_ORDER)
        if torsion is not None:
            return [c * torsion for c in vector]
    return None


def independence(
    curve, points, precision=DEFAULT_PRECISION, ceiling=PRECISION_CEILING
):
    # type: (WeierstrassCurve, Sequence[CurvePoint], int, int) -> Any
    """
    Decide whether points are independent in the Mordell-Weil group.

    :param curve: Curve over Q or Q(sqrt(d))
    :param points: Points on the curve
    :param precision: Starting precision in bits
    :param ceiling: Largest precision tried

    "independent" needs a Gram determinant above its error bound;
    "dependent" needs an exact relation checked with the group law;
    anything else is "indeterminate".
    """

    points = list(points)
    while True:
        try:
            gram = gram_matrix(curve, points, precision)
        except IndeterminateError as err:
            logging.info("independence indeterminate: %s", err)
            return IndependenceResult(
                VERDICT_INDETERMINATE, points, None, None, precision
            )
        if gram.determinant.certainly_positive():
            return IndependenceResult(
                VERDICT_INDEPENDENT, points, gram, None, precision
            )
        with mpmath.workprec(precision):
            relation = _find_relation(points, gram) if points else None
        if relation is not None:
            return IndependenceResult(
                VERDICT_DEPENDENT, points, gram, relation, precision
            )
        if precision * 2 > ceiling:
            return IndependenceResult(
                VERDICT_INDETERMINATE, points, gram, None, precision
            )
        precision *= 2
        logging.info("raising independence precision to %s bits", precision)


def regulator(curve, points, precision=DEFAULT_PRECISION):
    # type: (WeierstrassCurve, Sequence[CurvePoint], int) -> HeightValue
    """Determinant of the Gram matrix."""

    return gram_matrix(curve, points, precision).determinant
