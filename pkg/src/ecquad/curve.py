#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Weierstrass models, the group law and model transformations.

Curves are generic over any exact field object that coerces values with
``field(value)`` and exposes ``characteristic``: QuadField (which covers Q
as d = 1) and the prime fields of ecquad.modp.
"""

import hashlib
import logging
from collections import namedtuple
from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import DomainError, SingularCurveError
from .exactnum import squarefree_decompose
from .quadfield import QQ, QuadElem, QuadField, format_quad

if TYPE_CHECKING:
    from typing import Any, Iterable, List, Optional, Sequence, Tuple

# pylint: disable=consider-using-f-string,invalid-name

Invariants = namedtuple(
    "Invariants", ["b2", "b4", "b6", "b8", "c4", "c6", "discriminant", "j"]
)

COEFFICIENT_NAMES = ("a1", "a2", "a3", "a4", "a6")


class WeierstrassCurve(object):
    """The curve y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6."""

    __slots__ = COEFFICIENT_NAMES + ("field", "invariants")

    def __init__(self, field, coefficients):
        # type: (Any, Sequence[Any]) -> None
        """
        Create a nonsingular curve.

        :param field: The field of definition
        :param coefficients: [a1, a2, a3, a4, a6], or [a4, a6] for a short
                             model
        """

        coefficients = list(coefficients)
        if len(coefficients) == 2:
            coefficients = [0, 0, 0] + coefficients
        if len(coefficients) != 5:
            raise DomainError(
                "need 5 a-invariants, got {}".format(len(coefficients))
            )
        a1, a2, a3, a4, a6 = [field(c) for c in coefficients]
        object.__setattr__(self, "field", field)
        for name, value in zip(COEFFICIENT_NAMES, (a1, a2, a3, a4, a6)):
            object.__setattr__(self, name, value)

        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = (
            a1 * a1 * a6
            + 4 * a2 * a6
            - a1 * a3 * a4
            + a2 * a3 * a3
            - a4 * a4
        )
        if 4 * b8 != b2 * b6 - b4 * b4:
            raise ArithmeticError("b-invariant self-check failed")
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        disc = (
            -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        )
        if disc == 0:
            raise SingularCurveError(
                "singular curve {}".format(format_coefficients(coefficients))
            )
        j = c4 * c4 * c4 / disc
        object.__setattr__(
            self, "invariants", Invariants(b2, b4, b6, b8, c4, c6, disc, j)
        )

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("WeierstrassCurve is immutable")

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[Any, List[Any]]]
        return (WeierstrassCurve, (self.field, list(self.coefficients)))

    @property
    def coefficients(self):
        # type: () -> Tuple[Any, Any, Any, Any, Any]
        """The a-invariants (a1, a2, a3, a4, a6)."""

        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def discriminant(self):
        # type: () -> Any
        """Discriminant of the model."""

        return self.invariants.discriminant

    @property
    def j(self):
        # type: () -> Any
        """The j-invariant."""

        return self.invariants.j

    def __eq__(self, other):
        # type: (object) -> bool
        return (
            isinstance(other, WeierstrassCurve)
            and self.field == other.field
            and self.coefficients == other.coefficients
        )

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash((self.field, self.coefficients))

    def __str__(self):
        # type: () -> str
        return format_curve(self)

    def __repr__(self):
        # type: () -> str
        return "WeierstrassCurve({!r}, {})".format(self.field, self)

    def is_short(self):
        # type: () -> bool
        """True when a1 = a2 = a3 = 0."""

        return self.a1 == 0 and self.a2 == 0 and self.a3 == 0

    def is_rational(self):
        # type: () -> bool
        """True for a curve over a QuadField with rational a-invariants."""

        return isinstance(self.field, QuadField) and all(
            c.is_rational() for c in self.coefficients
        )

    def contains(self, x, y):
        # type: (Any, Any) -> bool
        """Tell whether (x, y) satisfies the curve equation."""

        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = ((x + self.a2) * x + self.a4) * x + self.a6
        return lhs == rhs

    def point(self, x, y):
        # type: (Any, Any) -> CurvePoint
        """Create an affine point, checking the curve equation."""

        return CurvePoint(self, x, y)

    @property
    def infinity(self):
        # type: () -> CurvePoint
        """The identity of the group."""

        return CurvePoint(self)

    def two_division(self):
        # type: () -> List[Any]
        """Coefficients of 4x^3 + b2*x^2 + 2*b4*x + b6, lowest first."""

        inv = self.invariants
        return [inv.b6, 2 * inv.b4, inv.b2, self.field(4)]

    def y_polynomial(self, x):
        # type: (Any) -> Tuple[Any, Any]
        """Return (p, q) with y^2 + p*y + q = 0 the equation above x."""

        x = self.field(x)
        p = self.a1 * x + self.a3
        q = -(((x + self.a2) * x + self.a4) * x + self.a6)
        return p, q


class CurvePoint(object):
    """An affine point or the point at infinity of a WeierstrassCurve."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x=None, y=None, check=True):
        # type: (WeierstrassCurve, Any, Any, bool) -> None
        """
        Create a point.

        :param curve: The curve the point lies on
        :param x: x-coordinate, None for the point at infinity
        :param y: y-coordinate, None for the point at infinity
        :param check: Verify the curve equation
        """

        if (x is None) != (y is None):
            raise DomainError("a point needs both coordinates or neither")
        if x is not None:
            x = curve.field(x)
            y = curve.field(y)
            if check and not curve.contains(x, y):
                raise DomainError(
                    "point ({}, {}) is not on {}".format(
                        _format(x), _format(y), curve
                    )
                )
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("CurvePoint is immutable")

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[Any, ...]]
        return (CurvePoint, (self.curve, self.x, self.y, False))

    @property
    def is_infinity(self):
        # type: () -> bool
        """True for the identity."""

        return self.x is None

    def __eq__(self, other):
        # type: (object) -> bool
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return (
            self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __ne__(self, other):
        # type: (object) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash((self.x, self.y))

    def __add__(self, other):
        # type: (CurvePoint) -> CurvePoint
        return add(self.curve, self, other)

    def __neg__(self):
        # type: () -> CurvePoint
        return negate(self.curve, self)

    def __sub__(self, other):
        # type: (CurvePoint) -> CurvePoint
        return add(self.curve, self, negate(self.curve, other))

    def __rmul__(self, n):
        # type: (int) -> CurvePoint
        if not isinstance(n, int):
            return NotImplemented
        return multiply(self.curve, n, self)

    def __str__(self):
        # type: () -> str
        return format_point(self)

    def __repr__(self):
        # type: () -> str
        return "CurvePoint({})".format(self)

    def sort_key(self):
        # type: () -> Tuple[Any, ...]
        """Canonical ordering: infinity first, then (x, y) lexicographic."""

        if self.is_infinity:
            return (0,)
        return (1, _key(self.x), _key(self.y))


def _key(value):
    # type: (Any) -> Any
    if isinstance(value, QuadElem):
        return value.sort_key()
    return getattr(value, "value", value)


def _format(value):
    # type: (Any) -> str
    if isinstance(value, (QuadElem, int, Fraction)):
        return format_quad(value)
    return str(value)


def format_coefficients(coefficients):
    # type: (Iterable[Any]) -> str
    """Print a-invariants as "[a1,a2,a3,a4,a6]"."""

    return "[" + ",".join(_format(c) for c in coefficients) + "]"


def format_curve(curve):
    # type: (WeierstrassCurve) -> str
    """Print the record-file encoding of a curve."""

    return format_coefficients(curve.coefficients)


def format_point(point):
    # type: (CurvePoint) -> str
    """Print a point as "(x;y)" or "O" for infinity."""

    if point.is_infinity:
        return "O"
    return "({};{})".format(_format(point.x), _format(point.y))


def parse_curve(text, field=QQ):
    # type: (str, Any) -> WeierstrassCurve
    """
    Parse "[a1,a2,a3,a4,a6]" (or "[a4,a6]") over a field.

    :param text: Bracketed a-invariants
    :param field: Field the coefficients live in
    """

    compact = "".join(text.split())
    if not (compact.startswith("[") and compact.endswith("]")):
        raise DomainError("curve must be written [a1,a2,a3,a4,a6]")
    return WeierstrassCurve(field, compact[1:-1].split(","))


def parse_point(text, curve):
    # type: (str, WeierstrassCurve) -> CurvePoint
    """
    Parse "(x;y)", "x,y" or "O" into a point of curve.

    :param text: Point text
    :param curve: The curve
    """

    compact = "".join(text.split())
    if compact in ("O", "0", "inf", "infinity"):
        return curve.infinity
    if compact.startswith("(") and compact.endswith(")"):
        compact = compact[1:-1]
    sep = ";" if ";" in compact else ","
    parts = compact.split(sep)
    if len(parts) != 2:
        raise DomainError("cannot parse point {!r}".format(text))
    return CurvePoint(curve, curve.field(parts[0]), curve.field(parts[1]))


def curve_id(curve):
    # type: (WeierstrassCurve) -> str
    """Stable textual identity of a curve, field included."""

    d = getattr(curve.field, "d", None)
    if d is None:
        return "F{}:{}".format(curve.field.characteristic, curve)
    return "{}:{}".format(d, curve)


def curve_hash(curve):
    # type: (WeierstrassCurve) -> str
    """Short hash of curve_id used to key caches."""

    return hashlib.sha256(curve_id(curve).encode("utf-8")).hexdigest()[:16]


def invariants(curve):
    # type: (WeierstrassCurve) -> Invariants
    """Return (b2, b4, b6, b8, c4, c6, discriminant, j)."""

    return curve.invariants


def negate(curve, point):
    # type: (WeierstrassCurve, CurvePoint) -> CurvePoint
    """Return -P = (x, -y - a1*x - a3)."""

    _check_same(curve, point)
    if point.is_infinity:
        return point
    return CurvePoint(
        curve,
        point.x,
        -point.y - curve.a1 * point.x - curve.a3,
        check=False,
    )


def _check_same(curve, *points):
    # type: (WeierstrassCurve, CurvePoint) -> None
    for point in points:
        if point.curve is not curve and point.curve != curve:
            raise DomainError(
                "point {} lies on {}, not on {}".format(
                    point, point.curve, curve
                )
            )


def add(curve, left, right):
    # type: (WeierstrassCurve, CurvePoint, CurvePoint) -> CurvePoint
    """
    Chord-tangent addition on the long Weierstrass model.

    :param curve: The curve
    :param left: First summand
    :param right: Second summand
    """

    _check_same(curve, left, right)
    if left.is_infinity:
        return right
    if right.is_infinity:
        return left
    x1, y1 = left.x, left.y
    x2, y2 = right.x, right.y
    a1, a2, a3, a4, a6 = curve.coefficients
    if x1 == x2:
        tangent = y1 + y2 + a1 * x2 + a3
        if tangent == 0:
            return curve.infinity
        den = 2 * y1 + a1 * x1 + a3
        slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        offset = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        den = x2 - x1
        slope = (y2 - y1) / den
        offset = (y1 * x2 - y2 * x1) / den
    x3 = slope * slope + a1 * slope - a2 - x1 - x2
    y3 = -(slope + a1) * x3 - offset - a3
    return CurvePoint(curve, x3, y3, check=False)


def multiply(curve, n, point):
    # type: (WeierstrassCurve, int, CurvePoint) -> CurvePoint
    """Return n*P by double-and-add."""

    _check_same(curve, point)
    if n < 0:
        return multiply(curve, -n, negate(curve, point))
    result = curve.infinity
    addend = point
    while n:
        if n & 1:
            result = add(curve, result, addend)
        n >>= 1
        if n:
            addend = add(curve, addend, addend)
    return result


def order(point, bound):
    # type: (CurvePoint, int) -> Optional[int]
    """
    Return the order of point if it is at most bound, else None.

    :param point: Any point
    :param bound: Largest order worth trying
    """

    current = point
    for k in range(1, bound + 1):
        if current.is_infinity:
            return k
        current = current + point
    return None


class ShortModel(object):
    """A short model y^2 = x^3 + A*x + B with maps to and from the original."""

    __slots__ = ("original", "curve", "identity")

    def __init__(self, original, curve, identity):
        # type: (WeierstrassCurve, WeierstrassCurve, bool) -> None
        """Record both models."""

        object.__setattr__(self, "original", original)
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "identity", identity)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("ShortModel is immutable")

    def to_short(self, point):
        # type: (CurvePoint) -> CurvePoint
        """Map a point of the original model onto the short model."""

        _check_same(self.original, point)
        if point.is_infinity:
            return self.curve.infinity
        if self.identity:
            return CurvePoint(self.curve, point.x, point.y, check=False)
        curve = self.original
        b2 = curve.invariants.b2
        return CurvePoint(
            self.curve,
            36 * point.x + 3 * b2,
            108 * (2 * point.y + curve.a1 * point.x + curve.a3),
            check=False,
        )

    def from_short(self, point):
        # type: (CurvePoint) -> CurvePoint
        """Map a point of the short model back to the original."""

        _check_same(self.curve, point)
        if point.is_infinity:
            return self.original.infinity
        if self.identity:
            return CurvePoint(self.original, point.x, point.y, check=False)
        curve = self.original
        x = (point.x - 3 * curve.invariants.b2) / 36
        y = (point.y / 108 - curve.a1 * x - curve.a3) / 2
        return CurvePoint(curve, x, y, check=False)


def to_short_model(curve):
    # type: (WeierstrassCurve) -> ShortModel
    """
    Return y^2 = x^3 - 27*c4*x - 54*c6 with the isomorphism both ways.

    :param curve: Curve over a field of characteristic 0, 2 and 3 excluded

    A curve that is already short is returned as is with identity maps.
    """

    if curve.is_short():
        return ShortModel(curve, curve, True)
    if curve.field.characteristic in (2, 3):
        raise DomainError("no short model in characteristic 2 or 3")
    inv = curve.invariants
    short = WeierstrassCurve(curve.field, [-27 * inv.c4, -54 * inv.c6])
    return ShortModel(curve, short, False)


def _twist_parameter(d):
    # type: (int) -> int
    if d == 0:
        raise DomainError("twist parameter must be nonzero")
    decomp = squarefree_decompose(d)
    if decomp.square_root_of_cofactor != 1:
        logging.warning(
            "twist parameter %s is not squarefree, using %s",
            d,
            decomp.squarefree_part,
        )
    return int(decomp.squarefree_part)


def quadratic_twist(curve, d):
    # type: (WeierstrassCurve, int) -> WeierstrassCurve
    """
    Return the d-quadratic twist y^2 = x^3 + A*d^2*x + B*d^3.

    :param curve: Curve over Q, short-normalized first when needed
    :param d: Squarefree nonzero integer; other values are normalized

    A parameter whose squarefree part is 1 returns curve itself, in
    whatever model it was given.
    """

    if not curve.is_rational():
        raise DomainError("quadratic twists are taken of curves over Q")
    d = _twist_parameter(d)
    if d == 1:
        return curve
    short = to_short_model(curve).curve
    return WeierstrassCurve(QQ, [short.a4 * d * d, short.a6 * d * d * d])


def twist_long_model(curve, d):
    # type: (WeierstrassCurve, int) -> WeierstrassCurve
    """
    Return y^2 = x^3 + d*b2*x^2 + 8*d^2*b4*x + 16*d^3*b6.

    :param curve: Curve over Q
    :param d: Nonzero integer

    This model of the d-twist stays integral whenever the original is,
    and has good reduction at every odd prime not dividing d*discriminant.
    """

    if not curve.is_rational():
        raise DomainError("quadratic twists are taken of curves over Q")
    if d == 0:
        raise DomainError("twist parameter must be nonzero")
    inv = curve.invariants
    return WeierstrassCurve(
        QQ,
        [0, d * inv.b2, 0, 8 * d * d * inv.b4, 16 * d * d * d * inv.b6],
    )


def _common_field(values):
    # type: (Iterable[Any]) -> QuadField
    for value in values:
        if isinstance(value, QuadElem) and value.b:
            return value.field
    return QQ


def tate_normal(b, c, field=None):
    # type: (Any, Any, Any) -> WeierstrassCurve
    """
    Return the Tate normal form y^2 + (1-c)*x*y - b*y = x^3 - b*x^2.

    :param b: Parameter b
    :param c: Parameter c
    :param field: Field of definition, inferred from b and c by default
    """

    if field is None:
        field = _common_field((b, c))
    b = field(b)
    c = field(c)
    return WeierstrassCurve(field, [1 - c, -b, -b, 0, 0])


def tate_normal_parameters(curve):
    # type: (WeierstrassCurve) -> Tuple[Any, Any]
    """Recover (b, c) from a curve already in Tate normal shape."""

    if curve.a4 != 0 or curve.a6 != 0 or curve.a2 != curve.a3:
        raise DomainError("{} is not in Tate normal form".format(curve))
    return -curve.a2, 1 - curve.a1


def base_change(curve, field):
    # type: (WeierstrassCurve, Any) -> WeierstrassCurve
    """View a curve over a larger field."""

    return WeierstrassCurve(field, list(curve.coefficients))


def conjugate_point(point):
    # type: (CurvePoint) -> CurvePoint
    """Apply sqrt(d) -> -sqrt(d) to a point of a curve defined over Q."""

    if point.is_infinity:
        return point
    return CurvePoint(
        point.curve, point.x.conjugate(), point.y.conjugate(), check=False
    )
