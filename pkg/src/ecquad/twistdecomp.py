#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Points on E over Q(sqrt(d)) against points on E and its d-twist over Q.

For E: y^2 = x^3 + A*x + B and its twist E_d: Y^2 = X^3 + A*d^2*X + B*d^3
the map (X, Y) -> (X/d, Y/d^2 * sqrt(d)) is an isomorphism E_d -> E over
K = Q(sqrt(d)).  A point P of E(K) splits as 2P = (P + P') + (P - P'),
P' its Galois conjugate; the first summand is rational and the second is
anti-invariant, which is the image of a rational point of E_d.
"""

import logging
from collections import namedtuple
from typing import TYPE_CHECKING

from .curve import (
    CurvePoint,
    base_change,
    conjugate_point,
    curve_id,
    quadratic_twist,
    to_short_model,
)
from .errors import DomainError, LedgerError
from .heights import independence
from .quadfield import QQ, QuadField

if TYPE_CHECKING:
    from typing import Any, List, Optional, Sequence

    from .curve import WeierstrassCurve

    Points = Sequence[CurvePoint]

# pylint: disable=consider-using-f-string,invalid-name

Descent = namedtuple("Descent", ["plus", "minus", "defect"])


class RankLedger(object):
    """Rank lower bounds over Q, over the twist and over K."""

    __slots__ = (
        "curve_id",
        "field_d",
        "rank_lb_Q_base",
        "rank_lb_Q_twist",
        "rank_lb_K",
        "certified",
        "notes",
    )

    def __init__(
        self,
        curve_id,  # pylint: disable=redefined-outer-name
        field_d,
        rank_lb_Q_base,
        rank_lb_Q_twist,
        rank_lb_K,
        certified=False,
        notes=(),
    ):
        # type: (str, int, int, int, int, bool, Sequence[str]) -> None
        """
        Create a ledger.

        :param curve_id: Identity of the base curve
        :param field_d: d of K = Q(sqrt(d))
        :param rank_lb_Q_base: Lower bound for rank E(Q)
        :param rank_lb_Q_twist: Lower bound for rank E_d(Q)
        :param rank_lb_K: Lower bound for rank E(K)
        :param certified: True when every bound is backed by points
        :param notes: Provenance lines
        """

        if certified and rank_lb_K < rank_lb_Q_base + rank_lb_Q_twist:
            raise LedgerError(
                "rank over K ({}) below base {} plus twist {}".format(
                    rank_lb_K, rank_lb_Q_base, rank_lb_Q_twist
                )
            )
        object.__setattr__(self, "curve_id", curve_id)
        object.__setattr__(self, "field_d", field_d)
        object.__setattr__(self, "rank_lb_Q_base", rank_lb_Q_base)
        object.__setattr__(self, "rank_lb_Q_twist", rank_lb_Q_twist)
        object.__setattr__(self, "rank_lb_K", rank_lb_K)
        object.__setattr__(self, "certified", certified)
        object.__setattr__(self, "notes", tuple(notes))

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("RankLedger is immutable")

    def __eq__(self, other):
        # type: (object) -> bool
        if not isinstance(other, RankLedger):
            return NotImplemented
        return all(
            getattr(self, name) == getattr(other, name)
            for name in self.__slots__
        )

    def __ne__(self, other):
        # type: (object) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash(tuple(getattr(self, name) for name in self.__slots__))

    def to_lines(self):
        # type: () -> List[str]
        """Serialize as key=value lines for the verification report."""

        lines = [
            "ledger.curve={}".format(self.curve_id),
            "ledger.field_d={}".format(self.field_d),
            "ledger.rank_lb_Q_base={}".format(self.rank_lb_Q_base),
            "ledger.rank_lb_Q_twist={}".format(self.rank_lb_Q_twist),
            "ledger.rank_lb_K={}".format(self.rank_lb_K),
            "ledger.certified={}".format("yes" if self.certified else "no"),
        ]
        lines.extend("ledger.note={}".format(note) for note in self.notes)
        return lines


def _short_over_q(curve):
    # type: (WeierstrassCurve) -> WeierstrassCurve
    if not curve.is_rational():
        raise DomainError("{} is not defined over Q".format(curve))
    short = to_short_model(base_change(curve, QQ)).curve
    return short


def twist_point_to_K(point, d, curve):
    # type: (CurvePoint, int, WeierstrassCurve) -> CurvePoint
    """
    Send a rational point of the d-twist to E over Q(sqrt(d)).

    :param point: Point (X, Y) of quadratic_twist(curve, d)
    :param d: Squarefree twist parameter
    :param curve: The base curve E over Q, in short form

    Returns (X/d, Y/d**2 * sqrt(d)) on E viewed over K.
    """

    if not curve.is_short():
        raise DomainError("twist maps need the short model of the base")
    twist = quadratic_twist(curve, d)
    field = QuadField(d)
    target = base_change(curve, field)
    if point.is_infinity:
        return target.infinity
    if not twist.contains(twist.field(point.x), twist.field(point.y)):
        raise DomainError(
            "{} is not on the {}-twist {}".format(point, d, twist)
        )
    x = point.x.to_rational() / d
    y = field.gen * (point.y.to_rational() / (d * d))
    return CurvePoint(target, x, y)


def twist_point_from_K(point, d, curve):
    # type: (CurvePoint, int, WeierstrassCurve) -> CurvePoint
    """
    Inverse of twist_point_to_K.

    :param point: Point (x, v*sqrt(d)) of E over K with x and v rational
    :param d: Squarefree twist parameter
    :param curve: The base curve E over Q, in short form
    """

    twist = quadratic_twist(curve, d)
    if point.is_infinity:
        return twist.infinity
    x, y = point.x, point.y
    if d == 1:
        v = y.to_rational()
    elif not x.is_rational() or y.a:
        raise DomainError(
            "{} is not anti-invariant under sqrt({}) -> -sqrt({})".format(
                point, d, d
            )
        )
    else:
        v = y.b
    return CurvePoint(twist, d * x.to_rational(), d * d * v)


def _as_rational(point, curve):
    # type: (CurvePoint, WeierstrassCurve) -> CurvePoint
    if point.is_infinity:
        return curve.infinity
    return CurvePoint(curve, point.x.to_rational(), point.y.to_rational())


def descend(point, d=None):
    # type: (CurvePoint, Optional[int]) -> Descent
    """
    Split 2P into a rational point of E and a rational point of E_d.

    :param point: P on a curve over K = Q(sqrt(d)) with rational
                  a-invariants
    :param d: Expected d of K, checked when given

    Returns Descent(plus, minus, defect) with plus = P + P' on E over Q,
    minus the point of E_d(Q) whose image in E(K) is P - P', and defect
    = 2P - plus - image(minus), which is always the identity here.
    """

    curve = point.curve
    field = curve.field
    if not isinstance(field, QuadField):
        raise DomainError("descent works over Q(sqrt(d))")
    if d is not None and QuadField(d) != field:
        raise DomainError("{} is not defined over Q(sqrt({}))".format(
            point, d
        ))
    if not curve.is_rational():
        raise DomainError(
            "{} is not defined over Q, no decomposition".format(curve)
        )
    d = field.d
    model = to_short_model(curve)
    short_k = model.curve
    short_q = base_change(short_k, QQ)
    moved = model.to_short(point)
    conjugate = conjugate_point(moved)
    plus_k = moved + conjugate
    minus_k = moved - conjugate
    plus = _as_rational(model.from_short(plus_k), base_change(curve, QQ))
    minus = twist_point_from_K(minus_k, d, short_q)
    image = twist_point_to_K(minus, d, short_q)
    defect = model.from_short(2 * moved - plus_k - image)
    if not (2 * defect).is_infinity:
        raise ArithmeticError("descent defect {} is not 2-torsion".format(
            defect
        ))
    logging.debug("descended %s to %s and %s", point, plus, minus)
    return Descent(plus, minus, defect)


def combine(base_point, twist_point, d):
    # type: (CurvePoint, CurvePoint, int) -> CurvePoint
    """
    Return base_point + image(twist_point) on the short base over K.

    :param base_point: Point of the short base curve E over Q
    :param twist_point: Point of quadratic_twist(E, d) over Q
    :param d: Squarefree twist parameter
    """

    curve = base_point.curve
    field = QuadField(d)
    target = base_change(curve, field)
    image = twist_point_to_K(twist_point, d, curve)
    lifted = (
        target.infinity
        if base_point.is_infinity
        else CurvePoint(target, base_point.x, base_point.y)
    )
    return lifted + image


def _certificate_covers(certificate, points):
    # type: (Any, Sequence[CurvePoint]) -> bool
    if certificate is None:
        return False
    if getattr(certificate, "verdict", None) != "independent":
        return False
    return list(certificate.points) == list(points)


def ledger_from_points(
    curve,
    d,
    pts_base,
    pts_twist,
    base_certificate=None,
    twist_certificate=None,
    cross_check=True,
):
    # type: (Any, int, Points, Points, Any, Any, bool) -> RankLedger
    """
    Build a certified ledger from independent points.

    :param curve: Base curve E over Q
    :param d: Squarefree twist parameter
    :param pts_base: Independent points of E(Q)
    :param pts_twist: Independent points of quadratic_twist(E, d)(Q)
    :param base_certificate: ecquad.heights.IndependenceResult of pts_base
    :param twist_certificate: IndependenceResult of pts_twist
    :param cross_check: Re-certify the combined set over K
    """

    pts_base = list(pts_base)
    pts_twist = list(pts_twist)
    if pts_base and not _certificate_covers(base_certificate, pts_base):
        raise LedgerError("base points lack an independence certificate")
    if pts_twist and not _certificate_covers(twist_certificate, pts_twist):
        raise LedgerError("twist points lack an independence certificate")
    notes = [
        "{} independent points on E(Q)".format(len(pts_base)),
        "{} independent points on E^({})(Q)".format(len(pts_twist), d),
    ]
    if cross_check and pts_base and pts_twist:
        short = _short_over_q(curve)
        model = to_short_model(base_change(curve, QQ))
        field = QuadField(d)
        target = base_change(short, field)
        mapped = [
            CurvePoint(target, q.x, q.y)
            for q in (model.to_short(p) for p in pts_base)
        ] + [twist_point_to_K(p, d, short) for p in pts_twist]
        result = independence(target, mapped)
        if result.verdict == "dependent":
            raise LedgerError(
                "points combined over Q(sqrt({})) are dependent".format(d)
            )
        notes.append("combined set over K: {}".format(result.verdict))
    return RankLedger(
        curve_id(curve),
        d,
        len(pts_base),
        len(pts_twist),
        len(pts_base) + len(pts_twist),
        certified=True,
        notes=notes,
    )


def ledger_from_claims(curve, d, base_rank, twist_rank, source=""):
    # type: (WeierstrassCurve, int, int, int, str) -> RankLedger
    """
    Record claimed ranks without points; the ledger stays uncertified.

    :param curve: Base curve E over Q
    :param d: Twist parameter
    :param base_rank: Claimed rank of E(Q)
    :param twist_rank: Claimed rank of E_d(Q)
    :param source: Where the claim comes from
    """

    notes = ["claimed, no generators"]
    if source:
        notes.append("source: {}".format(source))
    return RankLedger(
        curve_id(curve),
        d,
        base_rank,
        twist_rank,
        base_rank + twist_rank,
        certified=False,
        notes=notes,
    )
