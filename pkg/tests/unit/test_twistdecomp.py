#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Tests for twist maps, descent and rank ledgers."""

# pylint: disable=duplicate-code
try:
    from unittest2 import TestCase
except ImportError:
    from unittest import TestCase
except AttributeError:
    from unittest import TestCase

from ecquad.curve import (
    base_change,
    conjugate_point,
    curve_id,
    parse_curve,
    parse_point,
    quadratic_twist,
)
from ecquad.errors import DomainError, LedgerError
from ecquad.heights import independence
from ecquad.quadfield import QuadField
from ecquad.twistdecomp import (
    RankLedger,
    combine,
    descend,
    ledger_from_claims,
    ledger_from_points,
    twist_point_from_K,
    twist_point_to_K,
)

from .utils import random_twist_instance, seeded

INSTANCES = 100


class TwistMapTestCase(TestCase):
    def test_round_trip(self):
        """Test the twist map and its inverse on random instances."""

        rng = seeded(2024)
        for _ in range(INSTANCES):
            curve, d, _, twist_point = random_twist_instance(rng)
            image = twist_point_to_K(twist_point, d, curve)
            self.assertEqual(QuadField(d), image.curve.field)
            self.assertTrue(image.x.is_rational())
            self.assertEqual(-image, conjugate_point(image))
            self.assertEqual(
                twist_point, twist_point_from_K(image, d, curve)
            )

    def test_descend_round_trip(self):
        """Test descent splits P + image(T) into 2P and 2T."""

        rng = seeded(1729)
        for _ in range(INSTANCES):
            _, d, base, twist_point = random_twist_instance(rng)
            point = combine(base, twist_point, d)
            result = descend(point, d)
            self.assertEqual(2 * base, result.plus)
            self.assertEqual(2 * twist_point, result.minus)
            self.assertTrue(result.defect.is_infinity)

    def test_descend_long_model(self):
        """Test descent through the short model of a long curve."""

        k = QuadField(5)
        curve = parse_curve("[0,0,1,-1,0]", k)
        point = parse_point("(0;0)", curve)
        result = descend(point)
        self.assertEqual(parse_point("(1;0)", result.plus.curve), result.plus)
        self.assertTrue(result.minus.is_infinity)
        self.assertTrue(result.defect.is_infinity)

    def test_errors(self):
        """Test descent and twist maps reject foreign input."""

        curve = parse_curve("[0,0,0,-1,0]")
        with self.assertRaises(DomainError):
            twist_point_to_K(curve.point(0, 0), 2, parse_curve("[0,0,1,-1,0]"))
        twist = quadratic_twist(curve, 2)
        with self.assertRaises(DomainError):
            twist_point_to_K(twist.point(-2, 0), 3, curve)
        k = QuadField(-7)
        over_k = parse_curve("[s,0]", k)
        with self.assertRaises(DomainError):
            descend(parse_point("(0;0)", over_k))
        rational = base_change(curve, k)
        with self.assertRaises(DomainError):
            descend(rational.point(0, 0), 5)
        with self.assertRaises(DomainError):
            twist_point_from_K(rational.point(k.gen, 0), -7, curve)
        self.assertTrue(
            twist_point_to_K(twist.infinity, 2, curve).is_infinity
        )


class LedgerTestCase(TestCase):
    def setUp(self):
        # y^2 + y = x^3 + x^2 - 2x has rank 2 over Q
        self.curve = parse_curve("[0,1,1,-2,0]")
        self.points = [self.curve.point(0, 0), self.curve.point(1, 0)]

    def test_claims(self):
        """Test uncertified ledgers from claimed ranks."""

        ledger = ledger_from_claims(self.curve, -7, 5, 4, "rank-5-curve")
        self.assertFalse(ledger.certified)
        self.assertEqual(9, ledger.rank_lb_K)
        lines = ledger.to_lines()
        self.assertIn("ledger.rank_lb_K=9", lines)
        self.assertIn("ledger.certified=no", lines)
        self.assertIn("ledger.note=source: rank-5-curve", lines)
        self.assertIn("ledger.curve={}".format(curve_id(self.curve)), lines)

    def test_certified_invariant(self):
        """Test a certified ledger needs rank over K >= base + twist."""

        with self.assertRaises(LedgerError):
            RankLedger("1:[0,0,1,-1,0]", 5, 1, 1, 1, certified=True)
        ledger = RankLedger("1:[0,0,1,-1,0]", 5, 1, 1, 1)
        self.assertEqual(1, ledger.rank_lb_K)
        with self.assertRaises(AttributeError):
            ledger.rank_lb_K = 3

    def test_points(self):
        """Test ledgers built from certified points."""

        certificate = independence(self.curve, self.points)
        ledger = ledger_from_points(
            self.curve, 5, self.points, [], base_certificate=certificate
        )
        self.assertTrue(ledger.certified)
        self.assertEqual(2, ledger.rank_lb_Q_base)
        self.assertEqual(2, ledger.rank_lb_K)
        with self.assertRaises(LedgerError):
            ledger_from_points(self.curve, 5, self.points, [])
        dependent = [self.points[0], 2 * self.points[0]]
        with self.assertRaises(LedgerError):
            ledger_from_points(
                self.curve,
                5,
                dependent,
                [],
                base_certificate=independence(self.curve, dependent),
            )
