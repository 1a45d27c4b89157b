#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Tests for torsion subgroups over Q and quadratic fields."""

# pylint: disable=duplicate-code
try:
    from unittest2 import TestCase
except ImportError:
    from unittest import TestCase
except AttributeError:
    from unittest import TestCase

from ecquad import poly
from ecquad.curve import base_change, order, parse_curve, tate_normal
from ecquad.errors import DomainError
from ecquad.quadfield import QQ, QuadField
from ecquad.records import default_corpus_path, ingest
from ecquad.torsion import (
    QUADRATIC_GROUPS,
    RATIONAL_GROUPS,
    TorsionGroup,
    division_polynomial,
    extra_two_torsion_field,
    is_possible_over_quadratic,
    is_possible_over_rationals,
    multiplication_numerator,
    parse_torsion_group,
    reduction_bound,
    torsion_over_K,
    torsion_over_Q,
)

# Record ids whose base curve over Q has the given torsion
BASE_TORSION = (
    ("z8-m227", "8"),
    ("z9-m155", "9"),
    ("z10-m2495", "10"),
    ("z2z4-m83201", "2x4"),
    ("z2z6-624341", "2x6"),
)


class TorsionGroupTestCase(TestCase):
    def test_groups(self):
        """Test group construction, printing and parsing."""

        self.assertEqual("2x10", str(parse_torsion_group("2x10")))
        self.assertEqual("15", str(parse_torsion_group(" 15 ")))
        self.assertEqual(TorsionGroup(1, 7), parse_torsion_group("7"))
        self.assertEqual(20, parse_torsion_group("2X10").order)
        self.assertFalse(TorsionGroup(3, 3).is_cyclic)
        for bad in ("2x3", "0", "x", "2x4x8"):
            with self.assertRaises(DomainError):
                parse_torsion_group(bad)

    def test_classification(self):
        """Test the lists of groups over Q and quadratic fields."""

        self.assertEqual(15, len(RATIONAL_GROUPS))
        self.assertEqual(26, len(QUADRATIC_GROUPS))
        self.assertTrue(is_possible_over_rationals(TorsionGroup(12)))
        self.assertFalse(is_possible_over_rationals(TorsionGroup(11)))
        self.assertTrue(is_possible_over_quadratic(TorsionGroup(11)))
        self.assertFalse(is_possible_over_quadratic(TorsionGroup(17)))
        self.assertFalse(is_possible_over_quadratic(TorsionGroup(2, 14)))
        self.assertTrue(is_possible_over_quadratic(TorsionGroup(3, 3), -3))
        self.assertFalse(is_possible_over_quadratic(TorsionGroup(3, 6), 5))
        self.assertTrue(is_possible_over_quadratic(TorsionGroup(4, 4), -1))
        self.assertFalse(is_possible_over_quadratic(TorsionGroup(4, 4), 2))
        self.assertFalse(is_possible_over_quadratic(TorsionGroup(11), 1))


class DivisionPolynomialTestCase(TestCase):
    def setUp(self):
        self.curve = parse_curve("[0,0,1,-1,0]")
        self.point = self.curve.point(0, 0)

    def test_small_cases(self):
        """Test psi_2 and psi_3 of y^2 = x^3 - x."""

        curve = parse_curve("[0,0,0,-1,0]")
        self.assertEqual(
            [-1, 0, -6, 0, 3], division_polynomial(curve, 3).reduced
        )
        psi2 = division_polynomial(curve, 2)
        self.assertTrue(psi2.even)
        self.assertEqual([0, -4, 0, 4], psi2.psi_squared)
        self.assertEqual([1, 0, 2, 0, 1], multiplication_numerator(curve, 2))
        with self.assertRaises(DomainError):
            division_polynomial(curve, 0)

    def test_multiplication_by_n(self):
        """Test x(nP) = phi_n(x) / psi_n(x)^2 on a point of infinite order."""

        for base in (self.point, 4 * self.point):
            for n in range(2, 7):
                phi = multiplication_numerator(self.curve, n)
                psi_squared = division_polynomial(self.curve, n).psi_squared
                expected = (n * base).x
                value = poly.evaluate(phi, base.x) / poly.evaluate(
                    psi_squared, base.x
                )
                self.assertEqual(expected, value, (base, n))

    def test_torsion_roots(self):
        """Test x-coordinates of m-torsion points are roots of psi_m."""

        curve = tate_normal(4, 2, QQ)
        psi7 = division_polynomial(curve, 7).reduced
        point = curve.point(0, 0)
        for k in range(1, 7):
            self.assertEqual(0, poly.evaluate(psi7, (k * point).x))


class TorsionTestCase(TestCase):
    def test_over_rationals(self):
        """Test torsion of small curves over Q."""

        cases = (
            ("[0,0,1,-1,0]", "1"),
            ("[0,-1,1,0,0]", "5"),
            ("[0,0,0,-1,0]", "2x2"),
            ("[0,0,1,0,0]", "3"),
        )
        for text, expected in cases:
            data = torsion_over_Q(parse_curve(text))
            self.assertEqual(expected, str(data.group), text)
            self.assertEqual(data.group.order, len(data.all_points))
            self.assertEqual(0, data.bound % data.group.order)
        data = torsion_over_Q(tate_normal(4, 2, QQ))
        self.assertEqual(TorsionGroup(7), data.group)
        self.assertEqual(7, order(data.generators[0], 18))
        trivial = torsion_over_Q(parse_curve("[0,0,1,-1,0]"))
        self.assertEqual([], trivial.generators)

    def test_over_quadratic_fields(self):
        """Test torsion growth after base change."""

        curve = parse_curve("[0,0,0,-1,0]")
        data = torsion_over_K(curve, QuadField(-1))
        self.assertEqual(TorsionGroup(2, 4), data.group)
        self.assertEqual(8, len(data.all_points))
        data = torsion_over_K(parse_curve("[0,0,1,0,0]"), QuadField(-3))
        self.assertEqual(TorsionGroup(3, 3), data.group)

    def test_generators(self):
        """Test generators have the orders of the invariant factors."""

        data = torsion_over_K(parse_curve("[0,0,0,-1,0]"), QuadField(-1))
        orders = sorted(order(g, 18) for g in data.generators)
        self.assertEqual([2, 4], orders)
        for point in data.all_points:
            self.assertTrue((4 * point).is_infinity)

    def test_reduction_bound(self):
        """Test the reduction bound is a multiple of the torsion order."""

        bound, primes = reduction_bound(parse_curve("[0,-1,1,0,0]"))
        self.assertEqual(0, bound % 5)
        self.assertNotIn(11, primes)
        self.assertNotIn(2, primes)
        bound, _ = reduction_bound(parse_curve("[0,0,1,-1,0]"))
        self.assertEqual(1, bound)

    def test_two_torsion_field(self):
        """Test the field of full 2-torsion."""

        self.assertEqual(1, extra_two_torsion_field(parse_curve("[-1,0]")))
        self.assertEqual(2, extra_two_torsion_field(parse_curve("[-2,0]")))
        self.assertEqual(-1, extra_two_torsion_field(parse_curve("[1,0]")))
        with self.assertRaises(DomainError):
            extra_two_torsion_field(parse_curve("[0,0,1,-1,0]"))
        with self.assertRaises(DomainError):
            torsion_over_Q(parse_curve("[s,0]", QuadField(2)))

    def test_record_base_curves(self):
        """Test torsion over Q of record base curves."""

        records = dict((r.id, r) for r in ingest(default_corpus_path()))
        for record_id, expected in BASE_TORSION:
            curve = base_change(records[record_id].curve, QQ)
            self.assertEqual(
                expected, str(torsion_over_Q(curve).group), record_id
            )

    def test_record_two_torsion_growth(self):
        """Test a Z/10 curve gaining full 2-torsion over its record field."""

        records = dict((r.id, r) for r in ingest(default_corpus_path()))
        record = records["z2z10-1065333545"]
        self.assertEqual(
            1065333545, extra_two_torsion_field(record.curve)
        )
        self.assertEqual(
            TorsionGroup(2, 10), torsion_over_K(record.curve).group
        )
