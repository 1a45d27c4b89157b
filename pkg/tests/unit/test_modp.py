#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Tests for reduction modulo primes and a_p tables."""

import os
import shutil
import tempfile

from sympy import primerange

# pylint: disable=duplicate-code
try:
    from unittest2 import TestCase
except ImportError:
    from unittest import TestCase
except AttributeError:
    from unittest import TestCase

from ecquad import modp
from ecquad.curve import curve_id, parse_curve
from ecquad.errors import DomainError
from ecquad.modp import (
    ApEntry,
    ApTable,
    PrimeField,
    ap_cache_path,
    ap_table,
    cached_ap_table,
    count_points,
    count_points_ext,
    load_ap_table,
    reduce_mod_p,
    save_ap_table,
)
from ecquad.quadfield import QuadField

# Traces of Frobenius of y^2 + y = x^3 - x and y^2 + y = x^3 - x^2
AP_37 = {2: -2, 3: -3, 5: -2, 7: -1, 11: -5, 13: -2}
AP_11 = {2: -2, 3: -1, 5: 1, 7: -2, 13: 4}


def _trace(curve, p):
    return p + 1 - count_points(reduce_mod_p(curve, p).curve)


class ModpTestCase(TestCase):
    def setUp(self):
        self.workdir = tempfile.mkdtemp()
        self.curve = parse_curve("[0,0,1,-1,0]")

    def tearDown(self):
        shutil.rmtree(self.workdir)

    def test_prime_field(self):
        """Test F_p arithmetic and coercions."""

        field = PrimeField(7)
        self.assertEqual(field(3), field(10))
        self.assertEqual(1, field(3) * field(5))
        self.assertEqual(field(5), field(1) / field(3))
        self.assertEqual(field(4), field("1/2"))
        self.assertEqual(0, field(3) - 3)
        with self.assertRaises(DomainError):
            field("1/7")
        with self.assertRaises(DomainError):
            field(1) + PrimeField(5)(1)

    def test_known_traces(self):
        """Test a_p of two curves of small conductor."""

        for p, a_p in AP_37.items():
            self.assertEqual(a_p, _trace(self.curve, p), p)
        curve = parse_curve("[0,-1,1,0,0]")
        for p, a_p in AP_11.items():
            self.assertEqual(a_p, _trace(curve, p), p)
        self.assertFalse(reduce_mod_p(curve, 11).good)
        self.assertFalse(reduce_mod_p(self.curve, 37).good)

    def test_bsgs_matches_naive(self):
        """Test baby-step giant-step counts above the naive limit."""

        for p in primerange(modp.NAIVE_LIMIT, modp.NAIVE_LIMIT + 200):
            reduced = reduce_mod_p(self.curve, int(p)).curve
            self.assertEqual(
                modp._naive_count(reduced),  # pylint: disable=W0212
                modp._bsgs_count(reduced),  # pylint: disable=W0212
                p,
            )

    def test_hasse_bound(self):
        """Test every trace up to 1000 respects |a_p| <= 2 sqrt(p)."""

        table = ap_table(self.curve, 1000)
        self.assertEqual(168, len(table))
        for entry in table.entries:
            self.assertLessEqual(entry.a_p * entry.a_p, 4 * entry.p)
        self.assertEqual(ApEntry(37, 0, False), table.entries[11])

    def test_extension_counts(self):
        """Test #E(F_p^k) from the trace."""

        self.assertEqual(5, count_points_ext(-2, 2, 1))
        self.assertEqual(5, count_points_ext(-2, 2, 2))
        self.assertEqual(7**2 + 1 - (1 - 14), count_points_ext(-1, 7, 2))
        with self.assertRaises(DomainError):
            count_points_ext(5, 5, 1)
        with self.assertRaises(DomainError):
            count_points_ext(1, 5, 0)

    def test_denominators(self):
        """Test denominators divisible by p are scaled away."""

        scaled = parse_curve("[0,0,0,-1/81,0]")
        plain = parse_curve("[0,0,0,-1,0]")
        reduction = reduce_mod_p(scaled, 3)
        self.assertTrue(reduction.good)
        self.assertEqual(
            count_points(reduce_mod_p(plain, 3).curve),
            count_points(reduction.curve),
        )

    def test_split_prime(self):
        """Test reducing a curve over K at a chosen prime above p."""

        curve = parse_curve("[0,0,0,s,0]", QuadField(5))
        reduction = reduce_mod_p(curve, 11, 4)
        self.assertTrue(reduction.good)
        self.assertEqual(4, reduction.curve.a4)
        with self.assertRaises(DomainError):
            reduce_mod_p(curve, 11)

    def test_table_serialization(self):
        """Test tables print, parse, restrict and hash consistently."""

        table = ap_table(self.curve, 50)
        self.assertEqual(table, ApTable.from_lines(table.to_lines()))
        parsed = ApTable.from_lines(table.to_lines())
        self.assertEqual(table.digest(), parsed.digest())
        small = table.restrict(13)
        self.assertEqual([2, 3, 5, 7, 11, 13], [e.p for e in small.entries])
        self.assertNotEqual(table.digest(), small.digest())
        with self.assertRaises(DomainError):
            table.restrict(100)
        with self.assertRaises(DomainError):
            ApTable.from_lines(["3 1 good"])
        with self.assertRaises(DomainError):
            ApTable("x", 5, [(5, 7, True)])

    def test_parallel_table(self):
        """Test worker processes give the same table."""

        self.assertEqual(
            ap_table(self.curve, 200), ap_table(self.curve, 200, 2)
        )

    def test_cache(self):
        """Test the a_p cache is written once and reused."""

        path = ap_cache_path(self.curve, 60, self.workdir)
        table = cached_ap_table(self.curve, 60, self.workdir)
        self.assertTrue(os.path.exists(path))
        self.assertEqual(table, load_ap_table(path))
        with self.assertLogs(level="INFO") as logs:
            self.assertEqual(
                table, cached_ap_table(self.curve, 60, self.workdir)
            )
        self.assertIn("Using cached", "\n".join(logs.output))
        other = parse_curve("[0,-1,1,0,0]")
        save_ap_table(ap_table(other, 60), path)
        with self.assertLogs(level="WARNING"):
            self.assertEqual(
                curve_id(self.curve),
                cached_ap_table(self.curve, 60, self.workdir).curve_id,
            )
        self.assertEqual(table, ap_table(self.curve, 60))
        with self.assertRaises(DomainError):
            ap_table(parse_curve("[0,0,0,s,0]", QuadField(5)), 60)
