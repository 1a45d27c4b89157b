#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Tests for Mestre-Nagao sums and the twist sieve."""

# pylint: disable=duplicate-code
try:
    from unittest2 import TestCase
except ImportError:
    from unittest import TestCase
except AttributeError:
    from unittest import TestCase

import json
import math
import os
import shutil
import tempfile
import time

import numpy

from ecquad.curve import WeierstrassCurve, curve_id, parse_curve
from ecquad.errors import DomainError, SingularCurveError
from ecquad.exactnum import is_fundamental_discriminant, is_squarefree
from ecquad.modp import ap_table
from ecquad.quadfield import QQ
from ecquad.sieve import (
    CHUNK_SIZE,
    SieveConfig,
    SieveHit,
    TwistSumTable,
    eligible_twists,
    format_hits,
    mn_sum,
    mn_sum_detail,
    mn_sum_slow,
    run_sieve,
)

from .utils import seeded

# Base curve of the torsion Z/8 record over Q(sqrt(-227))
Z8_BASE = (
    "[0,1,0,-11849634571550798667743047864720,"
    "15613761915399875450490670165233536220551598068]"
)


def _random_curve(rng, height=50):
    while True:
        try:
            coefficients = [rng.randint(-height, height) for _ in range(2)]
            return WeierstrassCurve(QQ, coefficients)
        except SingularCurveError:
            continue


def _random_d(rng, bound=300):
    while True:
        d = rng.randint(-bound, bound)
        if d and is_squarefree(d):
            return d


class EligibleTwistsTestCase(TestCase):
    def test_squarefree(self):
        """Test squarefree candidates."""

        self.assertEqual([2, 3, 5, 6, 7, 10], eligible_twists(2, 10).tolist())
        self.assertEqual(
            [-3, -2, -1, 1, 2, 3], eligible_twists(-3, 3).tolist()
        )
        self.assertEqual(
            [d for d in range(-500, 501) if d and is_squarefree(d)],
            eligible_twists(-500, 500).tolist(),
        )
        self.assertEqual([], eligible_twists(5, 4).tolist())

    def test_fundamental(self):
        """Test the fundamental discriminant filter."""

        self.assertEqual(
            [n for n in range(-600, 601) if is_fundamental_discriminant(n)],
            eligible_twists(-600, 600, "fundamental").tolist(),
        )
        with self.assertRaises(DomainError):
            eligible_twists(1, 2, "prime")


class SieveConfigTestCase(TestCase):
    def test_validation(self):
        """Test invalid parameters are rejected."""

        with self.assertRaises(DomainError):
            SieveConfig("c", 100, 10, -10)
        with self.assertRaises(DomainError):
            SieveConfig("c", 1, -10, 10)
        with self.assertRaises(DomainError):
            SieveConfig("c", 100, -10, 10, top_k=0)
        with self.assertRaises(DomainError):
            SieveConfig("c", 100, -10, 10, variant="S2")
        with self.assertRaises(DomainError):
            SieveConfig("c", 100, -10, 10, d_filter="odd")
        config = SieveConfig("c", 100, -10, 10)
        self.assertEqual(20, config.top_k)
        self.assertEqual("S1", config.to_dict()["variant"])


class MestreNagaoTestCase(TestCase):
    def setUp(self):
        self.curve = parse_curve("[0,0,1,-1,0]")
        self.table = ap_table(self.curve, 13)

    def test_known_sum(self):
        """Test the sum of 37a against its traces."""

        traces = {3: -3, 5: -2, 7: -1, 11: -5, 13: -2}
        s0 = math.fsum(
            (2 - a) / (p + 1 - a) * math.log(p) for p, a in traces.items()
        )
        s1 = math.fsum(
            (1 - (p - 1) / (p + 1 - a)) * math.log(p)
            for p, a in traces.items()
        )
        self.assertAlmostEqual(s0, mn_sum(self.curve, 1, self.table, "S0"))
        self.assertAlmostEqual(s1, mn_sum(self.curve, 1, self.table))
        detail = mn_sum_detail(self.table, 1)
        self.assertEqual(5, detail.used)
        self.assertEqual(1, detail.skipped)

    def test_twisted_sum(self):
        """Test a_p(E_d) = (d|p) a_p(E) enters the sum."""

        # 5 divides d; (-5|3) = 1, (-5|7) = 1, (-5|11) = -1, (-5|13) = -1
        signs = {3: 1, 7: 1, 11: -1, 13: -1}
        traces = {3: -3, 7: -1, 11: -5, 13: -2}
        expected = math.fsum(
            (2 - signs[p] * a) / (p + 1 - signs[p] * a) * math.log(p)
            for p, a in traces.items()
        )
        detail = mn_sum_detail(self.table, -5, "S0")
        self.assertAlmostEqual(expected, detail.value)
        self.assertEqual(4, detail.used)
        self.assertEqual(2, detail.skipped)

    def test_errors(self):
        """Test bad arguments."""

        with self.assertRaises(DomainError):
            mn_sum_detail(self.table, 0)
        with self.assertRaises(DomainError):
            mn_sum_detail(self.table, 1, "S3")
        with self.assertRaises(DomainError):
            mn_sum_detail(self.table, 1, pmax=17)
        with self.assertRaises(DomainError):
            mn_sum(parse_curve("[0,0,0,-1,0]"), 1, self.table)

    def test_fast_equals_slow(self):
        """Test the table and point-counting paths agree to the bit."""

        rng = seeded(60)
        for _ in range(50):
            curve = _random_curve(rng)
            d = _random_d(rng)
            table = ap_table(curve, 60)
            for variant in ("S0", "S1"):
                slow = mn_sum_slow(curve, d, 60, variant)
                self.assertEqual(slow, mn_sum(curve, d, table, variant))
                lookup = TwistSumTable(table, variant)
                fast = lookup.sums(numpy.array([d], dtype=numpy.int64))
                self.assertEqual([slow], fast)

    def test_long_model(self):
        """Test the slow path on a long Weierstrass model."""

        table = ap_table(self.curve, 13)
        for d in (-7, -1, 2, 3, 15):
            self.assertEqual(
                mn_sum_slow(self.curve, d, 13), mn_sum(self.curve, d, table)
            )


class RunSieveTestCase(TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.curve = parse_curve("[0,-1,1,0,0]")
        self.table = ap_table(self.curve, 40)

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def _config(self, d_min, d_max, **kwargs):
        return SieveConfig(curve_id(self.curve), 40, d_min, d_max, **kwargs)

    def test_brute_force(self):
        """Test the sieve returns the best sums in order."""

        config = self._config(-400, 400, top_k=15)
        hits = run_sieve(config, self.table)
        everything = [
            SieveHit(d, mn_sum(self.curve, d, self.table))
            for d in range(-400, 401)
            if d and is_squarefree(d)
        ]
        everything.sort(key=lambda h: (-h.sum, abs(h.d), h.d))
        self.assertEqual(everything[:15], hits)

    def test_min_sum(self):
        """Test hits below the threshold are dropped."""

        hits = run_sieve(self._config(-200, 200, top_k=500), self.table)
        threshold = hits[10].sum
        kept = run_sieve(
            self._config(-200, 200, top_k=500, min_sum=threshold), self.table
        )
        self.assertEqual([h for h in hits if h.sum >= threshold], kept)

    def test_jobs(self):
        """Test worker processes do not change the result."""

        config = self._config(-CHUNK_SIZE - 500, CHUNK_SIZE + 500, top_k=30)
        serial = run_sieve(config, self.table, jobs=1)
        self.assertEqual(serial, run_sieve(config, self.table, jobs=4))
        self.assertEqual(30, len(serial))

    def test_checkpoint(self):
        """Test a finished checkpoint is resumed and guarded."""

        path = os.path.join(self.tmpdir, "sieve.json")
        config = self._config(-CHUNK_SIZE, 1000, top_k=10)
        first = run_sieve(config, self.table, checkpoint=path)
        with open(path) as source:
            state = json.load(source)
        self.assertEqual([0, 1], state["done"])
        with self.assertLogs(level="INFO") as logs:
            again = run_sieve(config, self.table, checkpoint=path)
        self.assertEqual(first, again)
        self.assertIn("resuming sieve", "\n".join(logs.output))
        with self.assertRaises(DomainError):
            run_sieve(self._config(-10, 10), self.table, checkpoint=path)

    def test_partial_checkpoint(self):
        """Test chunks missing from a checkpoint are recomputed."""

        path = os.path.join(self.tmpdir, "sieve.json")
        config = self._config(-CHUNK_SIZE, 1000, top_k=10)
        expected = run_sieve(config, self.table, checkpoint=path)
        with open(path) as source:
            state = json.load(source)
        state["done"] = [0]
        state["hits"] = [[d, s] for d, s in state["hits"] if d < 0]
        with open(path, "w") as out:
            json.dump(state, out)
        self.assertEqual(
            expected, run_sieve(config, self.table, checkpoint=path)
        )

    def test_table_mismatch(self):
        """Test the table must match the run."""

        with self.assertRaises(DomainError):
            run_sieve(
                SieveConfig("other", 40, -10, 10), self.table
            )
        with self.assertRaises(DomainError):
            run_sieve(
                SieveConfig(curve_id(self.curve), 100, -10, 10), self.table
            )

    def test_format(self):
        """Test the output header and hit lines."""

        config = self._config(1, 30, top_k=3)
        hits = run_sieve(config, self.table)
        lines = format_hits(config, self.table, hits)
        self.assertIn("# pmax=40", lines)
        self.assertIn("# variant=S1", lines)
        self.assertIn("# table={}".format(self.table.digest()), lines)
        body = [line for line in lines if not line.startswith("#")]
        self.assertEqual(3, len(body))
        d, value = body[0].split("\t")
        self.assertEqual(hits[0], SieveHit(int(d), float(value)))

    def test_throughput(self):
        """Test the fast path handles thousands of twists per second."""

        table = ap_table(self.curve, 100)
        config = SieveConfig(curve_id(self.curve), 100, 1, 40000)
        start = time.perf_counter()
        run_sieve(config, table)
        elapsed = time.perf_counter() - start
        count = len(eligible_twists(1, 40000))
        self.assertGreater(count / elapsed, 10**4)


class RankingTestCase(TestCase):
    def test_record_twist_ranks_high(self):
        """Test the twist of a rank 9 record sits above the median."""

        curve = parse_curve(Z8_BASE)
        table = ap_table(curve, 1000)
        lookup = TwistSumTable(table, "S1")
        sums = lookup.sums(eligible_twists(-1000, 1000))
        self.assertGreater(
            mn_sum(curve, -227, table), float(numpy.median(sums))
        )
