#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Tests for record ingestion and verification."""

# pylint: disable=duplicate-code
try:
    from unittest2 import TestCase, skipUnless
except ImportError:
    from unittest import TestCase, skipUnless
except AttributeError:
    from unittest import TestCase, skipUnless

import os
import pickle
import shutil
import tempfile

from ecquad.errors import DomainError, RecordError
from ecquad.heights import canonical_height
from ecquad.records import (
    FAILED,
    HEIGHT_MARGIN,
    SKIPPED,
    VERIFIED,
    VerifyOptions,
    default_corpus_path,
    ingest,
    ingest_lines,
    parse_record,
    recover_y,
    table_lines,
    verify,
)
from ecquad.torsion import TorsionGroup

from .utils import fixture_path

CORPUS_SIZE = 22
CORPUS_SKIPPED = 19


class IngestTestCase(TestCase):
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_empty(self):
        """Test an empty file gives no records."""

        path = os.path.join(self.tmpdir, "empty.rec")
        with open(path, "w") as out:
            out.write("# nothing here\n\n")
        self.assertEqual([], ingest(path))

    def test_small(self):
        """Test a small well formed file."""

        records = ingest(fixture_path("small.rec"))
        self.assertEqual(["e37", "e389", "e11"], [r.id for r in records])
        e389 = records[1]
        self.assertEqual(4, e389.lineno)
        self.assertEqual(2, e389.claimed_rank_lb)
        self.assertEqual(2, len(e389.points))
        self.assertFalse(e389.conditional)
        self.assertEqual(TorsionGroup(5), records[2].extra["base_torsion"])
        self.assertEqual("conductor-11", records[2].source)

    def test_corpus(self):
        """Test the shipped corpus ingests."""

        records = ingest(default_corpus_path())
        self.assertEqual(CORPUS_SIZE, len(records))
        z10 = [r for r in records if r.id == "z2z10-1065333545"][0]
        self.assertTrue(z10.conditional)
        self.assertEqual(5, z10.conditional_rank_lb)
        self.assertEqual(TorsionGroup(2, 10), z10.claimed_torsion)

    def test_corrupted_point(self):
        """Test a point off the curve names the point and line."""

        with self.assertRaises(RecordError) as ctx:
            ingest(fixture_path("corrupted.rec"))
        self.assertEqual(3, ctx.exception.lineno)
        self.assertEqual("(0;1)", ctx.exception.point)
        self.assertIn("line 3", str(ctx.exception))
        copy = pickle.loads(pickle.dumps(ctx.exception))
        self.assertEqual(str(ctx.exception), str(copy))

    def test_bad_lines(self):
        """Test malformed records are rejected."""

        base = "id=a field_d=5 curve=[0,0,1,-1,0] torsion=1 rank_lb=1"
        bad = (
            base + " rank_lb=2",
            base + " colour=red",
            base + " point",
            base.replace("field_d=5", "field_d=12"),
            base.replace("field_d=5", "field_d=0"),
            base.replace("field_d=5", "field_d=five"),
            base.replace("torsion=1", "torsion=17"),
            base.replace("torsion=1", "torsion=3x3"),
            base.replace("torsion=1", "torsion=2x2x2"),
            base.replace("[0,0,1,-1,0]", "[0,0,0,0,0]"),
            base.replace(" rank_lb=1", ""),
            base + " point=(0,0)",
            base + " field_from=three_torsion",
        )
        for line in bad:
            with self.assertRaises(RecordError, msg=line):
                parse_record(line, 7)
        with self.assertRaises(RecordError) as ctx:
            ingest_lines([base, "", base])
        self.assertEqual(3, ctx.exception.lineno)
        self.assertIn("duplicate id", str(ctx.exception))

    def test_x_only(self):
        """Test x-only points keep their x-coordinate."""

        record = parse_record(
            "id=a field_d=1 curve=[0,0,1,0,0] torsion=3 rank_lb=0 "
            "point=(0;?)"
        )
        self.assertIsNone(record.points[0].point)
        self.assertEqual(0, record.points[0].x)


class RecoverYTestCase(TestCase):
    def test_larger_root(self):
        """Test the larger of the two y-coordinates is chosen."""

        record = parse_record(
            "id=a field_d=1 curve=[0,0,1,0,0] torsion=3 rank_lb=0"
        )
        point = recover_y(record, 0)
        self.assertEqual(0, point.x)
        self.assertEqual(0, point.y)
        with self.assertRaises(DomainError):
            recover_y(record, 1)

    def test_corpus_x_only(self):
        """Test the Z/14 record's x-only point completes over K."""

        records = ingest(default_corpus_path())
        record = [r for r in records if r.id == "z14-265"][0]
        k = record.field
        x = record.points[1].x
        self.assertEqual(k("4902/4205-246/4205*s"), x)
        point = recover_y(record, x)
        expected = k("29556/121945-11196/609725*s")
        curve = record.curve
        partner = -expected - curve.a1 * x - curve.a3
        self.assertIn(point.y, (expected, partner))
        self.assertTrue(curve.contains(point.x, point.y))


class VerifyTestCase(TestCase):
    def setUp(self):
        self.corpus = ingest(default_corpus_path())

    def test_small(self):
        """Test verdicts on small curves."""

        report = verify(ingest(fixture_path("small.rec")))
        self.assertEqual(9, report.total(VERIFIED))
        self.assertEqual(1, report.total(SKIPPED))
        self.assertFalse(report.failed)
        counts = report.counts()
        self.assertEqual(3, counts["point"][VERIFIED])
        self.assertEqual(1, counts["rank"][SKIPPED])

    def test_wrong_torsion(self):
        """Test a false torsion claim fails."""

        report = verify(ingest(fixture_path("wrong_torsion.rec")))
        self.assertTrue(report.failed)
        torsion = [c for c in report.claims if c.kind == "torsion"][0]
        self.assertEqual(FAILED, torsion.status)
        self.assertIn("computed 1", torsion.detail)
        rank = [c for c in report.claims if c.kind == "rank"][0]
        self.assertEqual(VERIFIED, rank.status)

    def test_torsion_point_is_not_rank(self):
        """Test a torsion point does not count towards the rank."""

        record = parse_record(
            "id=a field_d=1 curve=[0,-1,1,0,0] torsion=5 rank_lb=1 "
            "point=(0;0)"
        )
        report = verify([record])
        statuses = dict((c.kind, c.status) for c in report.claims)
        self.assertEqual(FAILED, statuses["point"])
        self.assertEqual(FAILED, statuses["rank"])
        self.assertIn("order 5", report.claims[1].detail)

    def test_order_fifteen(self):
        """Test the Z/15 record verifies completely."""

        report = verify(self.corpus, VerifyOptions(only="z15-m7"))
        self.assertEqual(3, report.total(VERIFIED))
        self.assertEqual(0, report.total(SKIPPED))
        self.assertFalse(report.failed)
        machine = report.to_machine()
        self.assertIn("record.z15-m7.torsion[15]=verified", machine)
        self.assertIn("record.z15-m7.rank[>=1]=verified", machine)
        self.assertIn("summary.verified=3", machine)
        text = report.to_text()
        self.assertEqual("record z15-m7", text[0])
        self.assertEqual("total: 3 verified, 0 failed, 0 skipped", text[-1])

    def test_order_eleven(self):
        """Test both points of the Z/11 record are independent."""

        report = verify(self.corpus, VerifyOptions(only="z11-561"))
        self.assertEqual(4, report.total(VERIFIED))
        self.assertFalse(report.failed)

    def test_x_only_records(self):
        """Test the Z/14 and Z/16 records from x-coordinates alone."""

        for record_id in ("z14-265", "z16-1785"):
            report = verify(self.corpus, VerifyOptions(only=record_id))
            self.assertFalse(report.failed, record_id)
            self.assertEqual(4, report.total(VERIFIED), record_id)

    def test_one_point_per_torsion_class(self):
        """Test a point of each large torsion record at low precision."""

        records = dict((r.id, r) for r in self.corpus)
        for record_id in ("z11-561", "z14-265", "z15-m7", "z16-1785"):
            record = records[record_id]
            entry = record.points[0]
            point = entry.point or recover_y(record, entry.x)
            height = canonical_height(record.curve, point, precision=64)
            self.assertGreater(
                height.value, HEIGHT_MARGIN * height.error_bound, record_id
            )
        options = VerifyOptions(64, only="z2z10-1065333545")
        report = verify(self.corpus, options)
        self.assertFalse(report.failed)
        statuses = dict((c.kind, c.status) for c in report.claims)
        self.assertEqual(VERIFIED, statuses["torsion"])
        self.assertEqual(SKIPPED, statuses["rank"])

    def test_j_and_self_twist(self):
        """Test the j = 1728 record's extra claims."""

        report = verify(self.corpus, VerifyOptions(only="z2-m1"))
        statuses = dict((c.kind, c.status) for c in report.claims)
        self.assertEqual(VERIFIED, statuses["j"])
        self.assertEqual(VERIFIED, statuses["self_twist"])
        self.assertEqual(VERIFIED, statuses["base_torsion"])
        self.assertEqual(SKIPPED, statuses["rank"])
        ledger = report.entries[0][2]
        self.assertIn("ledger.rank_lb_K=28", ledger)
        self.assertIn("ledger.certified=no", ledger)

    def test_conditional(self):
        """Test Parity Conjecture claims are skipped, never failed."""

        report = verify(self.corpus, VerifyOptions(only="z11-m3239"))
        statuses = dict((c.kind, c.status) for c in report.claims)
        self.assertEqual(SKIPPED, statuses["conditional_rank"])
        self.assertEqual(VERIFIED, statuses["rank"])
        self.assertFalse(report.failed)

    def test_unknown_id(self):
        """Test restricting to a missing id."""

        with self.assertRaises(DomainError):
            verify(self.corpus, VerifyOptions(only="nope"))

    @skipUnless(os.environ.get("ECQUAD_SLOW_TESTS"), "slow")
    def test_whole_corpus(self):
        """Test every claim of the corpus verifies or is skipped."""

        report = verify(self.corpus, VerifyOptions(jobs=2))
        self.assertFalse(report.failed)
        self.assertEqual(CORPUS_SKIPPED, report.total(SKIPPED))
        self.assertEqual(CORPUS_SIZE, len(report.entries))


class TableTestCase(TestCase):
    def test_table(self):
        """Test the records table marks corpus coverage."""

        lines = table_lines(ingest(default_corpus_path()))
        self.assertEqual("T\td\tl.b.\tcoverage", lines[0])
        self.assertIn("15\t-7\t1\tcorpus z15-m7", lines)
        self.assertIn(
            "2x2\t*\t19 (20 conditional)\texcluded: coefficients not printed",
            lines,
        )
        self.assertIn("0\t*\t30\texternal: no curve data", lines)
        self.assertIn("11\t-3239\t2\tcorpus missing", table_lines())
