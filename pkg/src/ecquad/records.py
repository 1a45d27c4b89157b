#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Record corpus ingestion and claim-by-claim verification.

A record file holds one curve per line as whitespace separated key=value
fields, for example::

    id=z15-m7 field_d=-7 curve=[15-2*s,-14+26*s,-14+26*s,0,0] torsion=15
    rank_lb=1 point=(-98+6*s;1064+136*s) source=order-15-parametrization

(on a single line).  Field elements use the "a+b*s" syntax with s the
square root of field_d.  Points are "(x;y)", or "(x;?)" when only the
x-coordinate is known.  Blank lines and lines starting with "#" are
ignored.
"""

import logging
import multiprocessing
from collections import namedtuple
from typing import TYPE_CHECKING

import pkg_resources

from .curve import (
    CurvePoint,
    base_change,
    order,
    parse_curve,
    quadratic_twist,
    to_short_model,
)
from .errors import DomainError, EcquadError, RecordError
from .exactnum import is_squarefree
from .heights import (
    DEFAULT_PRECISION,
    MAX_TORSION_ORDER,
    PRECISION_CEILING,
    VERDICT_INDEPENDENT,
    canonical_height,
    independence,
)
from .quadfield import QQ, QuadField, solve_quadratic_in_K
from .torsion import (
    TorsionGroup,
    extra_two_torsion_field,
    is_possible_over_quadratic,
    parse_torsion_group,
    torsion_over_K,
    torsion_over_Q,
)
from .twistdecomp import ledger_from_claims

if TYPE_CHECKING:
    from typing import Any, Dict, Iterable, List, Optional, Sequence

    from .curve import WeierstrassCurve

# pylint: disable=consider-using-f-string

CORPUS_RESOURCE = "data/corpus.rec"

REQUIRED_KEYS = ("id", "field_d", "curve", "torsion", "rank_lb")
OPTIONAL_KEYS = (
    "source",
    "conditional_rank_lb",
    "j",
    "base_torsion",
    "self_twist",
    "field_from",
    "base_rank",
    "twist_d",
    "twist_rank",
)
REPEATED_KEYS = ("point",)

VERIFIED = "verified"
FAILED = "failed"
SKIPPED = "skipped"
STATUSES = (VERIFIED, FAILED, SKIPPED)

NOT_DESK_VERIFIABLE = "not desk-verifiable"
HEIGHT_MARGIN = 10

RecordPoint = namedtuple("RecordPoint", ["text", "x", "point"])
RecordPoint.__doc__ = """A point entry: point is None for x-only entries."""

Claim = namedtuple("Claim", ["kind", "subject", "status", "detail"])
Claim.__doc__ = """One verdict; detail carries the certificate or reason."""

VerifyOptions = namedtuple(
    "VerifyOptions", ["precision", "jobs", "only", "ceiling"]
)
VerifyOptions.__new__.__defaults__ = (
    DEFAULT_PRECISION,
    1,
    None,
    PRECISION_CEILING,
)

TableRow = namedtuple(
    "TableRow", ["group", "d", "lower_bound", "conditional", "reference"]
)

TRIVIAL = TorsionGroup(1)

# The current-records table.  d is None where the field comes from a
# general construction with a huge discriminant.  reference is "corpus",
# "excluded" (coefficients not printed) or "external" (no curve data).
RECORDS_TABLE = (
    TableRow(TRIVIAL, None, 30, None, "external"),
    TableRow(TorsionGroup(2), -1, 28, None, "corpus"),
    TableRow(TorsionGroup(3), None, 15, None, "external"),
    TableRow(TorsionGroup(4), -25689, 15, None, "corpus"),
    TableRow(TorsionGroup(5), None, 10, None, "external"),
    TableRow(TorsionGroup(6), 3521, 11, None, "corpus"),
    TableRow(TorsionGroup(7), None, 7, None, "external"),
    TableRow(TorsionGroup(8), -227, 9, None, "corpus"),
    TableRow(TorsionGroup(9), -155, 6, None, "corpus"),
    TableRow(TorsionGroup(10), -2495, 7, None, "corpus"),
    TableRow(TorsionGroup(11), -3239, 2, None, "corpus"),
    TableRow(TorsionGroup(12), 2014, 7, None, "corpus"),
    TableRow(TorsionGroup(13), 193, 2, None, "external"),
    TableRow(TorsionGroup(14), 265, 2, None, "corpus"),
    TableRow(TorsionGroup(15), -7, 1, None, "corpus"),
    TableRow(TorsionGroup(16), 1785, 2, None, "corpus"),
    TableRow(TorsionGroup(18), 26521, 2, None, "external"),
    TableRow(TorsionGroup(2, 2), None, 19, 20, "excluded"),
    TableRow(TorsionGroup(2, 4), -83201, 13, None, "corpus"),
    TableRow(TorsionGroup(2, 6), 624341, 10, None, "corpus"),
    TableRow(TorsionGroup(2, 8), 31230597, 8, None, "corpus"),
    TableRow(TorsionGroup(2, 10), 1065333545, 4, 5, "corpus"),
    TableRow(TorsionGroup(2, 12), 2947271015, 4, None, "external"),
    TableRow(TorsionGroup(3, 3), -3, 7, None, "external"),
    TableRow(TorsionGroup(3, 6), -3, 6, None, "external"),
    TableRow(TorsionGroup(4, 4), -1, 7, None, "external"),
)


class CurveRecord(
    namedtuple(
        "CurveRecord",
        [
            "id",
            "field_d",
            "curve",
            "claimed_torsion",
            "claimed_rank_lb",
            "conditional_rank_lb",
            "points",
            "source",
            "extra",
            "lineno",
        ],
    )
):
    """One curve of the corpus with the claims made about it."""

    __slots__ = ()

    @property
    def field(self):
        # type: () -> QuadField
        """K = Q(sqrt(field_d))."""

        return self.curve.field

    @property
    def coefficients(self):
        # type: () -> Any
        """The a-invariants over K."""

        return self.curve.coefficients

    @property
    def conditional(self):
        # type: () -> bool
        """True when the record carries a Parity Conjecture claim."""

        return self.conditional_rank_lb is not None


class RecordReport(object):
    """Verdicts for a list of records, in record order."""

    def __init__(self, entries):
        # type: (Sequence[Any]) -> None
        """
        Create a report.

        :param entries: (record id, claims, ledger lines) triples
        """

        self.entries = list(entries)

    @property
    def claims(self):
        # type: () -> List[Claim]
        """All claims of all records."""

        return [claim for _, claims, _ in self.entries for claim in claims]

    def counts(self):
        # type: () -> Dict[str, Dict[str, int]]
        """Number of verdicts per claim kind and status."""

        result = {}  # type: Dict[str, Dict[str, int]]
        for claim in self.claims:
            per_kind = result.setdefault(
                claim.kind, dict((status, 0) for status in STATUSES)
            )
            per_kind[claim.status] += 1
        return result

    def total(self, status):
        # type: (str) -> int
        """Number of claims with the given status."""

        return sum(1 for claim in self.claims if claim.status == status)

    @property
    def failed(self):
        # type: () -> bool
        """True when any claim failed."""

        return self.total(FAILED) > 0

    def to_text(self):
        # type: () -> List[str]
        """Human readable report."""

        lines = []
        for record_id, claims, ledger in self.entries:
            lines.append("record {}".format(record_id))
            for claim in claims:
                subject = " {}".format(claim.subject) if claim.subject else ""
                lines.append(
                    "  {}{}: {} ({})".format(
                        claim.kind, subject, claim.status, claim.detail
                    )
                )
            lines.extend("  {}".format(line) for line in ledger)
        lines.append(
            "total: {} verified, {} failed, {} skipped".format(
                self.total(VERIFIED), self.total(FAILED), self.total(SKIPPED)
            )
        )
        return lines

    def to_machine(self):
        # type: () -> List[str]
        """Line oriented key=value summary block."""

        lines = []
        for record_id, claims, _ in self.entries:
            for claim in claims:
                key = claim.kind
                if claim.subject:
                    key = "{}[{}]".format(key, claim.subject)
                lines.append(
                    "record.{}.{}={}".format(record_id, key, claim.status)
                )
        for kind, per_kind in sorted(self.counts().items()):
            for status in STATUSES:
                lines.append(
                    "summary.{}.{}={}".format(kind, status, per_kind[status])
                )
        for status in STATUSES:
            lines.append("summary.{}={}".format(status, self.total(status)))
        return lines


def default_corpus_path():
    # type: () -> str
    """Path of the shipped record corpus."""

    return pkg_resources.resource_filename(__name__, CORPUS_RESOURCE)


def _fields(line, lineno):
    # type: (str, int) -> Dict[str, Any]
    fields = {"point": []}  # type: Dict[str, Any]
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise RecordError(
                "expected key=value, got {!r}".format(token), lineno
            )
        if key in REPEATED_KEYS:
            fields[key].append(value)
        elif key in REQUIRED_KEYS or key in OPTIONAL_KEYS:
            if key in fields:
                raise RecordError("duplicate key {!r}".format(key), lineno)
            fields[key] = value
        else:
            raise RecordError("unknown key {!r}".format(key), lineno)
    for key in REQUIRED_KEYS:
        if key not in fields:
            raise RecordError("missing key {!r}".format(key), lineno)
    return fields


def _integer(fields, key, lineno):
    # type: (Dict[str, Any], str, int) -> Optional[int]
    if key not in fields:
        return None
    try:
        return int(fields[key])
    except ValueError:
        raise RecordError(
            "{} must be an integer, got {!r}".format(key, fields[key]), lineno
        ) from None


def _parse_point(text, curve, lineno):
    # type: (str, WeierstrassCurve, int) -> RecordPoint
    compact = "".join(text.split())
    if not (compact.startswith("(") and compact.endswith(")")):
        raise RecordError("bad point {}".format(text), lineno, text)
    parts = compact[1:-1].split(";")
    if len(parts) != 2:
        raise RecordError("bad point {}".format(text), lineno, text)
    try:
        x = curve.field(parts[0])
        if parts[1] == "?":
            return RecordPoint(text, x, None)
        point = CurvePoint(curve, x, curve.field(parts[1]))
    except DomainError as err:
        raise RecordError(
            "point {} rejected: {}".format(text, err.message), lineno, text
        ) from None
    return RecordPoint(text, x, point)


def parse_record(line, lineno=0):
    # type: (str, int) -> CurveRecord
    """
    Parse and check one record line.

    :param line: The record text
    :param lineno: Line number used in error messages
    """

    fields = _fields(line, lineno)
    field_d = _integer(fields, "field_d", lineno)
    if not field_d or not is_squarefree(field_d):
        raise RecordError(
            "field_d {} is not a squarefree integer".format(field_d), lineno
        )
    try:
        group = parse_torsion_group(fields["torsion"])
    except DomainError as err:
        raise RecordError(err.message, lineno) from None
    if not is_possible_over_quadratic(group, field_d):
        raise RecordError(
            "torsion {} is impossible over Q(sqrt({}))".format(group, field_d),
            lineno,
        )
    field = QuadField(field_d)
    try:
        curve = parse_curve(fields["curve"], field)
    except DomainError as err:
        raise RecordError(err.message, lineno) from None
    points = tuple(
        _parse_point(text, curve, lineno) for text in fields["point"]
    )
    if fields.get("field_from", "two_torsion") != "two_torsion":
        raise RecordError(
            "unknown field_from {!r}".format(fields["field_from"]), lineno
        )
    extra = {}
    for key in ("j", "field_from"):
        if key in fields:
            extra[key] = fields[key]
    for key in ("self_twist", "base_rank", "twist_d", "twist_rank"):
        value = _integer(fields, key, lineno)
        if value is not None:
            extra[key] = value
    if "base_torsion" in fields:
        try:
            extra["base_torsion"] = parse_torsion_group(fields["base_torsion"])
        except DomainError as err:
            raise RecordError(err.message, lineno) from None
    return CurveRecord(
        fields["id"],
        field_d,
        curve,
        group,
        _integer(fields, "rank_lb", lineno),
        _integer(fields, "conditional_rank_lb", lineno),
        points,
        fields.get("source", ""),
        extra,
        lineno,
    )


def ingest_lines(lines):
    # type: (Iterable[str]) -> List[CurveRecord]
    """Parse record lines; see ingest."""

    records = []  # type: List[CurveRecord]
    seen = {}  # type: Dict[str, int]
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        record = parse_record(line, lineno)
        if record.id in seen:
            raise RecordError(
                "duplicate id {} (first on line {})".format(
                    record.id, seen[record.id]
                ),
                lineno,
            )
        seen[record.id] = lineno
        records.append(record)
    logging.debug("ingested %s records", len(records))
    return records


def ingest(path):
    # type: (str) -> List[CurveRecord]
    """
    Read a record file.

    :param path: Path of the file

    Raises RecordError with the line number on the first bad line.
    """

    with open(path) as source:
        return ingest_lines(source)


def recover_y(record, x):
    # type: (CurveRecord, Any) -> CurvePoint
    """
    Complete an x-coordinate to a point of the record's curve over K.

    :param record: The record
    :param x: Element of K

    When both y exist the lexicographically larger one is returned, so
    that x = 0 on y^2 + y = x^3 gives (0, 0).
    """

    curve = record.curve
    x = curve.field(x)
    p, q = curve.y_polynomial(x)
    roots = solve_quadratic_in_K(p, q, curve.field)
    if not roots:
        raise DomainError(
            "x-coordinate {} not on curve over K".format(x)
        )
    return CurvePoint(curve, x, roots[-1])


def _torsion_claim(record):
    # type: (CurveRecord) -> Claim
    curve = record.curve
    try:
        if record.field_d == 1:
            data = torsion_over_Q(curve)
        else:
            data = torsion_over_K(curve)
    except EcquadError as err:
        return Claim("torsion", "", FAILED, err.message)
    detail = "computed {}, reduction bound {}, generators {}".format(
        data.group,
        data.bound,
        " ".join(str(g) for g in data.generators) or "none",
    )
    status = VERIFIED if data.group == record.claimed_torsion else FAILED
    return Claim("torsion", str(record.claimed_torsion), status, detail)


def _extra_claims(record):
    # type: (CurveRecord) -> List[Claim]
    claims = []
    curve = record.curve
    extra = record.extra
    if "j" in extra:
        expected = curve.field(extra["j"])
        status = VERIFIED if curve.j == expected else FAILED
        claims.append(
            Claim("j", extra["j"], status, "computed {}".format(curve.j))
        )
    rational = base_change(curve, QQ) if curve.is_rational() else None
    if "base_torsion" in extra:
        if rational is None:
            claims.append(
                Claim("base_torsion", "", FAILED, "curve is not over Q")
            )
        else:
            group = torsion_over_Q(rational).group
            status = VERIFIED if group == extra["base_torsion"] else FAILED
            claims.append(
                Claim(
                    "base_torsion",
                    str(extra["base_torsion"]),
                    status,
                    "computed {}".format(group),
                )
            )
    if "self_twist" in extra:
        d = extra["self_twist"]
        if rational is None:
            claims.append(
                Claim("self_twist", str(d), FAILED, "curve not over Q")
            )
        else:
            short = to_short_model(rational).curve
            twist = quadratic_twist(rational, d)
            same = to_short_model(twist).curve == short
            status = VERIFIED if same else FAILED
            claims.append(
                Claim("self_twist", str(d), status, "twist {}".format(twist))
            )
    if "field_from" in extra:
        try:
            found = extra_two_torsion_field(curve)
            status = VERIFIED if found == record.field_d else FAILED
            detail = "full 2-torsion over Q(sqrt({}))".format(found)
        except EcquadError as err:
            status, detail = FAILED, err.message
        claims.append(Claim("field_from", "two_torsion", status, detail))
    return claims


def _certified_height(curve, point, precision, ceiling):
    # type: (WeierstrassCurve, CurvePoint, int, int) -> Any
    """Height at the first precision separating it from zero."""

    while True:
        height = canonical_height(curve, point, precision, ceiling=ceiling)
        if height.value > HEIGHT_MARGIN * height.error_bound:
            return height
        if precision * 2 > ceiling:
            return height
        precision *= 2
        logging.info("raising precision for %s to %s bits", point, precision)


def _point_claims(record, precision, ceiling):
    # type: (CurveRecord, int, int) -> Any
    claims = []
    points = []
    for entry in record.points:
        point = entry.point
        if point is None:
            try:
                point = recover_y(record, entry.x)
            except DomainError as err:
                claims.append(Claim("point", entry.text, FAILED, err.message))
                continue
        torsion = order(point, MAX_TORSION_ORDER)
        if torsion is not None:
            claims.append(
                Claim(
                    "point",
                    entry.text,
                    FAILED,
                    "on curve, order {}".format(torsion),
                )
            )
            continue
        try:
            height = _certified_height(
                record.curve, point, precision, ceiling
            )
        except EcquadError as err:
            claims.append(Claim("point", entry.text, FAILED, err.message))
            continue
        if height.value > HEIGHT_MARGIN * height.error_bound:
            status = VERIFIED
            points.append(point)
        else:
            status = FAILED
        claims.append(
            Claim(
                "point",
                entry.text,
                status,
                "on curve at {}, order infinite, height {}".format(
                    point, height
                ),
            )
        )
    return claims, points


def _rank_claims(record, points, precision, ceiling):
    # type: (CurveRecord, List[CurvePoint], int, int) -> List[Claim]
    claims = []
    subject = ">={}".format(record.claimed_rank_lb)
    if not record.points:
        claims.append(
            Claim(
                "rank",
                subject,
                SKIPPED,
                "{}: generators not printed".format(NOT_DESK_VERIFIABLE),
            )
        )
    elif len(points) < len(record.points):
        claims.append(
            Claim("rank", subject, FAILED, "some points were rejected")
        )
    else:
        result = independence(record.curve, points, precision, ceiling)
        certified = len(points) if result.verdict == VERDICT_INDEPENDENT else 0
        detail = "points {}, certified rank >= {}".format(
            result.verdict, certified
        )
        if result.gram is not None:
            detail += ", Gram determinant {}".format(result.gram.determinant)
        status = VERIFIED if certified >= record.claimed_rank_lb else FAILED
        claims.append(Claim("rank", subject, status, detail))
    if record.conditional:
        claims.append(
            Claim(
                "conditional_rank",
                ">={}".format(record.conditional_rank_lb),
                SKIPPED,
                "{}: assumes the Parity Conjecture".format(
                    NOT_DESK_VERIFIABLE
                ),
            )
        )
    return claims


def _ledger_lines(record):
    # type: (CurveRecord) -> List[str]
    extra = record.extra
    if "base_rank" not in extra or not record.curve.is_rational():
        return []
    ledger = ledger_from_claims(
        base_change(record.curve, QQ),
        extra.get("twist_d", record.field_d),
        extra["base_rank"],
        extra.get("twist_rank", 0),
        record.source,
    )
    return ledger.to_lines()


def verify_record(
    record, precision=DEFAULT_PRECISION, ceiling=PRECISION_CEILING
):
    # type: (CurveRecord, int, int) -> Any
    """
    Check every claim of one record.

    :param record: The record
    :param precision: Starting precision of height computations in bits
    :param ceiling: Largest precision tried

    Returns (record id, claims, ledger lines).
    """

    logging.info("verifying record %s", record.id)
    claims = [_torsion_claim(record)]
    claims.extend(_extra_claims(record))
    point_claims, points = _point_claims(record, precision, ceiling)
    claims.extend(point_claims)
    claims.extend(_rank_claims(record, points, precision, ceiling))
    for claim in claims:
        logging.debug("%s: %s %s", record.id, claim.kind, claim.status)
    return record.id, claims, _ledger_lines(record)


def _verify_job(job):
    # type: (Any) -> Any
    record, precision, ceiling = job
    return verify_record(record, precision, ceiling)


def verify(records, options=None):
    # type: (Sequence[CurveRecord], Optional[VerifyOptions]) -> RecordReport
    """
    Verify records and collect the report in record order.

    :param records: Ingested records
    :param options: Precision, worker count, an optional record id to
                    restrict the run to and the precision ceiling
    """

    options = options or VerifyOptions()
    selected = [
        r for r in records if options.only is None or r.id == options.only
    ]
    if options.only is not None and not selected:
        raise DomainError("no record with id {}".format(options.only))
    jobs = [
        (record, options.precision, options.ceiling) for record in selected
    ]
    if options.jobs > 1 and len(jobs) > 1:
        with multiprocessing.Pool(processes=options.jobs) as pool:
            entries = pool.map(_verify_job, jobs, chunksize=1)
    else:
        entries = [_verify_job(job) for job in jobs]
    return RecordReport(entries)


def table_lines(records=()):
    # type: (Sequence[CurveRecord]) -> List[str]
    """
    Render the current-records table with corpus coverage.

    :param records: Corpus used to mark rows as covered
    """

    covered = dict(
        ((r.claimed_torsion, r.field_d), r.id) for r in reversed(records)
    )
    lines = ["T\td\tl.b.\tcoverage"]
    for row in RECORDS_TABLE:
        group = "0" if row.group == TRIVIAL else str(row.group)
        d = "*" if row.d is None else str(row.d)
        bound = str(row.lower_bound)
        if row.conditional is not None:
            bound += " ({} conditional)".format(row.conditional)
        if row.reference == "corpus":
            coverage = "corpus {}".format(
                covered.get((row.group, row.d), "missing")
            )
        elif row.reference == "excluded":
            coverage = "excluded: coefficients not printed"
        else:
            coverage = "external: no curve data"
        lines.append("\t".join((group, d, bound, coverage)))
    return lines
