#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
The ecquad command line.

Results go to standard output, preceded by "#" header lines echoing the
effective configuration; logging goes to standard error.  Exit status is
0 on success, 1 when verification finds a failed claim or a computation
gives up, and 2 on usage errors.
"""

import argparse
import logging
import sys
from typing import TYPE_CHECKING

from .config import load_settings
from .curve import (
    base_change,
    curve_id,
    format_curve,
    format_point,
    parse_curve,
    parse_point,
    quadratic_twist,
    tate_normal,
    tate_normal_parameters,
    to_short_model,
)
from .errors import DomainError, EcquadError, RecordError
from .exactnum import set_rho_steps
from .heights import canonical_height, independence
from .modp import cached_ap_table
from .quadfield import QuadField, format_quad
from .records import (
    FAILED,
    VerifyOptions,
    default_corpus_path,
    ingest,
    table_lines,
    verify,
)
from .sieve import (
    VARIANTS,
    SieveConfig,
    format_hits,
    mn_sum_detail,
    mn_sum_slow,
    run_sieve,
)
from .torsion import extra_two_torsion_field, torsion_over_K, torsion_over_Q
from .twistdecomp import descend
from .version import __version__

if TYPE_CHECKING:
    from typing import Any, List, Optional, Sequence, Tuple

    from .config import Settings

    Pairs = List[Tuple[str, Any]]

# pylint: disable=consider-using-f-string

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Settings that cannot change a result stay out of the stdout header.
UNECHOED_SETTINGS = ("jobs", "log_level")

LOG_FORMAT = "%(levelname)s: %(message)s"


def _emit(settings, args, pairs, out=None):
    # type: (Settings, argparse.Namespace, Pairs, Any) -> None
    out = out or sys.stdout
    for line in _header(settings, args):
        out.write(line + "\n")
    sep = "=" if args.format == "machine" else ": "
    for key, value in pairs:
        out.write("{}{}{}\n".format(key, sep, value))


def _header(settings, args):
    # type: (Settings, argparse.Namespace) -> List[str]
    lines = ["# ecquad {} {}".format(__version__, args.command)]
    lines.extend(settings.to_lines(exclude=UNECHOED_SETTINGS))
    for name in sorted(vars(args)):
        if name in ("command", "func") or name in settings.values:
            continue
        value = getattr(args, name)
        if value is not None:
            lines.append("# arg.{}={}".format(name, value))
    return lines


def _curve(args):
    # type: (argparse.Namespace) -> Any
    return parse_curve(args.curve, QuadField(args.field_d))


def _rational_curve(args):
    # type: (argparse.Namespace) -> Any
    curve = parse_curve(args.curve)
    if not curve.is_rational():
        raise DomainError("{} is not defined over Q".format(curve))
    return curve


def _ap(settings, curve, pmax):
    # type: (Settings, Any, int) -> Any
    cache_dir = settings.cache_dir if settings.use_cache else None
    return cached_ap_table(curve, pmax, cache_dir, settings.jobs)


def do_invariants(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print b-, c-invariants, discriminant and j."""

    curve = _curve(args)
    inv = curve.invariants
    pairs = [("curve", format_curve(curve)), ("field", curve.field)]
    for name in ("b2", "b4", "b6", "b8", "c4", "c6", "discriminant", "j"):
        pairs.append((name, format_quad(getattr(inv, name))))
    _emit(settings, args, pairs)
    return EXIT_OK


def do_twist(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print the quadratic twist by d."""

    curve = _rational_curve(args)
    twist = quadratic_twist(curve, args.d)
    short = to_short_model(base_change(curve, twist.field)).curve
    pairs = [
        ("twist", format_curve(twist)),
        ("short_model", format_curve(short)),
        ("isomorphic_over_Q", "yes" if twist == short else "no"),
    ]
    _emit(settings, args, pairs)
    return EXIT_OK


def do_torsion(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print the torsion subgroup over Q or Q(sqrt(d))."""

    curve = _curve(args)
    if args.field_d == 1:
        data = torsion_over_Q(curve)
    else:
        data = torsion_over_K(curve)
    pairs = [("torsion", data.group), ("bound", data.bound)]
    pairs.extend(("generator", format_point(g)) for g in data.generators)
    if args.points:
        pairs.extend(("point", format_point(p)) for p in data.all_points)
    if args.two_torsion_field:
        pairs.append(("two_torsion_field", extra_two_torsion_field(curve)))
    _emit(settings, args, pairs)
    return EXIT_OK


def do_ap(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print the a_p table."""

    table = _ap(settings, _rational_curve(args), settings.pmax)
    for line in _header(settings, args):
        sys.stdout.write(line + "\n")
    for line in table.to_lines():
        sys.stdout.write(line + "\n")
    return EXIT_OK


def do_mn_sum(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print the Mestre-Nagao sum of one twist."""

    curve = _rational_curve(args)
    if args.slow:
        value = mn_sum_slow(curve, args.d, settings.pmax, args.variant)
        pairs = [("sum", repr(value))]
    else:
        table = _ap(settings, curve, settings.pmax)
        result = mn_sum_detail(table, args.d, args.variant)
        pairs = [
            ("sum", repr(result.value)),
            ("primes_used", result.used),
            ("primes_skipped", result.skipped),
            ("table", table.digest()),
        ]
    _emit(settings, args, pairs)
    return EXIT_OK


def do_sieve(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Rank twists by their Mestre-Nagao sums."""

    curve = _rational_curve(args)
    config = SieveConfig(
        curve_id(curve),
        settings.pmax,
        args.dmin,
        args.dmax,
        args.top,
        args.min_sum,
        args.variant,
        "fundamental" if args.fundamental else "squarefree",
    )
    table = _ap(settings, curve, settings.pmax)
    hits = run_sieve(config, table, settings.jobs, args.resume)
    for line in _header(settings, args) + format_hits(config, table, hits):
        sys.stdout.write(line + "\n")
    return EXIT_OK


def do_height(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print the canonical height of a point."""

    curve = _curve(args)
    point = parse_point(args.point, curve)
    height = canonical_height(
        curve,
        point,
        settings.precision_bits,
        ceiling=settings.precision_ceiling,
    )
    pairs = [
        ("point", format_point(point)),
        ("height", height.value),
        ("error_bound", height.error_bound),
        ("precision", height.precision),
        ("terms", height.terms),
        ("bad_primes", " ".join(str(p) for p in height.primes) or "none"),
    ]
    _emit(settings, args, pairs)
    return EXIT_OK


def do_independence(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Decide independence of points; exit 1 unless independent."""

    curve = _curve(args)
    points = [parse_point(text, curve) for text in args.point]
    result = independence(
        curve, points, settings.precision_bits, settings.precision_ceiling
    )
    pairs = [("verdict", result.verdict), ("precision", result.precision)]
    if result.gram is not None:
        pairs.append(("determinant", result.gram.determinant.value))
        pairs.append(
            ("determinant_error", result.gram.determinant.error_bound)
        )
    if result.relation is not None:
        pairs.append(("relation", ",".join(str(c) for c in result.relation)))
    _emit(settings, args, pairs)
    return EXIT_OK if result.verdict == "independent" else EXIT_FAILURE


def do_descend(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Split 2P into points over Q of the curve and its twist."""

    if args.field_d == 1:
        raise DomainError("descend needs --field-d different from 1")
    curve = _curve(args)
    result = descend(parse_point(args.point, curve), args.field_d)
    pairs = [
        ("plus", format_point(result.plus)),
        ("plus_curve", format_curve(result.plus.curve)),
        ("minus", format_point(result.minus)),
        ("minus_curve", format_curve(result.minus.curve)),
        ("defect", format_point(result.defect)),
    ]
    _emit(settings, args, pairs)
    return EXIT_OK


def do_tate_normal(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Build a Tate normal form, or read (b, c) back from one."""

    field = QuadField(args.field_d)
    if args.curve:
        b, c = tate_normal_parameters(parse_curve(args.curve, field))
        pairs = [("b", format_quad(b)), ("c", format_quad(c))]
    elif args.b is not None and args.c is not None:
        curve = tate_normal(field(args.b), field(args.c), field)
        pairs = [("curve", format_curve(curve))]
    else:
        raise DomainError("tate-normal needs --curve or both --b and --c")
    _emit(settings, args, pairs)
    return EXIT_OK


def do_verify(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Verify the record corpus; exit 1 on any failed claim."""

    records = ingest(args.records or default_corpus_path())
    report = verify(
        records,
        VerifyOptions(
            settings.precision_bits,
            settings.jobs,
            args.only,
            settings.precision_ceiling,
        ),
    )
    if args.format == "machine":
        body = report.to_machine()
    else:
        body = report.to_text() + report.to_machine()
    lines = _header(settings, args) + body
    if args.report:
        with open(args.report, "w") as out:
            out.write("\n".join(lines) + "\n")
        logging.info("report written to %s", args.report)
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    for claim in report.claims:
        if claim.status == FAILED:
            logging.error(
                "failed %s %s: %s", claim.kind, claim.subject, claim.detail
            )
    return EXIT_FAILURE if report.failed else EXIT_OK


def do_table(args, settings):
    # type: (argparse.Namespace, Settings) -> int
    """Print the records table with corpus coverage."""

    records = ingest(args.records or default_corpus_path())
    for line in _header(settings, args) + table_lines(records):
        sys.stdout.write(line + "\n")
    return EXIT_OK


def _common_parser():
    # type: () -> argparse.ArgumentParser
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        dest="log_level",
        help="log level for Python logging module (env: ECQUAD_LOG_LEVEL, "
        "default warning)",
    )
    common.add_argument(
        "--config",
        help="ini file with an [ecquad] section (env: ECQUAD_CONFIG)",
    )
    common.add_argument(
        "--precision-bits",
        dest="precision_bits",
        type=int,
        help="starting precision of height computations",
    )
    common.add_argument(
        "--pmax",
        type=int,
        help="largest prime of a_p tables and sums (env: ECQUAD_PMAX)",
    )
    common.add_argument(
        "--jobs",
        type=int,
        help="worker processes (env: ECQUAD_JOBS, default all cores)",
    )
    common.add_argument(
        "--format",
        choices=("text", "machine"),
        default="text",
        help="text, or stable key=value lines",
    )
    return common


def _curve_options(parser, rational=False):
    # type: (argparse.ArgumentParser, bool) -> None
    parser.add_argument(
        "--curve",
        required=True,
        help="a-invariants as [a1,a2,a3,a4,a6] or [a4,a6]",
    )
    if not rational:
        parser.add_argument(
            "--field-d",
            dest="field_d",
            type=int,
            default=1,
            help="work over Q(sqrt(d)); coefficients may use s = sqrt(d)",
        )


def get_arg_parser():
    # type: () -> argparse.ArgumentParser
    """Return the argparse parser for ecquad."""

    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="ecquad",
        description="Elliptic curves over Q and quadratic fields.",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + __version__
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    sub = commands.add_parser(
        "invariants", parents=[common], help="curve invariants"
    )
    _curve_options(sub)
    sub.set_defaults(func=do_invariants)

    sub = commands.add_parser(
        "twist", parents=[common], help="quadratic twist"
    )
    _curve_options(sub, rational=True)
    sub.add_argument("--d", type=int, required=True, help="twist parameter")
    sub.set_defaults(func=do_twist)

    sub = commands.add_parser(
        "torsion", parents=[common], help="torsion subgroup"
    )
    _curve_options(sub)
    sub.add_argument(
        "--points", action="store_true", help="list every torsion point"
    )
    sub.add_argument(
        "--two-torsion-field",
        dest="two_torsion_field",
        action="store_true",
        help="report the field of full 2-torsion",
    )
    sub.set_defaults(func=do_torsion)

    sub = commands.add_parser("ap", parents=[common], help="a_p table")
    _curve_options(sub, rational=True)
    sub.set_defaults(func=do_ap)

    sub = commands.add_parser(
        "mn-sum", parents=[common], help="Mestre-Nagao sum of one twist"
    )
    _curve_options(sub, rational=True)
    sub.add_argument("--d", type=int, required=True, help="twist parameter")
    sub.add_argument("--variant", choices=VARIANTS, default="S1")
    sub.add_argument(
        "--slow",
        action="store_true",
        help="count points on the twisted curve instead of using a table",
    )
    sub.set_defaults(func=do_mn_sum)

    sub = commands.add_parser("sieve", parents=[common], help="twist sieve")
    _curve_options(sub, rational=True)
    sub.add_argument("--dmin", type=int, required=True)
    sub.add_argument("--dmax", type=int, required=True)
    sub.add_argument("--top", type=int, default=20, help="hits to keep")
    sub.add_argument(
        "--min-sum", dest="min_sum", type=float, help="drop smaller sums"
    )
    sub.add_argument("--variant", choices=VARIANTS, default="S1")
    sub.add_argument(
        "--fundamental",
        action="store_true",
        help="enumerate fundamental discriminants instead of squarefree d",
    )
    sub.add_argument("--resume", metavar="CHECKPOINT", help="checkpoint file")
    sub.set_defaults(func=do_sieve)

    sub = commands.add_parser(
        "height", parents=[common], help="canonical height"
    )
    _curve_options(sub)
    sub.add_argument("--point", required=True, help="point as (x;y)")
    sub.set_defaults(func=do_height)

    sub = commands.add_parser(
        "independence", parents=[common], help="independence certificate"
    )
    _curve_options(sub)
    sub.add_argument(
        "--point", action="append", required=True, help="repeatable"
    )
    sub.set_defaults(func=do_independence)

    sub = commands.add_parser(
        "descend", parents=[common], help="split a point over K"
    )
    _curve_options(sub)
    sub.add_argument("--point", required=True, help="point as (x;y)")
    sub.set_defaults(func=do_descend)

    sub = commands.add_parser(
        "tate-normal", parents=[common], help="Tate normal form"
    )
    sub.add_argument("--curve", help="curve to read (b, c) from")
    sub.add_argument("--b", help="parameter b")
    sub.add_argument("--c", help="parameter c")
    sub.add_argument("--field-d", dest="field_d", type=int, default=1)
    sub.set_defaults(func=do_tate_normal)

    sub = commands.add_parser(
        "verify", parents=[common], help="verify the record corpus"
    )
    sub.add_argument(
        "--records", help="record file, the shipped corpus by default"
    )
    sub.add_argument("--only", help="verify a single record id")
    sub.add_argument("--report", help="write the report to this file")
    sub.set_defaults(func=do_verify)

    sub = commands.add_parser(
        "table", parents=[common], help="records table with coverage"
    )
    sub.add_argument(
        "--records", help="record file, the shipped corpus by default"
    )
    sub.set_defaults(func=do_table)
    return parser


def main(argv=None):
    # type: (Optional[Sequence[str]]) -> int
    """Execute the main function."""

    parser = get_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT)
    try:
        settings = load_settings(
            {
                "log_level": args.log_level,
                "precision_bits": args.precision_bits,
                "pmax": args.pmax,
                "jobs": args.jobs,
            },
            args.config,
        )
    except DomainError as err:
        sys.stderr.write("{}\n".format(err))
        return EXIT_USAGE
    logging.getLogger().setLevel(getattr(logging, settings.log_level.upper()))
    logging.info("running %s with %s jobs", args.command, settings.jobs)
    set_rho_steps(settings.rho_steps)
    try:
        return args.func(args, settings)
    except (DomainError, RecordError) as err:
        sys.stderr.write("{}\n".format(err))
        return EXIT_USAGE
    except EcquadError as err:
        sys.stderr.write("{}\n".format(err))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
