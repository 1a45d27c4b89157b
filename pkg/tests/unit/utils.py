#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Test utilities."""

import io
import os
import random
from fractions import Fraction

try:
    from unittest.mock import patch
except ImportError:
    from mock import patch

from ecquad.cli import main
from ecquad.curve import CurvePoint, WeierstrassCurve, quadratic_twist
from ecquad.errors import SingularCurveError
from ecquad.quadfield import QQ

SQUAREFREE_DS = (-15, -7, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13)


def fixture_path(*parts):
    """Return a path below tests/fixtures."""

    tests_path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    return os.path.join(tests_path, "fixtures", *parts)


def run_main(argv):
    """Run the command line, returning (exit code, stdout, stderr)."""

    with patch("sys.stdout", new_callable=io.StringIO) as out:
        with patch("sys.stderr", new_callable=io.StringIO) as err:
            code = main(argv)
    return code, out.getvalue(), err.getvalue()


def parse_pairs(text, sep="="):
    """Collect the non-header key=value lines of command output."""

    pairs = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(sep)
        pairs.setdefault(key.strip(), []).append(value.strip())
    return pairs


def random_twist_instance(rng, height=30):
    """
    Return (E, d, P, T) with P in E(Q) and T in E_d(Q), both affine.

    E: y^2 = x^3 + A*x + B is solved for from the two chosen points, which
    keeps everything exact without searching for rational points.
    """

    while True:
        d = rng.choice(SQUAREFREE_DS)
        x0 = rng.randint(-height, height)
        y0 = rng.randint(1, height)
        x1 = rng.randint(-height, height)
        y1 = rng.randint(1, height)
        if x1 == d * x0:
            continue
        # y0^2 = x0^3 + A*x0 + B and y1^2 = x1^3 + A*d^2*x1 + B*d^3
        det = Fraction(x0 * d**3 - d * d * x1)
        r0 = Fraction(y0 * y0 - x0**3)
        r1 = Fraction(y1 * y1 - x1**3)
        a4 = (r0 * d**3 - r1) / det
        a6 = (x0 * r1 - d * d * x1 * r0) / det
        try:
            curve = WeierstrassCurve(QQ, [a4, a6])
        except SingularCurveError:
            continue
        base = CurvePoint(curve, x0, y0)
        twist_point = CurvePoint(quadratic_twist(curve, d), x1, y1)
        return curve, d, base, twist_point


def seeded(seed):
    """A private random generator."""

    return random.Random(seed)
