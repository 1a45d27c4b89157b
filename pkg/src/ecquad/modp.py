#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Reduction modulo primes, point counting and a_p tables."""

import hashlib
import logging
import math
import multiprocessing
import os
import random
import tempfile
from collections import namedtuple
from fractions import Fraction
from typing import TYPE_CHECKING

from sympy import primerange
from sympy.ntheory import sqrt_mod

from .curve import CurvePoint, WeierstrassCurve, curve_hash, curve_id
from .errors import DomainError, SingularCurveError
from .exactnum import jacobi, valuation
from .quadfield import QuadElem

if TYPE_CHECKING:
    from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

# pylint: disable=consider-using-f-string

NAIVE_LIMIT = 2**10
BSGS_POINTS = 8
DEFAULT_PMAX = 1000
WEIGHTS = (1, 2, 3, 4, 6)

ApEntry = namedtuple("ApEntry", ["p", "a_p", "good"])
Reduction = namedtuple("Reduction", ["p", "good", "curve"])


class FpElem(object):
    """An element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        # type: (int, int) -> None
        """Store value mod p."""

        object.__setattr__(self, "value", value % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("FpElem is immutable")

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[int, int]]
        return (FpElem, (self.value, self.p))

    def _other(self, other):
        # type: (object) -> Optional[int]
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise DomainError(
                    "mixing F_{} and F_{}".format(self.p, other.p)
                )
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return _fraction_mod(other, self.p)
        return None

    def __add__(self, other):
        # type: (object) -> FpElem
        value = self._other(other)
        if value is None:
            return NotImplemented
        return FpElem(self.value + value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        # type: (object) -> FpElem
        value = self._other(other)
        if value is None:
            return NotImplemented
        return FpElem(self.value - value, self.p)

    def __rsub__(self, other):
        # type: (object) -> FpElem
        value = self._other(other)
        if value is None:
            return NotImplemented
        return FpElem(value - self.value, self.p)

    def __mul__(self, other):
        # type: (object) -> FpElem
        value = self._other(other)
        if value is None:
            return NotImplemented
        return FpElem(self.value * value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        # type: () -> FpElem
        return FpElem(-self.value, self.p)

    def inverse(self):
        # type: () -> FpElem
        """Multiplicative inverse."""

        if not self.value:
            raise ZeroDivisionError("inverse of zero in F_{}".format(self.p))
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        # type: (object) -> FpElem
        value = self._other(other)
        if value is None:
            return NotImplemented
        return self * FpElem(value, self.p).inverse()

    def __rtruediv__(self, other):
        # type: (object) -> FpElem
        value = self._other(other)
        if value is None:
            return NotImplemented
        return FpElem(value, self.p) * self.inverse()

    def __pow__(self, exponent):
        # type: (int) -> FpElem
        if exponent < 0:
            return self.inverse() ** -exponent
        return FpElem(pow(self.value, exponent, self.p), self.p)

    def __eq__(self, other):
        # type: (object) -> bool
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __ne__(self, other):
        # type: (object) -> bool
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        # type: () -> int
        return hash(self.value)

    def __bool__(self):
        # type: () -> bool
        return bool(self.value)

    def __int__(self):
        # type: () -> int
        return self.value

    def __str__(self):
        # type: () -> str
        return str(self.value)

    def __repr__(self):
        # type: () -> str
        return "FpElem({}, {})".format(self.value, self.p)


def _fraction_mod(value, p):
    # type: (Fraction, int) -> int
    if value.denominator % p == 0:
        raise DomainError("{} is not {}-integral".format(value, p))
    return value.numerator * pow(value.denominator, -1, p) % p


class PrimeField(object):
    """The finite field F_p."""

    __slots__ = ("p",)

    def __init__(self, p):
        # type: (int) -> None
        """Create F_p for a prime p."""

        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("PrimeField is immutable")

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[int]]
        return (PrimeField, (self.p,))

    @property
    def characteristic(self):
        # type: () -> int
        """The prime p."""

        return self.p

    def __eq__(self, other):
        # type: (object) -> bool
        return isinstance(other, PrimeField) and other.p == self.p

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(("PrimeField", self.p))

    def __repr__(self):
        # type: () -> str
        return "PrimeField({})".format(self.p)

    def __call__(self, value):
        # type: (object) -> FpElem
        """Coerce an int, Fraction, rational QuadElem or FpElem."""

        if isinstance(value, FpElem):
            if value.p != self.p:
                raise DomainError(
                    "mixing F_{} and F_{}".format(self.p, value.p)
                )
            return value
        if isinstance(value, QuadElem):
            value = value.to_rational()
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            return FpElem(_fraction_mod(value, self.p), self.p)
        if isinstance(value, int):
            return FpElem(value, self.p)
        raise DomainError("cannot coerce {!r} into F_{}".format(value, self.p))


def _coefficient_parts(curve):
    # type: (WeierstrassCurve) -> List[Tuple[Fraction, Fraction]]
    parts = []
    for coeff in curve.coefficients:
        if isinstance(coeff, QuadElem):
            parts.append((coeff.a, coeff.b))
        elif isinstance(coeff, FpElem):
            raise DomainError("curve is already over a finite field")
        else:
            parts.append((Fraction(coeff), Fraction(0)))
    return parts


def _denominator_valuation(value, p):
    # type: (Fraction, int) -> int
    if not value:
        return 0
    return max(0, -valuation(value, p))


def reduce_mod_p(curve, p, root=None):
    # type: (WeierstrassCurve, int, Optional[int]) -> Reduction
    """
    Reduce a curve over Q (or over K at a split prime) modulo p.

    :param curve: Curve over a QuadField
    :param p: Prime
    :param root: For curves with irrational coefficients, an integer with
                 root**2 = d mod p picking the prime of K above p

    Denominators divisible by p are cleared by the scaling a_i -> u**i a_i
    with u a power of p.  A zero reduced discriminant is reported as a bad
    reduction, not raised.
    """

    parts = _coefficient_parts(curve)
    if root is None and any(b for _, b in parts):
        raise DomainError(
            "reducing a curve over {} needs a square root of d mod {}".format(
                curve.field, p
            )
        )
    shift = 0
    for (a, b), weight in zip(parts, WEIGHTS):
        needed = max(
            _denominator_valuation(a, p), _denominator_valuation(b, p)
        )
        shift = max(shift, -(-needed // weight))
    field = PrimeField(p)
    reduced = []
    for (a, b), weight in zip(parts, WEIGHTS):
        factor = p ** (shift * weight)
        value = _fraction_mod(a * factor, p)
        if b:
            value += _fraction_mod(b * factor, p) * root
        reduced.append(value % p)
    try:
        model = WeierstrassCurve(field, reduced)
    except SingularCurveError:
        return Reduction(p, False, None)
    return Reduction(p, True, model)


def _residue_table(p):
    # type: (int) -> List[int]
    table = [-1] * p
    table[0] = 0
    for r in range(1, (p + 1) // 2):
        table[r * r % p] = 1
    return table


def _naive_count(curve):
    # type: (WeierstrassCurve) -> int
    p = curve.field.characteristic
    if p == 2:
        count = 1
        for x in range(2):
            for y in range(2):
                if curve.contains(FpElem(x, p), FpElem(y, p)):
                    count += 1
        return count
    inv = curve.invariants
    b2, b4, b6 = int(inv.b2), int(inv.b4), int(inv.b6)
    table = _residue_table(p)
    count = p + 1
    for x in range(p):
        count += table[(((4 * x + b2) * x + 2 * b4) * x + b6) % p]
    return count


def _random_point(curve, rng):
    # type: (WeierstrassCurve, random.Random) -> CurvePoint
    p = curve.field.characteristic
    inv = curve.invariants
    b2, b4, b6 = int(inv.b2), int(inv.b4), int(inv.b6)
    a1, a3 = int(curve.a1), int(curve.a3)
    half = pow(2, -1, p)
    while True:
        x = rng.randrange(p)
        disc = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
        if disc and jacobi(disc, p) != 1:
            continue
        root = sqrt_mod(disc, p) if disc else 0
        y = (root - a1 * x - a3) * half % p
        return CurvePoint(curve, x, y, check=False)


def _point_key(point):
    # type: (CurvePoint) -> Optional[Tuple[int, int]]
    if point.is_infinity:
        return None
    return (int(point.x), int(point.y))


def _hasse_orders(curve, point):
    # type: (WeierstrassCurve, CurvePoint) -> Set[int]
    """Return every N in the Hasse interval with N*point = O (BSGS)."""

    p = curve.field.characteristic
    slack = 2 * math.isqrt(p) + 2
    low = p + 1 - slack
    width = 2 * slack
    steps = math.isqrt(width) + 1
    baby = {}  # type: Dict[Optional[Tuple[int, int]], List[int]]
    current = curve.infinity
    for j in range(steps):
        baby.setdefault(_point_key(current), []).append(j)
        current = current + point
    giant = -(steps * point)
    target = -(low * point)
    found = set()
    for i in range(steps + 1):
        for j in baby.get(_point_key(target), ()):
            candidate = low + i * steps + j
            if (p + 1 - candidate) ** 2 <= 4 * p:
                found.add(candidate)
        target = target + giant
    return found


def _bsgs_count(curve):
    # type: (WeierstrassCurve) -> int
    p = curve.field.characteristic
    rng = random.Random(p)
    candidates = None  # type: Optional[Set[int]]
    for _ in range(BSGS_POINTS):
        orders = _hasse_orders(curve, _random_point(curve, rng))
        candidates = orders if candidates is None else candidates & orders
        if len(candidates) == 1:
            return candidates.pop()
    logging.debug("BSGS ambiguous over F_%s, counting naively", p)
    return _naive_count(curve)


def count_points(curve):
    # type: (WeierstrassCurve) -> int
    """
    Return #E(F_p), the point at infinity included.

    :param curve: Nonsingular curve over a PrimeField

    Naive enumeration below NAIVE_LIMIT, baby-step giant-step over the
    Hasse interval above it.
    """

    p = curve.field.characteristic
    if p < NAIVE_LIMIT:
        return _naive_count(curve)
    return _bsgs_count(curve)


def count_points_ext(a_p, p, k):
    # type: (int, int, int) -> int
    """
    Return #E(F_{p^k}) from the trace a_p.

    :param a_p: Trace of Frobenius over F_p
    :param p: Prime
    :param k: Extension degree, at least 1

    Uses s_k = a_p*s_{k-1} - p*s_{k-2} for the power sums of Frobenius
    eigenvalues, so k = 2 gives p^2 + 1 - (a_p^2 - 2p).
    """

    if a_p * a_p > 4 * p:
        raise DomainError("a_p = {} violates the Hasse bound at {}".format(
            a_p, p
        ))
    if k < 1:
        raise DomainError("extension degree must be positive")
    previous, current = 2, a_p
    for _ in range(k - 1):
        previous, current = current, a_p * current - p * previous
    return p**k + 1 - current


class ApTable(object):
    """Traces of Frobenius of one curve over all primes up to pmax."""

    __slots__ = ("curve_id", "pmax", "entries")

    def __init__(self, curve_id, pmax, entries):
        # type: (str, int, Iterable[ApEntry]) -> None
        """
        Create a table.

        :param curve_id: Identity of the curve, see ecquad.curve.curve_id
        :param pmax: Largest prime bound covered
        :param entries: (p, a_p, good) triples in increasing p
        """

        entries = tuple(
            ApEntry(int(p), int(a), bool(g)) for p, a, g in entries
        )
        for entry in entries:
            if entry.good and entry.a_p * entry.a_p > 4 * entry.p:
                raise DomainError(
                    "a_{} = {} violates the Hasse bound".format(
                        entry.p, entry.a_p
                    )
                )
        object.__setattr__(self, "curve_id", curve_id)
        object.__setattr__(self, "pmax", pmax)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        # type: (str, object) -> None
        raise AttributeError("ApTable is immutable")

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[str, int, Tuple[ApEntry, ...]]]
        return (ApTable, (self.curve_id, self.pmax, self.entries))

    def __eq__(self, other):
        # type: (object) -> bool
        return isinstance(other, ApTable) and (
            (self.curve_id, self.pmax, self.entries)
            == (other.curve_id, other.pmax, other.entries)
        )

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash((self.curve_id, self.pmax, self.entries))

    def __len__(self):
        # type: () -> int
        return len(self.entries)

    def restrict(self, pmax):
        # type: (int) -> ApTable
        """Return the sub-table of primes up to pmax."""

        if pmax > self.pmax:
            raise DomainError("table only covers primes up to {}".format(
                self.pmax
            ))
        return ApTable(
            self.curve_id, pmax, [e for e in self.entries if e.p <= pmax]
        )

    def to_lines(self):
        # type: () -> List[str]
        """Serialize as the cache file lines "p a_p good"."""

        lines = [
            "# curve={}".format(self.curve_id),
            "# pmax={}".format(self.pmax),
        ]
        for entry in self.entries:
            lines.append(
                "{} {} {}".format(
                    entry.p, entry.a_p, "good" if entry.good else "bad"
                )
            )
        return lines

    def digest(self):
        # type: () -> str
        """Hash of the serialized table, echoed by the sieve."""

        text = "\n".join(self.to_lines()).encode("utf-8")
        return hashlib.sha256(text).hexdigest()[:16]

    @classmethod
    def from_lines(cls, lines):
        # type: (Iterable[str]) -> ApTable
        """Parse the cache file format written by to_lines."""

        header = {}  # type: Dict[str, str]
        entries = []
        for lineno, raw in enumerate(lines, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                header[key.strip()] = value.strip()
                continue
            fields = line.split()
            if len(fields) != 3 or fields[2] not in ("good", "bad"):
                raise DomainError(
                    "bad a_p table line {}: {!r}".format(lineno, raw)
                )
            entries.append(
                ApEntry(int(fields[0]), int(fields[1]), fields[2] == "good")
            )
        if "curve" not in header or "pmax" not in header:
            raise DomainError("a_p table lacks its curve/pmax header")
        return cls(header["curve"], int(header["pmax"]), entries)


def _ap_entry(job):
    # type: (Tuple[WeierstrassCurve, int]) -> ApEntry
    curve, p = job
    reduction = reduce_mod_p(curve, p)
    if not reduction.good:
        return ApEntry(p, 0, False)
    return ApEntry(p, p + 1 - count_points(reduction.curve), True)


def ap_table(curve, pmax, jobs=1):
    # type: (WeierstrassCurve, int, int) -> ApTable
    """
    Compute a_p for every prime p <= pmax.

    :param curve: Curve over Q
    :param pmax: Prime bound; below 2 the table is empty
    :param jobs: Worker processes; entries are merged in prime order
    """

    if not curve.is_rational():
        raise DomainError("a_p tables are computed for curves over Q")
    primes = [int(p) for p in primerange(2, pmax + 1)] if pmax >= 2 else []
    work = [(curve, p) for p in primes]
    if jobs > 1 and len(work) > 1:
        with multiprocessing.Pool(processes=jobs) as pool:
            entries = pool.map(_ap_entry, work, chunksize=16)
    else:
        entries = [_ap_entry(job) for job in work]
    return ApTable(curve_id(curve), pmax, entries)


def ap_cache_path(curve, pmax, cache_dir):
    # type: (WeierstrassCurve, int, str) -> str
    """Return the cache file of a curve and bound."""

    return os.path.join(
        cache_dir, "ap-{}-{}.txt".format(curve_hash(curve), pmax)
    )


def save_ap_table(table, path):
    # type: (ApTable, str) -> None
    """Write a table atomically."""

    directory = os.path.dirname(path) or "."
    if not os.path.isdir(directory):
        os.makedirs(directory)
    handle, tmpname = tempfile.mkstemp(dir=directory, prefix=".ap-")
    with os.fdopen(handle, "w") as out:
        out.write("\n".join(table.to_lines()) + "\n")
    os.replace(tmpname, path)


def load_ap_table(path):
    # type: (str) -> ApTable
    """Read a table written by save_ap_table."""

    with open(path) as source:
        return ApTable.from_lines(source)


def cached_ap_table(curve, pmax, cache_dir=None, jobs=1):
    # type: (WeierstrassCurve, int, Optional[str], int) -> ApTable
    """
    Return the a_p table of a curve, reusing the cache directory.

    :param curve: Curve over Q
    :param pmax: Prime bound
    :param cache_dir: Directory of cached tables, None to disable caching
    :param jobs: Worker processes for a fresh computation
    """

    if cache_dir is None:
        return ap_table(curve, pmax, jobs)
    path = ap_cache_path(curve, pmax, cache_dir)
    if os.path.exists(path):
        table = load_ap_table(path)
        if table.curve_id == curve_id(curve) and table.pmax == pmax:
            logging.info("Using cached a_p table %s", path)
            return table
        logging.warning("Ignoring mismatched a_p cache %s", path)
    table = ap_table(curve, pmax, jobs)
    save_ap_table(table, path)
    logging.info("Saved a_p table %s", path)
    return table
