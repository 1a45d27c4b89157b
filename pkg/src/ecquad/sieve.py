#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
Mestre-Nagao sums and the quadratic twist sieve.

For p not dividing 2*d*disc the twist satisfies a_p(E_d) = (d|p) * a_p(E),
so a single a_p table of E serves every twist.  The fast path evaluates
whole chunks of twist parameters with numpy lookups into a Legendre-symbol
table; the slow path reduces each twisted curve and counts its points.
Both go through the same per-prime term and through math.fsum, so they
agree to the last bit.
"""

import json
import logging
import math
import multiprocessing
import os
import tempfile
from collections import namedtuple
from typing import TYPE_CHECKING

import numpy

from .curve import curve_id, twist_long_model
from .errors import DomainError
from .exactnum import jacobi
from .modp import count_points, reduce_mod_p

if TYPE_CHECKING:
    from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

    from .curve import WeierstrassCurve
    from .modp import ApTable

# pylint: disable=consider-using-f-string,invalid-name

VARIANTS = ("S0", "S1")
FILTERS = ("squarefree", "fundamental")
CHUNK_SIZE = 2**16
BATCH_SIZE = 2**12
DEFAULT_TOP_K = 20

SieveHit = namedtuple("SieveHit", ["d", "sum"])
NagaoSum = namedtuple("NagaoSum", ["value", "used", "skipped"])


class SieveConfig(
    namedtuple(
        "SieveConfig",
        [
            "curve_id",
            "pmax",
            "d_min",
            "d_max",
            "top_k",
            "min_sum",
            "variant",
            "d_filter",
        ],
    )
):
    """Parameters of one sieve run."""

    __slots__ = ()

    def __new__(
        cls,
        curve_id,  # pylint: disable=redefined-outer-name
        pmax,
        d_min,
        d_max,
        top_k=DEFAULT_TOP_K,
        min_sum=None,
        variant="S1",
        d_filter="squarefree",
    ):
        # type: (str, int, int, int, int, Optional[float], str, str) -> SieveConfig  # noqa: E501
        if d_min > d_max:
            raise DomainError("d_min {} exceeds d_max {}".format(d_min, d_max))
        if pmax < 2:
            raise DomainError("pmax must be at least 2")
        if top_k < 1:
            raise DomainError("top_k must be at least 1")
        if variant not in VARIANTS:
            raise DomainError("unknown variant {!r}".format(variant))
        if d_filter not in FILTERS:
            raise DomainError("unknown d filter {!r}".format(d_filter))
        return super(SieveConfig, cls).__new__(
            cls,
            curve_id,
            pmax,
            d_min,
            d_max,
            top_k,
            min_sum,
            variant,
            d_filter,
        )

    def to_dict(self):
        # type: () -> Dict[str, Any]
        """Plain dictionary for checkpoints and headers."""

        return dict(self._asdict())


def _term(p, points, variant):
    # type: (int, int, str) -> float
    """Contribution of one prime with #E_d(F_p) = points."""

    if variant == "S1":
        return (1.0 - (p - 1) / points) * math.log(p)
    return ((points - p + 1) / points) * math.log(p)


def _usable(entries, pmax):
    # type: (Iterable[Any], int) -> List[Any]
    return [e for e in entries if e.good and e.p != 2 and e.p <= pmax]


def mn_sum_detail(table, d, variant="S1", pmax=None):
    # type: (ApTable, int, str, Optional[int]) -> NagaoSum
    """
    Return the Mestre-Nagao sum of the d-twist with prime accounting.

    :param table: a_p table of the base curve
    :param d: Nonzero twist parameter
    :param variant: "S0" or "S1"
    :param pmax: Cutoff, the whole table by default

    Bad primes, p = 2 and primes dividing d are skipped and counted.
    """

    if d == 0:
        raise DomainError("twist parameter must be nonzero")
    if variant not in VARIANTS:
        raise DomainError("unknown variant {!r}".format(variant))
    pmax = table.pmax if pmax is None else pmax
    if pmax > table.pmax:
        raise DomainError(
            "table covers primes up to {}, not {}".format(table.pmax, pmax)
        )
    terms = []
    skipped = 0
    for entry in table.entries:
        if entry.p > pmax:
            break
        if not entry.good or entry.p == 2 or d % entry.p == 0:
            skipped += 1
            continue
        points = entry.p + 1 - jacobi(d, entry.p) * entry.a_p
        terms.append(_term(entry.p, points, variant))
    return NagaoSum(math.fsum(terms), len(terms), skipped)


def mn_sum(curve, d, table, variant="S1"):
    # type: (WeierstrassCurve, int, ApTable, str) -> float
    """
    Return the Mestre-Nagao sum of the d-twist of curve from its a_p table.

    :param curve: Base curve over Q
    :param d: Squarefree twist parameter
    :param table: a_p table of curve
    :param variant: "S1" sums (1 - (p-1)/N_p)*log p, "S0" sums
                    ((2 - a_p(E_d))/N_p)*log p
    """

    if table.curve_id != curve_id(curve):
        raise DomainError("a_p table belongs to another curve")
    return mn_sum_detail(table, d, variant).value


def mn_sum_slow(curve, d, pmax, variant="S1"):
    # type: (WeierstrassCurve, int, int, str) -> float
    """
    Recompute the sum by counting points on every reduced twist.

    :param curve: Base curve over Q
    :param d: Nonzero twist parameter
    :param pmax: Prime cutoff
    :param variant: "S0" or "S1"
    """

    from sympy import primerange  # pylint: disable=import-outside-toplevel

    twist = twist_long_model(curve, d)
    terms = []
    for p in primerange(3, pmax + 1):
        p = int(p)
        if d % p == 0 or not reduce_mod_p(curve, p).good:
            continue
        reduction = reduce_mod_p(twist, p)
        if not reduction.good:
            continue
        terms.append(_term(p, count_points(reduction.curve), variant))
    return math.fsum(terms)


def _squarefree_mask(lo, hi):
    # type: (int, int) -> Any
    """Boolean mask over lo..hi marking squarefree nonzero integers."""

    size = hi - lo + 1
    mask = numpy.ones(size, dtype=bool)
    top = math.isqrt(max(abs(lo), abs(hi)))
    sieve = numpy.ones(top + 1, dtype=bool)
    for p in range(2, top + 1):
        if not sieve[p]:
            continue
        sieve[p * p :: p] = False
        square = p * p
        mask[(-lo) % square :: square] = False
    if lo <= 0 <= hi:
        mask[-lo] = False
    return mask


def eligible_twists(d_min, d_max, d_filter="squarefree"):
    # type: (int, int, str) -> Any
    """
    Return the candidate twist parameters in [d_min, d_max].

    :param d_min: Lower end
    :param d_max: Upper end
    :param d_filter: "squarefree" or "fundamental" (quadratic field
                     discriminants)
    """

    if d_min > d_max:
        return numpy.zeros(0, dtype=numpy.int64)
    values = numpy.arange(d_min, d_max + 1, dtype=numpy.int64)
    squarefree = _squarefree_mask(d_min, d_max)
    if d_filter == "squarefree":
        return values[squarefree]
    if d_filter != "fundamental":
        raise DomainError("unknown d filter {!r}".format(d_filter))
    odd = squarefree & (numpy.mod(values, 4) == 1) & (values != 1)
    quarter_lo = -((-d_min) // 4)
    quarter_hi = d_max // 4
    even = numpy.zeros(len(values), dtype=bool)
    if quarter_lo <= quarter_hi:
        quarters = numpy.arange(quarter_lo, quarter_hi + 1, dtype=numpy.int64)
        good = _squarefree_mask(quarter_lo, quarter_hi) & numpy.isin(
            numpy.mod(quarters, 4), (2, 3)
        )
        even[4 * quarters[good] - d_min] = True
    return values[odd | even]


class TwistSumTable(object):
    """Per-prime lookup arrays for the vectorized fast path."""

    def __init__(self, table, variant, pmax=None):
        # type: (ApTable, str, Optional[int]) -> None
        """
        Precompute Legendre symbols and the three possible terms per prime.

        :param table: a_p table of the base curve
        :param variant: "S0" or "S1"
        :param pmax: Cutoff, the whole table by default
        """

        pmax = table.pmax if pmax is None else pmax
        entries = _usable(table.entries, pmax)
        self.primes = numpy.array([e.p for e in entries], dtype=numpy.int64)
        width = int(self.primes.max()) if len(entries) else 1
        self.legendre = numpy.zeros((len(entries), width), dtype=numpy.int8)
        self.terms = numpy.zeros((len(entries), 3), dtype=numpy.float64)
        for row, entry in enumerate(entries):
            p = entry.p
            squares = numpy.arange(1, p, dtype=numpy.int64) ** 2 % p
            self.legendre[row, 1:p] = -1
            self.legendre[row, squares] = 1
            for chi in (-1, 1):
                self.terms[row, chi + 1] = _term(
                    p, p + 1 - chi * entry.a_p, variant
                )
        self.rows = numpy.arange(len(entries))

    def sums(self, ds):
        # type: (Any) -> List[float]
        """Mestre-Nagao sums of a batch of twist parameters."""

        if not len(self.primes):
            return [0.0] * len(ds)
        residues = numpy.mod(ds[:, None], self.primes[None, :])
        chis = self.legendre[self.rows[None, :], residues].astype(numpy.int64)
        values = self.terms[self.rows[None, :], chis + 1]
        return [math.fsum(row) for row in values.tolist()]


def _chunk_bounds(config):
    # type: (SieveConfig) -> List[Tuple[int, int]]
    bounds = []
    lo = config.d_min
    while lo <= config.d_max:
        hi = min(config.d_max, lo + CHUNK_SIZE - 1)
        bounds.append((lo, hi))
        lo = hi + 1
    return bounds


def _sort_key(hit):
    # type: (SieveHit) -> Tuple[float, int, int]
    return (-hit.sum, abs(hit.d), hit.d)


def _best(hits, config):
    # type: (Iterable[SieveHit], SieveConfig) -> List[SieveHit]
    kept = [
        h for h in hits if config.min_sum is None or h.sum >= config.min_sum
    ]
    return sorted(kept, key=_sort_key)[: config.top_k]


def _sieve_chunk(lookup, config, bounds):
    # type: (TwistSumTable, SieveConfig, Tuple[int, int]) -> List[SieveHit]
    candidates = eligible_twists(bounds[0], bounds[1], config.d_filter)
    hits = []  # type: List[SieveHit]
    for start in range(0, len(candidates), BATCH_SIZE):
        batch = candidates[start : start + BATCH_SIZE]
        for d, value in zip(batch.tolist(), lookup.sums(batch)):
            hits.append(SieveHit(int(d), value))
    logging.debug(
        "sieved d in [%s, %s]: %s candidates", bounds[0], bounds[1], len(hits)
    )
    return _best(hits, config)


_WORKER = {}  # type: Dict[str, Any]


def _init_worker(lookup, config):
    # type: (TwistSumTable, SieveConfig) -> None
    _WORKER["lookup"] = lookup
    _WORKER["config"] = config


def _worker_chunk(job):
    # type: (Tuple[int, Tuple[int, int]]) -> Tuple[int, List[SieveHit]]
    index, bounds = job
    return index, _sieve_chunk(_WORKER["lookup"], _WORKER["config"], bounds)


def _load_checkpoint(path, config, digest):
    # type: (str, SieveConfig, str) -> Tuple[List[int], List[SieveHit]]
    with open(path) as source:
        state = json.load(source)
    if state.get("config") != config.to_dict() or state.get("table") != digest:
        raise DomainError(
            "checkpoint {} was written for another run".format(path)
        )
    hits = [SieveHit(int(d), float(s)) for d, s in state.get("hits", [])]
    return [int(i) for i in state.get("done", [])], hits


def _save_checkpoint(path, config, digest, done, hits):
    # type: (str, SieveConfig, str, Sequence[int], Sequence[SieveHit]) -> None
    directory = os.path.dirname(os.path.abspath(path))
    handle, tmpname = tempfile.mkstemp(dir=directory, prefix=".sieve-")
    with os.fdopen(handle, "w") as out:
        json.dump(
            {
                "config": config.to_dict(),
                "table": digest,
                "done": sorted(done),
                "hits": [[h.d, h.sum] for h in hits],
            },
            out,
            sort_keys=True,
        )
    os.replace(tmpname, path)


def run_sieve(config, table, jobs=1, checkpoint=None):
    # type: (SieveConfig, ApTable, int, Optional[str]) -> List[SieveHit]
    """
    Rank the eligible twists of a curve by their Mestre-Nagao sums.

    :param config: Sieve parameters
    :param table: a_p table of the curve, covering config.pmax
    :param jobs: Worker processes; the result does not depend on it
    :param checkpoint: JSON file recording finished chunks; an existing
                       file for the same run is resumed
    """

    if table.curve_id != config.curve_id:
        raise DomainError("a_p table belongs to another curve")
    if table.pmax < config.pmax:
        raise DomainError(
            "table covers primes up to {}, sieve needs {}".format(
                table.pmax, config.pmax
            )
        )
    digest = table.digest()
    lookup = TwistSumTable(table, config.variant, config.pmax)
    bounds = _chunk_bounds(config)
    done = []  # type: List[int]
    hits = []  # type: List[SieveHit]
    if checkpoint and os.path.exists(checkpoint):
        done, hits = _load_checkpoint(checkpoint, config, digest)
        logging.info(
            "resuming sieve from %s: %s of %s chunks done",
            checkpoint,
            len(done),
            len(bounds),
        )
    finished = set(done)
    pending = [(i, b) for i, b in enumerate(bounds) if i not in finished]

    def record(index, found):
        # type: (int, List[SieveHit]) -> None
        hits[:] = _best(hits + found, config)
        done.append(index)
        if checkpoint:
            _save_checkpoint(checkpoint, config, digest, done, hits)

    if jobs > 1 and len(pending) > 1:
        with multiprocessing.Pool(
            processes=jobs, initializer=_init_worker, initargs=(lookup, config)
        ) as pool:
            for index, found in pool.imap(_worker_chunk, pending):
                record(index, found)
    else:
        for index, chunk in pending:
            record(index, _sieve_chunk(lookup, config, chunk))
    return _best(hits, config)


def format_hits(config, table, hits):
    # type: (SieveConfig, ApTable, Sequence[SieveHit]) -> List[str]
    """Reproducibility header followed by one "d<TAB>sum" line per hit."""

    lines = [
        "# {}={}".format(key, value)
        for key, value in sorted(config.to_dict().items())
    ]
    lines.append("# table={}".format(table.digest()))
    lines.extend("{}\t{!r}".format(hit.d, hit.sum) for hit in hits)
    return lines
