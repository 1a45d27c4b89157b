#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Exceptions raised by ecquad."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Dict, Optional, Tuple

ERROR_PREFIX = "ecquad: "


class EcquadError(Exception):
    """Base class of every ecquad error."""

    def __init__(self, message):
        # type: (str) -> None
        """
        Initialize the error.

        :param message: Human readable description, without prefix
        """

        super(EcquadError, self).__init__(ERROR_PREFIX + message)
        self.message = message

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[object, ...]]
        """Keep errors picklable across worker processes."""

        return (self.__class__, (self.message,))


class DomainError(EcquadError, ValueError):
    """An argument is outside the domain of an operation."""


class SingularCurveError(DomainError):
    """The Weierstrass model has zero discriminant."""


class UnfactoredError(EcquadError):
    """Integer factorization ran out of budget."""

    def __init__(self, message, partial, cofactor):
        # type: (str, Dict[int, int], int) -> None
        """
        Initialize the error.

        :param message: Human readable description
        :param partial: Prime factors found so far, mapped to exponents
        :param cofactor: The part of the input that resisted factoring
        """

        super(UnfactoredError, self).__init__(message)
        self.partial = dict(partial)
        self.cofactor = cofactor

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[object, ...]]
        return (self.__class__, (self.message, self.partial, self.cofactor))


class IndeterminateError(EcquadError):
    """A numerical certificate could not be produced within budget."""


class TorsionClassificationError(EcquadError):
    """A computed torsion group is impossible over the field."""


class LedgerError(EcquadError):
    """A rank ledger was requested without independence certificates."""


class RecordError(EcquadError):
    """A record file could not be ingested."""

    def __init__(self, message, lineno=None, point=None):
        # type: (str, Optional[int], Optional[str]) -> None
        """
        Initialize the error.

        :param message: Human readable description
        :param lineno: 1-based line number in the record file, if known
        :param point: Text of the offending point, if any
        """

        raw_message = message
        if lineno is not None:
            # pylint: disable=consider-using-f-string
            message = "line {}: {}".format(lineno, message)
        super(RecordError, self).__init__(message)
        self.lineno = lineno
        self.point = point
        self.raw_message = raw_message

    def __reduce__(self):
        # type: () -> Tuple[type, Tuple[object, ...]]
        return (self.__class__, (self.raw_message, self.lineno, self.point))
