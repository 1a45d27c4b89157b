#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Exact elliptic-curve toolkit for curves over Q and quadratic fields."""

from .version import __version__  # noqa: F401
