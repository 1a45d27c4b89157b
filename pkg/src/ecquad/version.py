#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Holds ecquad version."""

__version__ = "1.0.0"
