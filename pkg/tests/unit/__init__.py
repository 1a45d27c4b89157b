#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Module with unit tests for ecquad."""
