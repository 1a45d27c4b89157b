#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""
pytest configuration.

Isolate the tests from the user's configuration: no ini file, a private
a_p cache and a single worker unless a test asks for more.  Set
ECQUAD_SLOW_TESTS to also verify the whole record corpus.
"""

import os
import tempfile

for _name in list(os.environ):
    if _name.startswith("ECQUAD_") and _name != "ECQUAD_SLOW_TESTS":
        del os.environ[_name]

_SCRATCH = tempfile.mkdtemp(prefix="ecquad-tests-")

os.environ["ECQUAD_CONFIG"] = os.path.join(_SCRATCH, "missing.ini")
os.environ["ECQUAD_CACHE_DIR"] = os.path.join(_SCRATCH, "cache")
os.environ["ECQUAD_JOBS"] = "1"
