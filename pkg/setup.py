#!/usr/bin/python3
#                                                         -*- coding: utf-8 -*-
# SPDX-License-Identifier: MIT
#
"""Setup for ecquad."""

import io

from setuptools import find_packages, setup

# pylint: disable=R1732
setup(
    name="ecquad",
    version="1.0.0",
    description=(
        "Exact elliptic curve arithmetic over Q and quadratic fields, "
        "with a quadratic twist sieve and record verification"
    ),
    long_description_content_type="text/markdown",
    long_description=io.open("README.md", encoding="utf-8").read(),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    license="MIT",
    zip_safe=False,
    packages=find_packages("src"),
    package_dir={"": "src"},
    package_data={"ecquad": ["data/*.rec"]},
    entry_points={
        "console_scripts": ["ecquad = ecquad.cli:main"],
    },
    python_requires=">=3.8",
    install_requires=["sympy", "mpmath", "numpy", "setuptools"],
)
