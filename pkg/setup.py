"""Build the optional Cython kernel; the package still works without it."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LEDGERCAT_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("ledgercat._canon", ["src/ledgercat/_canon.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
